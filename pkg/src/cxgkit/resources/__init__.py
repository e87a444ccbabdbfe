"""Bundled fixture files."""

from importlib import resources as _res


def load_resource(name: str):
    """Traversable for a bundled file such as ``demo-resultative.json``."""
    path = _res.files(__name__).joinpath(name)
    if not path.is_file():
        raise FileNotFoundError(f"no bundled resource named {name!r}")
    return path


def list_resources() -> list:
    return sorted(p.name for p in _res.files(__name__).iterdir()
                  if p.is_file() and not p.name.startswith("__"))
