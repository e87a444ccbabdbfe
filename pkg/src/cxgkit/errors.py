"""Exception hierarchy shared by every cxgkit module.

All library errors derive from :class:`CxgError`, so callers can catch a
single type.  The CLI maps the broad families onto exit codes.
"""


class CxgError(Exception):
    """Base class for all cxgkit errors."""


class MalformedInputError(CxgError):
    """Input could not be parsed or violates a documented format."""


class PenmanParseError(MalformedInputError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at character {position})"
        super().__init__(message)
        self.position = position


class UndeclaredVariableError(MalformedInputError):
    pass


class NetworkShapeError(MalformedInputError):
    """A predicate network cannot be serialized as a single rooted graph."""


class MultipleRootsError(NetworkShapeError):
    pass


class CycleError(NetworkShapeError):
    pass


class DisconnectedNetworkError(NetworkShapeError):
    pass


class MalformedDocumentError(MalformedInputError):
    def __init__(self, message, path="$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class UnsupportedVersionError(MalformedInputError):
    pass


class BadMagicError(MalformedInputError):
    pass


class CorruptImageError(MalformedInputError):
    pass


class ConllFormatError(MalformedInputError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UntaggedTokenError(MalformedInputError):
    pass


class EmptyUtteranceError(MalformedInputError):
    pass


class DuplicateNameError(CxgError):
    pass


class UnknownNameError(CxgError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class UnknownCategoryError(UnknownNameError):
    pass


class ResourceExhausted(CxgError):
    """Search hit its node cap without finding any solution."""


class MissingAppliedCxnError(CxgError):
    pass
