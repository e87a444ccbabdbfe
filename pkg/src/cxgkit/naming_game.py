"""The naming game: population, world, interaction script and monitors."""

from __future__ import annotations

import csv
import json
import random
from collections import Counter
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

from .agent import Agent
from .fs import is_sequence_pattern

CONSONANTS = "bdfgklmnprstvwxz"
VOWELS = "aeiou"


def generate_word_form(rng: Optional[random.Random] = None, syllables: int = 3) -> str:
    """Random CV-syllable word, e.g. ``bagofu``."""
    rng = rng or random
    return "".join(rng.choice(CONSONANTS) + rng.choice(VOWELS) for _ in range(syllables))


@dataclass
class ExperimentConfig:
    nr_of_agents: int = 10
    nr_of_objects: int = 5
    seed: int = 0
    initial_score: float = 0.5
    reward_delta: float = 0.1
    inhibit_delta: float = 0.2
    success_window: int = 100

    def __post_init__(self):
        if self.nr_of_agents < 2:
            raise ValueError("nr_of_agents must be at least 2")
        if self.nr_of_objects < 1:
            raise ValueError("nr_of_objects must be at least 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown experiment settings: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass
class InteractionRecord:
    index: int
    speaker_id: str
    hearer_id: str
    topic: str
    utterance: str
    success: bool


@dataclass
class MonitorSeries:
    success: list = field(default_factory=list)
    lexicon_size: list = field(default_factory=list)
    conventionality: list = field(default_factory=list)

    def __len__(self):
        return len(self.success)

    def windowed_success(self, window: int = 100) -> list:
        out, total = [], 0
        for i, s in enumerate(self.success):
            total += s
            if i >= window:
                total -= self.success[i - window]
            out.append(total / min(i + 1, window))
        return out

    def final_success(self, window: int = 100) -> float:
        tail = self.success[-window:]
        return sum(tail) / len(tail) if tail else 0.0


# ---------------------------------------------------------------------------
# agents


def naming_cxn_parts(cxn) -> tuple:
    """(form, object) of a naming construction."""
    cu = cxn.conditional_pole[0]
    form = next(p.args[0].text for p in cu.comprehension_lock["#form"] if is_sequence_pattern(p))
    meaning = cu.formulation_lock["#meaning"][0].name
    return form, meaning


class NGAgent(Agent):
    """Agent that names objects: formulates a topic symbol, comprehends to one."""

    def comprehend(self, utterance: str, observer=None):
        """Interpret ``utterance`` as an object symbol, or None.

        Besides the competing comprehension solutions (homonyms), every
        other construction naming the interpreted object (synonyms)
        becomes a competitor, so hearers inhibit synonyms too.
        """
        network = super().comprehend(utterance, observer=observer)
        if network is None:
            return None
        concepts = network.concepts()
        if not concepts:
            return None
        obj = concepts[0].name
        synonyms = [c for c in self.grammar
                    if c is not self.applied_cxn and c not in self.competitor_cxns
                    and naming_cxn_parts(c)[1] == obj]
        self.competitor_cxns = self.competitor_cxns + synonyms
        return obj

    def preferred_form(self, obj: str) -> Optional[str]:
        best = None
        for cxn in self.grammar.ordered():
            form, meaning = naming_cxn_parts(cxn)
            if meaning == obj:
                best = form
                break
        return best

    def knows(self, form: str, obj: str) -> bool:
        return any(naming_cxn_parts(c) == (form, obj) for c in self.grammar)


def conventionality(population, world) -> float:
    """Mean over objects of the share of agents whose preferred form is the modal one.

    Agents without a form for an object never count as agreeing; modal
    ties go to the alphabetically first form.
    """
    if not world:
        return 0.0
    total = 0.0
    for obj in world:
        forms = [a.preferred_form(obj) for a in population]
        counts = Counter(f for f in forms if f is not None)
        if not counts:
            continue
        modal = min(counts, key=lambda f: (-counts[f], f))
        total += counts[modal] / len(population)
    return total / len(world)


# ---------------------------------------------------------------------------
# experiment


class NGInteraction:
    def __init__(self, experiment: "NGExperiment"):
        self.experiment = experiment
        rng = experiment.rng
        self.speaker, self.hearer = rng.sample(experiment.population, 2)
        assert self.speaker is not self.hearer
        self.interacting_agents = [self.speaker, self.hearer]
        topic = rng.choice(experiment.world)
        for agent in self.interacting_agents:
            agent.reset_interaction_state()
            agent.topic = topic
        self.speaker.discourse_role = "speaker"
        self.hearer.discourse_role = "hearer"
        self.success = False

    def interact(self) -> None:
        s, h = self.speaker, self.hearer
        s.utterance = s.formulate(s.topic)
        if s.utterance is None:
            s.learn(generate_word_form(self.experiment.rng), s.topic)
            s.utterance = s.formulate(s.topic)
        h.utterance = s.utterance
        interpreted = h.comprehend(s.utterance)
        if interpreted is None:
            h.learn(s.utterance, s.topic)
        elif interpreted == s.topic:
            s.communicated_successfully = True
            h.communicated_successfully = True
            self.success = True
        elif not h.knows(s.utterance, s.topic):
            h.learn(s.utterance, s.topic)
        for agent in self.interacting_agents:
            agent.reward()


class NGExperiment:
    """Population of :class:`NGAgent` naming ``obj-1 .. obj-N``."""

    def __init__(self, configuration=None):
        if isinstance(configuration, ExperimentConfig):
            self.config = configuration
        else:
            self.config = ExperimentConfig.from_dict(dict(configuration or {}))
        cfg = self.config
        self.rng = random.Random(cfg.seed)
        self.world = [f"obj-{i}" for i in range(1, cfg.nr_of_objects + 1)]
        self.population = [NGAgent() for _ in range(cfg.nr_of_agents)]
        for agent in self.population:
            agent.reward_delta = cfg.reward_delta
            agent.inhibit_delta = cfg.inhibit_delta
        self.monitors = MonitorSeries()
        self.records: list = []

    def lexicon_size(self) -> float:
        return sum(a.grammar.size() for a in self.population) / len(self.population)

    def conventionality(self) -> float:
        return conventionality(self.population, self.world)

    def run_interaction(self) -> InteractionRecord:
        ci = NGInteraction(self)
        ci.interact()
        record = InteractionRecord(
            index=len(self.records) + 1,
            speaker_id=ci.speaker.id,
            hearer_id=ci.hearer.id,
            topic=ci.speaker.topic,
            utterance=ci.speaker.utterance,
            success=ci.success,
        )
        self.records.append(record)
        self.monitors.success.append(int(ci.success))
        self.monitors.lexicon_size.append(self.lexicon_size())
        self.monitors.conventionality.append(self.conventionality())
        return record

    def run_series(self, nr_interactions: int) -> MonitorSeries:
        if nr_interactions < 1:
            raise ValueError("nr_interactions must be at least 1")
        for _ in range(nr_interactions):
            self.run_interaction()
        return self.monitors


def run_experiment(config: ExperimentConfig, interactions: int) -> MonitorSeries:
    """Run one experiment from scratch (picklable entry point for seed sweeps)."""
    return NGExperiment(config).run_series(interactions)


# ---------------------------------------------------------------------------
# export


def export_metrics(series: MonitorSeries, path, format: str = "csv") -> None:
    path = Path(path)
    if format == "json":
        path.write_text(json.dumps(asdict(series)) + "\n")
        return
    if format != "csv":
        raise ValueError(f"unknown metrics format {format!r}")
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["interaction", "success", "lexicon_size", "conventionality"])
        for i, (s, lex, conv) in enumerate(zip(series.success, series.lexicon_size,
                                               series.conventionality), start=1):
            w.writerow([i, s, f"{lex:.6f}", f"{conv:.6f}"])
