"""Experiment configuration, thread resolution and per-stage seed derivation."""

import argparse
import os
import zlib
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, List, Optional

import numpy as np

from shallowscope.circuit.layered import GATE_SETS, GEOMETRY_KINDS
from shallowscope.exceptions import ConfigError
from shallowscope.qcore import MAX_QUBITS
from shallowscope.uda.complexity import METHODS

THREADS_ENV = "SHALLOWSCOPE_THREADS"

COMMANDS = (
    "simulate",
    "sample",
    "tomo-full",
    "tomo-overlap",
    "budget",
    "parent",
    "gap",
    "fingerprint",
    "gamma2",
    "ghz",
    "lowerbound",
    "uda-probe",
    "complexity-test",
    "sweep",
)
BUDGET_COMMANDS = ("budget", "tomo-full", "tomo-overlap", "sweep")
FORMATS = ("json", "csv")
SCHEDULE_KINDS = ("exhaustive", "random")
SWEEP_KINDS = ("budget", "failure-rate")

DELTA_REASON = "must lie in (0, 1/3); the budget bounds only hold for delta < 1/3"


def derive_seed(seed: int, stage: str) -> int:
    """Seed for ``stage``, keyed by the CRC-32 of the stage name."""
    key = zlib.crc32(stage.encode("utf-8"))
    return int(np.random.SeedSequence(int(seed), spawn_key=(key,)).generate_state(1)[0])


def resolve_threads(requested: Optional[int] = None) -> int:
    """``--threads`` first, then ``SHALLOWSCOPE_THREADS``, then the logical core count."""
    if requested is not None:
        if requested < 1:
            raise ConfigError("threads", f"must be a positive integer, got {requested}")
        return int(requested)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ConfigError("threads", f"{THREADS_ENV}={env!r} is not an integer") from None
        if value < 1:
            raise ConfigError("threads", f"{THREADS_ENV} must be positive, got {value}")
        return value
    return os.cpu_count() or 1


@dataclass
class ExperimentConfig:
    """Everything one CLI invocation needs; unset fields are ``None``."""

    command: str
    # inputs
    circuit: Optional[str] = None
    state: Optional[str] = None
    ghz: Optional[int] = None
    shots_file: Optional[str] = None
    estimates: Optional[str] = None
    hamiltonian: Optional[str] = None
    rho: Optional[str] = None
    subsets_file: Optional[str] = None
    seed_circuit: Optional[str] = None
    # numeric parameters
    n: Optional[int] = None
    k: Optional[int] = None
    depth: Optional[int] = None
    r: Optional[int] = None
    rank: Optional[int] = None
    shots: Optional[int] = None
    repetitions: Optional[int] = None
    restarts: Optional[int] = None
    trials: Optional[int] = None
    m_terms: Optional[int] = None
    max_iterations: Optional[int] = None
    columns: Optional[int] = None
    epsilon: Optional[float] = None
    delta: Optional[float] = None
    gap: Optional[float] = None
    epsilons: Optional[List[float]] = None
    ns: Optional[List[int]] = None
    seed: int = 0
    # choices
    geometry: str = "general"
    gate_set: str = "haar"
    scenario: Optional[str] = None
    basis: Optional[str] = None
    schedule: Optional[str] = None
    method: str = "Nelder-Mead"
    kind: Optional[str] = None
    balanced: bool = False
    project_psd: bool = False
    sharp: bool = False
    # output
    output: Optional[str] = None
    format: str = "json"
    save_shots: Optional[str] = None
    logdir: Optional[str] = None
    threads: Optional[int] = None

    @classmethod
    def from_namespace(cls, namespace: argparse.Namespace) -> "ExperimentConfig":
        """Pick the known fields out of a parsed argparse namespace."""
        values = vars(namespace)
        names = {f.name for f in fields(cls)}
        config = cls(**{name: values[name] for name in names if name in values and values[name] is not None})
        config.geometry = config.geometry.replace("-", "_")
        return config

    def to_dict(self) -> Dict[str, Any]:
        return {name: value for name, value in asdict(self).items() if value is not None}

    def require(self, *names: str) -> None:
        """Raise :class:`ConfigError` for the first field in ``names`` that is unset."""
        for name in names:
            if getattr(self, name) is None:
                raise ConfigError(name, f"required by {self.command}")

    def validate(self) -> "ExperimentConfig":
        """Range-check every set field.

        Raises:
            ConfigError: Naming the first offending field
        """
        if self.command not in COMMANDS:
            raise ConfigError("command", f"unknown command {self.command!r}")
        if self.epsilon is not None and not 0 < self.epsilon <= 2:
            raise ConfigError("epsilon", f"must lie in (0, 2], got {self.epsilon}")
        for value in self.epsilons or ():
            if not 0 < value <= 2:
                raise ConfigError("epsilons", f"every epsilon must lie in (0, 2], got {value}")
        if self.delta is not None:
            if self.command in BUDGET_COMMANDS and not 0 < self.delta < 1 / 3:
                raise ConfigError("delta", DELTA_REASON)
            if not 0 < self.delta < 1:
                raise ConfigError("delta", f"must lie in (0, 1), got {self.delta}")
        if self.n is not None and not 1 <= self.n <= MAX_QUBITS:
            raise ConfigError("n", f"must lie in [1, {MAX_QUBITS}], got {self.n}")
        if self.ghz is not None and not 2 <= self.ghz <= MAX_QUBITS:
            raise ConfigError("ghz", f"must lie in [2, {MAX_QUBITS}], got {self.ghz}")
        if self.k is not None:
            upper = self.n or MAX_QUBITS
            if not 1 <= self.k <= upper:
                raise ConfigError("k", f"must lie in [1, {upper}], got {self.k}")
        if self.depth is not None and self.depth < 0:
            raise ConfigError("depth", f"must be nonnegative, got {self.depth}")
        for name in ("r", "rank", "shots", "repetitions", "restarts", "trials", "m_terms",
                     "max_iterations", "columns", "threads"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ConfigError(name, f"must be a positive integer, got {value}")
        for value in self.ns or ():
            if not 1 <= value <= MAX_QUBITS:
                raise ConfigError("ns", f"every n must lie in [1, {MAX_QUBITS}], got {value}")
        if self.gap is not None and self.gap <= 0:
            raise ConfigError("gap", f"must be positive, got {self.gap}")
        if self.seed < 0:
            raise ConfigError("seed", f"must be nonnegative, got {self.seed}")
        if self.geometry not in GEOMETRY_KINDS:
            raise ConfigError("geometry", f"unknown geometry {self.geometry!r}; expected one of {GEOMETRY_KINDS}")
        if self.gate_set not in GATE_SETS:
            raise ConfigError("gate_set", f"expected one of {GATE_SETS}, got {self.gate_set!r}")
        if self.method not in METHODS:
            raise ConfigError("method", f"expected one of {METHODS}, got {self.method!r}")
        if self.schedule is not None and self.schedule not in SCHEDULE_KINDS:
            raise ConfigError("schedule", f"expected one of {SCHEDULE_KINDS}, got {self.schedule!r}")
        if self.kind is not None and self.kind not in SWEEP_KINDS:
            raise ConfigError("kind", f"expected one of {SWEEP_KINDS}, got {self.kind!r}")
        if self.format not in FORMATS:
            raise ConfigError("format", f"expected one of {FORMATS}, got {self.format!r}")
        if self.basis is not None and (not self.basis or set(self.basis.upper()) - set("XYZ")):
            raise ConfigError("basis", f"must be a word over X, Y, Z, got {self.basis!r}")
        return self
