"""Sweep tables: budget growth and empirical failure rates of full tomography."""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from shallowscope.qcore import StateLike, trace_distance
from shallowscope.sampler import DEFAULT_MAX_SHOTS, exhaustive_schedule, run_schedule
from shallowscope.tomography import accumulate, estimate_state, plan_budget

logger = logging.getLogger(__name__)


@dataclass
class Table:
    """Rectangular result table; ``rows[i][j]`` belongs to column ``header[j]``."""

    header: Tuple[str, ...]
    rows: List[Tuple[Any, ...]] = field(default_factory=list)

    def __post_init__(self):
        self.header = tuple(self.header)
        self.rows = [tuple(row) for row in self.rows]

    def column(self, name: str) -> List[Any]:
        j = self.header.index(name)
        return [row[j] for row in self.rows]

    def to_dict(self) -> Dict:
        return {"header": list(self.header), "rows": [list(row) for row in self.rows]}


BUDGET_COLUMNS = ("scenario", "n", "k", "epsilon", "delta", "precision", "subsets", "shots")
FAILURE_COLUMNS = ("epsilon", "delta", "shots", "repetitions", "trials", "failures", "failure_rate")


def budget_sweep(
    scenario: str,
    ns: Sequence[int],
    epsilon: float,
    delta: float,
    **inputs,
) -> Table:
    """Planned shots for each ``n`` at fixed epsilon and delta.

    Example:
        >>> budget_sweep("full", [1, 2], 0.2, 0.1).column("shots")
        [3356, 33552]
    """
    table = Table(BUDGET_COLUMNS)
    for n in ns:
        budget = plan_budget(scenario, n=n, epsilon=epsilon, delta=delta, **inputs)
        table.rows.append((
            scenario, n, inputs.get("k"), epsilon, delta, budget.precision, budget.subsets, budget.shots,
        ))
    return table


def _trial_seed(seed: int, row: int, trial: int) -> int:
    return int(np.random.SeedSequence(seed, spawn_key=(row, trial)).generate_state(1)[0])


def failure_rate_sweep(
    state: StateLike,
    epsilons: Sequence[float],
    delta: float,
    trials: int,
    seed: int = 0,
    threads: int = 1,
    max_shots: int = DEFAULT_MAX_SHOTS,
    repetitions: Optional[int] = None,
) -> Table:
    """Fraction of full-tomography runs at the planned budget that miss epsilon in trace distance.

    Each trial runs the exhaustive schedule with ``ceil(shots / 3**n)``
    repetitions (or ``repetitions`` when given) and compares the raw
    linear-inversion estimate with ``state``.
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    n = state.n_qubits
    table = Table(FAILURE_COLUMNS)
    for row, epsilon in enumerate(epsilons):
        budget = plan_budget("full", n=n, epsilon=epsilon, delta=delta)
        m = repetitions or math.ceil(budget.shots / 3 ** n)
        schedule = exhaustive_schedule(n, m, max_shots=max_shots)
        failures = 0
        for trial in range(trials):
            store = run_schedule(state, schedule, seed=_trial_seed(seed, row, trial), threads=threads,
                                 max_shots=max_shots)
            sigma = estimate_state(accumulate(store, threads=threads))
            if trace_distance(state, sigma) > epsilon:
                failures += 1
        logger.info("epsilon=%g: %d of %d runs failed at m=%d", epsilon, failures, trials, m)
        table.rows.append((epsilon, delta, m * 3 ** n, m, trials, failures, failures / trials))
    return table
