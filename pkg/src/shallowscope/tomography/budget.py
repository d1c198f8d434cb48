"""Closed-form sample budgets. All logarithms are natural."""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, Optional

from scipy.special import comb

from shallowscope.exceptions import ConfigError

logger = logging.getLogger(__name__)

TOMOGRAPHY_CONSTANT = 3 + 2 * math.sqrt(2)
OVERLAP_CONSTANT = 32

SCENARIOS = (
    "full",
    "full-rank-r",
    "overlap",
    "ground-unknown-graph",
    "ground-known-m",
    "ground-known-graph",
    "circuit-unknown-structure",
    "circuit-known-structure",
    "complexity-test",
)

_REQUIRED = {
    "full": (),
    "full-rank-r": ("rank",),
    "overlap": ("k",),
    "ground-unknown-graph": ("k", "gap"),
    "ground-known-m": ("k", "gap", "m_terms"),
    "ground-known-graph": ("k", "gap", "m_terms"),
    "circuit-unknown-structure": ("k",),
    "circuit-known-structure": ("k",),
    "complexity-test": ("k",),
}


@dataclass(frozen=True)
class SampleBudget:
    """Shot count for one scenario together with the inputs that produced it.

    ``precision`` is the trace-distance precision each marginal must reach;
    it equals ``epsilon`` for the plain tomography scenarios. ``subsets`` is
    the number of marginals in the union bound (0 for full-state scenarios).
    """

    scenario: str
    n: int
    epsilon: float
    delta: float
    shots: int
    precision: float
    subsets: int = 0
    inputs: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return asdict(self)


def _overlap_count(k: int, subsets: int, precision: float, delta: float) -> float:
    return OVERLAP_CONSTANT * 10 ** k * math.log(2 * subsets / delta) / precision ** 2


def plan_budget(
    scenario: str,
    n: int,
    epsilon: float,
    delta: float,
    k: Optional[int] = None,
    m_terms: Optional[int] = None,
    gap: Optional[float] = None,
    rank: Optional[int] = None,
) -> SampleBudget:
    """Number of shots sufficient for ``scenario`` at precision ``epsilon``.

    Example:
        >>> plan_budget("overlap", n=8, k=2, epsilon=0.25, delta=0.2).shots
        288502

    Raises:
        ConfigError: If an input is missing or out of range
    """
    if scenario not in SCENARIOS:
        raise ConfigError("scenario", f"unknown scenario {scenario!r}; expected one of {', '.join(SCENARIOS)}")
    if n < 1:
        raise ConfigError("n", f"must be a positive integer, got {n}")
    if not 0 < epsilon <= 2:
        raise ConfigError("epsilon", f"must lie in (0, 2], got {epsilon}")
    if not 0 < delta < 1 / 3:
        raise ConfigError("delta", "must lie in (0, 1/3); the budget bounds only hold for delta < 1/3")
    values = {"k": k, "m_terms": m_terms, "gap": gap, "rank": rank}
    for name in _REQUIRED[scenario]:
        if values[name] is None:
            raise ConfigError(name, f"required by scenario {scenario}")
    if k is not None and not 1 <= k <= n:
        raise ConfigError("k", f"must lie in [1, {n}], got {k}")
    if rank is not None and not 1 <= rank <= 2 ** n:
        raise ConfigError("rank", f"must lie in [1, 2^{n}], got {rank}")
    if gap is not None and gap <= 0:
        raise ConfigError("gap", f"must be positive, got {gap}")
    if m_terms is not None and m_terms < 1:
        raise ConfigError("m_terms", f"must be a positive integer, got {m_terms}")

    log_inverse_delta = math.log(1 / delta)
    subsets = 0
    precision = epsilon
    if scenario == "full":
        count = TOMOGRAPHY_CONSTANT * 10 ** n * log_inverse_delta / epsilon ** 2
    elif scenario == "full-rank-r":
        count = 8 * TOMOGRAPHY_CONSTANT * 5 ** n * rank * log_inverse_delta / epsilon ** 2
    else:
        all_subsets = comb(n, k, exact=True)
        if scenario == "overlap":
            subsets = all_subsets
        elif scenario == "ground-unknown-graph":
            subsets = all_subsets
            precision = gap * epsilon ** 2 / (4 * all_subsets)
        elif scenario == "ground-known-m":
            subsets = all_subsets
            precision = gap * epsilon ** 2 / (4 * m_terms)
        elif scenario == "ground-known-graph":
            subsets = m_terms
            precision = gap * epsilon ** 2 / (4 * m_terms)
        elif scenario == "circuit-unknown-structure":
            subsets = all_subsets
            precision = epsilon ** 2 / (4 * n)
        elif scenario == "circuit-known-structure":
            subsets = n
            precision = epsilon ** 2 / (4 * n)
        else:
            subsets = all_subsets
            precision = epsilon ** 2 / (12 * n)
        count = _overlap_count(k, subsets, precision, delta)

    inputs = {name: value for name, value in values.items() if value is not None}
    budget = SampleBudget(scenario, n, epsilon, delta, math.ceil(count), precision, subsets, inputs)
    logger.debug("budget %s: %d shots", scenario, budget.shots)
    return budget
