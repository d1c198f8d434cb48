"""Circuit-complexity lower bounds and the bounded-depth complexity tester."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from shallowscope.circuit.gamma2 import MAX_EXACT_DEPTH, gamma2, gamma2_upper_bound
from shallowscope.circuit.gates import SU4_PARAMETERS, su4_gate
from shallowscope.circuit.layered import Gate, Geometry, LayeredCircuit, apply, random_circuit
from shallowscope.circuit.lightcone import locality_for_depth
from shallowscope.exceptions import InsufficientDataError, UnsupportedRangeError
from shallowscope.qcore import HermitianOperator, QubitSubset, partial_trace, trace_distance
from shallowscope.tomography.estimators import MarginalEstimateSet

logger = logging.getLogger(__name__)

YES = "yes"
NO = "no"
METHODS = ("Nelder-Mead", "Powell", "L-BFGS-B")

_CAVEATS = {
    YES: "certified: the witness circuit reproduces every marginal within the threshold",
    NO: (
        "search-incomplete: no circuit within the depth bound was found by bounded local search; "
        "a depth-D circuit may still exist"
    ),
}


def complexity_lower_bound(r: int, geometry, sharp: bool = False) -> int:
    """Minimum depth of any circuit preparing a state that is not UDA by its r-local marginals.

    ``ceil(log2(r + 1))`` for general circuits and ``ceil((r + 1) / 2)`` on a
    chain. On the square lattice the default is ``max{D : gamma_2(D) <= r + 1}``;
    ``sharp=True`` returns ``min{D : gamma_2(D) >= r + 1}`` instead.

    Raises:
        UnsupportedRangeError: If the square-lattice answer lies beyond the
            exact gamma_2 range
    """
    if r < 1:
        raise ValueError(f"r must be at least 1, got {r}")
    kind = geometry.kind if isinstance(geometry, Geometry) else geometry
    if kind == "general":
        return int(r).bit_length()
    if kind == "chain":
        return (r + 2) // 2
    if kind != "square_lattice":
        raise ValueError(f"unknown geometry {kind!r}")

    target = r + 1
    if target > gamma2_upper_bound(MAX_EXACT_DEPTH):
        raise UnsupportedRangeError(
            f"square-lattice bound for r={r} exceeds the D={MAX_EXACT_DEPTH} light-cone size bound"
        )
    if sharp:
        for depth in range(MAX_EXACT_DEPTH + 1):
            if gamma2(depth) >= target:
                return depth
    else:
        depth = 0
        while depth < MAX_EXACT_DEPTH and gamma2(depth + 1) <= target:
            depth += 1
        if depth < MAX_EXACT_DEPTH:
            return depth
    raise UnsupportedRangeError(f"square-lattice bound for r={r} needs gamma_2 beyond D={MAX_EXACT_DEPTH}")


@dataclass(frozen=True)
class SearchConfig:
    """Budget of the variational search.

    Attributes:
        restarts: Total number of local searches, seed circuits included
        max_iterations: Iteration cap handed to the optimizer
        method: ``Nelder-Mead`` (default), ``Powell`` or ``L-BFGS-B``
    """

    restarts: int = 4
    max_iterations: int = 2000
    method: str = "Nelder-Mead"

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError(f"restarts must be at least 1, got {self.restarts}")
        if self.method not in METHODS:
            raise ValueError(f"unknown optimizer {self.method!r}; expected one of {METHODS}")


@dataclass(frozen=True, eq=False)
class ComplexityVerdict:
    """Answer of :func:`test_complexity` with its evidence."""

    answer: str
    residual: float
    threshold: float
    k: int
    depth: int
    worst_subset: Optional[QubitSubset]
    witness: Optional[LayeredCircuit]
    restarts: int
    evaluations: int
    caveat: str

    def to_dict(self) -> Dict:
        return {
            "answer": self.answer,
            "residual": self.residual,
            "threshold": self.threshold,
            "k": self.k,
            "depth": self.depth,
            "worst_subset": self.worst_subset.label if self.worst_subset is not None else None,
            "restarts": self.restarts,
            "evaluations": self.evaluations,
            "caveat": self.caveat,
        }


class _Ansatz:
    """Fixed gate layout with each gate ``V0 expm(i sum theta_a G_a)``."""

    def __init__(self, template: LayeredCircuit):
        self.template = template
        self.slots: List[Tuple[int, Gate]] = list(template.gates())

    @property
    def size(self) -> int:
        return len(self.slots) * SU4_PARAMETERS

    def circuit(self, theta: np.ndarray) -> LayeredCircuit:
        layers: List[List[Gate]] = [[] for _ in range(self.template.depth)]
        angles = np.asarray(theta).reshape(len(self.slots), SU4_PARAMETERS) if self.slots else ()
        for (layer, gate), params in zip(self.slots, angles):
            layers[layer].append(Gate(gate.qubits, gate.unitary @ su4_gate(params)))
        return LayeredCircuit(self.template.n_qubits, layers, self.template.geometry)


def _residual(circuit: LayeredCircuit, targets: Dict[QubitSubset, HermitianOperator]) -> Tuple[float, QubitSubset]:
    output = apply(circuit)
    worst, worst_subset = -1.0, None
    for subset, target in targets.items():
        value = trace_distance(partial_trace(output, subset), target)
        if value > worst:
            worst, worst_subset = value, subset
    return worst, worst_subset


def test_complexity(
    estimates: MarginalEstimateSet,
    depth: int,
    geometry: Geometry,
    epsilon: float,
    config: SearchConfig = SearchConfig(),
    seed_circuits: Sequence[LayeredCircuit] = (),
    seed: int = 0,
    threads: int = 1,
) -> ComplexityVerdict:
    """Decide whether the estimated marginals fit a depth-``depth`` circuit output.

    The objective is the largest trace distance between a candidate output's
    k-marginals and the estimates, with ``k`` set by the geometry and depth.
    ``yes`` is returned with a witness circuit once the objective drops below
    ``epsilon**2 / (6 n)``; otherwise ``no`` with the best residual. Seed
    circuits start the first restarts at their own gates; the rest start from
    random layouts.

    Raises:
        InsufficientDataError: If some k-subset has no estimate
    """
    n = estimates.n_qubits
    k = min(locality_for_depth(depth, geometry, n), n)
    missing = estimates.missing_subsets(k)
    if missing:
        raise InsufficientDataError(
            f"estimate set lacks {len(missing)} of the {k}-subsets, e.g. {missing[0].label}"
        )
    for circuit in seed_circuits:
        if circuit.depth > depth or circuit.n_qubits != n:
            raise ValueError(f"seed circuit of depth {circuit.depth} on {circuit.n_qubits} qubits does not fit")
    targets = {
        s: estimates[s] for s in estimates.subsets() if len(s) == k
    }
    threshold = epsilon ** 2 / (6 * n)
    restarts = max(config.restarts, len(seed_circuits))

    def template(index: int) -> LayeredCircuit:
        if index < len(seed_circuits):
            return seed_circuits[index]
        layout_seed = int(np.random.SeedSequence(seed, spawn_key=(index,)).generate_state(1)[0])
        return random_circuit(n, depth, geometry, seed=layout_seed)

    def search(index: int):
        ansatz = _Ansatz(template(index))
        evaluations = 0

        def objective(theta: np.ndarray) -> float:
            nonlocal evaluations
            evaluations += 1
            return _residual(ansatz.circuit(theta), targets)[0]

        theta = np.zeros(ansatz.size)
        if ansatz.size and objective(theta) >= threshold:
            result = minimize(objective, theta, method=config.method, options={"maxiter": config.max_iterations})
            theta = result.x
        circuit = ansatz.circuit(theta)
        residual, worst = _residual(circuit, targets)
        return residual, worst, circuit, evaluations + 1

    if threads > 1 and restarts > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(search, range(restarts)))
    else:
        results = [search(index) for index in range(restarts)]

    evaluations = sum(r[3] for r in results)
    for index, (residual, worst, circuit, _) in enumerate(results):
        if residual < threshold:
            logger.debug("restart %d found a witness with residual %.3e", index, residual)
            return ComplexityVerdict(YES, residual, threshold, k, depth, worst, circuit, restarts, evaluations,
                                     _CAVEATS[YES])
    residual, worst, _, _ = min(results, key=lambda r: r[0])
    logger.info("no depth-%d witness: best residual %.3e above threshold %.3e", depth, residual, threshold)
    return ComplexityVerdict(NO, residual, threshold, k, depth, worst, None, restarts, evaluations, _CAVEATS[NO])


test_complexity.__test__ = False
