"""Command-line interface for shallowscope experiments.

Every subcommand builds a payload, wraps it in a ResultEnvelope and writes it
as JSON (or CSV for tables) to ``--output`` or stdout. Stages compose through
files: any ``--circuit``/``--state``/``--hamiltonian``/``--estimates`` input
may be the bare document or an envelope written by an earlier command.
"""

import argparse
import logging
import math
import sys
import time
from itertools import combinations
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from shallowscope.circuit import (
    Geometry,
    LayeredCircuit,
    apply,
    gamma2_result,
    ghz_circuit,
    locality_bound,
    locality_for_depth,
    random_circuit,
    validate,
)
from shallowscope.cli.config import (
    FORMATS,
    SCHEDULE_KINDS,
    SWEEP_KINDS,
    ExperimentConfig,
    derive_seed,
    resolve_threads,
)
from shallowscope.cli.tables import emit_csv
from shallowscope.data.schema import ResultEnvelope
from shallowscope.exceptions import CircuitError, ConfigError, FileFormatError, ShallowScopeError
from shallowscope.experiments import Table, budget_sweep, failure_rate_sweep
from shallowscope.io.codec import (
    circuit_from_dict,
    circuit_to_dict,
    estimate_to_dict,
    estimates_from_dict,
    estimates_to_dict,
    hamiltonian_from_dict,
    hamiltonian_to_dict,
    read_json,
    state_from_dict,
    state_to_dict,
)
from shallowscope.io.shots import ShotFileParser, ShotFileWriter
from shallowscope.logger import ExperimentLogger
from shallowscope.parenth import (
    LocalHamiltonian,
    fingerprint_check,
    fingerprint_trials,
    ground_analysis,
    parent_hamiltonian,
)
from shallowscope.qcore import (
    PureState,
    QubitSubset,
    StateLike,
    fidelity_pure,
    frobenius_distance,
    random_pure_state,
    trace_distance,
)
from shallowscope.sampler import (
    Schedule,
    basis_codes,
    exhaustive_schedule,
    random_schedule,
    run_schedule,
)
from shallowscope.tomography import (
    MarginalEstimateSet,
    accumulate,
    estimate_state,
    overlapping_tomography,
    plan_budget,
    project_psd,
    project_rank_r,
)
from shallowscope.tomography.budget import SCENARIOS
from shallowscope.uda import MarginalMap, complexity, impostor_search
from shallowscope.uda.impostor import MAX_ITERATIONS

logger = logging.getLogger(__name__)

Payload = Dict[str, object]


# ---------------------------------------------------------------------------
# Input resolution
# ---------------------------------------------------------------------------


def _document(path: str, key: str) -> Dict:
    """Bare document at ``path``, or ``payload[key]`` when ``path`` holds an envelope."""
    data = read_json(path)
    if isinstance(data, dict) and "payload" in data and "command" in data:
        if key not in data["payload"]:
            raise FileFormatError(f"{path}: {data['command']} envelope has no {key!r} payload")
        return data["payload"][key]
    return data


def _load(path: str, key: str, decoder: Callable):
    try:
        return decoder(_document(path, key))
    except FileFormatError as e:
        if str(e).startswith(str(path)):
            raise
        raise FileFormatError(f"{path}: {e}") from e


def _geometry(config: ExperimentConfig, n: int) -> Geometry:
    if config.geometry == "square_lattice" and config.columns is not None:
        return Geometry.grid(n, config.columns)
    return Geometry(config.geometry)


def _circuit(config: ExperimentConfig) -> Optional[LayeredCircuit]:
    if config.circuit is not None:
        return _load(config.circuit, "circuit", circuit_from_dict)
    if config.ghz is not None:
        return ghz_circuit(config.ghz, _geometry(config, config.ghz))
    return None


def _state(config: ExperimentConfig, required: bool = True) -> Optional[StateLike]:
    """State from ``--state``, else the output of ``--circuit`` or ``--ghz``."""
    if config.state is not None:
        return _load(config.state, "state", state_from_dict)
    circuit = _circuit(config)
    if circuit is not None:
        return _checked_output(circuit)
    if required:
        raise ConfigError("state", f"{config.command} needs --state, --circuit or --ghz")
    return None


def _checked_output(circuit: LayeredCircuit) -> PureState:
    report = validate(circuit)
    if not report:
        raise CircuitError(f"invalid circuit: {report}")
    return apply(circuit)


def _hamiltonian(config: ExperimentConfig) -> LocalHamiltonian:
    if config.hamiltonian is not None:
        return _load(config.hamiltonian, "hamiltonian", hamiltonian_from_dict)
    circuit = _circuit(config)
    if circuit is None:
        raise ConfigError("hamiltonian", f"{config.command} needs --hamiltonian, --circuit or --ghz")
    return parent_hamiltonian(circuit)


def _subsets(config: ExperimentConfig) -> Optional[List[QubitSubset]]:
    if config.subsets_file is None:
        return None
    data = _document(config.subsets_file, "subsets")
    if not isinstance(data, list):
        raise FileFormatError(f"{config.subsets_file}: expected a list of qubit index lists")
    return [QubitSubset.parse(s) if isinstance(s, str) else QubitSubset.of(s) for s in data]


def _distances(reference: Optional[StateLike], estimate) -> Payload:
    if reference is None:
        return {}
    return {
        "trace_distance": trace_distance(reference, estimate),
        "frobenius_distance": frobenius_distance(reference, estimate),
    }


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_simulate(config: ExperimentConfig, threads: int) -> Payload:
    """Random (or loaded) circuit and its output state."""
    circuit = _circuit(config)
    if circuit is None:
        config.require("n", "depth")
        circuit = random_circuit(
            config.n, config.depth, _geometry(config, config.n),
            seed=derive_seed(config.seed, "circuit"), gate_set=config.gate_set,
        )
    psi = _checked_output(circuit)
    return {
        "n": circuit.n_qubits,
        "depth": circuit.depth,
        "gate_count": circuit.gate_count,
        "geometry": circuit.geometry.to_dict(),
        "circuit": circuit_to_dict(circuit),
        "state": state_to_dict(psi),
    }


def cmd_sample(config: ExperimentConfig, threads: int) -> Payload:
    """Measurement records in one basis or along a schedule."""
    state = _state(config)
    n = state.n_qubits
    if config.basis is not None:
        config.require("shots")
        codes = basis_codes(config.basis.upper())
        if len(codes) != n:
            raise ConfigError("basis", f"has {len(codes)} letters, state has {n} qubits")
        schedule = Schedule("fixed", n, np.tile(codes, (config.shots, 1)), config.shots)
    elif config.schedule == "exhaustive":
        config.require("repetitions")
        schedule = exhaustive_schedule(n, config.repetitions)
    elif config.schedule == "random":
        config.require("repetitions")
        schedule = random_schedule(n, config.repetitions, seed=derive_seed(config.seed, "schedule"))
    else:
        raise ConfigError("basis", "sample needs --basis or --schedule")

    store = run_schedule(state, schedule, seed=derive_seed(config.seed, "shots"), threads=threads)
    if config.save_shots is not None:
        path = ShotFileWriter().write_store(store, config.save_shots)
        logger.info("wrote %d shots to %s", len(store), path)

    payload = {"n": n, "shots": len(store), "schedule": schedule.descriptor()}
    if schedule.kind == "fixed":
        _, outcomes = store.arrays()
        index = outcomes.astype(np.int64) @ (1 << np.arange(n - 1, -1, -1))
        counts = np.bincount(index, minlength=2 ** n)
        payload["counts"] = {format(i, f"0{n}b"): int(c) for i, c in enumerate(counts) if c}
    return payload


def _shots_for(config: ExperimentConfig, stage: str, state: StateLike, schedule: Schedule, threads: int):
    store = run_schedule(state, schedule, seed=derive_seed(config.seed, stage), threads=threads)
    if config.save_shots is not None:
        ShotFileWriter().write_store(store, config.save_shots)
    return store


def cmd_tomo_full(config: ExperimentConfig, threads: int) -> Payload:
    """Linear-inversion estimate from an exhaustive schedule, optionally rank-r refined."""
    budget = None
    if config.shots_file is not None:
        store = ShotFileParser().parse_file(config.shots_file)
        reference = _state(config, required=False)
    else:
        reference = _state(config)
        n = reference.n_qubits
        if config.repetitions is not None:
            m = config.repetitions
        else:
            config.require("epsilon", "delta")
            budget = plan_budget("full", n=n, epsilon=config.epsilon, delta=config.delta)
            m = math.ceil(budget.shots / 3 ** n)
        store = _shots_for(config, "tomo-full", reference, exhaustive_schedule(n, m), threads)

    acc = accumulate(store, threads=threads)
    sigma = estimate_state(acc)
    if config.rank is not None:
        sigma = project_rank_r(sigma, config.rank)
    if config.project_psd:
        sigma = project_psd(sigma)
    payload = {
        "n": acc.n_qubits,
        "repetitions": acc.repetitions,
        "shots": len(store),
        "estimate": estimate_to_dict(sigma),
        "budget": budget,
    }
    payload.update(_distances(reference, sigma))
    return payload


def cmd_tomo_overlap(config: ExperimentConfig, threads: int) -> Payload:
    """All k-qubit marginals from one random-basis schedule."""
    config.require("k")
    budget = None
    if config.shots_file is not None:
        store = ShotFileParser().parse_file(config.shots_file)
        reference = _state(config, required=False)
    else:
        reference = _state(config)
        n = reference.n_qubits
        if config.repetitions is not None:
            repetitions = config.repetitions
        else:
            config.require("epsilon", "delta")
            budget = plan_budget("overlap", n=n, k=config.k, epsilon=config.epsilon, delta=config.delta)
            repetitions = budget.shots
        schedule = random_schedule(n, repetitions, seed=derive_seed(config.seed, "schedule"))
        store = _shots_for(config, "tomo-overlap", reference, schedule, threads)

    estimates = overlapping_tomography(
        store, config.k, _subsets(config), config.epsilon, config.delta,
        balanced=config.balanced, threads=threads,
    )
    payload = {
        "n": estimates.n_qubits,
        "k": estimates.k,
        "shots": len(store),
        "estimates": estimates_to_dict(estimates),
        "budget": budget,
    }
    if reference is not None:
        distances = estimates.distances_to(reference)
        payload["distances"] = distances
        payload["max_distance"] = max(distances.values())
        if config.epsilon is not None:
            payload["all_within_epsilon"] = all(d <= config.epsilon for d in distances.values())
    return payload


def cmd_budget(config: ExperimentConfig, threads: int) -> Payload:
    """Closed-form shot count for a scenario."""
    config.require("scenario", "n", "epsilon", "delta")
    k = config.k
    if k is None and config.depth is not None:
        k = locality_for_depth(config.depth, config.geometry, config.n)
    budget = plan_budget(
        config.scenario, n=config.n, epsilon=config.epsilon, delta=config.delta,
        k=k, m_terms=config.m_terms, gap=config.gap, rank=config.rank,
    )
    return budget.to_dict()


def cmd_parent(config: ExperimentConfig, threads: int) -> Payload:
    """Frustration-free parent Hamiltonian of a circuit output."""
    circuit = _circuit(config)
    if circuit is None:
        raise ConfigError("circuit", "parent needs --circuit or --ghz")
    h = parent_hamiltonian(circuit, threads=threads)
    return {
        "n": h.n_qubits,
        "terms": len(h),
        "locality": h.locality,
        "locality_bound": locality_bound(circuit.depth, circuit.geometry),
        "hamiltonian": hamiltonian_to_dict(h),
    }


def cmd_gap(config: ExperimentConfig, threads: int) -> Payload:
    """Ground energy, spectral gap and ground-space dimension."""
    h = _hamiltonian(config)
    analysis = ground_analysis(h)
    payload = analysis.to_dict()
    payload["certificate"] = h.certificate
    circuit = _circuit(config) if config.hamiltonian is None else None
    if circuit is not None and analysis.unique:
        payload["fidelity"] = fidelity_pure(_checked_output(circuit), analysis.ground_state)
    return payload


def cmd_fingerprint(config: ExperimentConfig, threads: int) -> Payload:
    """Robust fingerprint verdict for one state, or tallies over random states."""
    h = _hamiltonian(config)
    analysis = ground_analysis(h)
    psi = _state(config, required=False)
    if psi is None:
        psi = analysis.ground_state
    if not isinstance(psi, PureState):
        raise ConfigError("state", "fingerprint needs a pure target state")

    if config.trials is not None:
        epsilons = config.epsilons or ([config.epsilon] if config.epsilon is not None else None)
        if not epsilons:
            raise ConfigError("epsilons", "fingerprint --trials needs --epsilon or --epsilons")
        tallies = fingerprint_trials(h, psi, epsilons, config.trials, seed=derive_seed(config.seed, "fingerprint"))
        return {"trials": config.trials, "tallies": tallies}

    config.require("rho", "epsilon")
    rho = _load(config.rho, "state", state_from_dict)
    return fingerprint_check(h, psi, rho, config.epsilon, analysis).to_dict()


def cmd_gamma2(config: ExperimentConfig, threads: int) -> Payload:
    """Exact gamma_2(D) with one optimal growth process."""
    config.require("depth")
    result = gamma2_result(config.depth)
    return {
        "depth": result.depth,
        "gamma2": result.value,
        "upper_bound": result.upper_bound,
        "realizable": result.realizable,
        "explored": result.explored,
        "process": result.process,
    }


def cmd_ghz(config: ExperimentConfig, threads: int) -> Payload:
    """Shallow GHZ circuit for the chosen geometry."""
    config.require("n")
    geometry = _geometry(config, config.n)
    circuit = ghz_circuit(config.n, geometry)
    return {
        "n": config.n,
        "depth": circuit.depth,
        "lower_bound": complexity.complexity_lower_bound(config.n - 1, geometry.kind),
        "geometry": circuit.geometry.to_dict(),
        "circuit": circuit_to_dict(circuit),
    }


def cmd_lowerbound(config: ExperimentConfig, threads: int) -> Payload:
    """Depth lower bound for states that r-local marginals cannot pin down."""
    config.require("r")
    depth = complexity.complexity_lower_bound(config.r, config.geometry, sharp=config.sharp)
    return {"r": config.r, "geometry": config.geometry, "sharp": config.sharp, "depth": depth}


def cmd_uda_probe(config: ExperimentConfig, threads: int) -> Payload:
    """Search for a far-away state sharing the chosen marginals."""
    psi = _state(config)
    if not isinstance(psi, PureState):
        raise ConfigError("state", "uda-probe needs a pure state")
    subsets = _subsets(config)
    if subsets is None:
        config.require("k")
        marginal_map = MarginalMap.of(psi.n_qubits, _all_subsets(psi.n_qubits, config.k))
    else:
        marginal_map = MarginalMap.of(psi.n_qubits, subsets)
    verdict = impostor_search(
        psi, marginal_map,
        restarts=config.restarts or 8,
        seed=derive_seed(config.seed, "uda-probe"),
        threads=threads,
        max_iterations=config.max_iterations or MAX_ITERATIONS,
    )
    payload = verdict.to_dict()
    payload["subsets"] = [s.label for s in marginal_map.subsets]
    payload["witness"] = state_to_dict(verdict.witness) if verdict.witness is not None else None
    return payload


def _all_subsets(n: int, k: int) -> List[QubitSubset]:
    if k > n:
        raise ConfigError("k", f"must not exceed n={n}, got {k}")
    return [QubitSubset(c) for c in combinations(range(n), k)]


def cmd_complexity_test(config: ExperimentConfig, threads: int) -> Payload:
    """Does some depth-D circuit reproduce the estimated marginals?"""
    config.require("depth", "epsilon")
    if config.estimates is not None:
        estimates = _load(config.estimates, "estimates", estimates_from_dict)
        n = estimates.n_qubits
    else:
        state = _state(config)
        n = state.n_qubits
        k = locality_for_depth(config.depth, config.geometry, n)
        estimates = MarginalEstimateSet.from_exact(state, k)
    seeds = ()
    if config.seed_circuit is not None:
        seeds = (_load(config.seed_circuit, "circuit", circuit_from_dict),)
    search = complexity.SearchConfig(
        restarts=config.restarts or 4,
        max_iterations=config.max_iterations or 2000,
        method=config.method,
    )
    verdict = complexity.test_complexity(
        estimates, config.depth, _geometry(config, n), config.epsilon,
        config=search, seed_circuits=seeds, seed=derive_seed(config.seed, "complexity-test"), threads=threads,
    )
    payload = verdict.to_dict()
    payload["witness"] = circuit_to_dict(verdict.witness) if verdict.witness is not None else None
    return payload


def cmd_sweep(config: ExperimentConfig, threads: int) -> Payload:
    """Budget table over n, or empirical failure rate over epsilon."""
    config.require("delta")
    kind = config.kind or "budget"
    if kind == "budget":
        config.require("epsilon")
        extras = {
            name: getattr(config, name)
            for name in ("k", "m_terms", "gap", "rank")
            if getattr(config, name) is not None
        }
        table = budget_sweep(config.scenario or "full", config.ns or [1, 2, 3, 4],
                             config.epsilon, config.delta, **extras)
    else:
        state = _state(config, required=False)
        if state is None:
            config.require("n")
            state = random_pure_state(config.n, derive_seed(config.seed, "fixture"))
        epsilons = config.epsilons or ([config.epsilon] if config.epsilon is not None else None)
        if not epsilons:
            raise ConfigError("epsilons", "failure-rate sweep needs --epsilon or --epsilons")
        table = failure_rate_sweep(
            state, epsilons, config.delta, config.trials or 20,
            seed=derive_seed(config.seed, "sweep"), threads=threads, repetitions=config.repetitions,
        )
    return {"kind": kind, "table": table.to_dict()}


HANDLERS: Dict[str, Callable[[ExperimentConfig, int], Payload]] = {
    "simulate": cmd_simulate,
    "sample": cmd_sample,
    "tomo-full": cmd_tomo_full,
    "tomo-overlap": cmd_tomo_overlap,
    "budget": cmd_budget,
    "parent": cmd_parent,
    "gap": cmd_gap,
    "fingerprint": cmd_fingerprint,
    "gamma2": cmd_gamma2,
    "ghz": cmd_ghz,
    "lowerbound": cmd_lowerbound,
    "uda-probe": cmd_uda_probe,
    "complexity-test": cmd_complexity_test,
    "sweep": cmd_sweep,
}


# ---------------------------------------------------------------------------
# Orchestration
# ---------------------------------------------------------------------------


def render(envelope: ResultEnvelope, fmt: str = "json") -> str:
    """Envelope JSON, or the payload table as CSV."""
    if fmt == "csv":
        table = envelope.payload.get("table")
        if table is None:
            raise ConfigError("format", f"{envelope.command} has no tabular payload; use --format json")
        return emit_csv(Table(table["header"], table["rows"]))
    return envelope.to_json() + "\n"


def run(config: ExperimentConfig) -> ResultEnvelope:
    """Validate ``config``, dispatch to its command and write the envelope.

    Raises:
        ConfigError: If the config is invalid
        ShallowScopeError: Whatever the owning module raised
    """
    config.validate()
    threads = resolve_threads(config.threads)
    logger.info("running %s (seed %d, %d threads)", config.command, config.seed, threads)
    start = time.perf_counter()
    payload = HANDLERS[config.command](config, threads)
    elapsed = time.perf_counter() - start
    envelope = ResultEnvelope(
        command=config.command,
        config=config.to_dict(),
        seed=config.seed,
        payload=payload,
        timing={"seconds": elapsed, "threads": threads},
    )

    if config.output is not None:
        path = Path(config.output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(render(envelope, config.format), encoding="utf-8")
        logger.info("wrote %s result to %s", config.command, path)
    if config.logdir is not None:
        with ExperimentLogger(config.logdir) as tb:
            tb.log_envelope(envelope)
    return envelope


def _float_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shallowscope",
        description="Simulate and learn states prepared by shallow quantum circuits",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Planned shots for full tomography
  shallowscope budget --scenario full --n 3 --epsilon 0.2 --delta 0.1

  # GHZ circuit, its parent Hamiltonian and the spectral gap
  shallowscope ghz --n 8 --output runs/ghz8.json
  shallowscope parent --circuit runs/ghz8.json --output runs/parent8.json
  shallowscope gap --hamiltonian runs/parent8.json

  # Exact gamma_2 on the square lattice
  shallowscope gamma2 --d 5
        """,
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Log at DEBUG level")
    parser.add_argument("--quiet", "-q", action="store_true", help="Log warnings only")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="Top-level seed (default: 0)")
    common.add_argument("--threads", type=int, help="Worker threads (default: $SHALLOWSCOPE_THREADS or core count)")
    common.add_argument("--output", "-o", help="Write the result here instead of stdout")
    common.add_argument("--format", choices=FORMATS, default="json", help="Output format (default: json)")
    common.add_argument("--logdir", help="Also log the envelope to this TensorBoard directory")
    common.add_argument("--geometry", default="general", help="general, chain or square_lattice")
    common.add_argument("--columns", type=int, help="Grid width for square-lattice embeddings")

    inputs = argparse.ArgumentParser(add_help=False)
    inputs.add_argument("--circuit", help="Circuit JSON (or envelope with a circuit)")
    inputs.add_argument("--state", help="State JSON (or envelope with a state)")
    inputs.add_argument("--ghz", type=int, help="Use the n-qubit GHZ circuit as input")

    stats = argparse.ArgumentParser(add_help=False)
    stats.add_argument("--epsilon", type=float, help="Trace-distance precision in (0, 2]")
    stats.add_argument("--delta", type=float, help="Failure probability in (0, 1/3)")

    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    def add(name: str, help_text: str, *parents: argparse.ArgumentParser) -> argparse.ArgumentParser:
        return subparsers.add_parser(name, help=help_text, parents=[common, *parents])

    p = add("simulate", "Random or loaded circuit and its output state", inputs)
    p.add_argument("--n", type=int, help="Number of qubits")
    p.add_argument("--depth", "--d", type=int, help="Circuit depth")
    p.add_argument("--gate-set", dest="gate_set", default="haar", help="haar or fixed")

    p = add("sample", "Draw measurement records", inputs)
    p.add_argument("--basis", help="Single basis word, e.g. XZZ")
    p.add_argument("--shots", type=int, help="Shots for --basis")
    p.add_argument("--schedule", choices=SCHEDULE_KINDS, help="Schedule instead of a single basis")
    p.add_argument("--repetitions", type=int, help="Schedule repetitions")
    p.add_argument("--save-shots", dest="save_shots", help="Write the shot file here")

    p = add("tomo-full", "Full-state tomography", inputs, stats)
    p.add_argument("--shots-file", dest="shots_file", help="Estimate from an existing shot file")
    p.add_argument("--repetitions", type=int, help="Override the planned repetitions")
    p.add_argument("--rank", type=int, help="Rank-r refinement")
    p.add_argument("--project-psd", dest="project_psd", action="store_true", help="Project onto density matrices")
    p.add_argument("--save-shots", dest="save_shots", help="Write the generated shots here")

    p = add("tomo-overlap", "Overlapping tomography of k-qubit marginals", inputs, stats)
    p.add_argument("--k", type=int, help="Marginal size")
    p.add_argument("--shots-file", dest="shots_file", help="Estimate from an existing shot file")
    p.add_argument("--repetitions", type=int, help="Override the planned shot count")
    p.add_argument("--subsets-file", dest="subsets_file", help="JSON list of subsets to estimate")
    p.add_argument("--balanced", action="store_true", help="Truncate buckets to the smallest one")
    p.add_argument("--save-shots", dest="save_shots", help="Write the generated shots here")

    p = add("budget", "Closed-form sample budget", stats)
    p.add_argument("--scenario", choices=SCENARIOS, required=True)
    p.add_argument("--n", type=int, help="Number of qubits")
    p.add_argument("--k", type=int, help="Marginal size")
    p.add_argument("--depth", "--d", type=int, help="Derive k from circuit depth and geometry")
    p.add_argument("--m-terms", dest="m_terms", type=int, help="Number of Hamiltonian terms")
    p.add_argument("--gap", type=float, help="Spectral gap")
    p.add_argument("--rank", type=int, help="State rank")

    add("parent", "Parent Hamiltonian of a circuit", inputs)

    p = add("gap", "Spectral analysis of a Hamiltonian", inputs)
    p.add_argument("--hamiltonian", help="Hamiltonian JSON (or envelope with one)")

    p = add("fingerprint", "Robust fingerprint check", inputs)
    p.add_argument("--hamiltonian", help="Hamiltonian JSON (or envelope with one)")
    p.add_argument("--rho", help="State to compare against the ground state")
    p.add_argument("--epsilon", type=float, help="Trace-distance threshold")
    p.add_argument("--epsilons", type=_float_list, help="Comma-separated thresholds for --trials")
    p.add_argument("--trials", type=int, help="Tally verdicts over random states")

    p = add("gamma2", "Exact gamma_2 growth on the square lattice")
    p.add_argument("--depth", "--d", type=int, help="Number of growth steps")

    p = add("ghz", "Shallow GHZ circuit")
    p.add_argument("--n", type=int, help="Number of qubits")

    p = add("lowerbound", "Depth lower bound from non-UDA marginals")
    p.add_argument("--r", type=int, help="Marginal size r")
    p.add_argument("--sharp", action="store_true", help="Light-cone form on the square lattice")

    p = add("uda-probe", "Search for a state with identical marginals", inputs)
    p.add_argument("--k", type=int, help="Use every k-qubit subset")
    p.add_argument("--subsets-file", dest="subsets_file", help="JSON list of subsets")
    p.add_argument("--restarts", type=int, help="Independent restarts (default: 8)")
    p.add_argument("--max-iterations", dest="max_iterations", type=int, help="Iteration cap per restart")

    p = add("complexity-test", "Test for a depth-D circuit matching the marginals", inputs)
    p.add_argument("--estimates", help="Marginal estimate set (or tomo-overlap envelope)")
    p.add_argument("--depth", "--d", type=int, help="Depth bound D")
    p.add_argument("--epsilon", type=float, help="Target precision")
    p.add_argument("--seed-circuit", dest="seed_circuit", help="Circuit to start the first restart from")
    p.add_argument("--restarts", type=int, help="Local searches (default: 4)")
    p.add_argument("--max-iterations", dest="max_iterations", type=int, help="Optimizer iteration cap")
    p.add_argument("--method", default="Nelder-Mead", help="Nelder-Mead, Powell or L-BFGS-B")

    p = add("sweep", "Budget or failure-rate sweep table", inputs, stats)
    p.add_argument("--kind", choices=SWEEP_KINDS, default="budget")
    p.add_argument("--scenario", choices=SCENARIOS, help="Budget scenario (default: full)")
    p.add_argument("--ns", type=_int_list, help="Comma-separated qubit counts (default: 1,2,3,4)")
    p.add_argument("--n", type=int, help="Qubits of the random fixture state")
    p.add_argument("--k", type=int, help="Marginal size")
    p.add_argument("--m-terms", dest="m_terms", type=int, help="Number of Hamiltonian terms")
    p.add_argument("--gap", type=float, help="Spectral gap")
    p.add_argument("--rank", type=int, help="State rank")
    p.add_argument("--epsilons", type=_float_list, help="Comma-separated precisions")
    p.add_argument("--trials", type=int, help="Runs per precision (default: 20)")
    p.add_argument("--repetitions", type=int, help="Override the planned repetitions")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns 0 on success, 2 on config errors, 3 on numerical errors."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return 2

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        config = ExperimentConfig.from_namespace(args)
        envelope = run(config)
        if config.output is None:
            sys.stdout.write(render(envelope, config.format))
    except ConfigError as e:
        print(f"error: {args.command}: {e}", file=sys.stderr)
        return 2
    except (ShallowScopeError, np.linalg.LinAlgError, OSError) as e:
        print(f"error: {args.command}: {e}", file=sys.stderr)
        return 3
    except ValueError as e:
        print(f"error: {args.command}: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
