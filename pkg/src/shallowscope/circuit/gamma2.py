"""Exact growth-process search for gamma_2(D) on the square lattice.

A growth process starts from the single site (0, 0). At each of D steps every
current site may recruit at most one lattice neighbour that is not yet in the
set; gamma_2(D) is the largest reachable set size.

Recruitments within a step are a matching between current sites and new
sites, so the sites recruited in one step form an independent set of the
transversal matroid of that bipartite graph. Larger sets never grow into
smaller ones, which means only bases of the matroid (maximum matchable
recruitments) need to be expanded. Point sets are deduplicated per step up to
translation and the eight lattice symmetries, and subtrees are cut by the
bound ``(|S| + rank) * 2**(remaining - 1)``.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Set, Tuple

from shallowscope.exceptions import UnsupportedRangeError

logger = logging.getLogger(__name__)

MAX_EXACT_DEPTH = 6

Point = Tuple[int, int]
Recruitment = Tuple[Point, Point]  # (parent, child)

_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))
_SYMMETRIES = (
    (1, 0, 0, 1),
    (0, -1, 1, 0),
    (-1, 0, 0, -1),
    (0, 1, -1, 0),
    (1, 0, 0, -1),
    (-1, 0, 0, 1),
    (0, 1, 1, 0),
    (0, -1, -1, 0),
)


@dataclass(frozen=True)
class Gamma2Result:
    """Outcome of the exact search.

    Attributes:
        depth: Number of growth steps D
        value: gamma_2(D)
        process: One optimal process, as the recruitments of each step
        upper_bound: (D+1)^2 + D^2
        realizable: Whether every step of ``process`` is a layer of disjoint
            nearest-neighbour pairs, i.e. a valid circuit layer
        explored: Number of point sets expanded by the search
    """

    depth: int
    value: int
    process: Tuple[Tuple[Recruitment, ...], ...]
    upper_bound: int
    realizable: bool
    explored: int


def gamma2_upper_bound(depth: int) -> int:
    """Return ``(D+1)**2 + D**2``, the size of the radius-D lattice diamond."""
    if depth < 0:
        raise ValueError(f"depth must be nonnegative, got {depth}")
    return (depth + 1) ** 2 + depth ** 2


def neighbours(point: Point) -> List[Point]:
    r, c = point
    return [(r + dr, c + dc) for dr, dc in _STEPS]


def canonical_form(points) -> Tuple[Point, ...]:
    """Smallest sorted, translation-normalized image under the dihedral group."""
    best = None
    for a, b, c, d in _SYMMETRIES:
        mapped = [(a * x + b * y, c * x + d * y) for x, y in points]
        r0 = min(p[0] for p in mapped)
        c0 = min(p[1] for p in mapped)
        key = tuple(sorted((x - r0, y - c0) for x, y in mapped))
        if best is None or key < best:
            best = key
    return best


def augment_matching(child, parents_of: Dict, owner: Dict, visited: Set) -> bool:
    """Kuhn augmenting step: try to give ``child`` a distinct parent.

    ``owner`` maps parent -> child and is updated in place on success.
    """
    for parent in parents_of[child]:
        if parent in visited:
            continue
        visited.add(parent)
        if parent not in owner or augment_matching(owner[parent], parents_of, owner, visited):
            owner[parent] = child
            return True
    return False


def _frontier(points: FrozenSet[Point]) -> Tuple[List[Point], Dict[Point, List[Point]]]:
    boundary = sorted({q for p in points for q in neighbours(p) if q not in points})
    parents_of = {q: [p for p in neighbours(q) if p in points] for q in boundary}
    return boundary, parents_of


def _max_recruitment(points: FrozenSet[Point]) -> Dict[Point, Point]:
    boundary, parents_of = _frontier(points)
    owner: Dict[Point, Point] = {}
    for child in boundary:
        augment_matching(child, parents_of, owner, set())
    return owner


def _maximal_recruitments(points: FrozenSet[Point], rank: int) -> Iterator[Dict[Point, Point]]:
    """Yield one matching for every maximum-size recruitable set of new sites."""
    boundary, parents_of = _frontier(points)
    chosen: List[Point] = []

    def extend(i: int, owner: Dict[Point, Point]) -> Iterator[Dict[Point, Point]]:
        if len(chosen) == rank:
            yield owner
            return
        if len(chosen) + len(boundary) - i < rank:
            return
        child = boundary[i]
        trial = dict(owner)
        if augment_matching(child, parents_of, trial, set()):
            chosen.append(child)
            yield from extend(i + 1, trial)
            chosen.pop()
        yield from extend(i + 1, owner)

    yield from extend(0, {})


def is_realizable(process: Tuple[Tuple[Recruitment, ...], ...]) -> bool:
    """Replay a process and check that each step is a disjoint nearest-neighbour layer."""
    current = {(0, 0)}
    for step in process:
        parents = [p for p, _ in step]
        children = [c for _, c in step]
        if len(set(parents)) != len(parents) or len(set(children)) != len(children):
            return False
        for parent, child in step:
            if parent not in current or child in current or child not in neighbours(parent):
                return False
        current.update(children)
    return True


def gamma2_search(depth: int) -> Gamma2Result:
    """Exhaustive branch-and-bound search for gamma_2(depth).

    Raises:
        UnsupportedRangeError: If depth exceeds :data:`MAX_EXACT_DEPTH`
    """
    if depth < 0:
        raise ValueError(f"depth must be nonnegative, got {depth}")
    if depth > MAX_EXACT_DEPTH:
        raise UnsupportedRangeError(
            f"exact gamma_2 search supports D <= {MAX_EXACT_DEPTH}, got {depth}; "
            "use gamma2_upper_bound instead"
        )
    cap = gamma2_upper_bound(depth)
    best = {"value": 1, "process": ()}
    seen: List[Set[Tuple[Point, ...]]] = [set() for _ in range(depth + 1)]
    explored = 0

    def search(points: FrozenSet[Point], step: int, history: Tuple[Tuple[Recruitment, ...], ...]) -> None:
        nonlocal explored
        if best["value"] >= cap:
            return
        key = canonical_form(points)
        if key in seen[step]:
            return
        seen[step].add(key)
        explored += 1

        remaining = depth - step
        owner = _max_recruitment(points)
        rank = len(owner)
        if remaining == 1:
            if len(points) + rank > best["value"]:
                last = tuple(sorted(owner.items()))
                best["value"] = len(points) + rank
                best["process"] = history + (last,)
            return
        if min(cap, (len(points) + rank) * 2 ** (remaining - 1)) <= best["value"]:
            return
        for matching in _maximal_recruitments(points, rank):
            recruits = tuple(sorted(matching.items()))
            search(points | frozenset(matching.values()), step + 1, history + (recruits,))

    if depth > 0:
        search(frozenset({(0, 0)}), 0, ())
    process = best["process"]
    logger.debug("gamma2(%d) = %d after expanding %d point sets", depth, best["value"], explored)
    return Gamma2Result(
        depth=depth,
        value=best["value"],
        process=process,
        upper_bound=cap,
        realizable=is_realizable(process),
        explored=explored,
    )


@lru_cache(maxsize=None)
def _cached_search(depth: int) -> Gamma2Result:
    return gamma2_search(depth)


def gamma2_result(depth: int) -> Gamma2Result:
    """Cached :func:`gamma2_search`."""
    return _cached_search(int(depth))


def gamma2(depth: int) -> int:
    """gamma_2(D): 1, 2, 4, 8, 16, 30, ... for D = 0, 1, 2, ...

    Raises:
        UnsupportedRangeError: If D > 6
    """
    return gamma2_result(depth).value
