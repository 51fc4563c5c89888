"""Analyses over the set of optimal sequences."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionError, NotOptimalError, ParameterError
from .mincut import lex_minimize
from .model import FitnessFunction, HPSequence, check_sequence
from .pqdag import (
    SINK_NODE,
    SOURCE_NODE,
    PQDag,
    contract,
    sequence_to_ideal,
    strongly_connected_components,
)

MutationSystem = tuple[frozenset[int], ...]


def _weights(n: int, w: Sequence[object] | None) -> list[Fraction]:
    if w is None:
        return [Fraction(1)] * n
    if len(w) != n:
        raise DimensionError(f"expected {n} weights, got {len(w)}")
    return [Fraction(v) for v in w]


def distance_coefficients(target: Sequence[int], w: Sequence[Fraction]) -> list[Fraction]:
    """Linear part of ``sum w_i |x_i - t_i|``; ``|x - t| = x (1 - 2t) + t`` for bits."""
    return [wi * (1 - 2 * ti) for wi, ti in zip(w, target)]


def nearest_optimal(
    phi: FitnessFunction, target: Sequence[int], w: Sequence[object] | None = None
) -> HPSequence:
    """Optimum of ``phi`` with the least weighted Hamming distance to ``target``."""
    check_sequence(phi, target)
    weights = _weights(phi.n, w)
    return lex_minimize(phi, distance_coefficients(target, weights))


def extreme_h_count(phi: FitnessFunction, direction: str = "max") -> HPSequence:
    if direction not in ("max", "min"):
        raise ParameterError(f"direction must be 'max' or 'min', got {direction!r}")
    target = (1 if direction == "max" else 0,) * phi.n
    return nearest_optimal(phi, target)


def intersect_dags(dags: Sequence[PQDag]) -> PQDag | None:
    """Composite dag for the sequences optimal under every input, or None.

    Constraint graph nodes: 0 is s, 1 is t, residue i is i + 1; an arc u -> v
    encodes ``x_u <= x_v``.  Everything reachable from s is forced to H and
    everything reaching t is forced to P, so the problem is infeasible exactly
    when t is reachable from s.
    """
    if not dags:
        raise DimensionError("need at least one dag")
    n = dags[0].n
    if any(d.n != n for d in dags):
        raise DimensionError("all dags must share the same n")

    size = n + 2
    succ: list[set[int]] = [set() for _ in range(size)]

    def both(u: int, v: int) -> None:
        succ[u].add(v)
        succ[v].add(u)

    for dag in dags:
        anchor: dict[int, int] = {SOURCE_NODE: 0, SINK_NODE: 1}
        for i, r in enumerate(dag.rho, start=1):
            if r in anchor:
                both(anchor[r], i + 1)
            else:
                anchor[r] = i + 1
        for u, v in dag.interior_edges:
            succ[anchor[u]].add(anchor[v])

    ordered = [sorted(s) for s in succ]
    forced_h = _reach([0], ordered)
    if 1 in forced_h:
        return None
    preds: list[list[int]] = [[] for _ in range(size)]
    for u in range(size):
        for v in ordered[u]:
            preds[v].append(u)
    forced_p = _reach([1], preds)

    label = [-1] * size
    for u in forced_h:
        label[u] = SOURCE_NODE
    for u in forced_p:
        label[u] = SINK_NODE
    rest = [u for u in range(size) if label[u] < 0]
    rest_set = set(rest)
    comps = strongly_connected_components(rest, lambda u: (w for w in ordered[u] if w in rest_set))
    for k, comp in enumerate(comps, start=2):
        for u in comp:
            label[u] = k
    return contract(n, label, lambda u: ordered[u], range(size))


def _reach(start: Iterable[int], adj: Sequence[Sequence[int]]) -> set[int]:
    seen = set(start)
    stack = list(seen)
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def diameter(dag: PQDag, w: Sequence[object] | None = None) -> Fraction:
    weights = _weights(dag.n, w)
    if any(v < 0 for v in weights):
        raise ParameterError("diameter needs nonnegative weights")
    return sum(
        (wi for wi, r in zip(weights, dag.rho) if r not in (SOURCE_NODE, SINK_NODE)),
        Fraction(0),
    )


def min_mutation_system(
    dag: PQDag, pair: tuple[Sequence[int], Sequence[int]] | None = None
) -> MutationSystem:
    """Maximal sets of the smallest mutation system connecting ``pair`` (or all optima).

    Sets are 1-based residue indices, ordered by supernode id.
    """
    if pair is None:
        nodes = list(dag.interior)
    else:
        first = sequence_to_ideal(dag, pair[0])
        second = sequence_to_ideal(dag, pair[1])
        nodes = sorted(first ^ second)
    return tuple(frozenset(dag.members[v]) for v in nodes)


def is_connected_under(
    dag: PQDag,
    system: Iterable[Iterable[int]],
    pair: tuple[Sequence[int], Sequence[int]] | None = None,
) -> bool:
    sets = [frozenset(s) for s in system]
    for s in sets:
        if any(not 1 <= i <= dag.n for i in s):
            raise DimensionError(f"mutation set {sorted(s)} has indices outside 1..{dag.n}")
    return all(any(need <= s for s in sets) for need in min_mutation_system(dag, pair))


def is_optimal(dag: PQDag, x: Sequence[int]) -> bool:
    try:
        sequence_to_ideal(dag, x)
    except NotOptimalError:
        return False
    return True
