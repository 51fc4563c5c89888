"""Exhaustive reference computations, capped at desk scale.

Everything here sweeps all ``2**n`` sequences (or all subsets of a dag), so
these are test instruments for quantities that are #P- or NP-hard in general.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, OracleCapError
from .model import FitnessFunction, HPSequence, check_sequence
from .pqdag import PQDag

DEFAULT_MAX_N = 20
HARD_MAX_N = 24
_INT64_SAFE = 2**62


def _check_cap(n: int, max_n: int) -> None:
    if max_n > HARD_MAX_N:
        raise OracleCapError(f"oracle cap {max_n} exceeds the hard limit {HARD_MAX_N}")
    if n > max_n:
        raise OracleCapError(f"n={n} exceeds oracle cap {max_n}")


def all_sequences(n: int) -> np.ndarray:
    """All 0/1 vectors of length n, row k = binary digits of k (residue 1 first)."""
    codes = np.arange(2**n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts[None, :]) & 1).astype(np.int64)


def scaled_energies(phi: FitnessFunction, max_n: int = DEFAULT_MAX_N) -> tuple[np.ndarray, np.ndarray]:
    """``(X, E)`` with ``E[k] = c * Phi(X[k])`` for every sequence."""
    _check_cap(phi.n, max_n)
    X = all_sequences(phi.n)
    span = sum(abs(v) for v in phi.scaled_pairs.values()) + sum(abs(b) for b in phi.scaled_linear)
    dtype = np.int64 if span < _INT64_SAFE else object
    B = np.array(phi.scaled_linear, dtype=dtype) if phi.n else np.zeros(0, dtype=dtype)
    Xd = X.astype(dtype)
    E = Xd @ B if phi.n else np.zeros(1, dtype=dtype)
    for (i, j), a in phi.scaled_pairs.items():
        E = E - a * (Xd[:, i - 1] * Xd[:, j - 1])
    return X, E


def _rows(X: np.ndarray, mask: np.ndarray) -> set[HPSequence]:
    return {tuple(int(v) for v in row) for row in X[mask]}


def brute_minimum(phi: FitnessFunction, max_n: int = DEFAULT_MAX_N) -> Fraction:
    _, E = scaled_energies(phi, max_n)
    return Fraction(int(E.min()), phi.c)


def brute_optima(phi: FitnessFunction, max_n: int = DEFAULT_MAX_N) -> set[HPSequence]:
    X, E = scaled_energies(phi, max_n)
    return _rows(X, E == E.min())


def brute_count(phi: FitnessFunction, max_n: int = DEFAULT_MAX_N) -> int:
    _, E = scaled_energies(phi, max_n)
    return int((E == E.min()).sum())


def brute_average_norm(phi: FitnessFunction, max_n: int = DEFAULT_MAX_N) -> Fraction:
    X, E = scaled_energies(phi, max_n)
    mask = E == E.min()
    return Fraction(int(X[mask].sum()), int(mask.sum()))


def _distances(X: np.ndarray, target: Sequence[int]) -> np.ndarray:
    return np.abs(X - np.array(target, dtype=np.int64)[None, :]).sum(axis=1)


def brute_average_distance(phi: FitnessFunction, target: Sequence[int], max_n: int = DEFAULT_MAX_N) -> Fraction:
    check_sequence(phi, target)
    X, E = scaled_energies(phi, max_n)
    mask = E == E.min()
    return Fraction(int(_distances(X[mask], target).sum()), int(mask.sum()))


def brute_count_at_distance(
    phi: FitnessFunction, target: Sequence[int], d: int, max_n: int = DEFAULT_MAX_N
) -> int:
    check_sequence(phi, target)
    X, E = scaled_energies(phi, max_n)
    mask = E == E.min()
    return int((_distances(X[mask], target) == d).sum())


def brute_F(phi: FitnessFunction, target: Sequence[int], d: int, max_n: int = DEFAULT_MAX_N) -> Fraction:
    """Smallest energy among sequences at Hamming distance exactly ``d``."""
    check_sequence(phi, target)
    if not 0 <= d <= phi.n:
        raise DimensionError(f"no sequences at distance {d} for n={phi.n}")
    X, E = scaled_energies(phi, max_n)
    shell = _distances(X, target) == d
    return Fraction(int(E[shell].min()), phi.c)


def brute_bounded_norm_exists(phi: FitnessFunction, d1: int, d2: int, max_n: int = DEFAULT_MAX_N) -> bool:
    X, E = scaled_energies(phi, max_n)
    norms = X[E == E.min()].sum(axis=1)
    return bool(((norms >= d1) & (norms <= d2)).any())


def brute_nearest_distance(
    phi: FitnessFunction,
    target: Sequence[int],
    weights: Sequence[object] | None = None,
    max_n: int = DEFAULT_MAX_N,
) -> Fraction:
    """Minimum weighted Hamming distance from ``target`` over the optima."""
    check_sequence(phi, target)
    w = [Fraction(v) for v in (weights if weights is not None else [1] * phi.n)]
    best = None
    for x in brute_optima(phi, max_n):
        dist = sum((wi for wi, a, b in zip(w, x, target) if a != b), Fraction(0))
        if best is None or dist < best:
            best = dist
    return best


def brute_sorted_energies(phi: FitnessFunction, max_n: int = DEFAULT_MAX_N) -> list[Fraction]:
    _, E = scaled_energies(phi, max_n)
    return [Fraction(int(e), phi.c) for e in sorted(E.tolist())]


def brute_mutation_connected(
    optima: Iterable[HPSequence],
    system: Iterable[Iterable[int]],
    pair: tuple[HPSequence, HPSequence] | None = None,
) -> bool:
    """Chain search inside a set of optima.

    Moves flip exactly the positions of a nonempty subset of some set in
    ``system`` (1-based), and must stay inside ``optima``.
    """
    opt = set(optima)
    maximal = [frozenset(s) for s in system]
    if not opt:
        return True

    def allowed(x: HPSequence, y: HPSequence) -> bool:
        diff = {i for i, (a, b) in enumerate(zip(x, y), start=1) if a != b}
        return any(diff <= s for s in maximal)

    start = pair[0] if pair is not None else min(opt)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in opt:
            if y not in seen and allowed(x, y):
                seen.add(y)
                queue.append(y)
    if pair is not None:
        return pair[1] in seen
    return seen == opt


def count_ideals(dag: PQDag, max_n: int = DEFAULT_MAX_N) -> int:
    """Exact ideal count by splitting on one node at a time.

    Ideals avoiding ``v`` avoid all its descendants; ideals containing ``v``
    contain all its ancestors.
    """
    _check_cap(dag.interior_size, max_n)
    nodes = list(dag.interior)
    succ = dag.successors
    pred = dag.predecessors

    def closure(start: int, step) -> frozenset[int]:
        seen = {start}
        stack = [start]
        while stack:
            for w in step[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return frozenset(seen)

    down = {v: closure(v, pred) for v in nodes}
    up = {v: closure(v, succ) for v in nodes}

    @lru_cache(maxsize=None)
    def count(free: frozenset[int]) -> int:
        if not free:
            return 1
        v = min(free)
        return count(free - up[v]) + count(free - down[v])

    return count(frozenset(nodes))
