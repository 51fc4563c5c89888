"""One-parameter families of fitness functions.

For a linear statistic ``l(x) = sum_i l_i x_i + l_0`` the lower envelope

    env(theta) = min_x  Phi(x) + theta * l(x)

is piecewise linear and concave.  Its corners are found by probing: at a
given theta the optima with the largest and smallest ``l`` carry the pieces
just left and right of theta, and intersecting known pieces tells us where
to probe next.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import AssumptionError, DimensionError, EnvelopeRangeError
from .landscape import _weights, nearest_optimal
from .mincut import lex_minimize, one_optimum
from .model import (
    FitnessFunction,
    Geometry,
    HPSequence,
    check_sequence,
    contact_terms,
    evaluate,
    hamming,
    scaled_energy,
)

Line = tuple[Fraction, Fraction]  # (value at theta = 0, slope)


@dataclass(frozen=True)
class LinearStatistic:
    coeffs: tuple[Fraction, ...]
    const: Fraction = Fraction(0)

    def __call__(self, x: Sequence[int]) -> Fraction:
        return self.const + sum((c for c, xi in zip(self.coeffs, x) if xi), Fraction(0))

    @property
    def max_value(self) -> Fraction:
        return self.const + sum((c for c in self.coeffs if c > 0), Fraction(0))

    @property
    def min_value(self) -> Fraction:
        return self.const + sum((c for c in self.coeffs if c < 0), Fraction(0))


def distance_statistic(target: Sequence[int]) -> LinearStatistic:
    """Unweighted Hamming distance to ``target``."""
    return LinearStatistic(tuple(Fraction(1 - 2 * t) for t in target), Fraction(sum(target)))


def surface_statistic(surface: Sequence[object]) -> LinearStatistic:
    """Total solvent surface of the H residues."""
    return LinearStatistic(tuple(Fraction(s) for s in surface))


@dataclass(frozen=True)
class Corner:
    theta: Fraction
    value: Fraction
    left_slope: Fraction | None
    right_slope: Fraction


@dataclass(frozen=True)
class ConcaveEnvelope:
    """Corners of the envelope over ``[lower, upper]``.

    When ``lower`` is the edge of the parameter domain and the first corner
    sits there, that corner's ``left_slope`` is None.
    """

    corners: tuple[Corner, ...]
    lower: Fraction
    upper: Fraction
    first_slope: Fraction

    @property
    def slopes(self) -> tuple[Fraction, ...]:
        if not self.corners:
            return (self.first_slope,)
        head = self.corners[0].left_slope
        rest = tuple(c.right_slope for c in self.corners)
        return rest if head is None else (head, *rest)

    def __call__(self, theta: Fraction) -> Fraction:
        """Envelope value, valid inside ``[lower, upper]``."""
        theta = Fraction(theta)
        if not self.corners:
            raise ValueError("envelope without corners has no anchor point")
        idx = 0
        for k, c in enumerate(self.corners):
            if c.theta <= theta:
                idx = k
        c = self.corners[idx]
        if theta >= c.theta:
            return c.value + (theta - c.theta) * c.right_slope
        slope = c.left_slope if c.left_slope is not None else c.right_slope
        return c.value + (theta - c.theta) * slope


def shifted(phi: FitnessFunction, stat: LinearStatistic, theta: Fraction) -> FitnessFunction:
    """``Phi + theta * l`` without the constant ``theta * l_0``."""
    return phi.with_linear([b + theta * c for b, c in zip(phi.linear, stat.coeffs)])


def _line(phi: FitnessFunction, stat: LinearStatistic, x: Sequence[int]) -> Line:
    return evaluate(phi, x), stat(x)


def probe(phi: FitnessFunction, stat: LinearStatistic, theta: Fraction) -> tuple[HPSequence, HPSequence]:
    """``(L, R)``: optima of ``Phi + theta*l`` with the largest and smallest ``l``."""
    shifted_phi = shifted(phi, stat, theta)
    left = lex_minimize(shifted_phi, [-c for c in stat.coeffs])
    right = lex_minimize(shifted_phi, list(stat.coeffs))
    return left, right


def _at(line: Line, theta: Fraction) -> Fraction:
    return line[0] + theta * line[1]


def trace_envelope(
    phi: FitnessFunction,
    stat: LinearStatistic,
    lower: object,
    upper: object,
    lower_is_domain_edge: bool = False,
) -> ConcaveEnvelope:
    """Exact corners of the envelope strictly inside ``(lower, upper)``.

    With ``lower_is_domain_edge`` the point at ``lower`` is reported as the
    first corner.  Otherwise both ends are checked to carry the extreme
    slopes, which rules out corners outside the range.
    """
    lower, upper = Fraction(lower), Fraction(upper)
    if len(stat.coeffs) != phi.n:
        raise DimensionError("statistic length differs from n")
    if not lower < upper:
        raise EnvelopeRangeError(f"empty range [{lower}, {upper}]")
    lo_left, lo_right = probe(phi, stat, lower)
    hi_left, hi_right = probe(phi, stat, upper)
    lo_line = _line(phi, stat, lo_right)
    hi_line = _line(phi, stat, hi_left)
    if stat(hi_left) != stat.min_value:
        raise EnvelopeRangeError(f"envelope still bends beyond {upper}")
    if not lower_is_domain_edge and stat(lo_right) != stat.max_value:
        raise EnvelopeRangeError(f"envelope still bends before {lower}")

    corners: list[Corner] = []
    if lower_is_domain_edge:
        corners.append(Corner(lower, _at(lo_line, lower), None, lo_line[1]))
    pending = [(lower, lo_line, upper, hi_line)]
    while pending:
        a, line_a, b, line_b = pending.pop()
        if line_a == line_b:
            continue
        if line_a[1] == line_b[1]:
            raise EnvelopeRangeError("parallel pieces; range does not bracket the envelope")
        mid = (line_b[0] - line_a[0]) / (line_a[1] - line_b[1])
        if not a < mid < b:
            raise EnvelopeRangeError(f"pieces meet at {mid}, outside ({a}, {b})")
        left, right = probe(phi, stat, mid)
        line_l = _line(phi, stat, left)
        line_r = _line(phi, stat, right)
        if line_l != line_r:
            corners.append(Corner(mid, _at(line_l, mid), line_l[1], line_r[1]))
        pending.append((a, line_a, mid, line_l))
        pending.append((mid, line_r, b, line_b))

    corners.sort(key=lambda c: c.theta)
    return ConcaveEnvelope(tuple(corners), lower, upper, lo_line[1])


@dataclass(frozen=True)
class LandscapePlot:
    """Exact energies at the breakpoint distances ``n = d_0 > ... > d_k = 0``."""

    breakpoints: tuple[tuple[int, Fraction], ...]

    def query(self, d: int) -> tuple[Fraction, bool]:
        """``(value, exact)``: F(d) at a breakpoint, otherwise the chord lower bound."""
        pts = self.breakpoints
        for dist, value in pts:
            if dist == d:
                return value, True
        for (d_hi, f_hi), (d_lo, f_lo) in zip(pts, pts[1:]):
            if d_hi > d > d_lo:
                lam = Fraction(d - d_lo, d_hi - d_lo)
                return lam * f_hi + (1 - lam) * f_lo, False
        raise DimensionError(f"distance {d} outside [0, {pts[0][0]}]")


def landscape_range(phi: FitnessFunction) -> Fraction:
    """Half-width ``2W`` of a probe range that brackets every corner."""
    w = 1 + sum(phi.pairs.values(), Fraction(0)) + sum((abs(b) for b in phi.linear), Fraction(0))
    return 2 * w


def energy_distance_landscape(
    phi: FitnessFunction, target: Sequence[int]
) -> tuple[ConcaveEnvelope, LandscapePlot]:
    check_sequence(phi, target)
    stat = distance_statistic(target)
    if phi.n == 0:
        env = ConcaveEnvelope((), Fraction(0), Fraction(0), Fraction(0))
        return env, LandscapePlot(((0, Fraction(0)),))
    span = landscape_range(phi)
    env = trace_envelope(phi, stat, -span, span)
    corners = env.corners
    points = [(int(corners[0].left_slope), corners[0].value - corners[0].theta * corners[0].left_slope)]
    for c in corners:
        points.append((int(c.right_slope), c.value - c.theta * c.right_slope))
    return env, LandscapePlot(tuple(points))


@dataclass(frozen=True)
class TuningResult:
    d_min: Fraction
    points: tuple[Fraction, ...]
    intervals: tuple[tuple[Fraction, Fraction | None], ...]
    envelope: ConcaveEnvelope
    corner_distances: tuple[Fraction, ...] = field(default=())


def beta_family(geom: Geometry) -> tuple[FitnessFunction, LinearStatistic]:
    """``Phi_beta = base + beta * surface`` with alpha fixed at -1."""
    if any(s < 0 for s in geom.surface):
        raise AssumptionError("tuning requires nonnegative solvent surfaces")
    base = FitnessFunction(geom.n, contact_terms(geom), [0] * geom.n)
    return base, surface_statistic(geom.surface)


def beta_envelope(base: FitnessFunction, stat: LinearStatistic) -> ConcaveEnvelope:
    nonzero = [s for s in stat.coeffs if s != 0]
    if not nonzero:
        _, right = probe(base, stat, Fraction(0))
        line = _line(base, stat, right)
        corner = Corner(Fraction(0), line[0], None, line[1])
        return ConcaveEnvelope((corner,), Fraction(0), Fraction(0), line[1])
    beta_inf = (1 + sum(base.pairs.values(), Fraction(0))) / min(nonzero)
    return trace_envelope(base, stat, 0, beta_inf, lower_is_domain_edge=True)


def tune_beta(
    geom: Geometry, target: Sequence[int], w: Sequence[object] | None = None
) -> TuningResult:
    """All beta (alpha = -1) whose nearest optimum to ``target`` is closest."""
    base, stat = beta_family(geom)
    check_sequence(base, target)
    weights = _weights(geom.n, w)
    env = beta_envelope(base, stat)

    def nearest_distance(beta: Fraction) -> Fraction:
        x = nearest_optimal(shifted(base, stat, beta), target, weights)
        return hamming(x, target, weights)

    betas = [c.theta for c in env.corners]
    dists = [nearest_distance(b) for b in betas]
    d_min = min(dists)
    points = tuple(b for b, d in zip(betas, dists) if d == d_min)
    intervals = []
    for k, left in enumerate(betas):
        right = betas[k + 1] if k + 1 < len(betas) else None
        sample = (left + right) / 2 if right is not None else left + 1
        if nearest_distance(sample) == d_min:
            intervals.append((left, right))
    return TuningResult(d_min, points, tuple(intervals), env, tuple(dists))


def restrict(phi: FitnessFunction, prefix: Sequence[int]) -> tuple[FitnessFunction, Fraction]:
    """Fix the first ``len(prefix)`` residues; return the reduced suffix function and constant."""
    k = len(prefix)
    n = phi.n - k
    const = Fraction(0)
    linear = list(phi.linear[k:])
    pairs: dict[tuple[int, int], Fraction] = {}
    for i in range(k):
        if prefix[i]:
            const += phi.linear[i]
    for (i, j), a in phi.pairs.items():
        if j <= k:
            if prefix[i - 1] and prefix[j - 1]:
                const -= a
        elif i <= k:
            if prefix[i - 1]:
                linear[j - k - 1] -= a
        else:
            pairs[(i - k, j - k)] = a
    return FitnessFunction(n, pairs, linear), const


def _best_completion(phi: FitnessFunction, prefix: tuple[int, ...]) -> HPSequence:
    reduced, _ = restrict(phi, prefix)
    if reduced.n == 0:
        return prefix
    return prefix + one_optimum(reduced)


def suboptimal_stream(
    phi: FitnessFunction, limit: int | None = None, slack: object | None = None
) -> Iterator[tuple[HPSequence, Fraction]]:
    """All sequences with their energies, in nondecreasing energy.

    Stops after ``limit`` items or once the energy exceeds the minimum by more
    than ``slack``.  Ties are broken by lexicographic sequence order.
    """
    slack = None if slack is None else Fraction(slack)
    first = _best_completion(phi, ())
    heap = [(scaled_energy(phi, first), first, 0)]
    floor = heap[0][0]
    emitted = 0
    while heap:
        if limit is not None and emitted >= limit:
            return
        key, z, fixed = heapq.heappop(heap)
        if slack is not None and Fraction(key - floor, phi.c) > slack:
            return
        yield z, Fraction(key, phi.c)
        emitted += 1
        for i in range(fixed, phi.n):
            prefix = z[:i] + (1 - z[i],)
            best = _best_completion(phi, prefix)
            heapq.heappush(heap, (scaled_energy(phi, best), best, i + 1))
