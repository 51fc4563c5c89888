"""The Grand Canonical fitness function and its construction from residue geometry.

A fitness function over H/P sequences ``x`` of length ``n`` has the form

    Phi(x) = - sum_{i<j} a[i,j] x_i x_j + sum_i b_i x_i,   a[i,j] >= 0,

with exact rational coefficients.  Residue indices are 1-based everywhere in
the public API; a sequence is a tuple of 0/1 ints with residue ``i`` stored at
``x[i - 1]``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    DimensionError,
    EncodingError,
    GeometryError,
    ParameterError,
    ParseError,
)

HPSequence = tuple[int, ...]

HYDROPHOBIC = frozenset("ACFILMVWY")
AMINO_ACIDS = frozenset("ACDEFGHIKLMNPQRSTVWY")

SIGMOID_CUTOFF = 6.5
DEFAULT_ALPHA = Fraction(-2)
DEFAULT_BETA = Fraction(1, 3)
MAX_FRACTION_DIGITS = 9

_DECIMAL_RE = re.compile(r"^([+-]?)(\d+)(?:\.(\d+))?$")
_RATIO_RE = re.compile(r"^([+-]?\d+)/(\d+)$")


def rationalize(literal: str) -> Fraction:
    """Read a decimal literal exactly, without a float round trip.

    At most nine fractional digits are accepted.
    """
    match = _DECIMAL_RE.match(literal.strip())
    if match is None:
        raise ParseError(f"malformed decimal literal {literal!r}")
    sign, whole, frac = match.groups()
    frac = frac or ""
    if len(frac) > MAX_FRACTION_DIGITS:
        raise ParseError(
            f"{literal!r} has {len(frac)} fractional digits (max {MAX_FRACTION_DIGITS})"
        )
    value = Fraction(int(whole + frac), 10 ** len(frac))
    return -value if sign == "-" else value


def parse_rational(literal: str) -> Fraction:
    """Decimal literal or ``p/q`` ratio."""
    match = _RATIO_RE.match(literal.strip())
    if match is None:
        return rationalize(literal)
    num, den = int(match.group(1)), int(match.group(2))
    if den == 0:
        raise ParseError(f"zero denominator in {literal!r}")
    return Fraction(num, den)


def sigmoid_g(d: float) -> float:
    if not d > 0:
        raise GeometryError(f"distance must be positive, got {d}")
    if d > SIGMOID_CUTOFF:
        return 0.0
    return 1.0 / (1.0 + math.exp(d - SIGMOID_CUTOFF))


def sigmoid_rational(d: float) -> Fraction:
    """``sigmoid_g`` quantized to nine decimal digits."""
    return rationalize(f"{sigmoid_g(d):.{MAX_FRACTION_DIGITS}f}")


class FitnessFunction:
    """Exact quadratic pseudo-boolean energy with nonnegative pair coefficients.

    ``pairs`` maps 1-based ``(i, j)`` with ``i < j`` to ``a[i,j] >= 0``; zero
    entries are dropped.  ``linear`` holds ``b_1 .. b_n``.  Internally every
    coefficient is kept as an integer scaled by the common denominator ``c``.
    """

    __slots__ = ("n", "pairs", "linear", "c", "scaled_pairs", "scaled_linear")

    def __init__(
        self,
        n: int,
        pairs: Mapping[tuple[int, int], object] | None = None,
        linear: Sequence[object] | None = None,
    ):
        if n < 0:
            raise DimensionError(f"negative residue count {n}")
        self.n = n
        clean: dict[tuple[int, int], Fraction] = {}
        for (i, j), value in sorted((pairs or {}).items()):
            a = Fraction(value)
            if not (1 <= i < j <= n):
                raise ParameterError(f"pair index ({i}, {j}) out of range for n={n}")
            if a < 0:
                raise ParameterError(f"pair coefficient a[{i},{j}] = {a} is negative")
            if a != 0:
                clean[(i, j)] = a
        self.pairs = clean
        if linear is None:
            linear = [0] * n
        if len(linear) != n:
            raise DimensionError(f"expected {n} linear terms, got {len(linear)}")
        self.linear = tuple(Fraction(b) for b in linear)

        c = 1
        for value in (*clean.values(), *self.linear):
            c = math.lcm(c, value.denominator)
        self.c = c
        self.scaled_pairs = {k: int(v * c) for k, v in clean.items()}
        self.scaled_linear = tuple(int(b * c) for b in self.linear)

    @property
    def m(self) -> int:
        return len(self.pairs)

    @property
    def delta(self) -> int:
        return self.n + self.m

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FitnessFunction):
            return NotImplemented
        return (self.n, self.pairs, self.linear) == (other.n, other.pairs, other.linear)

    def __hash__(self) -> int:
        return hash((self.n, tuple(self.pairs.items()), self.linear))

    def __repr__(self) -> str:
        pairs = {k: str(v) for k, v in self.pairs.items()}
        linear = [str(b) for b in self.linear]
        return f"FitnessFunction(n={self.n}, pairs={pairs}, linear={linear})"

    def with_linear(self, linear: Sequence[object]) -> FitnessFunction:
        return FitnessFunction(self.n, self.pairs, linear)

    def scaled(self, factor: int) -> FitnessFunction:
        return FitnessFunction(
            self.n,
            {k: v * factor for k, v in self.pairs.items()},
            [b * factor for b in self.linear],
        )


@dataclass(frozen=True)
class Geometry:
    """Residue centroids (Angstrom), solvent surfaces and optional native letters."""

    coords: tuple[tuple[float, float, float], ...]
    surface: tuple[Fraction, ...]
    letters: str | None = None

    def __post_init__(self):
        if len(self.coords) < 1:
            raise GeometryError("geometry needs at least one residue")
        if len(self.surface) != len(self.coords):
            raise GeometryError("coords and surface lengths differ")
        object.__setattr__(self, "surface", tuple(Fraction(s) for s in self.surface))
        if any(s < 0 for s in self.surface):
            raise GeometryError("solvent surface must be nonnegative")
        if self.letters is not None and len(self.letters) != len(self.coords):
            raise GeometryError("native letters length differs from residue count")

    @property
    def n(self) -> int:
        return len(self.coords)

    def distance(self, i: int, j: int) -> float:
        return math.dist(self.coords[i - 1], self.coords[j - 1])


def contact_terms(geom: Geometry) -> dict[tuple[int, int], Fraction]:
    """Rationalized ``g(d_ij)`` for residue pairs with ``i < j - 2`` in contact."""
    terms = {}
    for i in range(1, geom.n + 1):
        for j in range(i + 3, geom.n + 1):
            d = geom.distance(i, j)
            if d > SIGMOID_CUTOFF:
                continue
            g = sigmoid_rational(d)
            if g > 0:
                terms[(i, j)] = g
    return terms


def build_phi_from_geometry(
    geom: Geometry,
    alpha: object = DEFAULT_ALPHA,
    beta: object = DEFAULT_BETA,
) -> FitnessFunction:
    alpha, beta = Fraction(alpha), Fraction(beta)
    if alpha > 0:
        raise ParameterError(f"alpha must be nonpositive, got {alpha}")
    if beta < 0:
        raise ParameterError(f"beta must be nonnegative, got {beta}")
    pairs = {k: -alpha * g for k, g in contact_terms(geom).items()}
    return FitnessFunction(geom.n, pairs, [beta * s for s in geom.surface])


def check_sequence(phi: FitnessFunction, x: Sequence[int]) -> None:
    if len(x) != phi.n:
        raise DimensionError(f"sequence length {len(x)} != n={phi.n}")
    if any(v not in (0, 1) for v in x):
        raise DimensionError("sequence entries must be 0 or 1")


def scaled_energy(phi: FitnessFunction, x: Sequence[int]) -> int:
    """``c * Phi(x)`` as an integer."""
    total = sum(b for b, xi in zip(phi.scaled_linear, x) if xi)
    for (i, j), a in phi.scaled_pairs.items():
        if x[i - 1] and x[j - 1]:
            total -= a
    return total


def evaluate(phi: FitnessFunction, x: Sequence[int]) -> Fraction:
    check_sequence(phi, x)
    return Fraction(scaled_energy(phi, x), phi.c)


def hp_encode(amino: str) -> HPSequence:
    out = []
    for pos, letter in enumerate(amino, start=1):
        up = letter.upper()
        if up not in AMINO_ACIDS:
            raise EncodingError(letter, pos)
        out.append(1 if up in HYDROPHOBIC else 0)
    return tuple(out)


def parse_hp(text: str) -> HPSequence:
    """``"HPH"`` -> ``(1, 0, 1)``."""
    out = []
    for pos, letter in enumerate(text, start=1):
        if letter in "Hh":
            out.append(1)
        elif letter in "Pp":
            out.append(0)
        else:
            raise EncodingError(letter, pos)
    return tuple(out)


def to_hp(x: Iterable[int]) -> str:
    return "".join("H" if v else "P" for v in x)


def hamming(x: Sequence[int], y: Sequence[int], weights: Sequence[object] | None = None) -> Fraction:
    if weights is None:
        return Fraction(sum(1 for a, b in zip(x, y) if a != b))
    return sum((Fraction(w) for w, a, b in zip(weights, x, y) if a != b), Fraction(0))
