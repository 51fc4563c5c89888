"""Text formats: fitness, geometry, weight and mutation-system files, plus number printing.

All formats are line based, whitespace/TSV separated, 1-based, with ``#``
starting a comment.  Coefficients may be decimals or ``p/q`` ratios.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, TextIO

from .errors import GCError, ParseError
from .model import FitnessFunction, Geometry, parse_rational
from .pqdag import SINK_NODE, SOURCE_NODE, PQDag


def format_number(q: object) -> str:
    """Exact decimal when the denominator divides a power of ten, else ``p/q``."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    den, twos, fives = q.denominator, 0, 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{q.numerator}/{q.denominator}"
    digits = max(twos, fives)
    scaled = abs(q.numerator) * 10**digits // q.denominator
    whole, frac = divmod(scaled, 10**digits)
    sign = "-" if q < 0 else ""
    return f"{sign}{whole}.{frac:0{digits}d}"


def _records(lines: Iterable[str], path: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if text:
            yield lineno, text.split()


def _index(token: str, n: int, path: str, lineno: int) -> int:
    try:
        i = int(token)
    except ValueError:
        raise ParseError(f"bad index {token!r}", path, lineno) from None
    if not 1 <= i <= n:
        raise ParseError(f"index {i} outside 1..{n}", path, lineno)
    return i


def _value(token: str, path: str, lineno: int) -> Fraction:
    try:
        return parse_rational(token)
    except ParseError as exc:
        raise ParseError(str(exc), path, lineno) from None


def _header(records, keyword: str, path: str) -> int:
    try:
        lineno, fields = next(records)
    except StopIteration:
        raise ParseError(f"empty file, expected '{keyword} <n>'", path) from None
    if len(fields) != 2 or fields[0] != keyword:
        raise ParseError(f"expected '{keyword} <n>'", path, lineno)
    try:
        n = int(fields[1])
    except ValueError:
        raise ParseError(f"bad residue count {fields[1]!r}", path, lineno) from None
    if n < 0:
        raise ParseError("negative residue count", path, lineno)
    return n


def read_fitness(stream: TextIO, path: str = "<fitness>") -> FitnessFunction:
    records = _records(stream, path)
    n = _header(records, "phi", path)
    pairs: dict[tuple[int, int], Fraction] = {}
    linear = [Fraction(0)] * n
    for lineno, fields in records:
        kind = fields[0]
        if kind == "pair" and len(fields) == 4:
            i, j = _index(fields[1], n, path, lineno), _index(fields[2], n, path, lineno)
            if not i < j:
                raise ParseError(f"pair needs i < j, got {i} {j}", path, lineno)
            a = _value(fields[3], path, lineno)
            if a < 0:
                raise ParseError(f"negative pair coefficient {fields[3]}", path, lineno)
            if (i, j) in pairs:
                raise ParseError(f"duplicate pair {i} {j}", path, lineno)
            pairs[(i, j)] = a
        elif kind == "lin" and len(fields) == 3:
            linear[_index(fields[1], n, path, lineno) - 1] = _value(fields[2], path, lineno)
        else:
            raise ParseError(f"unrecognized record {' '.join(fields)!r}", path, lineno)
    try:
        return FitnessFunction(n, pairs, linear)
    except GCError as exc:
        raise ParseError(str(exc), path) from None


def write_fitness(phi: FitnessFunction, stream: TextIO) -> None:
    stream.write(f"phi\t{phi.n}\n")
    for (i, j), a in phi.pairs.items():
        stream.write(f"pair\t{i}\t{j}\t{format_number(a)}\n")
    for i, b in enumerate(phi.linear, start=1):
        if b != 0:
            stream.write(f"lin\t{i}\t{format_number(b)}\n")


def read_geometry(stream: TextIO, path: str = "<geometry>") -> Geometry:
    records = _records(stream, path)
    n = _header(records, "geom", path)
    coords: list[tuple[float, float, float] | None] = [None] * n
    surface: list[Fraction] = [Fraction(0)] * n
    letters: list[str | None] = [None] * n
    for lineno, fields in records:
        if fields[0] != "res" or len(fields) not in (6, 7):
            raise ParseError(f"unrecognized record {' '.join(fields)!r}", path, lineno)
        i = _index(fields[1], n, path, lineno)
        if coords[i - 1] is not None:
            raise ParseError(f"residue {i} listed twice", path, lineno)
        try:
            coords[i - 1] = (float(fields[2]), float(fields[3]), float(fields[4]))
        except ValueError:
            raise ParseError("bad coordinate", path, lineno) from None
        surface[i - 1] = _value(fields[5], path, lineno)
        if surface[i - 1] < 0:
            raise ParseError("negative solvent surface", path, lineno)
        if len(fields) == 7:
            letters[i - 1] = fields[6]
    missing = [i for i, c in enumerate(coords, start=1) if c is None]
    if missing:
        raise ParseError(f"residues without a record: {missing[:10]}", path)
    native = None
    if all(letter is not None for letter in letters):
        native = "".join(letters)
    try:
        return Geometry(tuple(coords), tuple(surface), native)
    except GCError as exc:
        raise ParseError(str(exc), path) from None


def read_weights(stream: TextIO, n: int, path: str = "<weights>") -> list[Fraction]:
    """Weights default to 1 for residues the file does not mention."""
    weights = [Fraction(1)] * n
    for lineno, fields in _records(stream, path):
        if fields[0] != "w" or len(fields) != 3:
            raise ParseError(f"expected 'w <i> <value>', got {' '.join(fields)!r}", path, lineno)
        weights[_index(fields[1], n, path, lineno) - 1] = _value(fields[2], path, lineno)
    return weights


def read_mutation_system(stream: TextIO, n: int, path: str = "<system>") -> list[frozenset[int]]:
    sets = []
    for lineno, fields in _records(stream, path):
        if fields[0] != "set":
            raise ParseError(f"expected 'set <i> ...', got {' '.join(fields)!r}", path, lineno)
        sets.append(frozenset(_index(tok, n, path, lineno) for tok in fields[1:]))
    return sets


def supernode_table(dag: PQDag) -> str:
    lines = ["node\trole\tresidues"]
    for v, group in enumerate(dag.members):
        name = "s'" if v == SOURCE_NODE else "t'" if v == SINK_NODE else str(v)
        lines.append(f"{name}\t{dag.role(v)}\t{' '.join(map(str, group)) or '-'}")
    for u, v in dag.interior_edges:
        lines.append(f"edge\t{u}\t{v}")
    return "\n".join(lines) + "\n"
