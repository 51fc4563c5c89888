"""Command-line front end.

Exit status: 0 on success, 2 on parse or validation errors, 3 when a
brute-force oracle would exceed its size cap.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from itertools import islice
from typing import Sequence, TextIO

from . import landscape, oracle, paramsweep, pqdag
from .errors import GCError, OracleCapError, ParseError
from .formats import (
    format_number,
    read_fitness,
    read_geometry,
    read_mutation_system,
    read_weights,
    supernode_table,
    write_fitness,
)
from .mincut import minimize
from .model import (
    DEFAULT_ALPHA,
    DEFAULT_BETA,
    FitnessFunction,
    build_phi_from_geometry,
    evaluate,
    hamming,
    hp_encode,
    parse_hp,
    parse_rational,
    to_hp,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CAP = 3


def _open_read(path: str):
    try:
        return open(path, encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", path) from None


def _load_phi(path: str) -> FitnessFunction:
    with _open_read(path) as fh:
        return read_fitness(fh, path)


def _load_weights(path: str | None, n: int):
    if path is None:
        return None
    with _open_read(path) as fh:
        return read_weights(fh, n, path)


def _target(args, n: int):
    text = args.target
    x = hp_encode(text) if args.amino else parse_hp(text)
    if len(x) != n:
        raise ParseError(f"target has length {len(x)}, expected {n}")
    return x


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def cmd_build_phi(args, out: TextIO) -> int:
    with _open_read(args.geometry) as fh:
        geom = read_geometry(fh, args.geometry)
    write_fitness(build_phi_from_geometry(geom, args.alpha, args.beta), out)
    return EXIT_OK


def cmd_optimize(args, out: TextIO) -> int:
    x, energy = minimize(_load_phi(args.fitness))
    out.write(f"{to_hp(x)}\t{format_number(energy)}\n")
    return EXIT_OK


def cmd_dag(args, out: TextIO) -> int:
    dag = pqdag.pq_dag(_load_phi(args.fitness))
    out.write(supernode_table(dag))
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(pqdag.to_dot(dag))
    return EXIT_OK


def cmd_enumerate(args, out: TextIO) -> int:
    dag = pqdag.pq_dag(_load_phi(args.fitness))
    for x in islice(pqdag.enumerate_optima(dag), args.limit):
        out.write(to_hp(x) + "\n")
    return EXIT_OK


def cmd_count(args, out: TextIO) -> int:
    phi = _load_phi(args.fitness)
    if args.brute:
        out.write(f"{oracle.brute_count(phi, max_n=args.max_n)}\n")
    else:
        lower, upper = pqdag.count_bound(pqdag.pq_dag(phi))
        out.write(f"{lower}\t{upper}\n")
    return EXIT_OK


def cmd_diameter(args, out: TextIO) -> int:
    phi = _load_phi(args.fitness)
    weights = _load_weights(args.weights, phi.n)
    out.write(format_number(landscape.diameter(pqdag.pq_dag(phi), weights)) + "\n")
    return EXIT_OK


def cmd_nearest(args, out: TextIO) -> int:
    phi = _load_phi(args.fitness)
    target = _target(args, phi.n)
    weights = _load_weights(args.weights, phi.n)
    x = landscape.nearest_optimal(phi, target, weights)
    dist = hamming(x, target, weights)
    out.write(f"{to_hp(x)}\t{format_number(evaluate(phi, x))}\t{format_number(dist)}\n")
    return EXIT_OK


def cmd_intersect(args, out: TextIO) -> int:
    dags = [pqdag.pq_dag(_load_phi(path)) for path in args.fitness]
    joint = landscape.intersect_dags(dags)
    if joint is None:
        out.write("EMPTY\n")
        return EXIT_OK
    out.write(supernode_table(joint))
    if args.limit:
        for x in islice(pqdag.enumerate_optima(joint), args.limit):
            out.write(f"seq\t{to_hp(x)}\n")
    return EXIT_OK


def cmd_connect(args, out: TextIO) -> int:
    phi = _load_phi(args.fitness)
    dag = pqdag.pq_dag(phi)
    pair = None
    if args.pair:
        pair = (parse_hp(args.pair[0]), parse_hp(args.pair[1]))
    if args.check:
        with _open_read(args.check) as fh:
            system = read_mutation_system(fh, phi.n, args.check)
        ok = landscape.is_connected_under(dag, system, pair)
        out.write("CONNECTED\n" if ok else "DISCONNECTED\n")
        return EXIT_OK
    for group in landscape.min_mutation_system(dag, pair):
        out.write("set\t" + "\t".join(map(str, sorted(group))) + "\n")
    return EXIT_OK


def cmd_suboptimal(args, out: TextIO) -> int:
    phi = _load_phi(args.fitness)
    for x, energy in paramsweep.suboptimal_stream(phi, limit=args.limit, slack=args.slack):
        out.write(f"{to_hp(x)}\t{format_number(energy)}\n")
    return EXIT_OK


def cmd_landscape(args, out: TextIO) -> int:
    phi = _load_phi(args.fitness)
    target = _target(args, phi.n)
    env, plot = paramsweep.energy_distance_landscape(phi, target)
    out.write("kind\tx\tvalue\tleft_slope\tright_slope\n")
    for c in env.corners:
        out.write(
            f"corner\t{format_number(c.theta)}\t{format_number(c.value)}"
            f"\t{format_number(c.left_slope)}\t{format_number(c.right_slope)}\n"
        )
    exact = {d for d, _ in plot.breakpoints}
    for d, value in plot.breakpoints:
        out.write(f"breakpoint\t{d}\t{format_number(value)}\t\t\n")
    for d in range(phi.n, -1, -1):
        if d not in exact:
            bound, _ = plot.query(d)
            out.write(f"bound\t{d}\t{format_number(bound)}\t\t\n")
    return EXIT_OK


def cmd_tune(args, out: TextIO) -> int:
    with _open_read(args.geometry) as fh:
        geom = read_geometry(fh, args.geometry)
    target = _target(args, geom.n)
    weights = _load_weights(args.weights, geom.n)
    result = paramsweep.tune_beta(geom, target, weights)
    out.write(f"d_min\t{format_number(result.d_min)}\n")
    for c, d in zip(result.envelope.corners, result.corner_distances):
        out.write(f"corner\t{format_number(c.theta)}\t{format_number(d)}\n")
    for beta in result.points:
        out.write(f"point\t{format_number(beta)}\n")
    for lo, hi in result.intervals:
        out.write(f"interval\t{format_number(lo)}\t{'inf' if hi is None else format_number(hi)}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gcdesign", description=__doc__.splitlines()[0])
    parser.add_argument("-o", "--output", help="write results here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-phi", help="geometry file -> fitness file")
    p.add_argument("geometry")
    p.add_argument("--alpha", type=_rational, default=DEFAULT_ALPHA)
    p.add_argument("--beta", type=_rational, default=DEFAULT_BETA)
    p.set_defaults(func=cmd_build_phi)

    p = sub.add_parser("optimize", help="one optimal sequence and its energy")
    p.add_argument("fitness")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("dag", help="supernode table of the optimum dag")
    p.add_argument("fitness")
    p.add_argument("--dot", help="also write the dag in DOT format")
    p.set_defaults(func=cmd_dag)

    p = sub.add_parser("enumerate", help="list optimal sequences")
    p.add_argument("fitness")
    p.add_argument("--limit", type=_positive, default=None)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("count", help="bounds on the number of optima, or the exact count")
    p.add_argument("fitness")
    p.add_argument("--brute", action="store_true")
    p.add_argument("--max-n", type=_positive, default=oracle.DEFAULT_MAX_N)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("diameter", help="weighted Hamming diameter of the optima")
    p.add_argument("fitness")
    p.add_argument("--weights")
    p.set_defaults(func=cmd_diameter)

    for name, func, helptext in (
        ("nearest", cmd_nearest, "optimum closest to a target"),
        ("landscape", cmd_landscape, "energy-distance corners and breakpoints"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("fitness")
        p.add_argument("--target", required=True)
        p.add_argument("--amino", action="store_true", help="target is an amino-acid string")
        if name == "nearest":
            p.add_argument("--weights")
        p.set_defaults(func=func)

    p = sub.add_parser("intersect", help="sequences optimal for every fitness file")
    p.add_argument("fitness", nargs="+")
    p.add_argument("--limit", type=_positive, default=None, help="also list up to this many sequences")
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("connect", help="smallest mutation system connecting the optima")
    p.add_argument("fitness")
    p.add_argument("--pair", nargs=2, metavar=("X", "Y"))
    p.add_argument("--check", metavar="SYSTEM_FILE")
    p.set_defaults(func=cmd_connect)

    p = sub.add_parser("suboptimal", help="sequences in nondecreasing energy")
    p.add_argument("fitness")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--limit", type=_positive)
    group.add_argument("--slack", type=_rational)
    p.set_defaults(func=cmd_suboptimal)

    p = sub.add_parser("tune", help="beta values whose optima best match a target")
    p.add_argument("geometry")
    p.add_argument("--target", required=True)
    p.add_argument("--amino", action="store_true")
    p.add_argument("--weights")
    p.set_defaults(func=cmd_tune)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.output:
            with open(args.output, "w", encoding="utf-8") as out:
                return args.func(args, out)
        return args.func(args, sys.stdout)
    except OracleCapError as exc:
        print(f"gcdesign: {exc}", file=sys.stderr)
        return EXIT_CAP
    except GCError as exc:
        print(f"gcdesign: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
