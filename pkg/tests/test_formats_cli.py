import io
from fractions import Fraction

import pytest

from gcdesign.cli import main
from gcdesign.errors import ParseError
from gcdesign.formats import (
    format_number,
    read_fitness,
    read_geometry,
    read_mutation_system,
    read_weights,
    write_fitness,
)
from gcdesign.model import FitnessFunction

from .instances import E1

E1_TEXT = "phi 3\n# two residues that like each other\npair 1 2 2\nlin 1 1\nlin 2 1\nlin 3 -1\n"

GEOM_TEXT = """geom 4
res 1 0 0 0 1 A
res 2 0 30 0 0 G
res 3 0 -30 0 0 G
res 4 5 0 0 1 L
"""


@pytest.mark.parametrize(
    "value, text",
    [(Fraction(3), "3"), (Fraction(-1, 4), "-0.25"), (Fraction(1, 3), "1/3"), (Fraction(-7, 6), "-7/6"), (0, "0")],
)
def test_format_number(value, text):
    assert format_number(value) == text


def test_fitness_round_trip():
    phi = read_fitness(io.StringIO(E1_TEXT))
    assert phi == E1
    buf = io.StringIO()
    write_fitness(FitnessFunction(2, {(1, 2): Fraction(1, 3)}, [Fraction(1, 2), 0]), buf)
    assert buf.getvalue() == "phi\t2\npair\t1\t2\t1/3\nlin\t1\t0.5\n"
    assert read_fitness(io.StringIO(buf.getvalue())).pairs[(1, 2)] == Fraction(1, 3)


@pytest.mark.parametrize(
    "text, line",
    [
        ("phi 2\npair 1 3 1\n", 2),
        ("phi 2\npair 2 1 1\n", 2),
        ("phi 2\npair 1 2 -1\n", 2),
        ("phi 2\nlin 1 x\n", 2),
        ("phi 2\n\nfoo 1\n", 3),
        ("geom 2\n", 1),
    ],
)
def test_fitness_errors_name_line(text, line):
    with pytest.raises(ParseError) as info:
        read_fitness(io.StringIO(text), "f.phi")
    assert info.value.path == "f.phi"
    assert info.value.line == line
    assert str(info.value).startswith(f"f.phi:{line}:")


def test_read_geometry():
    geom = read_geometry(io.StringIO(GEOM_TEXT))
    assert geom.n == 4
    assert geom.surface == (1, 0, 0, 1)
    assert geom.letters == "AGGL"
    with pytest.raises(ParseError):
        read_geometry(io.StringIO("geom 2\nres 1 0 0 0 1\n"))


def test_read_weights_and_system():
    assert read_weights(io.StringIO("w 2 0.5\n"), 3) == [1, Fraction(1, 2), 1]
    assert read_mutation_system(io.StringIO("set 1 2\nset 3\n"), 3) == [frozenset({1, 2}), frozenset({3})]
    with pytest.raises(ParseError):
        read_mutation_system(io.StringIO("set 4\n"), 3)


@pytest.fixture
def e1_file(tmp_path):
    path = tmp_path / "e1.phi"
    path.write_text(E1_TEXT)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_optimize(capsys, e1_file):
    code, out, _ = run(capsys, "optimize", e1_file)
    assert code == 0
    seq, energy = out.split()
    assert seq in {"PPH", "HHH"} and energy == "-1"


def test_cli_enumerate(capsys, e1_file):
    code, out, _ = run(capsys, "enumerate", e1_file, "--limit", "10")
    assert code == 0
    assert sorted(out.split()) == ["HHH", "PPH"]
    _, out, _ = run(capsys, "enumerate", e1_file, "--limit", "1")
    assert len(out.split()) == 1


def test_cli_nearest(capsys, e1_file):
    code, out, _ = run(capsys, "nearest", e1_file, "--target", "HPH")
    assert code == 0
    seq, energy, dist = out.split()
    assert energy == "-1" and dist == "1"
    _, out, _ = run(capsys, "nearest", e1_file, "--target", "AGL", "--amino")
    assert out.split()[2] == "1"


def test_cli_analyses(capsys, e1_file, tmp_path):
    assert run(capsys, "count", e1_file)[1] == "2\t2\n"
    assert run(capsys, "count", e1_file, "--brute")[1] == "2\n"
    assert run(capsys, "diameter", e1_file)[1] == "2\n"
    assert run(capsys, "connect", e1_file)[1] == "set\t1\t2\n"
    assert run(capsys, "connect", e1_file, "--pair", "PPH", "HHH")[1] == "set\t1\t2\n"
    system = tmp_path / "points.sys"
    system.write_text("set 1\nset 2\nset 3\n")
    assert run(capsys, "connect", e1_file, "--check", str(system))[1] == "DISCONNECTED\n"
    out = run(capsys, "suboptimal", e1_file, "--limit", "3")[1]
    assert [line.split("\t")[1] for line in out.splitlines()] == ["-1", "-1", "0"]
    assert len(run(capsys, "suboptimal", e1_file, "--slack", "0")[1].splitlines()) == 2
    dot = tmp_path / "e1.dot"
    code, out, _ = run(capsys, "dag", e1_file, "--dot", str(dot))
    assert code == 0 and out.startswith("node\trole\tresidues\n")
    assert dot.read_text().startswith("digraph")


def test_cli_landscape(capsys, e1_file):
    code, out, _ = run(capsys, "landscape", e1_file, "--target", "PPP")
    assert code == 0
    rows = [line.split("\t") for line in out.splitlines()]
    assert rows[0][0] == "kind"
    assert [r[1:3] for r in rows if r[0] == "breakpoint"] == [["3", "-1"], ["1", "-1"], ["0", "0"]]
    assert [r[1:3] for r in rows if r[0] == "bound"] == [["2", "-1"]]
    assert [r[1] for r in rows if r[0] == "corner"] == ["0", "1"]


def test_cli_intersect(capsys, e1_file, tmp_path):
    force_h = tmp_path / "h.phi"
    force_h.write_text("phi 3\nlin 1 -1\n")
    force_p = tmp_path / "p.phi"
    force_p.write_text("phi 3\nlin 1 1\n")
    code, out, _ = run(capsys, "intersect", str(force_h), str(force_p))
    assert (code, out) == (0, "EMPTY\n")
    code, out, _ = run(capsys, "intersect", e1_file, str(force_h), "--limit", "5")
    assert code == 0
    assert [line for line in out.splitlines() if line.startswith("seq")] == ["seq\tHHH"]


def test_cli_build_phi_and_tune(capsys, tmp_path):
    geom = tmp_path / "g.geom"
    geom.write_text(GEOM_TEXT)
    code, out, _ = run(capsys, "build-phi", str(geom))
    assert code == 0 and out.startswith("phi\t4\npair\t1\t4\t")
    code, out, _ = run(capsys, "tune", str(geom), "--target", "HPPH")
    assert code == 0
    assert out.splitlines()[0] == "d_min\t0"
    out_file = tmp_path / "tune.tsv"
    assert run(capsys, "-o", str(out_file), "tune", str(geom), "--target", "AGGL", "--amino")[0] == 0
    assert out_file.read_text() == out


def test_cli_exit_codes(capsys, tmp_path, e1_file):
    bad = tmp_path / "bad.phi"
    bad.write_text("phi 2\npair 1 2 -3\n")
    code, _, err = run(capsys, "optimize", str(bad))
    assert code == 2 and f"{bad}:2:" in err
    assert run(capsys, "optimize", str(tmp_path / "missing.phi"))[0] == 2
    assert run(capsys, "nearest", e1_file, "--target", "HH")[0] == 2
    assert run(capsys, "nearest", e1_file, "--target", "HXH")[0] == 2
    big = tmp_path / "big.phi"
    big.write_text("phi 22\n")
    assert run(capsys, "count", str(big), "--brute")[0] == 3
    assert run(capsys, "count", str(big), "--brute", "--max-n", "22")[0] == 0


def test_cli_is_deterministic(capsys, tmp_path):
    path = tmp_path / "r.phi"
    lines = ["phi 9"] + [f"pair {i} {j} {(i * j) % 3 + 1}" for i in range(1, 10) for j in range(i + 1, 10) if (i + j) % 3 == 0]
    lines += [f"lin {i} {(i % 4) - 1}" for i in range(1, 10)]
    path.write_text("\n".join(lines) + "\n")
    for argv in (["enumerate", str(path)], ["suboptimal", str(path), "--limit", "40"], ["dag", str(path)]):
        first = run(capsys, *argv)[1]
        assert first == run(capsys, *argv)[1]
