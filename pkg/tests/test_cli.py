from __future__ import annotations

import pytest

from geodual.cli import REPORT_COLUMNS, main
from geodual.classify import classify
from geodual.surface import read_surface, tetrahedron, write_surface

HEADER = "\t".join(REPORT_COLUMNS)


@pytest.fixture
def files(tmp_path):
    tetra = tmp_path / "tetra.srf"
    h5 = tmp_path / "h5.srf"
    write_surface(tetrahedron(), tetra)
    write_surface(classify(5)[0].surface, h5)
    return tmp_path, str(tetra), str(h5)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_degree_5(capsys):
    code, out, _ = run(capsys, "classify", "--degree", "5")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == HEADER
    assert lines[1].split("\t") == ["5", "60", "1", "6", "15", "10", "1", "no", "-", "1"]


def test_classify_degree_9_faces(capsys):
    code, out, _ = run(capsys, "classify", "--degree", "9")
    assert code == 0
    assert [row.split("\t")[5] for row in out.splitlines()[1:]] == ["570", "114", "30"]


@pytest.mark.parametrize("d,rows", [(3, 0), (4, 0), (5, 1), (6, 2), (7, 0), (8, 4), (9, 3)])
def test_classify_row_counts(capsys, d, rows):
    code, out, _ = run(capsys, "classify", "--degree", str(d))
    lines = out.splitlines()
    assert lines[0] == HEADER
    assert len(lines) - 1 == rows
    assert code == (0 if rows else 1)


def test_classify_is_deterministic(capsys, tmp_path):
    target = tmp_path / "r.tsv"
    run(capsys, "classify", "--degree", "8", "-o", str(target))
    first = target.read_bytes()
    run(capsys, "classify", "--degree", "8", "-o", str(target))
    assert target.read_bytes() == first
    assert first.decode().count("\n") == 5


def test_classify_partial_modes(capsys):
    code, out, _ = run(capsys, "classify", "--degree", "10", "--order-cap", "60")
    lines = out.splitlines()
    assert code == 0
    assert lines[0].startswith("# NON-EXHAUSTIVE")
    assert lines[1] == HEADER
    assert len(lines) == 2 + 7
    assert all(row.split("\t")[2] == "-" for row in lines[2:])
    code, out, err = run(capsys, "classify", "--degree", "10")
    assert code == 1 and "LimitExceeded" in err
    code, out, _ = run(capsys, "classify", "--degree", "8", "--order-cap", "2")
    assert out.startswith("# NON-EXHAUSTIVE")


def test_classify_bad_degree(capsys):
    code, _, err = run(capsys, "classify", "--degree", "2")
    assert code == 2 and "degree" in err
    code, _, _ = run(capsys, "classify", "--degree", "x")
    assert code == 2


def test_surface_commands(capsys, files):
    tmp, tetra, h5 = files
    code, out, _ = run(capsys, "surface", "info", tetra)
    assert (code, out) == (0, "V=4 E=6 F=4 chi=2 orientable=yes degree=3\n")
    dual = str(tmp / "out.srf")
    assert run(capsys, "surface", "dual", tetra, "-o", dual)[0] == 0
    read_surface(dual)
    code, out, _ = run(capsys, "surface", "info", dual)
    assert "chi=1 orientable=no" in out
    assert run(capsys, "surface", "selfdual", tetra)[:2] == (1, "no\n")
    code, out, _ = run(capsys, "surface", "selfdual", h5)
    assert code == 0 and out.startswith("yes anchor ")


def test_surface_errors(capsys, tmp_path):
    bad = tmp_path / "bad.srf"
    bad.write_text("geodual-surface 1\nflags 4\nalpha (1,2,3,4)\nbeta (1,2)(3,4)\ngamma (1,3)(2,4)\n")
    code, _, err = run(capsys, "surface", "info", str(bad))
    assert code == 2 and "NotInvolution" in err
    bad.write_text("something else\n")
    code, _, err = run(capsys, "surface", "info", str(bad))
    assert code == 2 and "line 1" in err
    code, _, _ = run(capsys, "surface", "info", str(tmp_path / "missing.srf"))
    assert code == 2


def test_group_order(capsys):
    assert run(capsys, "group", "order", "H", "8")[:2] == (0, "672\n")
    assert run(capsys, "group", "order", "T", "5")[:2] == (0, "120\n")
    assert run(capsys, "group", "order", "H", "16", "--limit", "500")[:2] == (1, "infinite-or-exceeds-limit\n")


def test_group_abelian(capsys):
    assert run(capsys, "group", "abelian", "H", "8")[:2] == (0, "torsion [2, 2] free_rank 0\n")
    code, out, _ = run(capsys, "group", "abelian", "H", "16", "--word", "(bc)^8", "--word", "(bac)^8")
    assert code == 0
    assert out.splitlines()[0] == "index 672"
    assert out.splitlines()[1] == "torsion [" + ", ".join(["2"] * 57) + "] free_rank 0"
    code, _, err = run(capsys, "group", "abelian", "H", "16", "--word", "(bac)^8", "--limit", "200")
    assert code == 1 and "LimitExceeded" in err
    assert run(capsys, "group", "abelian", "H", "5", "--word", "(ab")[0] == 2
    assert run(capsys, "group", "order", "X", "5")[0] == 2
    assert run(capsys, "group", "order")[0] == 2


def test_group_collapse_check(capsys):
    code, out, _ = run(capsys, "group", "collapse-check")
    assert code == 0 and out.count("\tpass\t") == 4
    code, out, _ = run(capsys, "group", "collapse-check", "--d", "16", "--k", "8")
    assert code == 0 and out.splitlines()[0] == "distinct (abelian invariants)"
    code, out, _ = run(capsys, "group", "collapse-check", "--d", "6", "--k", "2")
    assert out == "distinct (orders 108 vs 4)\n"
    code, out, _ = run(capsys, "group", "collapse-check", "--d", "7", "--k", "1")
    assert code == 1
    assert run(capsys, "group", "collapse-check", "--d", "6")[0] == 2


def test_lift_commands(capsys, files):
    tmp, tetra, h5 = files
    code, out, _ = run(capsys, "lift", h5, "verify", "--prime", "3")
    assert code == 0 and out.endswith("all = 15: yes\n")
    assert len(out.splitlines()) == 120 + 2
    code, out, _ = run(capsys, "lift", h5, "verify", "--prime", "2")
    assert out.endswith("all = 10: yes\n")
    code, _, err = run(capsys, "lift", tetra, "verify", "--prime", "4")
    assert code == 2 and "NotPrime" in err
    target = tmp / "lift.srf"
    code, _, _ = run(capsys, "lift", tetra, "materialize", "--prime", "2", "-o", str(target))
    assert code == 0
    assert read_surface(target).flag_count % 24 == 0
    code, _, err = run(capsys, "lift", h5, "materialize", "--prime", "2", "--flag-cap", "1000")
    assert code == 1 and "LimitExceeded" in err


def test_no_command(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "--help")[0] == 0
