import json
import subprocess
import sys

import pytest

from fbcat.cli import main
from fbcat.fincat import QuiverSpec
from fbcat.serialize import quiver_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, json.loads(out.out) if out.out.strip() else None, out.err


def test_fb_full_truncpoly3(capsys):
    code, rep, _ = run(capsys, "check", "fb", "--corpus", "truncpoly:3", "--module", "full")
    assert code == 0 and rep["verdict"] is True


def test_symmetry_a2_p1(capsys):
    code, rep, _ = run(capsys, "check", "symmetry", "--corpus", "a_n:2", "--k", "2", "--module", "P1")
    assert code == 0
    assert rep["details"]["side1"] == rep["details"]["side2"]


def test_cogen_certificate_chain(capsys):
    code, rep, _ = run(capsys, "check", "cogen", "--corpus", "truncpoly:2", "--module", "regular",
                       "--target", "simple", "--k", "1")
    assert code == 0
    chain = rep["results"][0]["definitional"]["chain"]
    assert chain["length"] == 2 and chain["terms"] == [[1], [2], [2]]


def test_non_member_exits_one(capsys):
    code, rep, _ = run(capsys, "check", "cogen", "--corpus", "semisimple:2", "--module", "S1", "--target", "S2")
    assert code == 1 and rep["status"] == "non-member"


def test_not_faithfully_balanced_exits_one(capsys):
    code, rep, _ = run(capsys, "check", "fb", "--corpus", "semisimple:2", "--module", "S1")
    assert code == 1 and rep["verdict"] is False


def test_hom_ext_tor_tables(capsys):
    code, rep, _ = run(capsys, "check", "ext", "--corpus", "truncpoly:2", "--module", "S", "--target", "S", "--k", "4")
    assert code == 0 and rep["table"][0]["dims"] == [1, 1, 1, 1, 1]
    code, rep, _ = run(capsys, "check", "hom", "--corpus", "a_n:3", "--module", "[1,2],[2,3]", "--target", "[2,3]")
    assert code == 0 and [r["dim"] for r in rep["table"]] == [1, 1]
    code, rep, _ = run(capsys, "check", "tor", "--corpus", "truncpoly:2", "--module", "P", "--target", "S", "--k", "4")
    assert code == 0 and rep["table"][0]["dims"] == [1, 1, 1, 1, 1]


@pytest.mark.parametrize("check", ["duality", "extyon", "isoext"])
def test_sample_based_verifiers(capsys, check):
    code, rep, _ = run(capsys, "check", check, "--corpus", "a_n:2", "--module", "gencogen", "--k", "2", "--seed", "5")
    assert code == 0 and rep["status"] == "verified"


def test_sweeps(capsys):
    code, rep, _ = run(capsys, "sweep", "--corpus", "truncpoly:3", "--k-max", "3")
    assert code == 0 and len(rep["rows"]) == 7 and all(r["backends_agree"] for r in rep["rows"])
    code, rep, _ = run(capsys, "sweep", "--corpus", "truncpoly:1")
    assert code == 0 and len(rep["rows"]) == 1 and rep["rows"][0]["faithfully_balanced"]
    code, rep, _ = run(capsys, "sweep", "--corpus", "a_n:2", "--k-max", "2")
    rows = {tuple(r["M"]): r for r in rep["rows"]}
    assert code == 0 and len(rows) == 7 and rows[("[1,1]",)]["faithfully_balanced"] is False


def test_reports_are_deterministic(capsys):
    argv = ("check", "duality", "--corpus", "truncpoly:3", "--module", "regular", "--seed", "3")
    assert run(capsys, *argv) == run(capsys, *argv)


def test_out_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    code = main(["check", "fb", "--corpus", "a_n:2", "--module", "gencogen", "--out", str(path)])
    assert code == 0 and json.loads(path.read_text())["verdict"] is True
    assert capsys.readouterr().out == ""


@pytest.mark.parametrize(
    "argv, field",
    [
        (["check", "fb", "--corpus", "nope:3", "--module", "P"], "--corpus"),
        (["check", "fb", "--corpus", "a_n:2", "--module", "Q7"], "--module"),
        (["check", "fb", "--corpus", "a_n:2", "--module", "[1,2"], "--module"),
        (["check", "cogen", "--corpus", "a_n:2", "--module", "P1", "--target", "S2", "--k", "0"], "--k"),
        (["check", "fb", "--corpus", "a_n:2", "--module", "P1", "--prime", "91"], "--prime"),
        (["check", "fb", "--corpus", "a_n:2"], "--module"),
        (["check", "fb", "--module", "P1"], "--corpus"),
        (["sweep", "--corpus", "a_n:2", "--k-max", "0"], "--k-max"),
        (["check", "fb", "--spec", "/nonexistent.json", "--module", "P_a"], "--spec"),
    ],
)
def test_input_errors_exit_two(capsys, argv, field):
    code, rep, err = run(capsys, *argv)
    assert code == 2 and rep["field"] == field
    assert field in err


def test_argparse_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["check", "frobnicate"])
    assert exc.value.code == 2


def _square_file(tmp_path, **changes):
    spec = QuiverSpec(("a", "b", "c", "d"),
                      (("a", "b", "x"), ("a", "c", "y"), ("b", "d", "u"), ("c", "d", "v")),
                      (((1, ("x", "u")), (-1, ("y", "v"))),), 3)
    doc = {"schema": "fbcat/input/v1", "name": "square", "quiver": quiver_to_json(spec),
           "modules": {"M": {"dims": [1, 1, 1, 1], "arrows": {"x": [[1]], "y": [[1]], "u": [[1]], "v": [[1]]}}}}
    doc.update(changes)
    path = tmp_path / "square.json"
    path.write_text(json.dumps(doc))
    return str(path)


def test_spec_file(capsys, tmp_path):
    path = _square_file(tmp_path)
    code, rep, _ = run(capsys, "check", "fb", "--spec", path, "--module", "regular")
    assert code == 0 and rep["verdict"] is True
    code, rep, _ = run(capsys, "check", "cogen", "--spec", path, "--module", "gencogen", "--target", "M,S_a", "--k", "1")
    assert code in (0, 1) and all(r["backends_agree"] for r in rep["results"])


def test_spec_file_errors_point_at_field(capsys, tmp_path):
    path = _square_file(tmp_path, modules={"M": {"dims": [1, 1, 1, 1], "arrows": {"x": [[1, 1]]}}})
    code, rep, _ = run(capsys, "check", "fb", "--spec", path, "--module", "M")
    assert code == 2 and rep["field"] == "modules.M.arrows.x"
    path = _square_file(tmp_path, prime=7)
    code, rep, _ = run(capsys, "check", "fb", "--spec", path, "--module", "M", "--prime", "101")
    assert code == 2 and rep["field"] == "prime"


def test_spec_file_without_indecomposables_refuses_sweep(capsys, tmp_path):
    code, rep, _ = run(capsys, "sweep", "--spec", _square_file(tmp_path))
    assert code == 2 and rep["field"] == "indecomposables"


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "fbcat.cli", "check", "fb", "--corpus", "truncpoly:2",
                          "--module", "regular"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["verdict"] is True
