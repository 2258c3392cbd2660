import io
import json
import os
import subprocess
import sys

import pytest

from weylkit import cli
from conftest import FIXTURES, GOLDEN

F = str(FIXTURES)

# name -> argv; every subcommand appears at least once
CASES = {
    "roots_a2": ["roots", "--datum", f"{F}/a2.json"],
    "roots_a1adj": ["roots", "--datum", f"{F}/a1adj.json"],
    "length_a2": ["length", "--datum", f"{F}/a2.json", "--w", "s0*s1*s2*s0"],
    "length_g2": ["length", "--datum", f"{F}/g2.json", "--w", "s2*s1*s0*s2*s1"],
    "demazure_a1": ["demazure", "--datum", f"{F}/a1aff.json", "--u", "s0*s1", "--v", "s1*s0"],
    "regular_a2": ["regular", "--datum", f"{F}/a2.json", "--w", "s0*s1*s2*s0", "--m", "1"],
    "torsion_a1": ["torsion", "--datum", f"{F}/a1aff.json", "--w", "s0"],
    "torsion_a2_flip": ["torsion", "--datum", f"{F}/a2.json", "--sigma", f"{F}/sigma_a2_flip.json", "--w", "s0*s1"],
    "classify_a1": ["classify-embeddings", "--datum", f"{F}/a1aff.json", "--wbar", "s"],
    "classify_a2": ["classify-embeddings", "--datum", f"{F}/a2.json", "--wbar", "cox"],
    "classify_a2_flip": ["classify-embeddings", "--datum", f"{F}/a2.json", "--sigma", f"{F}/sigma_a2_flip.json", "--wbar", "s1*s2*s1"],
    "coinvariants_neg": ["coinvariants", "--matrix", "[[-1]]"],
    "coinvariants_z2": ["coinvariants", "--matrix", "[[-1,0],[0,-1]]"],
    "trace_trivial": ["trace-formula", "--fixture", f"{F}/trivial_line.json"],
    "trace_sign": ["trace-formula", "--fixture", f"{F}/sign_line.json"],
    "trace_induced": ["trace-formula", "--fixture", f"{F}/induced_2z.json"],
    "trace_mixed": ["trace-formula", "--fixture", f"{F}/mixed_rank2.json"],
    "packet_a1_sign": ["packet", "--datum", f"{F}/a1aff.json", "--wbar", "s", "--fixture", f"{F}/sign_line.json"],
    "packet_a2_cox": ["packet", "--datum", f"{F}/a2.json", "--wbar", "cox", "--fixture", f"{F}/a2_cox_trivial.json"],
    "packet_a1adj": ["packet", "--datum", f"{F}/a1adj.json", "--wbar", "s"],
    "selftest": ["selftest", "--seed", "0"],
}


def run_inproc(argv):
    buf = io.StringIO()
    code = cli.run(argv, out=buf)
    return code, buf.getvalue()


def run_subprocess(argv, threads):
    env = dict(os.environ, WEYLKIT_THREADS=str(threads))
    p = subprocess.run([sys.executable, "-m", "weylkit", *argv], capture_output=True, env=env, timeout=300)
    return p.returncode, p.stdout


def golden_path(name):
    return GOLDEN / f"{name}.json"


def test_documented_examples():
    code, out = run_inproc(CASES["demazure_a1"])
    assert code == 0 and out == '{"result":"s0*s1*s0","len":3}\n'
    code, out = run_inproc(CASES["coinvariants_neg"])
    assert code == 0 and out == '{"invariant_factors":[2],"det1mu":2}\n'
    code, out = run_inproc(CASES["classify_a1"])
    assert json.loads(out) == {"fiber": "s", "classes": [{"t": [1], "w": "s"}, {"t": [0], "w": "s"}], "count": 2}


def test_selftest_exit_zero():
    code, out = run_inproc(["selftest"])
    assert code == 0 and json.loads(out)["ok"] is True


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    if os.environ.get("WEYLKIT_REGEN_GOLDEN"):
        code, out = run_subprocess(CASES[name], 1)
        assert code == 0
        golden_path(name).write_bytes(out)
    want = golden_path(name).read_bytes()
    outs = [run_subprocess(CASES[name], t) for t in (1, 1, 4)]
    for code, out in outs:
        assert code == 0
        assert out == want


@pytest.mark.parametrize(
    "argv,needle",
    [
        (["coinvariants", "--matrix", "[[1,2]"], "bad --matrix"),
        (["coinvariants", "--matrix", "[[1,2]]"], "square"),
        (["length", "--datum", f"{F}/missing.json", "--w", "s0"], "No such file"),
        (["length", "--datum", f"{F}/a2.json", "--w", "s9"], ""),
        (["classify-embeddings", "--datum", f"{F}/a1aff.json", "--wbar", "1"], "non-elliptic"),
        (["packet", "--datum", f"{F}/a1adj.json", "--wbar", "s", "--fixture", f"{F}/sign_line.json"], "Lambda_G = Lambda"),
        (["trace-formula"], "--fixture"),
        (["nosuchcommand"], ""),
    ],
)
def test_input_errors(argv, needle, capsys):
    code, out = run_inproc(argv)
    assert code == 1 and out == ""
    assert needle in capsys.readouterr().err


def test_bad_datum_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, _ = run_inproc(["roots", "--datum", str(p)])
    assert code == 1


def test_identity_violation_exit_code(monkeypatch):
    from weylkit import gentrace as gt

    class Broken:
        lhs, rhs, terms, equal = 1, 2, [], False

    monkeypatch.setattr(gt, "verify_trace_formula", lambda M, G: Broken())
    code, out = run_inproc(CASES["trace_trivial"])
    assert code == 2 and json.loads(out)["equal"] is False


def test_element_json_input():
    code, out = run_inproc(["length", "--datum", f"{F}/a1aff.json", "--w", '{"t":[1],"w":"s"}'])
    assert code == 0 and json.loads(out)["element"] == "s0"
