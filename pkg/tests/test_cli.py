import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from perijac.cli import run

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden"
MANIFEST = json.loads((GOLDEN / "manifest.json").read_text())


def invoke(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(autouse=True)
def _in_repo_root(monkeypatch):
    monkeypatch.chdir(ROOT)


@pytest.mark.parametrize("case", MANIFEST, ids=[c["name"] for c in MANIFEST])
def test_golden(case, capsys):
    code, out, _ = invoke(case["argv"], capsys)
    assert code == 0
    assert out == (GOLDEN / f"{case['name']}.json").read_text()


def test_spec_examples(capsys):
    _, out, _ = invoke(["singular-locus", "presentations/ex_sqrt5.json"], capsys)
    d = json.loads(out)
    assert d["verdict"] == "singular" and d["singular_ideal_gb"] == ["x^2 + 1"]
    _, out, _ = invoke(["delta", "--prime", "2", "--vars", "x", "--poly", "x^2 - 5", "--modulus-exp", "1"], capsys)
    assert json.loads(out)["delta"] == "x^2 + 1"
    _, out, _ = invoke(["cp", "--prime", "3", "--", "X", "Y"], capsys)
    assert json.loads(out)["cp"] == "-X^2*Y - X*Y^2"


def test_output_is_byte_identical_across_processes():
    argv = [sys.executable, "-m", "perijac.cli", "check", "presentations/ex_xy_minus_4.json", "--seed", "5", "--samples", "5"]
    runs = {subprocess.run(argv, capture_output=True, cwd=ROOT, check=True).stdout for _ in range(2)}
    assert len(runs) == 1


@pytest.mark.parametrize(
    "argv,stdin,code,error",
    [
        (["bogus"], None, 1, "usage"),
        (["singular-locus"], None, 1, "usage"),
        (["singular-locus", "missing.json"], None, 1, "input-error"),
        (["singular-locus", "-"], "{not json", 1, "input-error"),
        (["singular-locus", "-"], '{"prime": 2, "variables": ["x"], "generators": ["x^"], "height": 1}', 1, "bad-exponent"),
        (["singular-locus", "-"], '{"prime": 2, "variables": ["x"], "generators": ["y"], "height": 1}', 1, "unknown-variable"),
        (["singular-locus", "-"], '{"prime": 2, "variables": ["x"], "generators": ["x"], "height": 1, "extra": 1}', 1, "input-error"),
        (["singular-locus", "-"], '{"prime": 2, "variables": ["x"], "generators": ["x"]}', 1, "input-error"),
        (["singular-locus", "-"], '{"prime": "2", "variables": ["x"], "generators": ["x"], "height": 1}', 1, "input-error"),
        (["singular-locus", "-"], '{"prime": 4, "variables": ["x"], "generators": ["x"], "height": 1}', 2, "bad-presentation"),
        (["singular-locus", "-"], '{"prime": 2, "variables": ["x"], "generators": ["x"], "height": 3}', 2, "bad-height"),
        (["singular-locus", "-"], '{"prime": 2, "variables": ["x"], "generators": ["x"], "height": 1, "frobenius_lift": {"x": "x"}}', 2, "bad-lift"),
        (["regular-at", "presentations/ex_sqrt5.json", "--point", "0"], None, 2, "not-on-variety"),
        (["regular-at", "presentations/ex_sqrt5.json", "--point", "a"], None, 1, "input-error"),
        (["delta", "--prime", "2", "--vars", "x", "--poly", "x", "--lift", "x=x"], None, 2, "bad-lift"),
        (["delta", "--prime", "2", "--vars", "x", "--poly", "x", "--lift", "oops"], None, 1, "usage"),
    ],
)
def test_error_paths(argv, stdin, code, error, capsys, monkeypatch):
    got, out, err = invoke(argv, capsys, stdin, monkeypatch)
    assert got == code
    assert out == ""
    payload = json.loads(err.strip().splitlines()[-1])
    assert payload["error"] == error and payload["message"]


def test_batch_file(tmp_path, capsys):
    batch = [json.loads((ROOT / f"presentations/{n}.json").read_text()) for n in ("ex_sqrt5", "ex_sqrt3")]
    path = tmp_path / "batch.json"
    path.write_text(json.dumps(batch))
    code, out, _ = invoke(["singular-locus", str(path)], capsys)
    assert code == 0
    assert [d["verdict"] for d in json.loads(out)] == ["singular", "regular"]


def test_order_flag(capsys):
    _, out, _ = invoke(["gb", "presentations/ex_node_p5.json", "--field", "qq", "--order", "lex"], capsys)
    d = json.loads(out)
    assert d["order"] == "lex" and d["basis"] == ["x^2 + x*y + 5"]


def test_check_without_presentation(capsys):
    code, out, _ = invoke(["check", "--prime", "3", "--vars", "x,y", "--samples", "10"], capsys)
    assert code == 0 and json.loads(out)["passed"]


def test_sqrt_table_rule(capsys):
    _, out, _ = invoke(["sqrt-n-table", "--max-abs", "20", "--primes", "2,3,5"], capsys)
    d = json.loads(out)
    assert d["matches_n_mod_4_rule"]
    assert {(r["n"], r["prime"]) for r in d["rows"] if r["verdict"] == "singular"} == {
        (n, 2) for n in (-19, -15, -11, -7, -3, 5, 13, 17)
    }
