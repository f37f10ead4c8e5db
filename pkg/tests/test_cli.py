import io
import json
import subprocess
import sys

import pytest

from parthom.cli import run_cli


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {
        "h2.mat": "m=2\n1 1\n1 -1\n",
        "s.mat": "m=2\n0 1\n1 1\n",
        "third.mat": "m=1\n1/3\n",
        "c4.graph": "n=4\n0 1\n1 2\n2 3\n3 0\n",
        "edge.graph": "n=2\n0 1\n",
        "big.graph": "n=40\n",
        "bad.mat": "m=2\n1 2\n3 1\n",
        "bad.graph": "n=2\n0 5\n",
    }.items():
        p = tmp_path / name
        p.write_text(text)
        paths[name] = str(p)
    return paths


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def test_classify_tractable(files):
    code, out, _ = run(["classify", files["h2.mat"]])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "TRACTABLE"
    text = out.lower()
    for word in ("group condition", "represented", "linearity", "degree"):
        assert word in text


def test_classify_hard(files):
    code, out, _ = run(["classify", files["s.mat"]])
    assert code == 0 and out.splitlines()[0] == "HARD (block of |A| with rank ≥ 2)"


def test_eval(files):
    code, out, _ = run(["eval", files["h2.mat"], files["c4.graph"]])
    assert (code, out) == (0, "8\n")
    code, out, _ = run(["eval", files["third.mat"], files["edge.graph"], "--decimal", "4"])
    assert code == 0 and out.splitlines() == ["1/3", "~ 0.3333 (approximate, 4 digits)"]
    code, out, _ = run(["eval", files["third.mat"], files["edge.graph"], "--json", "--decimal", "2"])
    assert json.loads(out) == {"value": "1/3", "decimal": "0.33", "approximate": True}


def test_eval_refuses_hard(files):
    code, _, err = run(["eval", files["s.mat"], files["c4.graph"]])
    assert code == 3 and "HARD" in err and "evidence" in err
    code, out, _ = run(["eval", files["s.mat"], files["c4.graph"], "--json"])
    assert code == 3 and json.loads(out)["evidence"]["reason"] == "abs-rank"


def test_oracle_and_guard(files, monkeypatch):
    assert run(["oracle", files["s.mat"], files["c4.graph"]])[:2] == (0, "7\n")
    code, _, err = run(["oracle", files["h2.mat"], files["big.graph"]])
    assert code == 4 and "guard" in err
    monkeypatch.setenv("PARTHOM_ORACLE_GUARD", "8")
    assert run(["oracle", files["h2.mat"], files["c4.graph"]])[0] == 4


def test_eval_and_oracle_agree(files):
    assert run(["eval", files["h2.mat"], files["edge.graph"]])[1] == run(["oracle", files["h2.mat"], files["edge.graph"]])[1]


def test_parse_errors(files):
    assert run(["classify", files["bad.mat"]])[0] == 2
    assert run(["eval", files["h2.mat"], files["bad.graph"]])[0] == 2
    assert run(["classify", "/nonexistent/file.mat"])[0] == 2
    assert run(["eval", files["h2.mat"]])[0] == 2
    assert run(["eval", files["h2.mat"], files["c4.graph"], "--decimal", "-1"])[0] == 2
    assert run(["classify", files["h2.mat"], "--threads", "0"])[0] == 2


def test_output_is_deterministic(files):
    first = run(["classify", files["h2.mat"], "--json"])
    assert first == run(["classify", files["h2.mat"], "--json"])


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "parthom", "eval", files["h2.mat"], files["c4.graph"], "--threads", "2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "8\n"
