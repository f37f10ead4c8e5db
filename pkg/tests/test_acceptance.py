"""Acceptance criteria 1-9; each test prints one PASS/FAIL line."""
import subprocess
import sys
import time

from parthom import selftest

# read by the terminal summary hook in conftest.py
RESULTS: dict[int, selftest.CriterionResult] = {}


def _report(res: selftest.CriterionResult) -> None:
    RESULTS[res.number] = res
    print("\n" + res.line())
    assert res.passed, res.line()


def test_criterion_1_classification_corpus():
    _report(selftest.criterion_classification())


def test_criterion_2_evaluator_matches_oracle():
    _report(selftest.criterion_oracle_equivalence())


def test_criterion_3_eulerian_identity():
    _report(selftest.criterion_eulerian())


def test_criterion_4_even_subgraph_identity():
    _report(selftest.criterion_even_subgraphs())


def test_criterion_5_flow_spot_check():
    _report(selftest.criterion_flows())


def test_criterion_6_gf2_counter():
    _report(selftest.criterion_gf2())


def test_criterion_7_transform_identities():
    _report(selftest.criterion_transforms())


def test_criterion_8_representations():
    _report(selftest.criterion_representations())


def test_criterion_9_selftest_wall_clock():
    # the full command-line selftest, timed end to end in a fresh interpreter
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "parthom", "selftest"], capture_output=True, text=True, check=False)
    took = time.perf_counter() - start
    ok = proc.returncode == 0 and took < 180
    detail = f"exit {proc.returncode}, limit 180 s"
    _report(selftest.CriterionResult(9, "full selftest wall-clock", ok, detail, took))
