from fractions import Fraction

import pytest

from parthom.core import DiagMatrix, LabelledGraph, Multigraph, PdpfInstance, SymMatrix, hadamard_h2
from parthom.oracle import (
    OracleGuardError,
    eval_pdpf_bruteforce,
    eval_pinned_bruteforce,
    eval_plain_bruteforce,
    eval_weighted_bruteforce,
)

H2 = hadamard_h2()
U = SymMatrix.from_rows([[1, -1], [-1, 1]])
EDGE = Multigraph.from_pairs(2, [(0, 1)])
TRIANGLE = Multigraph.from_pairs(3, [(0, 1), (1, 2), (2, 0)])
C4 = Multigraph.from_pairs(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


def test_examples():
    assert eval_pdpf_bruteforce(PdpfInstance.plain(H2), EDGE) == 2
    assert eval_plain_bruteforce(U, TRIANGLE) == 8
    assert eval_plain_bruteforce(U, EDGE) == 0


# values computed once by the enumerator and frozen here
FROZEN = [
    ([[0, 1], [1, 1]], C4, 7),                         # independent sets of C4
    ([[0, 1, 1], [1, 0, 1], [1, 1, 0]], C4, 18),       # proper 3-colourings of C4
    ([[0, 1, 1], [1, 0, 1], [1, 1, 0]], TRIANGLE, 6),
    ([[1, 1], [1, -1]], C4, 8),
    ([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]], TRIANGLE, 54),
    ([["1/2", 1], [1, 3]], EDGE, Fraction(11, 2)),         # sum of all entries
]


@pytest.mark.parametrize("rows,g,value", FROZEN)
def test_frozen_values(rows, g, value):
    assert eval_plain_bruteforce(SymMatrix.from_rows(rows), g) == value


def test_loops_and_vertex_weights():
    a = SymMatrix.from_rows([[2, 1], [1, 3]])
    loop = Multigraph.from_pairs(1, [(0, 0)])
    assert eval_plain_bruteforce(a, loop) == 5
    d = DiagMatrix((Fraction(1), Fraction(-1)))
    assert eval_weighted_bruteforce(a, d, loop) == -1
    # odd weights apply to odd-degree vertices only; a loop keeps parity
    inst = PdpfInstance(a, DiagMatrix((Fraction(1), Fraction(1))), DiagMatrix((Fraction(0), Fraction(0))))
    assert eval_pdpf_bruteforce(inst, loop) == 5
    assert eval_pdpf_bruteforce(inst, EDGE) == 0


def test_isolated_vertices_sum_weights():
    d = DiagMatrix((Fraction(2), Fraction(5)))
    assert eval_weighted_bruteforce(H2, d, Multigraph(2, ())) == 49


def test_pinned_examples():
    d = DiagMatrix.identity(2)
    assert eval_pinned_bruteforce(H2, d, LabelledGraph(Multigraph(1, ()), 0), 0) == 1
    lg = LabelledGraph(EDGE, 0)
    assert eval_pinned_bruteforce(H2, d, lg, 0) == 2
    assert eval_pinned_bruteforce(H2, d, lg, 1) == 0


def test_pinned_sum_recovers_total():
    d = DiagMatrix((Fraction(1), Fraction(3)))
    lg = LabelledGraph(C4, 2)
    total = sum(d[k] * eval_pinned_bruteforce(H2, d, lg, k) for k in range(2))
    assert total == eval_weighted_bruteforce(H2, d, C4)


def test_guard(monkeypatch):
    big = Multigraph(30, ())
    with pytest.raises(OracleGuardError):
        eval_plain_bruteforce(H2, big)
    monkeypatch.setenv("PARTHOM_ORACLE_GUARD", "4")
    with pytest.raises(OracleGuardError):
        eval_plain_bruteforce(H2, TRIANGLE)
    assert eval_plain_bruteforce(H2, EDGE) == 2
    assert eval_plain_bruteforce(H2, TRIANGLE, guard=8) == eval_plain_bruteforce(H2, TRIANGLE, guard=100)


def test_order_independence():
    a = SymMatrix.from_rows([[1, 2, 0], [2, -1, 1], [0, 1, 3]])
    inst = PdpfInstance(a, DiagMatrix((Fraction(1), Fraction(2), Fraction(1))), DiagMatrix((Fraction(1), Fraction(0), Fraction(-1))))
    g = Multigraph.from_pairs(4, [(0, 1), (1, 2), (2, 3), (1, 1), (0, 3)])
    base = eval_pdpf_bruteforce(inst, g)
    for order in ([3, 2, 1, 0], [1, 3, 0, 2]):
        assert eval_pdpf_bruteforce(inst, g, order=order) == base
