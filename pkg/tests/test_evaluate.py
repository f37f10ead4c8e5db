import random
from fractions import Fraction

import pytest

from parthom.classify import classify
from parthom.core import DiagMatrix, Multigraph, PdpfInstance, SymMatrix, bipartition, hadamard_h2, sym_kron
from parthom.evaluate import (
    DirectedMultigraph,
    HardMatrixError,
    eval_hadamard_bipartite_directional,
    eval_hadamard_symmetric,
    eval_rank1_directed,
    eval_rank1_pdpf,
    eval_tractable,
    evaluate,
)
from parthom.gf2 import Gf2Poly, SubspaceBasis
from parthom.hadamard import H2, bipartise, construct_representation
from parthom.oracle import eval_pdpf_bruteforce, eval_plain_bruteforce
from parthom.selftest import (
    cycle_graph,
    direct_sum,
    hard_corpus,
    path_graph,
    random_connected_graph,
    random_multigraph,
    random_tractable_candidate,
    tractable_corpus,
)

F = Fraction
EDGE = path_graph(2)
TRIANGLE = cycle_graph(3)
C4 = cycle_graph(4)


def test_rank1_directed_examples():
    arc = DirectedMultigraph(2, ((0, 1, 1),))
    assert eval_rank1_directed((F(1), F(2)), (F(1), F(1)), DiagMatrix.identity(2), arc) == 6
    assert eval_rank1_directed((F(1), F(2)), (F(3), F(1)), DiagMatrix.identity(2), DirectedMultigraph(1, ())) == 2
    assert eval_rank1_directed((F(1),), (F(1),), DiagMatrix.identity(1), DirectedMultigraph(3, ((0, 1, 2), (2, 2, 1)))) == 1
    with pytest.raises(ValueError):
        eval_rank1_directed((F(1),), (F(1), F(2)), DiagMatrix.identity(2), arc)


def _one(x):
    return DiagMatrix((F(x),))


def test_rank1_pdpf_examples():
    one = SymMatrix.from_rows([[1]])
    assert eval_rank1_pdpf(one, _one(2), _one(0), TRIANGLE) == 8
    assert eval_rank1_pdpf(SymMatrix.from_rows([[2]]), _one(2), _one(0), TRIANGLE) == 64
    for g in (EDGE, TRIANGLE, Multigraph.from_pairs(3, [(0, 0), (1, 2)])):
        assert eval_rank1_pdpf(one, _one(1), _one(1), g) == 1
    assert eval_rank1_pdpf(one, _one(1), _one(0), EDGE) == 0
    with pytest.raises(ValueError):
        eval_rank1_pdpf(hadamard_h2(), DiagMatrix.identity(2), DiagMatrix.identity(2), EDGE)


def test_rank1_pdpf_matches_oracle():
    rng = random.Random(31)
    for _ in range(150):
        m = rng.randint(1, 3)
        v = [F(rng.randint(-2, 3)) for _ in range(m)]
        if rng.random() < 0.4 and m > 1:
            # bipartite rank-1 block between the first index and the rest
            rows = [[F(0)] * m for _ in range(m)]
            for j in range(1, m):
                rows[0][j] = rows[j][0] = v[j] or F(1)
            c = SymMatrix.from_rows(rows)
        else:
            c = SymMatrix.from_rows([[x * y for y in v] for x in v])
        d = DiagMatrix(tuple(F(rng.randint(0, 3)) for _ in range(m)))
        o = DiagMatrix(tuple(F(rng.randint(-2, 2)) for _ in range(m)))
        g = random_multigraph(rng, 4, 5)
        assert eval_rank1_pdpf(c, d, o, g) == eval_pdpf_bruteforce(PdpfInstance(c, d, o), g)


def test_hadamard_symmetric_examples():
    trivial = construct_representation([[1]], (), ())
    assert eval_hadamard_symmetric(trivial, (), SubspaceBasis(0, ()), TRIANGLE) == 1
    rep = construct_representation(H2, (0, 1), (0, 1))
    full = SubspaceBasis.identity(1)
    assert eval_hadamard_symmetric(rep, (0, 1), full, EDGE) == 2
    assert eval_hadamard_symmetric(rep, (0, 1), full, C4) == 8
    assert eval_hadamard_symmetric(rep, (0, 1), full, EDGE, flipped=True) == -2
    # odd vertices with nothing pinned contribute zero
    assert eval_hadamard_symmetric(rep, (), SubspaceBasis(1, ()), EDGE) == 0


def test_hadamard_bipartite_examples():
    trivial = construct_representation([[1]], (0,), (0,))
    ident0 = SubspaceBasis(0, ())
    split = bipartition(EDGE)
    dv = eval_hadamard_bipartite_directional(trivial, (0,), (0,), ident0, ident0, EDGE, split)
    assert (dv.z_forward, dv.z_backward) == (1, 1)
    dv = eval_hadamard_bipartite_directional(trivial, (), (), ident0, ident0, EDGE, split)
    assert (dv.z_forward, dv.z_backward) == (0, 0)

    rep = construct_representation(H2, (0, 1), (0, 1))
    full = SubspaceBasis.identity(1)
    bip = bipartise(H2, (0, 1), (0, 1))
    inst = PdpfInstance(bip.m, DiagMatrix.identity(4), DiagMatrix.indicator(4, bip.lam))
    for g in (EDGE, path_graph(3), C4, Multigraph.from_pairs(3, [(0, 1), (0, 1), (1, 2)])):
        dv = eval_hadamard_bipartite_directional(rep, (0, 1), (0, 1), full, full, g, bipartition(g))
        assert dv.total == eval_pdpf_bruteforce(inst, g)
    assert eval_hadamard_bipartite_directional(rep, (0, 1), (0, 1), full, full, EDGE, split).total == 4


def test_eval_tractable_examples():
    h2 = hadamard_h2()
    assert evaluate(h2, C4) == 8
    u = tractable_corpus()["U"]
    assert evaluate(u, TRIANGLE) == 8
    i2 = tractable_corpus()["I2"]
    rng = random.Random(32)
    for _ in range(20):
        g = random_connected_graph(rng, rng.randint(1, 6), rng.randint(0, 4))
        assert evaluate(i2, g) == 2


def test_witness_mismatch_and_hard_refusal():
    w = classify(hadamard_h2()).witness
    with pytest.raises(ValueError):
        eval_tractable(tractable_corpus()["U"], w, EDGE)
    with pytest.raises(HardMatrixError) as info:
        evaluate(hard_corpus()["S"], EDGE)
    assert info.value.verdict.evidence is not None


def test_components_multiply():
    a = tractable_corpus()["H2+1"]
    g1, g2 = C4, TRIANGLE
    joined = Multigraph(7, g1.edges + tuple((u + 4, v + 4, k) for u, v, k in g2.edges))
    assert evaluate(a, joined) == evaluate(a, g1) * evaluate(a, g2)


def test_tensor_products_multiply():
    h2 = hadamard_h2()
    rank1 = SymMatrix.from_rows([[1, 2], [2, 4]])
    prod = sym_kron(rank1, h2)
    for g in (EDGE, TRIANGLE, C4, Multigraph.from_pairs(3, [(0, 0), (0, 1), (1, 2), (1, 2)])):
        assert evaluate(prod, g) == evaluate(rank1, g) * evaluate(h2, g)


def test_large_graph_runs_without_enumeration():
    # 60-vertex cycle: far beyond the oracle, even-subgraph identity gives the value
    n = 60
    value = evaluate(hadamard_h2(), cycle_graph(n))
    # induced subgraphs of C_n with an even number of edges, by a transfer count
    # over states (previous bit, parity), closing the cycle with the first bit
    count = 0
    for first in (0, 1):
        dp = {(first, 0): 1}
        for _ in range(1, n):
            nxt = {}
            for (prev, par), c in dp.items():
                for bit in (0, 1):
                    key = (bit, par ^ (prev & bit))
                    nxt[key] = nxt.get(key, 0) + c
            dp = nxt
        count += sum(c for (last, par), c in dp.items() if (par ^ (last & first)) == 0)
    assert value / 2 + 2 ** (n - 1) == count


def test_random_candidates_match_oracle():
    rng = random.Random(33)
    checked = 0
    while checked < 60:
        a = random_tractable_candidate(rng, max_hadamard=2)
        v = classify(a)
        if not v.tractable:
            continue
        nmax = 1
        while a.order ** (nmax + 1) <= 20000 and nmax < 5:
            nmax += 1
        for _ in range(3):
            g = random_multigraph(rng, nmax, 6)
            assert eval_tractable(a, v.witness, g) == eval_plain_bruteforce(a, g)
        checked += 1


def test_direct_sum_with_zero_index():
    a = direct_sum(hadamard_h2(), SymMatrix.from_rows([[0]]))
    assert evaluate(a, Multigraph(1, ())) == 3
    assert evaluate(a, Multigraph(2, ())) == 9
    assert evaluate(a, EDGE) == 2
