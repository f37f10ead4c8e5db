from fractions import Fraction

import pytest

from parthom.core import DiagMatrix, Multigraph, PdpfInstance, SymMatrix, hadamard_h2
from parthom.oracle import eval_pdpf_bruteforce, eval_plain_bruteforce, eval_weighted_bruteforce
from parthom.selftest import hard_corpus, random_multigraph, tractable_corpus
from parthom.structure import (
    CanonicalForm,
    HardEvidence,
    HardReason,
    abs_rank1_factor,
    canonical_stages,
    canonicalize_connected,
    find_rank2_minor,
    matrix_components,
    negate_row_col,
    pm_twin_reduce,
    standard_conversion,
    tile_decompose,
    twin_reduce,
)

F = Fraction
H2 = hadamard_h2()
U = SymMatrix.from_rows([[1, -1], [-1, 1]])
TRIANGLE = Multigraph.from_pairs(3, [(0, 1), (1, 2), (2, 0)])


def grid(rows):
    return tuple(tuple(F(x) for x in row) for row in rows)


def test_matrix_components_examples():
    comps = matrix_components(SymMatrix.from_rows([[1, 0], [0, 1]])).components
    assert [(c.indices, c.bipartite, c.block) for c in comps] == [((0,), False, ((1,),)), ((1,), False, ((1,),))]
    (swap,) = matrix_components(SymMatrix.from_rows([[0, 1], [1, 0]])).components
    assert swap.bipartite and swap.rows == (0,) and swap.cols == (1,) and swap.block == ((1,),)
    (h,) = matrix_components(H2).components
    assert not h.bipartite and h.indices == (0, 1)


def test_zero_index_is_its_own_component():
    comps = matrix_components(SymMatrix.from_rows([[1, 1, 0], [1, -1, 0], [0, 0, 0]])).components
    assert [c.indices for c in comps] == [(0, 1), (2,)]
    assert comps[1].is_zero


def test_twin_reduce_examples():
    tr = twin_reduce(SymMatrix.from_rows([[1, 1], [1, 1]]), DiagMatrix.identity(2))
    assert tr.matrix.entries == ((1,),) and tr.delta.diagonal == (2,)
    tr = twin_reduce(H2, DiagMatrix.identity(2))
    assert tr.matrix == H2 and tr.delta == DiagMatrix.identity(2)
    a = SymMatrix.from_rows([[1, 1, 0], [1, 1, 0], [0, 0, 2]])
    tr = twin_reduce(a, DiagMatrix.identity(3))
    assert tr.matrix.order == 2 and tr.delta.diagonal == (2, 1)
    assert tr.tau == (0, 0, 1)


def test_pm_twin_reduce_examples():
    pm = pm_twin_reduce(U, DiagMatrix.identity(2))
    assert pm.matrix.entries == ((1,),) and pm.d.diagonal == (2,) and pm.o.diagonal == (0,)
    pm = pm_twin_reduce(H2, DiagMatrix.identity(2))
    assert pm.matrix == H2 and pm.d == pm.o == DiagMatrix.identity(2)
    a = SymMatrix.from_rows([[1, -1, 2], [-1, 1, -2], [2, -2, 1]])
    pm = pm_twin_reduce(a, DiagMatrix.identity(3))
    assert pm.d.diagonal == (2, 1) and pm.o.diagonal == (0, 1)
    for g in (TRIANGLE, Multigraph.from_pairs(2, [(0, 1), (1, 1)])):
        assert eval_plain_bruteforce(a, g) == eval_pdpf_bruteforce(pm.instance, g)


def test_negate_row_col_examples():
    inst = PdpfInstance.plain(U)
    once = negate_row_col(inst, 1)
    assert once.a.entries == ((1, 1), (1, 1)) and once.o.diagonal == (1, -1)
    assert negate_row_col(once, 1) == inst
    assert eval_pdpf_bruteforce(inst, TRIANGLE) == eval_pdpf_bruteforce(once, TRIANGLE)
    with pytest.raises(ValueError):
        negate_row_col(inst, 2)


def test_standard_conversion_shape():
    inst = PdpfInstance(SymMatrix.from_rows([[3]]), DiagMatrix((F(2),)), DiagMatrix((F(1),)))
    a, delta = standard_conversion(inst)
    assert a.entries == ((3, -3), (-3, 3))
    assert delta.diagonal == (F(3, 2), F(1, 2))


def test_abs_rank1_factor_examples():
    f = abs_rank1_factor(grid([[1, -2], [-2, 4]]))
    assert f.x == (1, 2) and f.y == (1, 2)
    f = abs_rank1_factor(grid([[1, 1], [1, -1]]))
    assert f.x == (1, 1) and f.y == (1, 1)
    assert abs_rank1_factor(grid([[1, 2], [2, 1]])) is None
    assert find_rank2_minor(grid([[1, 2], [2, 1]])) == (0, 1, 0, 1)


def test_tile_decompose_examples():
    b = grid([[1, -2], [-2, 4]])
    td = tile_decompose(b, abs_rank1_factor(b))
    assert td.v == (1, 2) and td.r == 1
    assert [td.tile(k, l) for k in range(2) for l in range(2)] == [((1,),), ((-1,),), ((-1,),), ((1,),)]
    h = grid([[1, 1], [1, -1]])
    td = tile_decompose(h, abs_rank1_factor(h))
    assert td.v == (1,) and td.r == 2 and td.tile(0, 0) == ((1, 1), (1, -1))
    bad = grid([[1, 1, 1], [1, 1, -1]])
    ev = tile_decompose(bad, abs_rank1_factor(bad))
    assert isinstance(ev, HardEvidence) and ev.reason is HardReason.SIGN_STRUCTURE


def _only(a):
    (comp,) = matrix_components(a).components
    return canonicalize_connected(comp)


def test_canonicalize_examples():
    cf = _only(U)
    assert isinstance(cf, CanonicalForm)
    assert cf.h == ((1,),) and cf.v == (1,) and cf.alpha_r == (2,) and cf.beta_r == (0,) and cf.lam_r == ()
    ev = _only(SymMatrix.from_rows([[0, 1], [1, 1]]))
    assert isinstance(ev, HardEvidence) and ev.reason is HardReason.ABS_RANK
    cf = _only(H2)
    assert cf.h == ((1, 1), (1, -1)) and cf.alpha_r == (1,) and cf.lam_r == (0, 1)
    cf = _only(SymMatrix.from_rows([[0, 1], [1, 0]]))
    assert cf.bipartite and cf.h == ((1,),) and cf.lam_r == (0,) and cf.lam_c == (0,)


@pytest.mark.parametrize("name", ["C3", "F3"])
def test_canonicalize_rank_failures(name):
    ev = _only(hard_corpus()[name])
    assert isinstance(ev, HardEvidence) and ev.reason is HardReason.ABS_RANK
    i, j, k, l = ev.indices
    a = hard_corpus()[name]
    assert abs(a[i, k] * a[j, l]) != abs(a[i, l] * a[j, k])


def test_unbalanced_twins_break_sign_structure():
    # H2 with one index doubled: rows 0 and 2 have inner product 1
    ev = _only(hard_corpus()["twinned H2"])
    assert ev.reason is HardReason.SIGN_STRUCTURE and ev.indices == (0, 2)


def test_stage_replay_preserves_partition_function():
    import random

    rng = random.Random(11)
    for name, a in tractable_corpus().items():
        for comp in matrix_components(a).components:
            if comp.is_zero:
                continue
            cf = canonicalize_connected(comp)
            if not isinstance(cf, CanonicalForm):
                continue
            stages = canonical_stages(a, cf)
            assert stages[-1][1] == stages[-2][1], name
            for _ in range(8):
                g = random_multigraph(rng, 4, 5)
                values = {eval_pdpf_bruteforce(inst, g) for _, inst in stages}
                assert len(values) == 1, (name, g)
