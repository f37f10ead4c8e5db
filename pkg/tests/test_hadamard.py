import itertools
import random

import pytest

from parthom.core import Multigraph, hadamard_h4
from parthom.gf2 import Gf2Poly, SubspaceBasis
from parthom.hadamard import (
    H2,
    H4,
    Representation,
    backbone_representation,
    bipartise,
    check_degree,
    check_linearity,
    construct_representation,
    group_condition,
    is_hadamard,
    is_positive_for,
    negate_signs,
    peel_tensor_step,
    sign_kron,
)
from parthom.oracle import eval_pdpf_bruteforce
from parthom.core import DiagMatrix, PdpfInstance


def paley_12():
    """Order-12 Hadamard matrix from the quadratic residues mod 11."""
    q = 11
    squares = {(x * x) % q for x in range(1, q)}
    chi = lambda x: 0 if x % q == 0 else (1 if x % q in squares else -1)
    s = [[0] + [1] * q] + [[-1] + [chi(j - i) for j in range(q)] for i in range(q)]
    return [[s[i][j] + (1 if i == j else 0) for j in range(q + 1)] for i in range(q + 1)]


def test_is_hadamard_examples():
    assert is_hadamard(H2)
    assert not is_hadamard([[1, 1], [1, 1]])
    assert is_hadamard(H4)
    assert is_hadamard(paley_12())


def test_group_condition_examples():
    assert group_condition(H2)
    assert group_condition(H4)
    assert not group_condition(paley_12())
    assert group_condition(sign_kron(H2, H4))


def test_positivity_examples():
    assert is_positive_for(H2, (0, 1), (0, 1))
    assert is_positive_for(negate_signs(H2), (1,), (1,))
    assert not is_positive_for([[-1]], (), ())


def test_peel_examples():
    step = peel_tensor_step(H4)
    assert step.factor_name == "H4" and step.sub == ((1,),)
    hh = sign_kron(H2, H2)
    step = peel_tensor_step(hh)
    assert step.factor_name == "H2" and step.sub == H2
    step = peel_tensor_step(H2)
    assert step.factor_name == "H2" and step.sub == ((1,),)
    with pytest.raises(ValueError):
        peel_tensor_step([[1, 1], [-1, 1]])


def test_backbone_examples():
    assert backbone_representation(H2) == ((0, 1), (0, 1), (0,))
    assert backbone_representation([[1]]) == ((0,), (0,), ())
    rho_r, rho_c, pi = backbone_representation(H4)
    rep = Representation(2, rho_r, rho_c, pi, Gf2Poly.zero(2), Gf2Poly.zero(2))
    assert rep.represents(H4)
    # the bilinear part is the polynomial x0 y1 + x1 y0
    assert all(rep.bilinear(x, y) == ((x & 1) & (y >> 1)) ^ ((x >> 1) & (y & 1)) for x in range(4) for y in range(4))


def test_construct_representation_examples():
    rep = construct_representation(H2, (0, 1), (0, 1))
    assert rep.g_r.is_zero() and rep.g_c.is_zero() and rep.rho_r[0] == 0 and rep.pi == (0,)
    neg_rows = [[-1, -1], [1, -1]]
    rep = construct_representation(neg_rows, (), ())
    assert not (rep.g_r.is_zero() and rep.g_c.is_zero())
    assert rep.represents(neg_rows)
    rep = construct_representation(H4, range(4), range(4))
    assert rep.g_r.is_zero() and rep.g_c.is_zero() and rep.represents(H4)


def _scrambled(rng, h):
    n = len(h)
    rp, cp = list(range(n)), list(range(n))
    rng.shuffle(rp)
    rng.shuffle(cp)
    rs = [rng.choice((1, -1)) for _ in range(n)]
    cs = [rng.choice((1, -1)) for _ in range(n)]
    return tuple(tuple(rs[i] * cs[j] * h[rp[i]][cp[j]] for j in range(n)) for i in range(n))


def test_representations_of_scrambled_group_matrices():
    rng = random.Random(4)
    bases = [H2, H4, sign_kron(H2, H2), sign_kron(H2, H4), sign_kron(H4, H4)]
    for _ in range(150):
        h = _scrambled(rng, rng.choice(bases))
        assert group_condition(h)
        rep = construct_representation(h, (), ())
        assert rep.represents(h)


def test_check_linearity_examples():
    rep = construct_representation(H2, (0, 1), (0, 1))
    phi_r, phi_c = check_linearity(rep, (0, 1), (0, 1))
    assert phi_r.dim == 1 and phi_r.image() == {0, 1}
    phi_r, _ = check_linearity(rep, (rep.rho_r[0],), (0, 1))
    assert phi_r.dim == 0
    rep4 = construct_representation(H4, range(4), range(4))
    assert check_linearity(rep4, (0, 1, 2), (0,)) is None


def test_check_degree_examples():
    ident = SubspaceBasis.identity(3)

    def rep_with(g):
        return Representation(3, tuple(range(8)), tuple(range(8)), (0, 1, 2), g, Gf2Poly.zero(3))

    assert check_degree(rep_with(Gf2Poly.zero(3)), ident, ident)
    assert check_degree(rep_with(Gf2Poly(3, {0b011, 0b100})), ident, ident)
    assert not check_degree(rep_with(Gf2Poly(3, {0b111})), ident, ident)


def test_bipartise_partition_function():
    bip = bipartise(H2, (0, 1), (0, 1))
    assert bip.m.order == 4 and bip.lam == (0, 1, 2, 3)
    edge = Multigraph.from_pairs(2, [(0, 1)])
    inst = PdpfInstance(bip.m, DiagMatrix.identity(4), DiagMatrix.indicator(4, bip.lam))
    assert eval_pdpf_bruteforce(inst, edge) == 4
