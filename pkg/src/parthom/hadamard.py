"""Hadamard matrices satisfying the group condition and their GF(2) representations.

A normalised Hadamard matrix whose row products close up into a group is,
after suitable row and column permutations, an iterated tensor product of
H2 and H4 factors.  Peeling those factors one at a time yields index maps
rho^R, rho^C: GF(2)^k -> [n] under which the sign pattern is the bilinear
form X_pi . Y, and an arbitrary GC Hadamard matrix differs from a
normalised one only by the first-row/column corrections g^R, g^C.

Sign matrices are tuples of int rows with entries +-1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import SymMatrix
from .gf2 import Gf2Poly, SubspaceBasis, anf_from_truth_table, compose_linear, is_linear_subspace, poly_degree, subspace_basis
from .structure import InternalError

Signs = tuple[tuple[int, ...], ...]

H2: Signs = ((1, 1), (1, -1))
H4: Signs = ((1, 1, 1, 1), (1, 1, -1, -1), (1, -1, 1, -1), (1, -1, -1, 1))


def as_signs(h: Sequence[Sequence[int]]) -> Signs:
    out = tuple(tuple(int(e) for e in row) for row in h)
    n = len(out)
    if n == 0 or any(len(row) != n for row in out):
        raise ValueError("sign matrix must be square and nonempty")
    if any(e not in (1, -1) for row in out for e in row):
        raise ValueError("sign matrix entries must be +1 or -1")
    return out


def is_symmetric(h: Signs) -> bool:
    return all(h[i][j] == h[j][i] for i in range(len(h)) for j in range(i))


def is_hadamard(h: Sequence[Sequence[int]]) -> bool:
    h = as_signs(h)
    n = len(h)
    return all(
        sum(a * b for a, b in zip(h[i], h[j])) == (n if i == j else 0) for i in range(n) for j in range(i, n)
    )


def _product_set(h: Signs, l: int) -> frozenset[tuple[int, ...]]:
    """G(H, l) with each +- pair represented by its member starting with +1."""
    out = set()
    for row in h:
        p = [a * b for a, b in zip(row, h[l])]
        s = p[0]
        out.add(tuple(s * e for e in p))
    return frozenset(out)


def group_condition(h: Sequence[Sequence[int]]) -> bool:
    h = as_signs(h)
    for mat in (h, tuple(zip(*h))):
        base = _product_set(mat, 0)
        if any(_product_set(mat, l) != base for l in range(1, len(mat))):
            return False
    return True


def is_positive_for(h: Sequence[Sequence[int]], lam_r: Sequence[int], lam_c: Sequence[int]) -> bool:
    h = as_signs(h)
    n = len(h)
    rows = set(lam_r) or set(range(n))
    cols = set(lam_c) or set(range(n))
    diagonal_only = is_symmetric(h) and set(lam_r) == set(lam_c)
    return any(
        h[i][j] == 1 for i in rows for j in cols if not diagonal_only or i == j
    )


def negate_signs(h: Signs) -> Signs:
    return tuple(tuple(-e for e in row) for row in h)


def sign_kron(x: Signs, y: Signs) -> Signs:
    return tuple(tuple(a * b for a in xr for b in yr) for xr in x for yr in y)


# ------------------------------------------------------------------ peeling


@dataclass(frozen=True)
class PeelStep:
    """``h[sigma[i]][pi[j]] == (factor (x) sub)[i][j]`` with sigma[0] = pi[0] = 0."""

    sigma: tuple[int, ...]
    pi: tuple[int, ...]
    factor: Signs
    sub: Signs

    @property
    def factor_name(self) -> str:
        return "H2" if len(self.factor) == 2 else "H4"


class _View:
    """A sign matrix seen through row and column position permutations."""

    def __init__(self, h: Signs, shared: bool) -> None:
        n = len(h)
        self.h = h
        self.sig = list(range(n))
        self.pi = self.sig if shared else list(range(n))

    def __call__(self, i: int, j: int) -> int:
        return self.h[self.sig[i]][self.pi[j]]

    def row(self, i: int) -> tuple[int, ...]:
        return tuple(self(i, j) for j in range(len(self.h)))

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self(i, j) for i in range(len(self.h)))

    def swap_rows(self, p: int, q: int) -> None:
        self.sig[p], self.sig[q] = self.sig[q], self.sig[p]

    def swap_cols(self, p: int, q: int) -> None:
        self.pi[p], self.pi[q] = self.pi[q], self.pi[p]


def _first(candidates, pred) -> int:
    for q in candidates:
        if pred(q):
            return q
    raise InternalError("normalisation step found no admissible swap")


def _product_positions(lines: list[tuple[int, ...]], base: int, count: int) -> list[int]:
    """For j < count, the position of the line equal to line_j * line_base."""
    where = {line: p for p, line in enumerate(lines)}
    out = []
    for j in range(count):
        prod = tuple(a * b for a, b in zip(lines[j], lines[base]))
        if prod not in where:
            raise InternalError("row products are not closed; group condition fails")
        out.append(where[prod])
    return out


def _peel_h2(h: Signs, sym: bool) -> PeelStep:
    n = len(h)
    nu = n // 2
    view = _View(h, shared=sym)
    if sym:
        a = next(i for i in range(n) if h[i][i] == -1)
        view.swap_rows(a, nu)                       # shared permutation moves the column too
    else:
        i, j = next((i, j) for i in range(n) for j in range(n) if h[i][j] == -1)
        view.swap_rows(i, nu)
        view.swap_cols(j, nu)
    # row nu: +1 on the left half, -1 on the right half
    for p in range(nu + 1, n):
        if view(nu, p) == 1:
            q = _first(range(1, nu), lambda q: view(nu, q) == -1)
            view.swap_cols(p, q)
    if not sym:
        # column nu: +1 on the top half, -1 on the bottom half
        for p in range(nu + 1, n):
            if view(p, nu) == 1:
                q = _first(range(1, nu), lambda q: view(q, nu) == -1)
                view.swap_rows(p, q)
    # pair column j with column j * column nu, and row j with row j * row nu
    cols = [view.col(j) for j in range(n)]
    col_partner = _product_positions(cols, nu, nu)
    new_pi = view.pi[:nu] + [view.pi[p] for p in col_partner]
    if sym:
        new_sig = new_pi
    else:
        rows = [view.row(i) for i in range(n)]
        row_partner = _product_positions(rows, nu, nu)
        new_sig = view.sig[:nu] + [view.sig[p] for p in row_partner]
    sub = tuple(tuple(h[new_sig[i]][new_pi[j]] for j in range(nu)) for i in range(nu))
    return PeelStep(tuple(new_sig), tuple(new_pi), H2, sub)


def _peel_h4(h: Signs) -> PeelStep:
    n = len(h)
    nu = n // 4
    view = _View(h, shared=True)
    # row nu: +1 on the first half, -1 on the second half
    for p in range(2 * nu, n):
        if view(nu, p) == 1:
            q = _first((q for q in range(1, 2 * nu) if q != nu), lambda q: view(nu, q) == -1)
            view.swap_rows(p, q)
    # row 2nu: + - + - pattern over the four quarters
    for p in range(nu + 1, 2 * nu):
        if view(2 * nu, p) == 1:
            q = _first(range(1, nu), lambda q: view(2 * nu, q) == -1)
            view.swap_rows(p, q)
    for p in range(3 * nu, n):
        if view(2 * nu, p) == 1:
            q = _first(range(2 * nu + 1, 3 * nu), lambda q: view(2 * nu, q) == -1)
            view.swap_rows(p, q)
    rows = [view.row(i) for i in range(n)]
    where = {line: p for p, line in enumerate(rows)}

    def times(i: int, base: int) -> int:
        prod = tuple(a * b for a, b in zip(rows[i], rows[base]))
        if prod not in where:
            raise InternalError("row products are not closed; group condition fails")
        return where[prod]

    new = [0] * n
    for j in range(nu):
        i1 = j
        i2 = times(i1, nu)
        new[j], new[nu + j], new[2 * nu + j], new[3 * nu + j] = i1, i2, times(i1, 2 * nu), times(i2, 2 * nu)
    perm = [view.sig[p] for p in new]
    sub = tuple(tuple(h[perm[i]][perm[j]] for j in range(nu)) for i in range(nu))
    return PeelStep(tuple(perm), tuple(perm), H4, sub)


def peel_tensor_step(h: Sequence[Sequence[int]]) -> PeelStep:
    """Split a normalised GC Hadamard matrix as (H2 or H4) (x) H' up to permutations."""
    h = as_signs(h)
    n = len(h)
    if n < 2:
        raise ValueError("nothing to peel from an order-1 matrix")
    if any(e != 1 for e in h[0]) or any(row[0] != 1 for row in h):
        raise ValueError("matrix is not normalised")
    sym = is_symmetric(h)
    if sym and all(h[i][i] == 1 for i in range(n)):
        if n == 2:
            raise ValueError("a symmetric normalised 2x2 Hadamard matrix has a -1 on the diagonal")
        step = _peel_h4(h)
    else:
        step = _peel_h2(h, sym)
    permuted = tuple(tuple(h[step.sigma[i]][step.pi[j]] for j in range(n)) for i in range(n))
    if permuted != sign_kron(step.factor, step.sub) or step.sigma[0] != 0 or step.pi[0] != 0:
        raise InternalError("peeled factors do not reconstruct the matrix")
    return step


def backbone_representation(h: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Index maps rho^R, rho^C (as tables over GF(2)^k) and pi with
    h[rho^R(x)][rho^C(y)] = (-1)^(x_pi . y)."""
    h = as_signs(h)
    n = len(h)
    k = n.bit_length() - 1
    if n != 1 << k:
        raise ValueError("order is not a power of two")
    if n == 1:
        return (0,), (0,), ()
    step = peel_tensor_step(h)
    sub_r, sub_c, sub_pi = backbone_representation(step.sub)
    if step.factor_name == "H2":
        nu, top = n // 2, 1
        pi = list(sub_pi) + [k - 1]
    else:
        nu, top = n // 4, 2
        pi = list(sub_pi) + [k - 1, k - 2]
    low = nu - 1
    shift = k - top

    def lift(sub: tuple[int, ...], perm: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(perm[(x >> shift) * nu + sub[x & low]] for x in range(n))

    return lift(sub_r, step.sigma), lift(sub_c, step.pi), tuple(pi)


# ------------------------------------------------------------------ representation


@dataclass(frozen=True)
class Representation:
    """h(x, y) = x_pi . y + g^R(x) + g^C(y) represents H under rho^R, rho^C.

    ``rho_r[x]`` is the row index of the vector x (bit i = x_i) and
    ``pi[i]`` is the 0-based image of i.
    """

    k: int
    rho_r: tuple[int, ...]
    rho_c: tuple[int, ...]
    pi: tuple[int, ...]
    g_r: Gf2Poly
    g_c: Gf2Poly

    @property
    def tau_r(self) -> dict[int, int]:
        return {idx: x for x, idx in enumerate(self.rho_r)}

    @property
    def tau_c(self) -> dict[int, int]:
        return {idx: y for y, idx in enumerate(self.rho_c)}

    def bilinear(self, x: int, y: int) -> int:
        return sum((x >> self.pi[i]) & (y >> i) & 1 for i in range(self.k)) & 1

    def __call__(self, x: int, y: int) -> int:
        return self.bilinear(x, y) ^ self.g_r(x) ^ self.g_c(y)

    def represents(self, h: Sequence[Sequence[int]]) -> bool:
        size = 1 << self.k
        return all(
            (h[self.rho_r[x]][self.rho_c[y]] == -1) == bool(self(x, y)) for x in range(size) for y in range(size)
        )


def find_anchor(h: Signs, lam_r: Sequence[int], lam_c: Sequence[int]) -> tuple[int, int] | None:
    n = len(h)
    rows = set(lam_r) or set(range(n))
    cols = set(lam_c) or set(range(n))
    diagonal_only = is_symmetric(h) and set(lam_r) == set(lam_c)
    for a in sorted(rows):
        for b in sorted(cols):
            if h[a][b] == 1 and (not diagonal_only or a == b):
                return a, b
    return None


def construct_representation(h: Sequence[Sequence[int]], lam_r: Sequence[int], lam_c: Sequence[int]) -> Representation:
    """Representation of a GC Hadamard matrix that is positive for (lam_r, lam_c)."""
    h = as_signs(h)
    n = len(h)
    k = n.bit_length() - 1
    anchor = find_anchor(h, lam_r, lam_c)
    if anchor is None:
        raise ValueError("matrix is not positive for the given index sets")
    a, b = anchor
    sig = list(range(n))
    sig[0], sig[a] = sig[a], sig[0]
    pi = list(range(n))
    pi[0], pi[b] = pi[b], pi[0]
    moved = [[h[sig[i]][pi[j]] for j in range(n)] for i in range(n)]
    normal = tuple(tuple(moved[i][j] * moved[i][0] * moved[0][j] for j in range(n)) for i in range(n))
    back_r, back_c, perm = backbone_representation(normal)
    g_r = anf_from_truth_table([int(moved[back_r[x]][0] == -1) for x in range(n)])
    g_c = anf_from_truth_table([int(moved[0][back_c[y]] == -1) for y in range(n)])
    rep = Representation(
        k=k,
        rho_r=tuple(sig[i] for i in back_r),
        rho_c=tuple(pi[j] for j in back_c),
        pi=perm,
        g_r=g_r,
        g_c=g_c,
    )
    if not rep.represents(h):
        raise InternalError("constructed representation fails exhaustive verification")
    return rep


def check_linearity(
    rep: Representation, lam_r: Sequence[int], lam_c: Sequence[int]
) -> tuple[SubspaceBasis, SubspaceBasis] | None:
    """Coordinatisations of tau(lam_r), tau(lam_c) when both are subspaces."""
    out = []
    for lam, tau in ((lam_r, rep.tau_r), (lam_c, rep.tau_c)):
        if not lam:
            out.append(SubspaceBasis(rep.k, ()))
            continue
        image = {tau[i] for i in lam}
        if not is_linear_subspace(image):
            return None
        out.append(subspace_basis(image, rep.k))
    return out[0], out[1]


def check_degree(rep: Representation, phi_r: SubspaceBasis, phi_c: SubspaceBasis) -> bool:
    return poly_degree(compose_linear(rep.g_r, phi_r)) <= 2 and poly_degree(compose_linear(rep.g_c, phi_c)) <= 2


@dataclass(frozen=True)
class Bipartisation:
    m: SymMatrix
    lam: tuple[int, ...]


def bipartise(h: Sequence[Sequence[int]], lam_r: Sequence[int], lam_c: Sequence[int]) -> Bipartisation:
    h = as_signs(h)
    n = len(h)
    zero = [0] * n
    rows = [zero + list(row) for row in h] + [[h[i][j] for i in range(n)] + zero for j in range(n)]
    lam = tuple(sorted(set(lam_r))) + tuple(n + j for j in sorted(set(lam_c)))
    return Bipartisation(SymMatrix.from_rows(rows), lam)
