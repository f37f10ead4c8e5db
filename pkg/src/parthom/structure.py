"""Matrix decompositions and partition-function preserving reductions.

The centrepiece is :func:`canonicalize_connected`, which takes one connected
component of a symmetric matrix and either rewrites its underlying block as
``v w^T (x) H`` with uniform vertex weights (together with the chain of
transforms that justify the rewrite) or returns evidence of which structural
requirement fails.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .core import DiagMatrix, Grid, PdpfInstance, SymMatrix, kron, make_grid


class InternalError(RuntimeError):
    """A proven structural property failed to hold: a bug, not bad input."""


class HardReason(str, enum.Enum):
    ABS_RANK = "abs-rank"                  # |B| has rank >= 2
    SIGN_STRUCTURE = "sign-structure"      # two sign rows neither orthogonal nor +-copies, tile-wise
    NOT_HADAMARD = "not-hadamard"          # H H^T != r I
    NONUNIFORM_D = "nonuniform-d"          # a D tile is not a scalar matrix
    O_SHAPE = "o-shape"                    # O tiles do not share one support with constant value
    GROUP_CONDITION = "group-condition"
    LINEARITY = "linearity"
    DEGREE = "degree"


REASON_TEXT = {
    HardReason.ABS_RANK: "block of |A| with rank ≥ 2",
    HardReason.SIGN_STRUCTURE: "sign rows neither orthogonal nor copies within tiles",
    HardReason.NOT_HADAMARD: "core sign matrix H is not Hadamard",
    HardReason.NONUNIFORM_D: "even-degree weights are not constant on a tile",
    HardReason.O_SHAPE: "odd-degree weights do not share one support",
    HardReason.GROUP_CONDITION: "H violates the group condition",
    HardReason.LINEARITY: "pinned index set is not a linear subspace",
    HardReason.DEGREE: "correction polynomial restricted to the subspace has degree > 2",
}


@dataclass(frozen=True)
class HardEvidence:
    reason: HardReason
    message: str
    indices: tuple[int, ...] = ()           # witnessing indices of the original matrix
    data: dict[str, Any] = field(default_factory=dict, compare=True, hash=False)

    @property
    def summary(self) -> str:
        return REASON_TEXT[self.reason]


# ----------------------------------------------------------------- components


@dataclass(frozen=True)
class MatrixComponent:
    """One connected component of the nonzero pattern of A.

    For bipartite components ``rows`` is the side holding the lowest index and
    ``block`` is A restricted to rows x cols.  Otherwise rows = cols = indices
    and ``block`` is the principal submatrix.
    """

    indices: tuple[int, ...]
    bipartite: bool
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    block: Grid

    @property
    def is_zero(self) -> bool:
        """An isolated index with a zero diagonal entry."""
        return not self.bipartite and len(self.indices) == 1 and self.block[0][0] == 0


@dataclass(frozen=True)
class MatrixComponents:
    components: tuple[MatrixComponent, ...]
    order: int


def matrix_components(a: SymMatrix) -> MatrixComponents:
    m = a.order
    adj = [[j for j in range(m) if j != i and a[i, j] != 0] for i in range(m)]
    seen = [False] * m
    comps = []
    for start in range(m):
        if seen[start]:
            continue
        seen[start] = True
        colour = {start: 0}
        stack, bip = [start], True
        while stack:
            x = stack.pop()
            if a[x, x] != 0:
                bip = False
            for y in adj[x]:
                if y not in colour:
                    colour[y] = 1 - colour[x]
                    seen[y] = True
                    stack.append(y)
                elif colour[y] == colour[x]:
                    bip = False
        idx = tuple(sorted(colour))
        if len(idx) == 1 and a[start, start] == 0:
            comps.append(MatrixComponent(idx, False, idx, idx, ((Fraction(0),),)))
            continue
        if bip:
            rows = tuple(i for i in idx if colour[i] == 0)
            cols = tuple(i for i in idx if colour[i] == 1)
        else:
            rows = cols = idx
        block = tuple(tuple(a[i, j] for j in cols) for i in rows)
        comps.append(MatrixComponent(idx, bip, rows, cols, block))
    return MatrixComponents(tuple(comps), m)


# ----------------------------------------------------------------- twin reductions


@dataclass(frozen=True)
class TwinReduction:
    matrix: SymMatrix
    tau: tuple[int, ...]                    # tau[i] = class of original index i
    delta: DiagMatrix
    classes: tuple[tuple[int, ...], ...]


def twin_reduce(a: SymMatrix, d: DiagMatrix) -> TwinReduction:
    """Merge identical rows, summing their vertex weights."""
    if a.order != d.order:
        raise ValueError("orders of A and D disagree")
    keys: dict[tuple[Fraction, ...], int] = {}
    classes: list[list[int]] = []
    tau = []
    for i, row in enumerate(a.entries):
        cid = keys.setdefault(row, len(classes))
        if cid == len(classes):
            classes.append([])
        classes[cid].append(i)
        tau.append(cid)
    reps = [c[0] for c in classes]
    delta = DiagMatrix(tuple(sum((d[i] for i in c), Fraction(0)) for c in classes))
    return TwinReduction(a.principal(reps), tuple(tau), delta, tuple(tuple(c) for c in classes))


@dataclass(frozen=True)
class PmTwinReduction:
    matrix: SymMatrix
    classes: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]   # (P_i, N_i); P_i[0] is the representative
    d: DiagMatrix
    o: DiagMatrix

    @property
    def instance(self) -> PdpfInstance:
        return PdpfInstance(self.matrix, self.d, self.o)


def _sign_normal(row: Sequence[Fraction]) -> tuple[int, tuple[Fraction, ...]]:
    for x in row:
        if x:
            s = 1 if x > 0 else -1
            return s, tuple(s * y for y in row)
    return 1, tuple(row)


def pm_twin_reduce(a: SymMatrix, delta: DiagMatrix) -> PmTwinReduction:
    """Merge rows that agree up to a global sign into one pdpf index.

    A class with positive part P and negated part N gets D = w(P) + w(N) and
    O = w(P) - w(N), where w sums the input weights.
    """
    if a.order != delta.order:
        raise ValueError("orders of A and Delta disagree")
    keys: dict[tuple[Fraction, ...], int] = {}
    members: list[list[tuple[int, int]]] = []
    for i, row in enumerate(a.entries):
        s, key = _sign_normal(row)
        cid = keys.setdefault(key, len(members))
        if cid == len(members):
            members.append([])
        members[cid].append((i, s))
    classes, dd, oo = [], [], []
    for mem in members:
        s0 = mem[0][1]
        pos = tuple(i for i, s in mem if s == s0)
        neg = tuple(i for i, s in mem if s != s0)
        wp = sum((delta[i] for i in pos), Fraction(0))
        wn = sum((delta[i] for i in neg), Fraction(0))
        classes.append((pos, neg))
        dd.append(wp + wn)
        oo.append(wp - wn)
    reps = [p[0] for p, _ in classes]
    return PmTwinReduction(a.principal(reps), tuple(classes), DiagMatrix(tuple(dd)), DiagMatrix(tuple(oo)))


def negate_row_col(inst: PdpfInstance, i: int) -> PdpfInstance:
    """Negate row and column i of A and the odd weight O_ii."""
    m = inst.order
    if not 0 <= i < m:
        raise ValueError("index out of range")
    sign = [(-1 if t == i else 1) for t in range(m)]
    a = SymMatrix(tuple(tuple(sign[r] * sign[c] * inst.a[r, c] for c in range(m)) for r in range(m)))
    o = DiagMatrix(tuple(-x if t == i else x for t, x in enumerate(inst.o.diagonal)))
    return PdpfInstance(a, inst.d, o)


def standard_conversion(inst: PdpfInstance) -> tuple[SymMatrix, DiagMatrix]:
    """(C, D, O) -> (A, Delta) of twice the order with Z_{C,D,O} = Z_{A,Delta}.

    A = [[1,-1],[-1,1]] (x) C and Delta = diag((D+O)/2, (D-O)/2).
    """
    u = ((Fraction(1), Fraction(-1)), (Fraction(-1), Fraction(1)))
    a = SymMatrix(kron(u, inst.a.entries))
    plus = tuple((d + o) / 2 for d, o in zip(inst.d.diagonal, inst.o.diagonal))
    minus = tuple((d - o) / 2 for d, o in zip(inst.d.diagonal, inst.o.diagonal))
    return a, DiagMatrix(plus + minus)


# ----------------------------------------------------------------- |B| rank one


@dataclass(frozen=True)
class Rank1Factorization:
    x: tuple[Fraction, ...]
    y: tuple[Fraction, ...]


def _is_block(b: Grid) -> bool:
    """True when the bipartite nonzero pattern of b is connected with no empty line."""
    nr, nc = len(b), len(b[0]) if b else 0
    if nr == 0 or nc == 0:
        return False
    seen_r, seen_c = {0}, set()
    stack = [("r", 0)]
    while stack:
        side, i = stack.pop()
        if side == "r":
            for j in range(nc):
                if b[i][j] and j not in seen_c:
                    seen_c.add(j)
                    stack.append(("c", j))
        else:
            for r in range(nr):
                if b[r][i] and r not in seen_r:
                    seen_r.add(r)
                    stack.append(("r", r))
    return len(seen_r) == nr and len(seen_c) == nc


def abs_rank1_factor(b: Sequence[Sequence[Fraction]]) -> Rank1Factorization | None:
    """|B| = x y^T with x_0 = 1 and positive entries, or None when rank |B| >= 2."""
    b = make_grid(b)
    if not _is_block(b):
        raise ValueError("input is decomposable, not a block")
    if any(x == 0 for row in b for x in row):
        return None       # an indecomposable matrix with a zero entry has |B| of rank >= 2
    pivot = abs(b[0][0])
    x = tuple(abs(row[0]) / pivot for row in b)
    y = tuple(abs(e) for e in b[0])
    if any(abs(b[i][j]) != x[i] * y[j] for i in range(len(b)) for j in range(len(b[0]))):
        return None
    return Rank1Factorization(x, y)


def find_rank2_minor(b: Sequence[Sequence[Fraction]]) -> tuple[int, int, int, int] | None:
    """Rows i<j and columns k<l with |b_ik b_jl| != |b_il b_jk|."""
    nr, nc = len(b), len(b[0])
    for i in range(nr):
        for j in range(i + 1, nr):
            for k in range(nc):
                for l in range(k + 1, nc):
                    if abs(b[i][k] * b[j][l]) != abs(b[i][l] * b[j][k]):
                        return i, j, k, l
    return None


# ----------------------------------------------------------------- tiles


@dataclass(frozen=True)
class TileDecomposition:
    """Sign tiling of a block with |B| = x y^T (local row/column indices).

    Rows are grouped by their x value (group kappa has value v[kappa]) and
    columns by their y value.  ``row_order`` lists rows group by group; the
    tile (kappa, lam) is the sign pattern on those groups.  Sign rows fall into
    r classes of +-copies; ``row_reps[kappa][a]`` is the first row of class a
    in group kappa and ``tau_r[kappa][a]`` the sign relating it to the
    representative of class a in group 0.
    """

    v: tuple[Fraction, ...]
    w: tuple[Fraction, ...]
    row_group: tuple[int, ...]
    col_group: tuple[int, ...]
    row_order: tuple[int, ...]
    col_order: tuple[int, ...]
    signs: tuple[tuple[int, ...], ...]
    r: int
    row_class: tuple[int, ...]
    col_class: tuple[int, ...]
    row_reps: tuple[tuple[int, ...], ...]
    col_reps: tuple[tuple[int, ...], ...]
    tau_r: tuple[tuple[int, ...], ...]
    tau_c: tuple[tuple[int, ...], ...]

    def tile(self, kappa: int, lam: int) -> tuple[tuple[int, ...], ...]:
        rows = [i for i in self.row_order if self.row_group[i] == kappa]
        cols = [j for j in self.col_order if self.col_group[j] == lam]
        return tuple(tuple(self.signs[i][j] for j in cols) for i in rows)


def _groups(values: Sequence[Fraction]) -> tuple[tuple[Fraction, ...], tuple[int, ...], tuple[int, ...]]:
    distinct = tuple(sorted(set(values)))
    pos = {val: k for k, val in enumerate(distinct)}
    group = tuple(pos[val] for val in values)
    order = tuple(sorted(range(len(values)), key=lambda i: (group[i], i)))
    return distinct, group, order


def _tilewise_violation(
    lines: Sequence[Sequence[int]], other_group: Sequence[int], ngroups: int
) -> tuple[int, int] | None:
    """First pair of lines that is neither tile-wise orthogonal nor a tile-wise +-copy."""
    sizes = [0] * ngroups
    for g in other_group:
        sizes[g] += 1
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            ip = [0] * ngroups
            for c, (p, q) in enumerate(zip(lines[i], lines[j])):
                ip[other_group[c]] += p * q
            if all(t == 0 for t in ip):
                continue
            if all(t == sizes[g] for g, t in enumerate(ip)) or all(t == -sizes[g] for g, t in enumerate(ip)):
                continue
            return i, j
    return None


def _line_classes(
    lines: Sequence[Sequence[int]], group: Sequence[int], order: Sequence[int], ngroups: int
) -> tuple[int, tuple[int, ...], tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    keys: dict[tuple[int, ...], int] = {}
    cls = [0] * len(lines)
    # classes numbered by first appearance in group 0, in tile order
    for i in sorted(range(len(lines)), key=lambda t: (group[t] != 0, order.index(t))):
        s = lines[i][0]
        key = tuple(s * e for e in lines[i])
        cls[i] = keys.setdefault(key, len(keys))
    r = len(keys)
    reps, taus = [], []
    for kappa in range(ngroups):
        first: dict[int, int] = {}
        for i in order:
            if group[i] == kappa:
                first.setdefault(cls[i], i)
        if len(first) != r:
            raise InternalError("a tile group misses a sign class")
        reps.append(tuple(first[a] for a in range(r)))
    for kappa in range(ngroups):
        taus.append(tuple(lines[reps[0][a]][0] * lines[reps[kappa][a]][0] for a in range(r)))
    return r, tuple(cls), tuple(reps), tuple(taus)


def tile_decompose(b: Sequence[Sequence[Fraction]], fact: Rank1Factorization) -> TileDecomposition | HardEvidence:
    b = make_grid(b)
    v, row_group, row_order = _groups(fact.x)
    w, col_group, col_order = _groups(fact.y)
    signs = tuple(tuple(1 if e > 0 else -1 for e in row) for row in b)
    cols = tuple(zip(*signs))

    bad = _tilewise_violation(signs, col_group, len(w))
    if bad:
        return HardEvidence(
            HardReason.SIGN_STRUCTURE,
            f"rows {bad[0]} and {bad[1]} are neither orthogonal nor copies on every column tile",
            bad,
            {"axis": "row"},
        )
    bad = _tilewise_violation(cols, row_group, len(v))
    if bad:
        return HardEvidence(
            HardReason.SIGN_STRUCTURE,
            f"columns {bad[0]} and {bad[1]} are neither orthogonal nor copies on every row tile",
            bad,
            {"axis": "col"},
        )
    r, row_class, row_reps, tau_r = _line_classes(signs, row_group, row_order, len(v))
    rc, col_class, col_reps, tau_c = _line_classes(cols, col_group, col_order, len(w))
    if rc != r:
        raise InternalError("row and column sign ranks differ")
    return TileDecomposition(
        v, w, row_group, col_group, row_order, col_order, signs, r,
        row_class, col_class, row_reps, col_reps, tau_r, tau_c,
    )


# ----------------------------------------------------------------- canonical form


@dataclass(frozen=True)
class TransformChain:
    """How the canonical form arises from the component (original indices).

    Stage 1 reorders rows by ``row_order`` and columns by ``col_order``.
    Stage 2 merges each class (P, N) of ``row_classes[kappa][a]`` into one
    index with weights D = |P| + |N| and O = |P| - |N|.  Stage 3 multiplies
    row (kappa, a) by ``row_signs[kappa][a]`` (and likewise for columns),
    negating the matching O entry.
    """

    row_order: tuple[int, ...]
    col_order: tuple[int, ...]
    row_classes: tuple[tuple[tuple[tuple[int, ...], tuple[int, ...]], ...], ...]
    col_classes: tuple[tuple[tuple[tuple[int, ...], tuple[int, ...]], ...], ...]
    row_signs: tuple[tuple[int, ...], ...]
    col_signs: tuple[tuple[int, ...], ...]
    rho: tuple[int, ...]
    gamma: tuple[int, ...]


@dataclass(frozen=True)
class CanonicalForm:
    """Block ``v w^T (x) H`` with D = diag(alpha) (x) I_r and O = diag(beta) (x) I_{r;Lambda}.

    For non-bipartite components only the row side is meaningful (the column
    data mirrors it) and the pdpf is (B, D^R, O^R).  For bipartite components
    the pdpf is the bipartite matrix with block B and weights D^R + D^C,
    O^R + O^C.
    """

    indices: tuple[int, ...]
    bipartite: bool
    symmetric: bool
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    v: tuple[Fraction, ...]
    w: tuple[Fraction, ...]
    h: tuple[tuple[int, ...], ...]
    alpha_r: tuple[Fraction, ...]
    alpha_c: tuple[Fraction, ...]
    beta_r: tuple[Fraction, ...]
    beta_c: tuple[Fraction, ...]
    lam_r: tuple[int, ...]
    lam_c: tuple[int, ...]
    chain: TransformChain

    @property
    def r(self) -> int:
        return len(self.h)

    def block(self) -> Grid:
        vw = tuple(tuple(a * b for b in self.w) for a in self.v)
        return kron(vw, tuple(tuple(Fraction(e) for e in row) for row in self.h))

    def _weights(self, alpha, beta, lam) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        d = tuple(a for a in alpha for _ in range(self.r))
        o = tuple(b if t in lam else Fraction(0) for b in beta for t in range(self.r))
        return d, o

    def instance(self) -> PdpfInstance:
        """The canonical pdpf, whose partition function equals the component's."""
        dr, orr = self._weights(self.alpha_r, self.beta_r, set(self.lam_r))
        blk = self.block()
        if not self.bipartite:
            return PdpfInstance(SymMatrix(blk), DiagMatrix(dr), DiagMatrix(orr))
        dc, oc = self._weights(self.alpha_c, self.beta_c, set(self.lam_c))
        return PdpfInstance(_bipartite_matrix(blk), DiagMatrix(dr + dc), DiagMatrix(orr + oc))


def _bipartite_matrix(blk: Sequence[Sequence[Fraction]]) -> SymMatrix:
    nr, nc = len(blk), len(blk[0])
    zero = Fraction(0)
    top = [list([zero] * nr) + list(row) for row in blk]
    bottom = [[blk[i][j] for i in range(nr)] + [zero] * nc for j in range(nc)]
    return SymMatrix.from_rows(top + bottom)


def is_hadamard_signs(h: Sequence[Sequence[int]]) -> bool:
    n = len(h)
    return all(
        sum(a * b for a, b in zip(h[i], h[j])) == (n if i == j else 0)
        for i in range(n)
        for j in range(i, n)
    )


def _side_weights(
    signs_lines: Sequence[Sequence[int]],
    group: Sequence[int],
    line_class: Sequence[int],
    reps: Sequence[Sequence[int]],
) -> tuple[list[list[tuple[tuple[int, ...], tuple[int, ...]]]], list[list[Fraction]], list[list[Fraction]]]:
    """P/N classes per (kappa, a) and the resulting D and pre-negation O tiles."""
    classes, dtiles, otiles = [], [], []
    for kappa, rep in enumerate(reps):
        cl, dt, ot = [], [], []
        for a, k in enumerate(rep):
            pos, neg = [], []
            for i in range(len(signs_lines)):
                if group[i] == kappa and line_class[i] == a:
                    (pos if signs_lines[i][0] == signs_lines[k][0] else neg).append(i)
            cl.append((tuple(pos), tuple(neg)))
            dt.append(Fraction(len(pos) + len(neg)))
            ot.append(Fraction(len(pos) - len(neg)))
        classes.append(cl)
        dtiles.append(dt)
        otiles.append(ot)
    return classes, dtiles, otiles


def _o_support(
    otiles: Sequence[Sequence[Fraction]], side: str
) -> tuple[tuple[int, ...], tuple[Fraction, ...]] | HardEvidence:
    lam: tuple[int, ...] | None = None
    betas = []
    for kappa, tile in enumerate(otiles):
        support = tuple(a for a, x in enumerate(tile) if x != 0)
        if not support:
            betas.append(Fraction(0))
            continue
        values = {tile[a] for a in support}
        if len(values) != 1 or (lam is not None and support != lam):
            return HardEvidence(
                HardReason.O_SHAPE,
                f"{side} tile {kappa}: odd-degree weights {list(map(str, tile))} are not beta * I_Lambda"
                f" for a common Lambda",
                (),
                {"side": side, "tile": kappa, "tiles": [[str(x) for x in t] for t in otiles]},
            )
        lam = support
        betas.append(values.pop())
    return (lam or ()), tuple(betas)


def _uniform(dtiles: Sequence[Sequence[Fraction]], side: str) -> tuple[Fraction, ...] | HardEvidence:
    alphas = []
    for kappa, tile in enumerate(dtiles):
        if len(set(tile)) != 1:
            return HardEvidence(
                HardReason.NONUNIFORM_D,
                f"{side} tile {kappa}: even-degree weights {list(map(str, tile))} are not constant",
                (),
                {"side": side, "tile": kappa, "tiles": [[str(x) for x in t] for t in dtiles]},
            )
        alphas.append(tile[0])
    return tuple(alphas)


def canonicalize_connected(comp: MatrixComponent) -> CanonicalForm | HardEvidence:
    """Rewrite a connected component into the canonical ``v w^T (x) H`` form."""
    if comp.is_zero:
        raise ValueError("zero 1x1 components have no canonical form")
    blk = comp.block
    fact = abs_rank1_factor(blk)
    if fact is None:
        i, j, k, l = find_rank2_minor(blk)
        idx = (comp.rows[i], comp.rows[j], comp.cols[k], comp.cols[l])
        return HardEvidence(
            HardReason.ABS_RANK,
            f"|A| minor on rows {idx[0]},{idx[1]} and columns {idx[2]},{idx[3]} is nonzero",
            idx,
        )
    td = tile_decompose(blk, fact)
    if isinstance(td, HardEvidence):
        names = comp.rows if td.data["axis"] == "row" else comp.cols
        idx = tuple(names[t] for t in td.indices)
        return HardEvidence(
            td.reason,
            f"{td.data['axis']}s {idx[0]} and {idx[1]} are neither orthogonal nor copies on every tile",
            idx,
            td.data,
        )
    symmetric = len(comp.rows) == len(comp.cols) and all(
        blk[i][j] == blk[j][i] for i in range(len(blk)) for j in range(i)
    )
    sign_rows = td.signs
    sign_cols = tuple(zip(*td.signs))
    r = td.r
    row_classes, d_r, o_r = _side_weights(sign_rows, td.row_group, td.row_class, td.row_reps)
    col_classes, d_c, o_c = _side_weights(sign_cols, td.col_group, td.col_class, td.col_reps)

    rho = tuple(-1 if o_r[0][a] < 0 else 1 for a in range(r))
    gamma = tuple(-1 if o_c[0][b] < 0 else 1 for b in range(r))
    row_signs = tuple(tuple(rho[a] * td.tau_r[k][a] for a in range(r)) for k in range(len(td.v)))
    col_signs = tuple(tuple(gamma[b] * td.tau_c[k][b] for b in range(r)) for k in range(len(td.w)))
    o_r = [[row_signs[k][a] * o_r[k][a] for a in range(r)] for k in range(len(td.v))]
    o_c = [[col_signs[k][b] * o_c[k][b] for b in range(r)] for k in range(len(td.w))]
    h = tuple(
        tuple(rho[a] * gamma[b] * sign_rows[td.row_reps[0][a]][td.col_reps[0][b]] for b in range(r))
        for a in range(r)
    )

    # block reconstruction and nonnegativity are consequences of the tiling
    for k, reps_k in enumerate(td.row_reps):
        for l, reps_l in enumerate(td.col_reps):
            for a in range(r):
                for b in range(r):
                    lhs = row_signs[k][a] * col_signs[l][b] * blk[reps_k[a]][reps_l[b]]
                    if lhs != td.v[k] * td.w[l] * h[a][b]:
                        raise InternalError("canonical block does not reconstruct")
    if any(x < 0 for x in o_r[0]) or any(x < 0 for x in o_c[0]):
        raise InternalError("first odd-degree tile is negative after sign transfer")

    chain = TransformChain(
        row_order=tuple(comp.rows[i] for i in td.row_order),
        col_order=tuple(comp.cols[j] for j in td.col_order),
        row_classes=tuple(
            tuple((tuple(comp.rows[i] for i in p), tuple(comp.rows[i] for i in n)) for p, n in cl)
            for cl in row_classes
        ),
        col_classes=tuple(
            tuple((tuple(comp.cols[j] for j in p), tuple(comp.cols[j] for j in n)) for p, n in cl)
            for cl in col_classes
        ),
        row_signs=row_signs,
        col_signs=col_signs,
        rho=rho,
        gamma=gamma,
    )

    if not is_hadamard_signs(h):
        return HardEvidence(
            HardReason.NOT_HADAMARD, "core sign matrix H has H H^T != r I", (), {"h": [list(row) for row in h]}
        )
    alpha_r = _uniform(d_r, "row")
    if isinstance(alpha_r, HardEvidence):
        return alpha_r
    alpha_c = _uniform(d_c, "col")
    if isinstance(alpha_c, HardEvidence):
        return alpha_c
    shape_r = _o_support(o_r, "row")
    if isinstance(shape_r, HardEvidence):
        return shape_r
    shape_c = _o_support(o_c, "col")
    if isinstance(shape_c, HardEvidence):
        return shape_c
    lam_r, beta_r = shape_r
    lam_c, beta_c = shape_c
    return CanonicalForm(
        indices=comp.indices,
        bipartite=comp.bipartite,
        symmetric=symmetric,
        rows=comp.rows,
        cols=comp.cols,
        v=td.v,
        w=td.w,
        h=h,
        alpha_r=alpha_r,
        alpha_c=alpha_c,
        beta_r=beta_r,
        beta_c=beta_c,
        lam_r=lam_r,
        lam_c=lam_c,
        chain=chain,
    )


def canonical_stages(a: SymMatrix, cf: CanonicalForm) -> list[tuple[str, PdpfInstance]]:
    """Replay the transform chain, one pdpf per stage; all share one partition function."""
    ch = cf.chain
    stages = [("component", PdpfInstance.plain(a.principal(cf.indices)))]
    if cf.bipartite:
        stages.append(("reordered", PdpfInstance.plain(a.principal(ch.row_order + ch.col_order))))
    else:
        stages.append(("reordered", PdpfInstance.plain(a.principal(ch.row_order))))

    def flatten(classes):
        reps = [p[0] for cl in classes for p, _ in cl]
        d = [Fraction(len(p) + len(n)) for cl in classes for p, n in cl]
        o = [Fraction(len(p) - len(n)) for cl in classes for p, n in cl]
        return reps, d, o

    rr, dr, orr = flatten(ch.row_classes)
    sr = [s for signs in ch.row_signs for s in signs]
    if cf.bipartite:
        cr, dc, oc = flatten(ch.col_classes)
        sc = [s for signs in ch.col_signs for s in signs]
        blk = tuple(tuple(a[i, j] for j in cr) for i in rr)
        merged = PdpfInstance(_bipartite_matrix(blk), DiagMatrix(tuple(dr + dc)), DiagMatrix(tuple(orr + oc)))
        signs = sr + sc
    else:
        merged = PdpfInstance(a.principal(rr), DiagMatrix(tuple(dr)), DiagMatrix(tuple(orr)))
        signs = sr
    stages.append(("pm-twin reduced", merged))
    negated = merged
    for t, s in enumerate(signs):
        if s < 0:
            negated = negate_row_col(negated, t)
    stages.append(("sign normalised", negated))
    stages.append(("canonical", cf.instance()))
    return stages
