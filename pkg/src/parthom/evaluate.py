"""Polynomial-time evaluation of Z_A(G) for matrices with a tractability witness.

Per matrix component the canonical block is ``v w^T (x) H``, so the partition
function splits into a rank-one factor (a closed product formula) and a
Hadamard factor (a signed count of zeros of a degree-2 GF(2) polynomial).
Bipartite components are evaluated per orientation of the graph's
bipartition and the two orientations are added.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .classify import ComponentWitness, TractabilityWitness, Verdict, classify
from .core import DiagMatrix, Multigraph, PdpfInstance, SymMatrix, bipartition, graph_components
from .gf2 import Gf2Poly, QuadBuilder, SubspaceBasis, compose_linear
from .hadamard import Representation
from .structure import HardEvidence, matrix_components, standard_conversion


class HardMatrixError(ValueError):
    """Evaluation was requested for a matrix classified as hard."""

    def __init__(self, verdict: Verdict) -> None:
        self.verdict = verdict
        super().__init__(f"matrix is #P-hard: {verdict.evidence.summary} ({verdict.evidence.message})")


@dataclass(frozen=True)
class DirectedMultigraph:
    vertex_count: int
    arcs: tuple[tuple[int, int, int], ...]   # (tail, head, multiplicity)

    def degrees(self) -> tuple[list[int], list[int]]:
        out = [0] * self.vertex_count
        inn = [0] * self.vertex_count
        for u, v, k in self.arcs:
            out[u] += k
            inn[v] += k
        return out, inn


@dataclass(frozen=True)
class DirectionalValue:
    z_forward: Fraction
    z_backward: Fraction

    @property
    def total(self) -> Fraction:
        return self.z_forward + self.z_backward


def eval_rank1_directed(
    a_vec: Sequence[Fraction], b_vec: Sequence[Fraction], d: DiagMatrix, g: DirectedMultigraph
) -> Fraction:
    """Product over vertices of sum_i a_i^outdeg b_i^indeg D_ii."""
    if not (len(a_vec) == len(b_vec) == d.order):
        raise ValueError("vector lengths and weight order disagree")
    out, inn = g.degrees()
    total = Fraction(1)
    for v in range(g.vertex_count):
        total *= sum((a ** out[v] * b ** inn[v] * w for a, b, w in zip(a_vec, b_vec, d.diagonal)), Fraction(0))
        if not total:
            break
    return total


def _oriented(g: Multigraph, tails: set[int]) -> DirectedMultigraph:
    """Orient every edge away from ``tails`` (loops and same-side edges keep their order)."""
    arcs = []
    for u, v, k in g.edges:
        arcs.append((v, u, k) if v in tails and u not in tails else (u, v, k))
    return DirectedMultigraph(g.vertex_count, tuple(arcs))


def _rank1_vectors(block: Sequence[Sequence[Fraction]]) -> tuple[list[Fraction], list[Fraction]]:
    """block = x y^T, or ValueError when the rank exceeds one."""
    i0, j0 = next((i, j) for i, row in enumerate(block) for j, e in enumerate(row) if e)
    pivot = block[i0][j0]
    x = [row[j0] / pivot for row in block]
    y = list(block[i0])
    if any(block[i][j] != x[i] * y[j] for i in range(len(block)) for j in range(len(y))):
        raise ValueError("a block of the matrix has rank at least 2")
    return x, y


def eval_rank1_pdpf(c: SymMatrix, d: DiagMatrix, o: DiagMatrix, g: Multigraph) -> Fraction:
    """Z_{C,D,O}(G) for a matrix whose blocks all have rank one."""
    a, delta = standard_conversion(PdpfInstance(c, d, o))
    comps = matrix_components(a).components
    plans = []
    for comp in comps:
        if comp.is_zero:
            plans.append(("zero", comp, None, None))
            continue
        x, y = _rank1_vectors(comp.block)
        plans.append(("bip" if comp.bipartite else "sym", comp, x, y))
    total = Fraction(1)
    for gc in graph_components(g):
        sub = gc.graph
        value = Fraction(0)
        for kind, comp, x, y in plans:
            weights = DiagMatrix(tuple(delta[i] for i in comp.indices))
            if kind == "zero":
                value += delta[comp.indices[0]] if sub.edge_count == 0 else 0
            elif kind == "sym":
                value += eval_rank1_directed(x, y, weights, _oriented(sub, set()))
            elif sub.edge_count == 0:
                value += sum(weights.diagonal, Fraction(0))
            else:
                split = bipartition(sub)
                if split is None:
                    continue
                pos = {idx: t for t, idx in enumerate(comp.indices)}
                a_vec = [Fraction(0)] * len(comp.indices)
                b_vec = [Fraction(0)] * len(comp.indices)
                for i, idx in enumerate(comp.rows):
                    a_vec[pos[idx]] = x[i]
                for j, idx in enumerate(comp.cols):
                    b_vec[pos[idx]] = y[j]
                side_u, side_w = split
                value += eval_rank1_directed(a_vec, b_vec, weights, _oriented(sub, set(side_u)))
                value += eval_rank1_directed(a_vec, b_vec, weights, _oriented(sub, set(side_w)))
        total *= value
        if not total:
            break
    return total


# ------------------------------------------------------------------ Hadamard part


class _SideVars:
    """Per-vertex GF(2) variables for one side of the representation."""

    def __init__(self, k: int, pinned: bool, phi: SubspaceBasis, g: Gf2Poly) -> None:
        self.k = k
        self.pinned = pinned
        self.forms = phi.coordinate_forms()
        self.dim = phi.dim
        self.g_restricted = compose_linear(g, phi)

    def allocate(self, qb: QuadBuilder, odd: bool) -> list[int] | None:
        """Linear forms of the vertex's k coordinates; None when an odd vertex has no pinned index."""
        if not odd:
            start = qb.new_vars(self.k)
            return [1 << (start + i) for i in range(self.k)]
        if not self.pinned:
            return None
        start = qb.new_vars(self.dim)
        for mono in self.g_restricted.monomials:
            bits = [t for t in range(self.dim) if mono >> t & 1]
            if not bits:
                qb.add_const(1)
            elif len(bits) == 1:
                qb.add_linear(1 << (start + bits[0]))
            else:
                qb.add_pair(start + bits[0], start + bits[1])
        return [f << start for f in self.forms]


def _signed_count(
    g: Multigraph,
    sides: Sequence[_SideVars],
    side_of: Sequence[int],
    first: Sequence[bool],
    pi: Sequence[int],
) -> int:
    """s0 - s1 of the polynomial h'_G; the edge term is X^u_pi . X^w with u the 'first' endpoint."""
    deg = g.degrees()
    qb = QuadBuilder()
    forms = []
    for v in range(g.vertex_count):
        f = sides[side_of[v]].allocate(qb, deg[v] % 2 == 1)
        if f is None:
            return 0
        forms.append(f)
    for u, v, k in g.edges:
        if k % 2 == 0:
            continue
        if not first[u] and first[v]:
            u, v = v, u
        fu, fv = forms[u], forms[v]
        for i in range(len(pi)):
            qb.add_product(fu[pi[i]], fv[i])
    return qb.exponential_sum()


def eval_hadamard_symmetric(
    rep: Representation,
    lam: Sequence[int],
    phi: SubspaceBasis,
    g: Multigraph,
    *,
    flipped: bool = False,
) -> Fraction:
    """Z_{H, I, I_Lambda}(G) for a symmetric H represented by ``rep``.

    ``rep`` represents the positive matrix; with ``flipped`` the value is for
    its negation, which differs by (-1)^|E|.
    """
    side = _SideVars(rep.k, bool(lam), phi, rep.g_r)
    n = g.vertex_count
    value = _signed_count(g, [side], [0] * n, [True] * n, rep.pi)
    if flipped and g.edge_count % 2:
        value = -value
    return Fraction(value)


def eval_hadamard_bipartite_directional(
    rep: Representation,
    lam_r: Sequence[int],
    lam_c: Sequence[int],
    phi_r: SubspaceBasis,
    phi_c: SubspaceBasis,
    g: Multigraph,
    split: tuple[Sequence[int], Sequence[int]],
    *,
    flipped: bool = False,
) -> DirectionalValue:
    """Z^-> (side U on rows of H) and Z^<- (side U on columns) for Z_{M, I, I_Lambda}(G)
    with M the bipartisation of H and G connected bipartite with sides ``split``."""
    side_u, _ = split
    in_u = [False] * g.vertex_count
    for v in side_u:
        in_u[v] = True
    rows = _SideVars(rep.k, bool(lam_r), phi_r, rep.g_r)
    cols = _SideVars(rep.k, bool(lam_c), phi_c, rep.g_c)
    forward = _signed_count(g, [rows, cols], [0 if u else 1 for u in in_u], in_u, rep.pi)
    in_w = [not u for u in in_u]
    backward = _signed_count(g, [rows, cols], [0 if w else 1 for w in in_w], in_w, rep.pi)
    if flipped and g.edge_count % 2:
        forward, backward = -forward, -backward
    return DirectionalValue(Fraction(forward), Fraction(backward))


# ------------------------------------------------------------------ assembly


def _weight_sum(vals: Sequence[Fraction], alpha: Sequence[Fraction], beta: Sequence[Fraction], deg: int) -> Fraction:
    weights = alpha if deg % 2 == 0 else beta
    return sum((x**deg * t for x, t in zip(vals, weights)), Fraction(0))


def _component_value(cw: ComponentWitness, g: Multigraph) -> Fraction:
    """Z of one matrix component on one connected graph."""
    if cw.kind == "zero":
        return Fraction(1) if g.edge_count == 0 else Fraction(0)
    cf = cw.canonical
    rep = cw.rep
    if not cf.bipartite:
        vw = SymMatrix(tuple(tuple(a * b for b in cf.w) for a in cf.v))
        rank1 = eval_rank1_pdpf(vw, DiagMatrix(cf.alpha_r), DiagMatrix(cf.beta_r), g)
        if not rank1:
            return Fraction(0)
        return rank1 * eval_hadamard_symmetric(rep, cf.lam_r, cw.phi_r, g, flipped=cw.flipped)
    split = bipartition(g)
    if split is None:
        return Fraction(0)
    deg = g.degrees()
    side_u, side_w = split
    fwd = Fraction(1)
    bwd = Fraction(1)
    for u in side_u:
        fwd *= _weight_sum(cf.v, cf.alpha_r, cf.beta_r, deg[u])
        bwd *= _weight_sum(cf.w, cf.alpha_c, cf.beta_c, deg[u])
    for w in side_w:
        fwd *= _weight_sum(cf.w, cf.alpha_c, cf.beta_c, deg[w])
        bwd *= _weight_sum(cf.v, cf.alpha_r, cf.beta_r, deg[w])
    if not fwd and not bwd:
        return Fraction(0)
    had = eval_hadamard_bipartite_directional(
        rep, cf.lam_r, cf.lam_c, cw.phi_r, cw.phi_c, g, split, flipped=cw.flipped
    )
    return fwd * had.z_forward + bwd * had.z_backward


def eval_tractable(a: SymMatrix, w: TractabilityWitness, g: Multigraph) -> Fraction:
    """Z_A(G) from a tractability witness for A."""
    if w.matrix != a:
        raise ValueError("witness was produced for a different matrix")
    total = Fraction(1)
    for gc in graph_components(g):
        total *= sum((_component_value(cw, gc.graph) for cw in w.components), Fraction(0))
        if not total:
            break
    return total


def evaluate(a: SymMatrix, g: Multigraph) -> Fraction:
    """Classify A, then evaluate; raises HardMatrixError for hard matrices."""
    verdict = classify(a)
    if not verdict.tractable:
        raise HardMatrixError(verdict)
    return eval_tractable(a, verdict.witness, g)


__all__ = [
    "DirectedMultigraph",
    "DirectionalValue",
    "HardEvidence",
    "HardMatrixError",
    "eval_hadamard_bipartite_directional",
    "eval_hadamard_symmetric",
    "eval_rank1_directed",
    "eval_rank1_pdpf",
    "eval_tractable",
    "evaluate",
]
