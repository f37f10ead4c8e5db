"""Decide, for a symmetric rational matrix A, whether Z_A is tractable or #P-hard.

Each connected component of A is canonicalised (``structure``), then its
Hadamard core is checked for the group condition, represented over GF(2) and
tested for linearity of the pinned sets and degree of the correction
polynomials (``hadamard``).  The matrix is tractable exactly when every
component passes; otherwise the first failing component supplies evidence.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .core import SymMatrix
from .formats import format_rational
from .gf2 import SubspaceBasis, compose_linear, is_linear_subspace, poly_degree
from .hadamard import (
    Representation,
    Signs,
    check_degree,
    check_linearity,
    construct_representation,
    group_condition,
    is_hadamard,
    is_positive_for,
    negate_signs,
)
from .structure import (
    CanonicalForm,
    HardEvidence,
    HardReason,
    InternalError,
    MatrixComponent,
    canonical_stages,
    canonicalize_connected,
    matrix_components,
)


@dataclass(frozen=True)
class ComponentWitness:
    """Evaluation plan for one matrix component.

    ``kind`` is ``"zero"`` for an isolated zero index, ``"rank1"`` when the
    Hadamard core has order 1 and ``"hadamard"`` otherwise.  ``h_pos`` is the
    core sign matrix after the optional flip to -H; the representation and
    coordinatisations refer to it.
    """

    kind: str
    indices: tuple[int, ...]
    canonical: CanonicalForm | None = None
    flipped: bool = False
    h_pos: Signs | None = None
    rep: Representation | None = None
    phi_r: SubspaceBasis | None = None
    phi_c: SubspaceBasis | None = None

    @property
    def lam_r(self) -> tuple[int, ...]:
        return self.canonical.lam_r

    @property
    def lam_c(self) -> tuple[int, ...]:
        cf = self.canonical
        return cf.lam_c if cf.bipartite else cf.lam_r


@dataclass(frozen=True)
class TractabilityWitness:
    matrix: SymMatrix
    components: tuple[ComponentWitness, ...]


@dataclass(frozen=True)
class Verdict:
    tractable: bool
    witness: TractabilityWitness | None
    evidence: HardEvidence | None
    failing_component: tuple[int, ...]
    trail: tuple[str, ...]

    @property
    def arm(self) -> str:
        return "TRACTABLE" if self.tractable else "HARD"


def _fmt_set(s) -> str:
    return "{" + ",".join(str(i) for i in s) + "}"


def classify_connected(comp: MatrixComponent) -> tuple[ComponentWitness | HardEvidence, list[str]]:
    """Run the pipeline on one component; returns the outcome and its condition trail."""
    label = f"component {_fmt_set(comp.indices)}"
    if comp.is_zero:
        return ComponentWitness("zero", comp.indices), [f"{label}: isolated zero entry, contributes only to edgeless graphs"]
    shape = "bipartite" if comp.bipartite else "non-bipartite"
    trail = [f"{label}: {shape}, block {len(comp.rows)}x{len(comp.cols)}"]
    cf = canonicalize_connected(comp)
    if isinstance(cf, HardEvidence):
        trail.append(f"{label}: FAIL {cf.reason.value}: {cf.message}")
        return cf, trail
    r = cf.r
    trail.append(f"{label}: |B| has rank 1 with {len(cf.v)}x{len(cf.w)} value classes")
    trail.append(f"{label}: sign tiles consistent, core order r={r}")
    trail.append(f"{label}: H is Hadamard; even weights uniform; odd weights on Lambda^R={_fmt_set(cf.lam_r)}"
                 + (f", Lambda^C={_fmt_set(cf.lam_c)}" if cf.bipartite else ""))
    lam_r = cf.lam_r
    lam_c = cf.lam_c if cf.bipartite else cf.lam_r
    h = cf.h
    flipped = not is_positive_for(h, lam_r, lam_c)
    h_pos = negate_signs(h) if flipped else h
    if flipped:
        trail.append(f"{label}: H not positive for the pinned sets, using -H with sign (-1)^|E|")
    if not group_condition(h_pos):
        ev = HardEvidence(HardReason.GROUP_CONDITION, "row products of H do not form one group", (),
                          {"h": [list(row) for row in h_pos]})
        trail.append(f"{label}: FAIL group condition")
        return ev, trail
    if r & (r - 1):
        raise InternalError("group condition holds for an order that is not a power of two")
    trail.append(f"{label}: group condition holds")
    rep = construct_representation(h_pos, lam_r, lam_c)
    trail.append(f"{label}: represented as x_pi.y + g^R(x) + g^C(y) with pi={list(rep.pi)}, "
                 f"g^R={rep.g_r}, g^C={rep.g_c}")
    phis = check_linearity(rep, lam_r, lam_c)
    if phis is None:
        images = {
            "k": rep.k,
            "row_image": sorted(rep.tau_r[i] for i in lam_r),
            "col_image": sorted(rep.tau_c[i] for i in lam_c),
        }
        trail.append(f"{label}: FAIL linearity")
        return HardEvidence(HardReason.LINEARITY, "pinned index set is not the image of a subspace", (), images), trail
    phi_r, phi_c = phis
    trail.append(f"{label}: linearity holds (dimensions {phi_r.dim}, {phi_c.dim})")
    if not check_degree(rep, phi_r, phi_c):
        gr = compose_linear(rep.g_r, phi_r)
        gc = compose_linear(rep.g_c, phi_c)
        data = {
            "row_poly": {"nvars": gr.nvars, "monomials": sorted(gr.monomials)},
            "col_poly": {"nvars": gc.nvars, "monomials": sorted(gc.monomials)},
        }
        trail.append(f"{label}: FAIL degree: g^R o phi^R = {gr}, g^C o phi^C = {gc}")
        return HardEvidence(HardReason.DEGREE, "correction polynomial has degree above 2 on the subspace", (), data), trail
    trail.append(f"{label}: degree condition holds")
    kind = "rank1" if r == 1 else "hadamard"
    return ComponentWitness(kind, comp.indices, cf, flipped, h_pos, rep, phi_r, phi_c), trail


def classify(a: SymMatrix) -> Verdict:
    """Tractable iff every component passes; nonnegative inputs are cross-checked
    against the block-rank criterion."""
    verdict = _classify_components(a)
    if a.is_nonnegative():
        expected = block_rank_criterion(a)
        if expected != verdict.tractable:
            raise InternalError("pipeline disagrees with the block-rank criterion on a nonnegative matrix")
        note = "nonnegative matrix: block-rank criterion agrees"
        verdict = Verdict(verdict.tractable, verdict.witness, verdict.evidence,
                          verdict.failing_component, verdict.trail + (note,))
    return verdict


def _classify_components(a: SymMatrix) -> Verdict:
    witnesses = []
    trail: list[str] = []
    for comp in matrix_components(a).components:
        outcome, steps = classify_connected(comp)
        trail.extend(steps)
        if isinstance(outcome, HardEvidence):
            return Verdict(False, None, outcome, comp.indices, tuple(trail))
        witnesses.append(outcome)
    return Verdict(True, TractabilityWitness(a, tuple(witnesses)), None, (), tuple(trail))


def block_rank_criterion(a: SymMatrix) -> bool:
    """Tractability of a nonnegative matrix: every block has rank 1."""
    if not a.is_nonnegative():
        raise ValueError("criterion applies to nonnegative matrices only")
    for comp in matrix_components(a).components:
        if comp.is_zero:
            continue
        if _rank([list(row) for row in comp.block]) != 1:
            return False
    return True


def _rank(rows: list[list[Fraction]]) -> int:
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


# ------------------------------------------------------------------ audits


def recheck_hard(a: SymMatrix, verdict: Verdict) -> bool:
    """Re-verify the violation a Hard verdict states, independently where possible."""
    ev = verdict.evidence
    if verdict.tractable or ev is None:
        return False
    comp = next(c for c in matrix_components(a).components if c.indices == verdict.failing_component)
    if ev.reason is HardReason.ABS_RANK:
        i, j, k, l = ev.indices
        if not ({i, j} <= set(comp.rows) and {k, l} <= set(comp.cols)):
            return False
        return abs(a[i, k] * a[j, l]) != abs(a[i, l] * a[j, k])
    if ev.reason is HardReason.SIGN_STRUCTURE:
        p, q = ev.indices
        if ev.data["axis"] == "row":
            lines, across = comp.rows, comp.cols
            entry = lambda s, t: a[s, t]  # noqa: E731
        else:
            lines, across = comp.cols, comp.rows
            entry = lambda s, t: a[t, s]  # noqa: E731
        if not {p, q} <= set(lines):
            return False
        groups: dict[Fraction, list[int]] = {}
        for t in across:
            groups.setdefault(abs(entry(p, t)), []).append(t)
        ips = []
        for members in groups.values():
            ip = sum((1 if entry(p, t) * entry(q, t) > 0 else -1) for t in members)
            ips.append((ip, len(members)))
        orth = all(ip == 0 for ip, _ in ips)
        copy = all(ip == n for ip, n in ips) or all(ip == -n for ip, n in ips)
        return not orth and not copy
    # remaining reasons: check the stated data, then that the pipeline reproduces it
    again, _ = classify_connected(comp)
    if again != ev:
        return False
    d = ev.data
    if ev.reason is HardReason.NOT_HADAMARD:
        return not is_hadamard(d["h"])
    if ev.reason is HardReason.NONUNIFORM_D:
        return len(set(d["tiles"][d["tile"]])) > 1
    if ev.reason is HardReason.O_SHAPE:
        tiles = [[Fraction(x) for x in t] for t in d["tiles"]]
        supports = {tuple(i for i, x in enumerate(t) if x) for t in tiles} - {()}
        nonconst = any(len({x for x in t if x}) > 1 for t in tiles)
        return len(supports) > 1 or nonconst
    if ev.reason is HardReason.GROUP_CONDITION:
        return not group_condition(d["h"])
    if ev.reason is HardReason.LINEARITY:
        return not (is_linear_subspace(d["row_image"]) and is_linear_subspace(d["col_image"]))
    if ev.reason is HardReason.DEGREE:
        degs = [max((bin(m).count("1") for m in d[key]["monomials"]), default=0) for key in ("row_poly", "col_poly")]
        return max(degs) > 2
    return False


def recheck_witness(a: SymMatrix, verdict: Verdict) -> bool:
    """Re-evaluate every stored condition of a Tractable witness."""
    if not verdict.tractable or verdict.witness is None or verdict.witness.matrix != a:
        return False
    for cw in verdict.witness.components:
        if cw.kind == "zero":
            (i,) = cw.indices
            if any(a[i, j] for j in range(a.order)):
                return False
            continue
        cf = cw.canonical
        stages = dict(canonical_stages(a, cf))
        if stages["sign normalised"] != stages["canonical"]:
            return False
        h = cw.h_pos
        expected = negate_signs(cf.h) if cw.flipped else cf.h
        if h != expected or not is_hadamard(h) or not group_condition(h):
            return False
        if not is_positive_for(h, cw.lam_r, cw.lam_c):
            return False
        rep = cw.rep
        if not rep.represents(h):
            return False
        if cw.lam_r and rep.rho_r[0] not in cw.lam_r:
            return False
        if cw.lam_c and rep.rho_c[0] not in cw.lam_c:
            return False
        for lam, phi, rho in ((cw.lam_r, cw.phi_r, rep.rho_r), (cw.lam_c, cw.phi_c, rep.rho_c)):
            if lam and {rho[x] for x in phi.image()} != set(lam):
                return False
        if poly_degree(compose_linear(rep.g_r, cw.phi_r)) > 2 or poly_degree(compose_linear(rep.g_c, cw.phi_c)) > 2:
            return False
    return True


# ------------------------------------------------------------------ reports


def _rats(xs) -> list[str]:
    return [format_rational(x) for x in xs]


def _component_dict(cw: ComponentWitness) -> dict[str, Any]:
    out: dict[str, Any] = {"kind": cw.kind, "indices": list(cw.indices)}
    if cw.kind == "zero":
        return out
    cf = cw.canonical
    out.update(
        bipartite=cf.bipartite,
        symmetric=cf.symmetric,
        rows=list(cf.rows),
        cols=list(cf.cols),
        r=cf.r,
        v=_rats(cf.v),
        w=_rats(cf.w),
        alpha_r=_rats(cf.alpha_r),
        beta_r=_rats(cf.beta_r),
        lambda_r=list(cf.lam_r),
        h=[list(row) for row in cf.h],
        flipped=cw.flipped,
        pi=list(cw.rep.pi),
        rho_r=list(cw.rep.rho_r),
        rho_c=list(cw.rep.rho_c),
        g_r=str(cw.rep.g_r),
        g_c=str(cw.rep.g_c),
        phi_r=list(cw.phi_r.rows),
        phi_c=list(cw.phi_c.rows),
    )
    if cf.bipartite:
        out.update(alpha_c=_rats(cf.alpha_c), beta_c=_rats(cf.beta_c), lambda_c=list(cf.lam_c))
    return out


def verdict_to_dict(v: Verdict) -> dict[str, Any]:
    out: dict[str, Any] = {"verdict": v.arm, "trail": list(v.trail)}
    if v.tractable:
        out["components"] = [_component_dict(cw) for cw in v.witness.components]
    else:
        ev = v.evidence
        out["evidence"] = {
            "reason": ev.reason.value,
            "summary": ev.summary,
            "message": ev.message,
            "component": list(v.failing_component),
            "indices": list(ev.indices),
            "data": ev.data,
        }
    return out


def render_verdict(v: Verdict, as_json: bool = False) -> str:
    if as_json:
        return json.dumps(verdict_to_dict(v), indent=2, sort_keys=True)
    head = "TRACTABLE" if v.tractable else f"HARD ({v.evidence.summary})"
    lines = [head] + [f"  {step}" for step in v.trail]
    if not v.tractable:
        lines.append(f"  evidence: {v.evidence.message}")
    return "\n".join(lines)
