"""Exponential-time reference evaluators.

These enumerate every configuration V -> [m] and serve as ground truth for
the transforms and the polynomial-time evaluator.  Arithmetic is exact: the
instance is scaled to integers by common denominators, the enumeration runs
over machine-free Python ints, and the scale is divided out at the end.
"""
from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Sequence

from .core import DiagMatrix, LabelledGraph, Multigraph, PdpfInstance, SymMatrix

DEFAULT_GUARD = 2**24
GUARD_ENV = "PARTHOM_ORACLE_GUARD"


class OracleGuardError(RuntimeError):
    """The configuration space is larger than the enumeration guard."""


def oracle_guard() -> int:
    raw = os.environ.get(GUARD_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_GUARD
    try:
        value = int(raw)
    except ValueError:
        raise OracleGuardError(f"{GUARD_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise OracleGuardError(f"{GUARD_ENV} must be positive")
    return value


def _lcm_denominator(values) -> int:
    return math.lcm(1, *(Fraction(x).denominator for x in values))


def _enumerate(
    a: SymMatrix,
    weights: Sequence[Sequence[Fraction]],
    g: Multigraph,
    order: Sequence[int],
    domains: Sequence[Sequence[int]],
    guard: int | None,
) -> Fraction:
    """Sum of edge products times vertex weights; weights[v][i] is v's weight at spin i."""
    n = g.vertex_count
    if n == 0:
        return Fraction(1)
    limit = oracle_guard() if guard is None else guard
    space = math.prod(len(dom) for dom in domains)
    if space > limit:
        raise OracleGuardError(f"{space} configurations exceed the guard of {limit}")

    a_scale = _lcm_denominator(x for row in a.entries for x in row)
    w_scale = _lcm_denominator(x for ws in weights for x in ws)
    a_int = [[int(x * a_scale) for x in row] for row in a.entries]
    w_int = [[int(x * w_scale) for x in ws] for ws in weights]

    position = {v: p for p, v in enumerate(order)}
    # edges charged to the later endpoint in the enumeration order
    back: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for u, v, k in g.edges:
        late, early = (u, v) if position[u] >= position[v] else (v, u)
        back[late].append((early, k))

    spin = [0] * n

    def rec(p: int) -> int:
        if p == n:
            return 1
        v = order[p]
        total = 0
        for i in domains[v]:
            factor = w_int[v][i]
            if not factor:
                continue
            row = a_int[i]
            for u, k in back[v]:
                entry = row[i] if u == v else row[spin[u]]
                factor *= entry**k
                if not factor:
                    break
            if not factor:
                continue
            spin[v] = i
            total += factor * rec(p + 1)
        return total

    raw = rec(0)
    return Fraction(raw, a_scale ** g.edge_count * w_scale**n)


def eval_pdpf_bruteforce(
    inst: PdpfInstance,
    g: Multigraph,
    *,
    order: Sequence[int] | None = None,
    guard: int | None = None,
) -> Fraction:
    """Z_{A,D,O}(G) by enumeration.

    Even-degree vertices are weighted by D, odd-degree vertices by O.  The
    optional ``order`` changes the enumeration order only.
    """
    deg = g.degrees()
    weights = [inst.d.diagonal if deg[v] % 2 == 0 else inst.o.diagonal for v in range(g.vertex_count)]
    if order is None:
        order = range(g.vertex_count)
    order = list(order)
    if sorted(order) != list(range(g.vertex_count)):
        raise ValueError("order must be a permutation of the vertices")
    domains = [range(inst.order)] * g.vertex_count
    return _enumerate(inst.a, weights, g, order, domains, guard)


def eval_plain_bruteforce(a: SymMatrix, g: Multigraph, *, guard: int | None = None) -> Fraction:
    """Z_A(G)."""
    return eval_pdpf_bruteforce(PdpfInstance.plain(a), g, guard=guard)


def eval_weighted_bruteforce(a: SymMatrix, d: DiagMatrix, g: Multigraph, *, guard: int | None = None) -> Fraction:
    """Z_{A,D}(G)."""
    return eval_pdpf_bruteforce(PdpfInstance.weighted(a, d), g, guard=guard)


def eval_pinned_bruteforce(
    a: SymMatrix, d: DiagMatrix, lg: LabelledGraph, k: int, *, guard: int | None = None
) -> Fraction:
    """Z_{A,D}(k, G): configurations with the label fixed to spin ``k`` (0-based),
    divided by D_kk."""
    if not 0 <= k < a.order:
        raise ValueError("spin out of range")
    if d[k] == 0:
        raise ValueError("pinned spin has zero vertex weight")
    g = lg.graph
    weights = [d.diagonal] * g.vertex_count
    domains = [range(a.order)] * g.vertex_count
    domains[lg.label] = [k]
    total = _enumerate(a, weights, g, list(range(g.vertex_count)), domains, guard)
    return total / d[k]
