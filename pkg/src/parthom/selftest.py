"""Reference corpus, random instance generators and the acceptance checks.

The checks are plain functions returning :class:`CriterionResult` so that the
test suite and ``parthom selftest`` share one implementation.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .classify import block_rank_criterion, classify, recheck_hard, recheck_witness
from .core import (
    DiagMatrix,
    Multigraph,
    PdpfInstance,
    SymMatrix,
    hadamard_h2,
    hadamard_h4,
    is_connected,
    mat_mul,
    pdpf_kron,
    stretch,
    sym_kron,
    thicken,
)
from .evaluate import eval_tractable
from .gf2 import QuadPoly, count_quadratic_bruteforce, count_quadratic_ones
from .hadamard import construct_representation
from .oracle import eval_pdpf_bruteforce, eval_plain_bruteforce, eval_weighted_bruteforce
from .structure import negate_row_col, pm_twin_reduce, standard_conversion, twin_reduce

# ------------------------------------------------------------------ corpus


def _m(rows) -> SymMatrix:
    return SymMatrix.from_rows(rows)


def identity_matrix(m: int) -> SymMatrix:
    return _m([[1 if i == j else 0 for j in range(m)] for i in range(m)])


def direct_sum(*parts: SymMatrix) -> SymMatrix:
    m = sum(p.order for p in parts)
    rows = [[Fraction(0)] * m for _ in range(m)]
    off = 0
    for p in parts:
        for i in range(p.order):
            for j in range(p.order):
                rows[off + i][off + j] = p[i, j]
        off += p.order
    return SymMatrix.from_rows(rows)


def bipartite_matrix(block: Sequence[Sequence[object]]) -> SymMatrix:
    r, c = len(block), len(block[0])
    rows = [[0] * r + list(block[i]) for i in range(r)]
    rows += [[block[i][j] for i in range(r)] + [0] * c for j in range(c)]
    return _m(rows)


def tractable_corpus() -> dict[str, SymMatrix]:
    """Named tractable matrices of order at most 4 (small enough for the oracle)."""
    h2 = hadamard_h2()
    corpus = {
        "H2": h2,
        "H4": hadamard_h4(),
        "-H2": h2.negated(),
        "U": _m([[1, -1], [-1, 1]]),
        "zero": _m([[0]]),
        "neg": _m([[-1]]),
        "rank1": _m([[1, 2], [2, 4]]),
        "H2+1": direct_sum(h2, _m([[1]])),
        "H2+0": direct_sum(h2, _m([[0]])),
        "swap": _m([[0, 1], [1, 0]]),
        "star": bipartite_matrix([[1, 2]]),
        "bip(H2)": bipartite_matrix([[1, 1], [1, -1]]),
        # pm-twin pair over H2 whose O vanishes on one index: partial pinned set
        "partial": _m([[1, -1, 1, 1], [-1, 1, -1, -1], [1, -1, -1, -1], [1, -1, -1, -1]]),
        "twins(U)": _m([[1, 1, -1], [1, 1, -1], [-1, -1, 1]]),
    }
    for m in range(1, 5):
        corpus[f"I{m}"] = identity_matrix(m)
    return corpus


def hard_corpus() -> dict[str, SymMatrix]:
    return {
        "S": _m([[0, 1], [1, 1]]),
        "C3": _m([[0, 1, 1], [1, 0, 1], [1, 1, 0]]),
        "F3": _m([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]),
        "twinned H2": _m([[1, 1, 1], [1, 1, 1], [1, 1, -1]]),
    }


def cycle_graph(n: int) -> Multigraph:
    return Multigraph.from_pairs(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Multigraph:
    return Multigraph.from_pairs(n, [(i, i + 1) for i in range(n - 1)])


# ------------------------------------------------------------------ generators


def random_multigraph(rng: random.Random, max_vertices: int = 7, max_edges: int = 10) -> Multigraph:
    """Uniform-ish multigraph; loops and parallel edges allowed."""
    n = rng.randint(1, max_vertices)
    pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, max_edges))]
    return Multigraph.from_pairs(n, pairs)


def random_connected_graph(rng: random.Random, n: int, extra: int) -> Multigraph:
    pairs = [(v, rng.randrange(v)) for v in range(1, n)]
    pairs += [(rng.randrange(n), rng.randrange(n)) for _ in range(extra)]
    return Multigraph.from_pairs(n, pairs)


def random_eulerian_graph(rng: random.Random, n: int) -> Multigraph:
    """Connected, all degrees even: a spanning closed walk plus random closed walks."""
    order = list(range(n))
    rng.shuffle(order)
    pairs = list(zip(order, order[1:] + order[:1])) if n > 1 else []
    for _ in range(rng.randint(0, 2)):
        walk = [rng.randrange(n) for _ in range(rng.randint(1, 4))]
        pairs += list(zip(walk, walk[1:] + walk[:1]))
    return Multigraph.from_pairs(n, pairs)


def random_symmetric(rng: random.Random, m: int, values: Sequence[int] = (-2, -1, 0, 1, 2)) -> SymMatrix:
    rows = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            rows[i][j] = rows[j][i] = rng.choice(values)
    return _m(rows)


def random_diag(rng: random.Random, m: int, values: Sequence[int] = (-2, -1, 0, 1, 2, 3)) -> DiagMatrix:
    return DiagMatrix(tuple(Fraction(rng.choice(values)) for _ in range(m)))


def random_pdpf(rng: random.Random, m: int) -> PdpfInstance:
    return PdpfInstance(random_symmetric(rng, m), random_diag(rng, m), random_diag(rng, m))


def permuted(a: SymMatrix, perm: Sequence[int]) -> SymMatrix:
    return SymMatrix(tuple(tuple(a[p, q] for q in perm) for p in perm))


def random_nonnegative_matrix(rng: random.Random) -> SymMatrix:
    """Either unstructured or assembled from rank-one blocks, then shuffled."""
    if rng.random() < 0.5:
        return random_symmetric(rng, rng.randint(1, 5), (0, 0, 1, 2, 3))
    parts = []
    for _ in range(rng.randint(1, 3)):
        kind = rng.randrange(3)
        if kind == 0:
            v = [rng.randint(1, 3) for _ in range(rng.randint(1, 2))]
            parts.append(_m([[x * y for y in v] for x in v]))
        elif kind == 1:
            v = [rng.randint(1, 3) for _ in range(rng.randint(1, 2))]
            w = [rng.randint(1, 3) for _ in range(rng.randint(1, 2))]
            parts.append(bipartite_matrix([[x * y for y in w] for x in v]))
        else:
            parts.append(_m([[0]]))
    a = direct_sum(*parts)
    perm = list(range(a.order))
    rng.shuffle(perm)
    return permuted(a, perm)


def _random_coset(rng: random.Random, k: int) -> list[int]:
    """A coset of a random subspace of GF(2)^k (as index set), possibly everything."""
    dim = rng.randint(0, k)
    gens = [rng.randrange(1, 1 << k) for _ in range(dim)] if k else []
    span = {0}
    for g in gens:
        span |= {s ^ g for s in span}
    shift = rng.randrange(1 << k)
    return sorted({s ^ shift for s in span})


def _expand(rng: random.Random, tiles: int, r: int, lam: Sequence[int]) -> list[tuple[int, int]]:
    """(original index, sign) copies with uniform D per tile and O = +-beta on lam."""
    out = []
    full = len(lam) == r
    for mu in range(tiles):
        copies = rng.choice((1, 2, 3)) if full else rng.choice((2, 4))
        beta = rng.choice([b for b in range(1, copies + 1) if (copies - b) % 2 == 0])
        for i in range(r):
            if i in lam:
                plus = (copies + beta) // 2
                if rng.random() < 0.5:
                    plus = copies - plus
            else:
                plus = copies // 2
            for c in range(copies):
                out.append((mu * r + i, 1 if c < plus else -1))
    return out


def random_tractable_candidate(rng: random.Random, max_hadamard: int = 4) -> SymMatrix:
    """Matrix built from the tractable normal form with random Lambda, twins and shuffling.

    Odd weights get an independent sign per tile, so some outputs violate the
    single-Lambda shape and are hard; tests branch on the verdict.
    """
    choices = [_m([[1]]), hadamard_h2()]
    if max_hadamard >= 4:
        choices += [hadamard_h4(), sym_kron(hadamard_h2(), hadamard_h2())]
    h = rng.choice(choices)
    if rng.random() < 0.3:
        h = h.negated()
    r = h.order
    k = r.bit_length() - 1
    bip = rng.random() < 0.4
    tr = rng.randint(1, 2)
    v = [Fraction(rng.randint(1, 3), rng.randint(1, 2)) for _ in range(tr)]
    if not bip:
        core = [[v[a // r] * v[b // r] * h[a % r, b % r] for b in range(tr * r)] for a in range(tr * r)]
        copies = _expand(rng, tr, r, _random_coset(rng, k))
        rows = [[sa * sb * core[a][b] for b, sb in copies] for a, sa in copies]
        a = _m(rows)
    else:
        tc = rng.randint(1, 2)
        w = [Fraction(rng.randint(1, 3)) for _ in range(tc)]
        hr = list(range(r))
        hc = list(range(r))
        rng.shuffle(hr)
        rng.shuffle(hc)
        core = [[v[a // r] * w[b // r] * h[hr[a % r], hc[b % r]] for b in range(tc * r)] for a in range(tr * r)]
        rc = _expand(rng, tr, r, _random_coset(rng, k))
        cc = _expand(rng, tc, r, _random_coset(rng, k))
        a = bipartite_matrix([[sa * sb * core[x][y] for y, sb in cc] for x, sa in rc])
    if rng.random() < 0.2:
        a = direct_sum(a, rng.choice([_m([[0]]), _m([[1]]), _m([[2, 2], [2, 2]])]))
    perm = list(range(a.order))
    rng.shuffle(perm)
    return permuted(a, perm)


def random_quadpoly(rng: random.Random, n: int) -> QuadPoly:
    density = rng.random()
    quad = {(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < density}
    lin = {i for i in range(n) if rng.random() < 0.5}
    return QuadPoly(n, quad, lin, rng.randint(0, 1))


def all_quadpolys(n: int):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for qmask in range(1 << len(pairs)):
        quad = {pairs[t] for t in range(len(pairs)) if qmask >> t & 1}
        for lmask in range(1 << n):
            lin = {i for i in range(n) if lmask >> i & 1}
            for const in (0, 1):
                yield QuadPoly(n, quad, lin, const)


def even_induced_subgraphs(g: Multigraph) -> int:
    """Vertex subsets (the empty one included) inducing an even number of edges."""
    n = g.vertex_count
    count = 0
    for mask in range(1 << n):
        inside = sum(k for u, v, k in g.edges if mask >> u & 1 and mask >> v & 1)
        count += inside % 2 == 0
    return count


def nowhere_zero_flows(g: Multigraph, k: int) -> int:
    """Nowhere-zero Z_k flows under the orientation u -> v of each listed edge."""
    arcs = list(g.edge_instances())
    count = 0
    for vals in itertools.product(range(1, k), repeat=len(arcs)):
        net = [0] * g.vertex_count
        for (u, v), x in zip(arcs, vals):
            net[u] -= x
            net[v] += x
        count += all(x % k == 0 for x in net)
    return count


# ------------------------------------------------------------------ criteria


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number}: {self.title} ({self.detail}; {self.seconds:.2f} s)"


def _timed(number: int, title: str, body: Callable[[], tuple[bool, str]]) -> CriterionResult:
    start = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as exc:  # a crash is a failure of the criterion, reported as such
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CriterionResult(number, title, ok, detail, time.perf_counter() - start)


def criterion_classification(seed: int = 1) -> CriterionResult:
    def body():
        problems = []
        slowest = 0.0
        expected = {name: True for name in ("H2", "H4", "U", "I1", "I2", "I3", "I4")}
        expected.update({"S": False, "C3": False, "F3": False})
        mats = {**tractable_corpus(), **hard_corpus()}
        for name, want in expected.items():
            t = time.perf_counter()
            v = classify(mats[name])
            slowest = max(slowest, time.perf_counter() - t)
            if v.tractable != want:
                problems.append(f"{name} classified {v.arm}")
            ok = recheck_witness(mats[name], v) if v.tractable else recheck_hard(mats[name], v)
            if not ok:
                problems.append(f"{name}: recheck failed")
        rng = random.Random(seed)
        counts = [0, 0]
        for _ in range(50):
            a = random_nonnegative_matrix(rng)
            t = time.perf_counter()
            v = classify(a)
            slowest = max(slowest, time.perf_counter() - t)
            counts[v.tractable] += 1
            if v.tractable != block_rank_criterion(a):
                problems.append(f"block-rank disagreement on {a.entries}")
        if slowest >= 1.0:
            problems.append(f"slowest classification {slowest:.2f} s")
        detail = f"{len(expected)} named + 50 random ({counts[1]} tractable, {counts[0]} hard)"
        return not problems, "; ".join(problems) or detail
    return _timed(1, "classification corpus", body)


def criterion_oracle_equivalence(seed: int = 2, graphs: int = 200) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        pairs = 0
        for name, a in tractable_corpus().items():
            v = classify(a)
            if not v.tractable:
                return False, f"{name} classified HARD"
            for _ in range(graphs):
                g = random_multigraph(rng)
                got = eval_tractable(a, v.witness, g)
                want = eval_pdpf_bruteforce(PdpfInstance.plain(a), g)
                if got != want:
                    return False, f"{name} on {g.edges} (n={g.vertex_count}): {got} != {want}"
                pairs += 1
        return True, f"{pairs} matrix/graph pairs"

    res = _timed(2, "evaluator equals oracle", body)
    if res.passed and res.seconds >= 60:
        res.passed = False
        res.detail += ", over the 60 s budget"
    return res


def criterion_eulerian(seed: int = 3, samples: int = 120) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        u = tractable_corpus()["U"]
        w = classify(u).witness
        eulerian = 0
        for t in range(samples):
            n = rng.randint(1, 7)
            g = random_eulerian_graph(rng, n) if t % 2 else random_connected_graph(rng, n, rng.randint(0, 4))
            assert is_connected(g)
            even = all(d % 2 == 0 for d in g.degrees())
            eulerian += even
            want = Fraction(2**n) if even else Fraction(0)
            got = eval_tractable(u, w, g)
            if got != want or eval_plain_bruteforce(u, g) != want:
                return False, f"Z_U = {got} on {g.edges}, expected {want}"
        return True, f"{samples} connected graphs, {eulerian} Eulerian"
    return _timed(3, "Eulerian identity for U", body)


def criterion_even_subgraphs(max_vertices: int = 5) -> CriterionResult:
    def body():
        h2 = hadamard_h2()
        w = classify(h2).witness
        total = 0
        for n in range(1, max_vertices + 1):
            pairs = list(itertools.combinations(range(n), 2))
            for mask in range(1 << len(pairs)):
                g = Multigraph.from_pairs(n, [pairs[t] for t in range(len(pairs)) if mask >> t & 1])
                lhs = eval_tractable(h2, w, g) / 2 + Fraction(2 ** (n - 1))
                if lhs != even_induced_subgraphs(g):
                    return False, f"mismatch on {g.edges}"
                total += 1
        return True, f"{total} simple graphs"
    return _timed(4, "even induced subgraph identity for H2", body)


def criterion_flows() -> CriterionResult:
    def body():
        f3 = hard_corpus()["F3"]
        tri = cycle_graph(3)
        z = eval_plain_bruteforce(f3, tri)
        flows = nowhere_zero_flows(tri, 3)
        ok = z == 54 and flows == 2 and z == 3**3 * flows
        return ok, f"Z_F3(triangle) = {z}, flows = {flows}"
    return _timed(5, "nowhere-zero 3-flows of the triangle", body)


def criterion_gf2(seed: int = 6, samples: int = 1000) -> CriterionResult:
    def body():
        exhaustive = 0
        for n in range(0, 5):
            for q in all_quadpolys(n):
                if count_quadratic_ones(q) != sum(q(x) for x in range(1 << n)):
                    return False, f"mismatch on {q}"
                exhaustive += 1
        rng = random.Random(seed)
        for _ in range(samples):
            q = random_quadpoly(rng, rng.randint(0, 14))
            if count_quadratic_ones(q) != count_quadratic_bruteforce(q):
                return False, f"mismatch on {q}"
        return True, f"{exhaustive} exhaustive + {samples} random"

    res = _timed(6, "GF(2) quadratic counter", body)
    if res.passed and res.seconds >= 30:
        res.passed = False
        res.detail += ", over the 30 s budget"
    return res


def _small_graph(rng: random.Random, n: int = 4, e: int = 5) -> Multigraph:
    return random_multigraph(rng, n, e)


def transform_checks(rng: random.Random) -> dict[str, Callable[[], bool]]:
    """One randomized identity check per transform; each call draws a fresh instance."""

    def check_stretch():
        a = random_symmetric(rng, rng.randint(1, 3))
        g = _small_graph(rng, 3, 3)
        s = rng.randint(2, 3)
        power = a.entries
        for _ in range(s - 1):
            power = mat_mul(power, a.entries)
        return eval_plain_bruteforce(a, stretch(g, s)) == eval_plain_bruteforce(SymMatrix(power), g)

    def check_thicken():
        a = random_symmetric(rng, rng.randint(1, 3))
        g = _small_graph(rng)
        t = rng.randint(1, 3)
        return eval_plain_bruteforce(a, thicken(g, t)) == eval_plain_bruteforce(a.entrywise_power(t), g)

    def check_twins():
        base = random_symmetric(rng, rng.randint(1, 3))
        idx = [rng.randrange(base.order) for _ in range(rng.randint(base.order, 4))]
        a = SymMatrix(tuple(tuple(base[p, q] for q in idx) for p in idx))
        d = random_diag(rng, a.order)
        tw = twin_reduce(a, d)
        g = _small_graph(rng)
        return eval_weighted_bruteforce(a, d, g) == eval_weighted_bruteforce(tw.matrix, tw.delta, g)

    def check_pm_twins():
        base = random_symmetric(rng, rng.randint(1, 3))
        idx = [(rng.randrange(base.order), rng.choice((1, -1))) for _ in range(rng.randint(base.order, 4))]
        a = SymMatrix(tuple(tuple(s * t * base[p, q] for q, t in idx) for p, s in idx))
        d = random_diag(rng, a.order)
        pm = pm_twin_reduce(a, d)
        g = _small_graph(rng)
        return eval_weighted_bruteforce(a, d, g) == eval_pdpf_bruteforce(pm.instance, g)

    def check_negation():
        inst = random_pdpf(rng, rng.randint(1, 3))
        g = _small_graph(rng)
        i = rng.randrange(inst.order)
        return eval_pdpf_bruteforce(inst, g) == eval_pdpf_bruteforce(negate_row_col(inst, i), g)

    def check_conversion():
        inst = random_pdpf(rng, rng.randint(1, 2))
        g = _small_graph(rng)
        a, delta = standard_conversion(inst)
        return eval_pdpf_bruteforce(inst, g) == eval_weighted_bruteforce(a, delta, g)

    def check_tensor_plain():
        x = random_symmetric(rng, rng.randint(1, 2))
        y = random_symmetric(rng, rng.randint(1, 2))
        g = _small_graph(rng)
        return eval_plain_bruteforce(sym_kron(x, y), g) == eval_plain_bruteforce(x, g) * eval_plain_bruteforce(y, g)

    def check_tensor_pdpf():
        x = random_pdpf(rng, rng.randint(1, 2))
        y = random_pdpf(rng, rng.randint(1, 2))
        g = _small_graph(rng)
        return eval_pdpf_bruteforce(pdpf_kron(x, y), g) == eval_pdpf_bruteforce(x, g) * eval_pdpf_bruteforce(y, g)

    return {
        "stretch": check_stretch,
        "thicken": check_thicken,
        "twin reduction": check_twins,
        "pm-twin reduction": check_pm_twins,
        "row-column negation": check_negation,
        "standard conversion": check_conversion,
        "tensor (plain)": check_tensor_plain,
        "tensor (pdpf)": check_tensor_pdpf,
    }


def criterion_transforms(seed: int = 7, samples: int = 100) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        checks = transform_checks(rng)
        failed = [name for name, check in checks.items() if not all(check() for _ in range(samples))]
        if failed:
            return False, "failed: " + ", ".join(failed)
        return True, f"{len(checks)} identities x {samples} instances"
    return _timed(7, "transform identities", body)


def criterion_representations(seed: int = 8, samples: int = 40) -> CriterionResult:
    def body():
        h2 = [[1, 1], [1, -1]]
        rep2 = construct_representation(h2, (0, 1), (0, 1))
        ok2 = (
            rep2.k == 1
            and rep2.rho_r[0] == 0
            and rep2.g_r.is_zero()
            and rep2.g_c.is_zero()
            and all(rep2(x, y) == (x & y & 1) for x in range(2) for y in range(2))
        )
        h4 = [[int(x) for x in row] for row in hadamard_h4().entries]
        rep4 = construct_representation(h4, range(4), range(4))
        ok4 = (
            rep4.k == 2
            and rep4.g_r.is_zero()
            and rep4.g_c.is_zero()
            and all(
                rep4(x, y) == ((x & 1) & (y >> 1 & 1)) ^ ((x >> 1 & 1) & (y & 1)) for x in range(4) for y in range(4)
            )
        )
        if not (ok2 and ok4):
            return False, f"golden representation mismatch (H2 {ok2}, H4 {ok4})"
        rng = random.Random(seed)
        checked = 2
        mats = list(tractable_corpus().values()) + [random_tractable_candidate(rng) for _ in range(samples)]
        for a in mats:
            v = classify(a)
            if not v.tractable:
                continue
            for cw in v.witness.components:
                if cw.rep is not None:
                    if not cw.rep.represents(cw.h_pos):
                        return False, f"representation fails on component {cw.indices}"
                    checked += 1
        return True, f"golden H2/H4 ok, {checked} representations verified exhaustively"
    return _timed(8, "representations", body)


CRITERIA: tuple[Callable[[], CriterionResult], ...] = (
    criterion_classification,
    criterion_oracle_equivalence,
    criterion_eulerian,
    criterion_even_subgraphs,
    criterion_flows,
    criterion_gf2,
    criterion_transforms,
    criterion_representations,
)


def run_selftest(report: Callable[[str], None] | None = None) -> list[CriterionResult]:
    """Run criteria 1-8, then report the total wall-clock as criterion 9."""
    start = time.perf_counter()
    results = []
    for crit in CRITERIA:
        res = crit()
        results.append(res)
        if report:
            report(res.line())
    total = time.perf_counter() - start
    final = CriterionResult(9, "full selftest wall-clock", total < 180, f"limit 180 s", total)
    results.append(final)
    if report:
        report(final.line())
    return results
