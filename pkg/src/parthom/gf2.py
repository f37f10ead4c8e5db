"""GF(2) polynomials, subspaces and the degree-2 solution counter.

Vectors of GF(2)^k are Python ints: bit ``i`` holds coordinate ``x_i``.
A monomial is likewise a bitmask of the variables it contains, and the
constant monomial is ``0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


# ------------------------------------------------------------ ANF polynomials


@dataclass(frozen=True)
class Gf2Poly:
    """Multilinear polynomial in algebraic normal form."""

    nvars: int
    monomials: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "monomials", frozenset(self.monomials))
        limit = 1 << self.nvars
        if any(not 0 <= m < limit for m in self.monomials):
            raise ValueError("monomial mentions a variable beyond nvars")

    @classmethod
    def from_terms(cls, nvars: int, terms: Iterable[int]) -> Gf2Poly:
        """Sum of monomials with cancellation of repeats."""
        acc: set[int] = set()
        for t in terms:
            acc ^= {t}
        return cls(nvars, frozenset(acc))

    @classmethod
    def zero(cls, nvars: int) -> Gf2Poly:
        return cls(nvars)

    def __call__(self, x: int) -> int:
        return sum(1 for m in self.monomials if m & x == m) & 1

    def __xor__(self, other: Gf2Poly) -> Gf2Poly:
        if other.nvars != self.nvars:
            raise ValueError("variable counts differ")
        return Gf2Poly(self.nvars, self.monomials ^ other.monomials)

    def is_zero(self) -> bool:
        return not self.monomials

    def truth_table(self) -> list[int]:
        return [self(x) for x in range(1 << self.nvars)]

    def __str__(self) -> str:
        if not self.monomials:
            return "0"
        terms = sorted(self.monomials, key=lambda m: (-bin(m).count("1"), [i for i in _bits(m)]))
        return " + ".join("".join(f"x{i}" for i in _bits(m)) or "1" for m in terms)


def anf_from_truth_table(values: Sequence[int]) -> Gf2Poly:
    """ANF of the boolean function with the given table (index = input bits)."""
    size = len(values)
    if size == 0 or size & (size - 1):
        raise ValueError("truth table length must be a power of two")
    k = size.bit_length() - 1
    coeff = [int(v) & 1 for v in values]
    for i in range(k):
        bit = 1 << i
        for x in range(size):
            if x & bit:
                coeff[x] ^= coeff[x ^ bit]
    return Gf2Poly(k, frozenset(m for m, c in enumerate(coeff) if c))


def poly_degree(p: Gf2Poly) -> int:
    return max((bin(m).count("1") for m in p.monomials), default=0)


# ------------------------------------------------------------ subspaces


@dataclass(frozen=True)
class SubspaceBasis:
    """Basis of a subspace L of GF(2)^width, read as the map phi: GF(2)^dim -> L.

    ``phi(y) = XOR of rows[t] over the set bits t of y``.
    """

    width: int
    rows: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))
        if any(not 0 <= r < (1 << self.width) for r in self.rows):
            raise ValueError("basis vector wider than the ambient space")
        if _rank(self.rows) != len(self.rows):
            raise ValueError("basis rows are linearly dependent")

    @classmethod
    def identity(cls, width: int) -> SubspaceBasis:
        return cls(width, tuple(1 << i for i in range(width)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __call__(self, y: int) -> int:
        out = 0
        for t in _bits(y):
            out ^= self.rows[t]
        return out

    def coordinate_forms(self) -> list[int]:
        """forms[i] is the set of y-variables whose XOR gives coordinate x_i."""
        forms = [0] * self.width
        for t, row in enumerate(self.rows):
            for i in _bits(row):
                forms[i] |= 1 << t
        return forms

    def image(self) -> set[int]:
        return {self(y) for y in range(1 << self.dim)}


def _rank(vectors: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                break
            v ^= pivots[top]
    return len(pivots)


def _reduced_echelon(vectors: Iterable[int]) -> tuple[int, ...]:
    """Reduced row echelon basis of the span, pivot = highest set bit, rows by descending pivot."""
    pivots: dict[int, int] = {}
    for v in vectors:
        for top in sorted(pivots, reverse=True):
            if v >> top & 1:
                v ^= pivots[top]
        if v:
            top = v.bit_length() - 1
            for p in pivots:
                if pivots[p] >> top & 1:
                    pivots[p] ^= v
            pivots[top] = v
    return tuple(pivots[p] for p in sorted(pivots, reverse=True))


def is_linear_subspace(s: Iterable[int]) -> bool:
    elems = set(s)
    if 0 not in elems:
        return False
    return all(a ^ b in elems for a in elems for b in elems if a < b)


def subspace_basis(s: Iterable[int], width: int) -> SubspaceBasis:
    elems = set(s)
    if not is_linear_subspace(elems):
        raise ValueError("set is not a linear subspace")
    return SubspaceBasis(width, _reduced_echelon(sorted(elems)))


def compose_linear(p: Gf2Poly, phi: SubspaceBasis) -> Gf2Poly:
    """ANF of p(phi(y)) in phi.dim variables, by substitution and expansion."""
    if phi.width != p.nvars:
        raise ValueError("basis width does not match the polynomial's variables")
    forms = phi.coordinate_forms()
    acc: set[int] = set()
    for mono in p.monomials:
        # product of the linear forms of the variables in mono; x*x = x in
        # the exponent, so monomials multiply by bitwise OR
        prod = {0}
        for i in _bits(mono):
            nxt: set[int] = set()
            for t in _bits(forms[i]):
                for m in prod:
                    nxt ^= {m | (1 << t)}
            prod = nxt
            if not prod:
                break
        acc ^= prod
    return Gf2Poly(phi.dim, frozenset(acc))


# ------------------------------------------------------------ quadratic forms


@dataclass(frozen=True)
class QuadPoly:
    """Polynomial of degree at most two: sum of x_i x_j (i<j) plus linear part plus constant."""

    nvars: int
    quad: frozenset[tuple[int, int]] = frozenset()
    linear: frozenset[int] = frozenset()
    const: int = 0

    def __post_init__(self) -> None:
        quad = frozenset((min(i, j), max(i, j)) for i, j in self.quad)
        if any(i == j for i, j in quad):
            raise ValueError("quadratic pairs need distinct variables")
        if any(not 0 <= j < self.nvars for pair in quad for j in pair):
            raise ValueError("quadratic term beyond nvars")
        if any(not 0 <= i < self.nvars for i in self.linear):
            raise ValueError("linear term beyond nvars")
        object.__setattr__(self, "quad", quad)
        object.__setattr__(self, "linear", frozenset(self.linear))
        object.__setattr__(self, "const", self.const & 1)

    def __call__(self, x: int) -> int:
        val = self.const
        for i in self.linear:
            val ^= x >> i & 1
        for i, j in self.quad:
            val ^= x >> i & x >> j & 1
        return val

    def adjacency(self) -> tuple[list[int], int, int]:
        adj = [0] * self.nvars
        for i, j in self.quad:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        lin = 0
        for i in self.linear:
            lin |= 1 << i
        return adj, lin, self.const


class QuadBuilder:
    """Mutable accumulator for a degree-2 polynomial in adjacency form.

    ``adj[i]`` has bit j set when x_i x_j is present; linear terms are a
    bitmask.  Adding the same term twice cancels it.
    """

    def __init__(self, nvars: int = 0) -> None:
        self.nvars = nvars
        self.adj = [0] * nvars
        self.lin = 0
        self.const = 0

    def new_vars(self, count: int) -> int:
        """Allocate ``count`` fresh variables; returns the first index."""
        start = self.nvars
        self.nvars += count
        self.adj.extend([0] * count)
        return start

    def add_const(self, c: int) -> None:
        self.const ^= c & 1

    def add_linear(self, mask: int) -> None:
        self.lin ^= mask

    def add_pair(self, i: int, j: int) -> None:
        if i == j:
            self.lin ^= 1 << i
        else:
            self.adj[i] ^= 1 << j
            self.adj[j] ^= 1 << i

    def add_product(self, p: int, q: int) -> None:
        """Add (XOR of vars in p) * (XOR of vars in q)."""
        _add_product(self.adj, p, q)
        self.lin ^= p & q   # the diagonal terms x_a * x_a = x_a

    def freeze(self) -> QuadPoly:
        quad = frozenset((i, j) for i in range(self.nvars) for j in _bits(self.adj[i]) if i < j)
        return QuadPoly(self.nvars, quad, frozenset(_bits(self.lin)), self.const)

    def exponential_sum(self) -> int:
        return _exponential_sum(self.nvars, list(self.adj), self.lin, self.const)


def _add_product(adj: list[int], p: int, q: int) -> None:
    # each ordered pair (a in p, b in q) with a != b toggles the edge {a, b};
    # the edge is stored in both rows, so row a gets q and row b gets p
    for a in _bits(p):
        adj[a] ^= q & ~(1 << a)
    for b in _bits(q):
        adj[b] ^= p & ~(1 << b)


def _exponential_sum(n: int, adj: list[int], lin: int, const: int) -> int:
    """sum over x in GF(2)^n of (-1)^q(x), destroying ``adj``.

    Repeatedly picks a present product x_i x_j and writes
    q = x_i x_j + x_i A + x_j B + R = (x_i + B)(x_j + A) + A B + R
    with A, B affine in the other variables.  The hyperbolic pair sums to 2
    after the shear, leaving A B + R on n - 2 variables.  When no product is
    left the form is affine and the sum is either 0 or +-2^free.
    """
    scale = 0      # power of two collected from eliminated pairs
    removed = 0
    i = 0
    while True:
        # the shear can create products among already-scanned variables
        while i < n and not adj[i]:
            i += 1
        if i == n:
            i = next((t for t in range(n) if adj[t]), n)
            if i == n:
                break
        j = (adj[i] & -adj[i]).bit_length() - 1
        pair = (1 << i) | (1 << j)
        a_mask = adj[i] & ~pair
        b_mask = adj[j] & ~pair
        a_const = lin >> i & 1
        b_const = lin >> j & 1
        for k in _bits(adj[i] | adj[j]):
            adj[k] &= ~pair
        adj[i] = adj[j] = 0
        lin &= ~pair
        # (a_mask + a_const)(b_mask + b_const)
        _add_product(adj, a_mask, b_mask)
        lin ^= a_mask & b_mask
        if b_const:
            lin ^= a_mask
        if a_const:
            lin ^= b_mask
        const ^= a_const & b_const
        scale += 1
        removed += 2
    if lin:
        return 0
    free = n - removed
    return (-1 if const else 1) * (1 << (scale + free))


def quadratic_exponential_sum(q: QuadPoly) -> int:
    """s0 - s1, where s_b counts the inputs with q = b."""
    adj, lin, const = q.adjacency()
    return _exponential_sum(q.nvars, adj, lin, const)


def count_quadratic_ones(q: QuadPoly) -> int:
    total = 1 << q.nvars
    return (total - quadratic_exponential_sum(q)) // 2


def count_quadratic_bruteforce(q: QuadPoly, *, limit: int = 24) -> int:
    """Number of inputs with q = 1, by building the full truth table as a bitset."""
    if q.nvars > limit:
        raise ValueError(f"{q.nvars} variables exceed the enumeration limit of {limit}")
    size = 1 << q.nvars
    full = (1 << size) - 1
    # column[i] has bit x set exactly when x_i = 1
    column = []
    for i in range(q.nvars):
        block = ((1 << (1 << i)) - 1) << (1 << i)
        span = 1 << (i + 1)
        while span < size:
            block |= block << span
            span <<= 1
        column.append(block)
    table = full if q.const else 0
    for i in q.linear:
        table ^= column[i]
    for i, j in q.quad:
        table ^= column[i] & column[j]
    return bin(table).count("1")
