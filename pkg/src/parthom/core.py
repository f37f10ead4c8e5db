"""Exact scalars, weight matrices and multigraphs.

Everything here is an immutable value.  Matrices hold ``Fraction`` entries,
graphs store a canonical edge multiset, and the graph transforms return new
graphs rather than mutating their input.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

Scalar = Union[int, str, Fraction]
Grid = tuple[tuple[Fraction, ...], ...]


def to_fraction(value: Scalar) -> Fraction:
    """Coerce ints, ``"p/q"`` strings and Fractions; floats are rejected."""
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact entry")


def make_grid(rows: Iterable[Iterable[Scalar]]) -> Grid:
    grid = tuple(tuple(to_fraction(x) for x in row) for row in rows)
    if grid and any(len(row) != len(grid[0]) for row in grid):
        raise ValueError("ragged matrix")
    return grid


def transpose(grid: Sequence[Sequence[Fraction]]) -> Grid:
    return tuple(zip(*grid)) if grid else ()


def mat_mul(x: Sequence[Sequence[Fraction]], y: Sequence[Sequence[Fraction]]) -> Grid:
    cols = transpose(y)
    return tuple(tuple(sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols) for row in x)


def kron(x: Sequence[Sequence[Fraction]], y: Sequence[Sequence[Fraction]]) -> Grid:
    """Kronecker product with ``x`` as the outer factor."""
    return tuple(
        tuple(a * b for a in xrow for b in yrow)
        for xrow in x
        for yrow in y
    )


@dataclass(frozen=True)
class SymMatrix:
    """Symmetric square matrix over the rationals."""

    entries: Grid

    def __post_init__(self) -> None:
        grid = make_grid(self.entries)
        m = len(grid)
        if m == 0:
            raise ValueError("matrix order must be positive")
        if any(len(row) != m for row in grid):
            raise ValueError("matrix must be square")
        for i in range(m):
            for j in range(i):
                if grid[i][j] != grid[j][i]:
                    raise ValueError(f"matrix is not symmetric at ({i},{j})")
        object.__setattr__(self, "entries", grid)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Scalar]]) -> SymMatrix:
        return cls(make_grid(rows))

    @property
    def order(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for row in self.entries for x in row)

    def negated(self) -> SymMatrix:
        return SymMatrix(tuple(tuple(-x for x in row) for row in self.entries))

    def principal(self, idx: Sequence[int]) -> SymMatrix:
        """Principal submatrix on ``idx``, in that order (also a permutation)."""
        return SymMatrix(tuple(tuple(self.entries[i][j] for j in idx) for i in idx))

    def entrywise_power(self, t: int) -> SymMatrix:
        return SymMatrix(tuple(tuple(x**t for x in row) for row in self.entries))

    def __matmul__(self, other: SymMatrix) -> Grid:
        return mat_mul(self.entries, other.entries)


@dataclass(frozen=True)
class DiagMatrix:
    diagonal: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "diagonal", tuple(to_fraction(x) for x in self.diagonal))

    @classmethod
    def identity(cls, m: int) -> DiagMatrix:
        return cls((Fraction(1),) * m)

    @classmethod
    def indicator(cls, m: int, support: Iterable[int]) -> DiagMatrix:
        """The diagonal 0/1 matrix I_{m;support}."""
        s = set(support)
        return cls(tuple(Fraction(int(i in s)) for i in range(m)))

    @property
    def order(self) -> int:
        return len(self.diagonal)

    def __getitem__(self, i: int) -> Fraction:
        return self.diagonal[i]


@dataclass(frozen=True)
class PdpfInstance:
    """The triple (A, D, O): D weighs even-degree vertices, O odd-degree ones."""

    a: SymMatrix
    d: DiagMatrix
    o: DiagMatrix

    def __post_init__(self) -> None:
        if not (self.a.order == self.d.order == self.o.order):
            raise ValueError("orders of A, D and O disagree")

    @classmethod
    def plain(cls, a: SymMatrix) -> PdpfInstance:
        ident = DiagMatrix.identity(a.order)
        return cls(a, ident, ident)

    @classmethod
    def weighted(cls, a: SymMatrix, d: DiagMatrix) -> PdpfInstance:
        return cls(a, d, d)

    @property
    def order(self) -> int:
        return self.a.order


def sym_kron(x: SymMatrix, y: SymMatrix) -> SymMatrix:
    return SymMatrix(kron(x.entries, y.entries))


def diag_kron(x: DiagMatrix, y: DiagMatrix) -> DiagMatrix:
    return DiagMatrix(tuple(a * b for a in x.diagonal for b in y.diagonal))


def pdpf_kron(x: PdpfInstance, y: PdpfInstance) -> PdpfInstance:
    return PdpfInstance(sym_kron(x.a, y.a), diag_kron(x.d, y.d), diag_kron(x.o, y.o))


# ---------------------------------------------------------------- graphs


Edge = tuple[int, int, int]


@dataclass(frozen=True)
class Multigraph:
    """Undirected multigraph with loops.

    ``edges`` is canonical: sorted triples ``(u, v, k)`` with ``u <= v`` and
    multiplicity ``k >= 1``.  A loop adds two to the degree of its vertex.
    """

    vertex_count: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        n = self.vertex_count
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        merged: Counter[tuple[int, int]] = Counter()
        for e in self.edges:
            u, v, *rest = e
            k = rest[0] if rest else 1
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {{{u},{v}}} has an endpoint outside 0..{n - 1}")
            if k < 0:
                raise ValueError("negative edge multiplicity")
            if k:
                merged[(min(u, v), max(u, v))] += k
        object.__setattr__(self, "edges", tuple((u, v, k) for (u, v), k in sorted(merged.items())))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> Multigraph:
        return cls(n, tuple((u, v, 1) for u, v in pairs))

    @property
    def edge_count(self) -> int:
        """Number of edges counted with multiplicity (loops included)."""
        return sum(k for _, _, k in self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.vertex_count
        for u, v, k in self.edges:
            deg[u] += k
            deg[v] += k
        return deg

    def degree(self, v: int) -> int:
        return self.degrees()[v]

    def edge_instances(self) -> Iterator[tuple[int, int]]:
        """Each edge once per unit of multiplicity."""
        for u, v, k in self.edges:
            for _ in range(k):
                yield u, v

    def has_loop(self) -> bool:
        return any(u == v for u, v, _ in self.edges)


@dataclass(frozen=True)
class LabelledGraph:
    graph: Multigraph
    label: int

    def __post_init__(self) -> None:
        if not 0 <= self.label < self.graph.vertex_count:
            raise ValueError("label must be a vertex of the graph")


@dataclass(frozen=True)
class GraphComponent:
    graph: Multigraph
    vertices: tuple[int, ...]   # vertices[i] is the original index of local vertex i


def stretch(g: Multigraph, s: int) -> Multigraph:
    """Replace each edge (with each unit of multiplicity) by a fresh path of s edges."""
    if s < 1:
        raise ValueError("stretch length must be positive")
    if s == 1:
        return g
    n = g.vertex_count
    new_edges: list[Edge] = []
    for u, v in g.edge_instances():
        path = [u] + list(range(n, n + s - 1)) + [v]
        n += s - 1
        new_edges.extend((a, b, 1) for a, b in zip(path, path[1:]))
    return Multigraph(n, tuple(new_edges))


def thicken(g: Multigraph, t: int) -> Multigraph:
    if t < 1:
        raise ValueError("thickening factor must be positive")
    return Multigraph(g.vertex_count, tuple((u, v, k * t) for u, v, k in g.edges))


def graph_components(g: Multigraph) -> list[GraphComponent]:
    """Connected components ordered by their lowest vertex."""
    n = g.vertex_count
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v, _ in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    comp = [-1] * n
    groups: list[list[int]] = []
    for start in range(n):
        if comp[start] >= 0:
            continue
        cid = len(groups)
        comp[start] = cid
        stack, members = [start], [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if comp[y] < 0:
                    comp[y] = cid
                    stack.append(y)
                    members.append(y)
        groups.append(sorted(members))
    local = [0] * n
    for members in groups:
        for i, v in enumerate(members):
            local[v] = i
    buckets: list[list[Edge]] = [[] for _ in groups]
    for u, v, k in g.edges:
        buckets[comp[u]].append((local[u], local[v], k))
    return [
        GraphComponent(Multigraph(len(members), tuple(es)), tuple(members))
        for members, es in zip(groups, buckets)
    ]


def is_connected(g: Multigraph) -> bool:
    return g.vertex_count > 0 and len(graph_components(g)) == 1


def bipartition(g: Multigraph) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """2-colouring of a connected graph; U is the side of vertex 0.

    Returns ``None`` when the graph has an odd cycle or a loop.
    """
    if not is_connected(g):
        raise ValueError("bipartition needs a connected graph")
    if g.has_loop():
        return None
    adj: list[list[int]] = [[] for _ in range(g.vertex_count)]
    for u, v, _ in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    colour = [-1] * g.vertex_count
    colour[0] = 0
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if colour[y] < 0:
                colour[y] = 1 - colour[x]
                stack.append(y)
            elif colour[y] == colour[x]:
                return None
    side_u = tuple(v for v in range(g.vertex_count) if colour[v] == 0)
    side_w = tuple(v for v in range(g.vertex_count) if colour[v] == 1)
    return side_u, side_w


# ------------------------------------------------------- named matrices


def hadamard_h2() -> SymMatrix:
    return SymMatrix.from_rows([[1, 1], [1, -1]])


def hadamard_h4() -> SymMatrix:
    return SymMatrix.from_rows([[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]])
