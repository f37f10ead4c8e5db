"""Plain-text readers and writers for matrices, graphs and rationals.

Graph files start with ``n=<count>`` followed by ``u v k`` lines (edge {u,v}
with multiplicity k).  Matrix files start with ``m=<order>`` followed by m
rows of entries written ``p/q`` or ``p``.  Blank lines and ``#`` comments are
ignored.
"""
from __future__ import annotations

from decimal import Decimal, localcontext
from fractions import Fraction

from .core import Multigraph, SymMatrix


class ParseError(ValueError):
    pass


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line))
    return out


def _header(lines: list[tuple[int, str]], key: str) -> int:
    if not lines:
        raise ParseError(f"empty input, expected '{key}=<count>'")
    lineno, first = lines[0]
    name, sep, value = first.partition("=")
    if not sep or name.strip() != key:
        raise ParseError(f"line {lineno}: expected '{key}=<count>', got {first!r}")
    try:
        count = int(value)
    except ValueError:
        raise ParseError(f"line {lineno}: bad count {value.strip()!r}") from None
    if count < 0:
        raise ParseError(f"line {lineno}: negative count")
    return count


def parse_graph(text: str) -> Multigraph:
    lines = _content_lines(text)
    n = _header(lines, "n")
    edges = []
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"line {lineno}: expected 'u v k', got {line!r}")
        try:
            u, v, *k = (int(p) for p in parts)
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer field in {line!r}") from None
        mult = k[0] if k else 1
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"line {lineno}: endpoint out of range 0..{n - 1}")
        if mult < 0:
            raise ParseError(f"line {lineno}: negative multiplicity")
        edges.append((u, v, mult))
    return Multigraph(n, tuple(edges))


def format_graph(g: Multigraph) -> str:
    lines = [f"n={g.vertex_count}"] + [f"{u} {v} {k}" for u, v, k in g.edges]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> SymMatrix:
    lines = _content_lines(text)
    m = _header(lines, "m")
    if m == 0:
        raise ParseError("matrix order must be positive")
    body = lines[1:]
    if len(body) != m:
        raise ParseError(f"expected {m} matrix rows, found {len(body)}")
    rows = []
    for lineno, line in body:
        parts = line.split()
        if len(parts) != m:
            raise ParseError(f"line {lineno}: expected {m} entries, found {len(parts)}")
        try:
            rows.append([Fraction(p) for p in parts])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"line {lineno}: bad rational in {line!r}") from None
    try:
        return SymMatrix.from_rows(rows)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_matrix(a: SymMatrix) -> str:
    lines = [f"m={a.order}"] + [" ".join(format_rational(x) for x in row) for row in a.entries]
    return "\n".join(lines) + "\n"


def format_rational(x: Fraction) -> str:
    """``p/q`` in lowest terms, or ``p`` for integers."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_decimal(x: Fraction, digits: int) -> str:
    """Fixed-point rendering with ``digits`` places (rounded half-even)."""
    if digits < 0:
        raise ValueError("digits must be nonnegative")
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = max(28, len(str(abs(x.numerator))) + digits + 10)
        value = Decimal(x.numerator) / Decimal(x.denominator)
        return str(value.quantize(Decimal(1).scaleb(-digits)))
