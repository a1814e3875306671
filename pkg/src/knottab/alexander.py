"""Exact Alexander-Conway polynomials from crossing relations.

Each crossing of a realized diagram contributes one linear relation on the
arc variables: t*x_in - x_out + (1 - t)*x_over at a positive crossing, the
same with t inverted at a negative one.  Dropping one row and one column and
taking the determinant gives the Alexander-Conway polynomial up to a unit
factor of +-t^k; dividing out the unit (lowest term at exponent zero with
positive coefficient) makes the value a knot invariant.  Arithmetic is exact
throughout: entries are integer coefficient lists and the determinant comes
from fraction-free elimination, so no precision argument is ever needed.
The matrices involved stay below a few dozen rows at tabulation scale, well
inside what plain integer elimination handles instantly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

from .realize import Diagram

_CoeffSource = Union[Mapping[int, int], Iterable[tuple[int, int]]]


class LaurentPolynomial:
    """Finitely supported integer polynomial in t and 1/t, in normal form.

    Construction divides out the unit: the support is shifted so the lowest
    nonzero term sits at exponent zero, and the whole polynomial is negated
    if that term is negative.  Two diagrams of the same knot therefore build
    equal objects even when their raw determinants differ by +-t^k.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coefficients: _CoeffSource):
        items = (coefficients.items()
                 if isinstance(coefficients, Mapping) else coefficients)
        acc: dict[int, int] = {}
        for e, c in items:
            e = int(e)
            c = int(c)
            if c:
                acc[e] = acc.get(e, 0) + c
        support = sorted((e, c) for e, c in acc.items() if c)
        if support:
            low = support[0][0]
            sign = 1 if support[0][1] > 0 else -1
            support = [(e - low, sign * c) for e, c in support]
        self._coeffs = tuple(support)

    @property
    def coefficients(self) -> dict[int, int]:
        return dict(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def degree(self) -> int:
        """Exponent of the highest term; -1 for the zero polynomial."""
        return self._coeffs[-1][0] if self._coeffs else -1

    def evaluate(self, x) -> Fraction:
        """Exact value at x; Fraction arithmetic keeps 1/t terms exact."""
        xv = Fraction(x)
        total = Fraction(0)
        for e, c in self._coeffs:
            total += c * xv ** e
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        return f"LaurentPolynomial({dict(self._coeffs)!r})"

    def __str__(self) -> str:
        return serialize_poly(self)


def _trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _add(p: list[int], q: list[int]) -> list[int]:
    out = list(p) + [0] * (len(q) - len(p))
    for i, c in enumerate(q):
        out[i] += c
    return _trim(out)


def _sub(p: list[int], q: list[int]) -> list[int]:
    out = list(p) + [0] * (len(q) - len(p))
    for i, c in enumerate(q):
        out[i] -= c
    return _trim(out)


def _mul(p: list[int], q: list[int]) -> list[int]:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _divexact(p: list[int], q: list[int]) -> list[int]:
    """Quotient p / q, which fraction-free elimination guarantees is exact."""
    if not p:
        return []
    rem = list(p)
    dq = len(q) - 1
    lead = q[-1]
    out = [0] * (len(p) - dq)
    for i in range(len(out) - 1, -1, -1):
        c = rem[i + dq]
        if c % lead != 0:
            raise ArithmeticError("inexact polynomial division")
        f = c // lead
        out[i] = f
        if f:
            for j, b in enumerate(q):
                rem[i + j] -= f * b
    if _trim(rem):
        raise ArithmeticError("inexact polynomial division")
    return _trim(out)


def _det(mat: list[list[list[int]]]) -> list[int]:
    """Determinant of a square matrix of coefficient lists (Bareiss)."""
    n = len(mat)
    if n == 0:
        return [1]
    sign = 1
    prev = [1]
    for k in range(n - 1):
        if not mat[k][k]:
            for r in range(k + 1, n):
                if mat[r][k]:
                    mat[k], mat[r] = mat[r], mat[k]
                    sign = -sign
                    break
            else:
                return []
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = _sub(_mul(mat[i][j], mat[k][k]),
                           _mul(mat[i][k], mat[k][j]))
                mat[i][j] = _divexact(num, prev)
            mat[i][k] = []
        prev = mat[k][k]
    out = mat[n - 1][n - 1]
    return out if sign > 0 else [-c for c in out]


def alexander_poly(diagram: Diagram) -> LaurentPolynomial:
    """Normalized Alexander-Conway polynomial of a realized diagram.

    The crossing-relation matrix has one row per crossing and one column per
    arc; rows at negative crossings are scaled by t to clear the 1/t, which
    the normalization absorbs.  The last row and column are deleted before
    the determinant (any choice gives the same normal form).
    """
    n = len(diagram.signs)
    if n == 0:
        return LaurentPolynomial({0: 1})
    arcs = len(diagram.arcs)
    mat: list[list[list[int]]] = [[[] for _ in range(arcs)] for _ in range(n)]
    for r, (site, s) in enumerate(zip(diagram.incidence, diagram.signs)):
        a_in, a_out, a_over = site
        row = mat[r]
        if s > 0:
            row[a_in] = _add(row[a_in], [0, 1])
            row[a_out] = _add(row[a_out], [-1])
            row[a_over] = _add(row[a_over], [1, -1])
        else:
            row[a_in] = _add(row[a_in], [1])
            row[a_out] = _add(row[a_out], [0, -1])
            row[a_over] = _add(row[a_over], [-1, 1])
    minor = [row[:arcs - 1] for row in mat[:n - 1]]
    det = _det(minor)
    return LaurentPolynomial(enumerate(det))


def eval_at_minus_one(p: LaurentPolynomial) -> int:
    """Knot determinant |p(-1)|."""
    total = 0
    for e, c in p._coeffs:
        total += c if e % 2 == 0 else -c
    return abs(total)


def serialize_poly(p: LaurentPolynomial) -> str:
    """Coefficients from exponent 0 upward, comma-separated; zero is `0`."""
    if p.is_zero():
        return "0"
    dense = [0] * (p.degree + 1)
    for e, c in p._coeffs:
        dense[e] = c
    return ",".join(str(c) for c in dense)


def parse_poly(line: str) -> LaurentPolynomial:
    vals = [int(tok) for tok in line.strip().split(",")]
    return LaurentPolynomial(enumerate(vals))
