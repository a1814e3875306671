"""Color tests on knot diagrams.

A color test is a square matrix over colors {1..n} obeying three axioms:
fixed diagonal, bijective columns, and a distributivity constraint that makes
coloring counts invariant under diagram moves.  The module validates and
enumerates such matrices, builds the affine and conjugation families, and
counts arc colorings of realized diagrams.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .realize import Diagram


class SizeMismatch(ValueError):
    """Raised when tests of different sizes are compared."""


class GcdViolation(ValueError):
    """Raised when an affine slope or its successor is not a unit."""


class ColorMatrix:
    """Square table over colors {1..n}.

    Only structure is enforced here; the three axioms are the business of
    validate so that near-miss tables can be constructed and inspected.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Iterable[Iterable[int]]):
        rows = tuple(tuple(int(v) for v in row) for row in entries)
        n = len(rows)
        if n < 1:
            raise ValueError("a color test needs at least one color")
        for row in rows:
            if len(row) != n:
                raise ValueError("entries must form a square table")
            for v in row:
                if not 1 <= v <= n:
                    raise ValueError(f"entry {v} outside 1..{n}")
        self._entries = rows

    @property
    def entries(self) -> tuple[tuple[int, ...], ...]:
        return self._entries

    @property
    def size(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ColorMatrix):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        return hash(self._entries)

    def __repr__(self) -> str:
        return f"ColorMatrix({list(map(list, self._entries))!r})"

    def __str__(self) -> str:
        return serialize_test(self)


@dataclass(frozen=True)
class InvariantVector:
    """Per-test coloring counts of one diagram, plus an optional polynomial.

    Each entry is (test identifier, value); the value is a plain count for a
    self-mirror test and the unordered (min, max) pair of the test's and its
    mirror's counts otherwise, so vectors agree on mirror-image diagrams.
    """

    entries: tuple[tuple[str, int | tuple[int, int]], ...]
    polynomial: tuple[int, ...] | None = None


def _array(M: ColorMatrix) -> np.ndarray:
    # 0-based entries for kernels and numpy indexing
    return np.array(M.entries, dtype=np.int32) - 1


def _matrix(a: np.ndarray) -> ColorMatrix:
    return ColorMatrix(tuple(tuple(int(v) + 1 for v in row) for row in a))


def validate(M: ColorMatrix) -> bool:
    """True iff the three color-test axioms hold.

    (1) M[i][i] = i; (2) every column is a permutation of the colors;
    (3) with k = M[i][j], m = M[l][i], q = M[l][j]: M[q][k] = M[m][j].
    """
    a = _array(M)
    n = M.size
    if not (np.diagonal(a) == np.arange(n)).all():
        return False
    if not (np.sort(a, axis=0) == np.arange(n)[:, None]).all():
        return False
    for l in range(n):
        # lhs[i,j] = a[q, k] with q = a[l,j], k = a[i,j]; rhs[i,j] = a[m, j]
        lhs = a[a[l][None, :], a]
        rhs = a[a[l]]
        if not np.array_equal(lhs, rhs):
            return False
    return True


def irreducible(M: ColorMatrix) -> bool:
    """True iff no proper nonempty color subset is closed under the test.

    A subset S is closed when i in S forces M[i][j] in S for every j; a
    closed S would let colorings split into independent smaller tests.
    """
    a = _array(M)
    n = M.size
    if n == 1:
        return True
    for s in range(n):
        seen = np.zeros(n, dtype=bool)
        seen[s] = True
        frontier = [s]
        while frontier:
            row = a[frontier.pop()]
            fresh = np.unique(row[~seen[row]])
            seen[fresh] = True
            frontier.extend(fresh.tolist())
        if not seen.all():
            return False
    return True


def mirror_test(M: ColorMatrix) -> ColorMatrix:
    """Columnwise inverse: mirror[k][j] = i whenever M[i][j] = k.

    Counting colorings with the mirror test equals counting with the test
    on the mirror-image diagram.
    """
    a = _array(M)
    n = M.size
    b = np.empty_like(a)
    rows = np.arange(n, dtype=np.int32)
    for j in range(n):
        b[a[:, j], j] = rows
    return _matrix(b)


_MIN_KEY_SIZE = 9  # factorial sweep in the kernel stays under ~0.5s


def _min_key(M: ColorMatrix) -> bytes:
    a = _array(M)
    am = _array(mirror_test(M))
    return np.asarray(_kernels.quandle_min_key(a, am)).tobytes()


def _close_map(a: np.ndarray, b: np.ndarray, sigma: list[int],
               used: list[bool], known: list[int]) -> list[int] | None:
    """Propagate sigma over products of known colors; None on conflict.

    Appends newly forced colors to `known` and returns the list of colors
    assigned here so the caller can undo them.
    """
    added: list[int] = []
    head = 0
    while head < len(known):
        i = known[head]
        head += 1
        for j in known[:head]:
            for x, y in ((i, j), (j, i)):
                k = int(a[x, y])
                t = int(b[sigma[x], sigma[y]])
                if sigma[k] >= 0:
                    if sigma[k] != t:
                        for c in added:
                            used[sigma[c]] = False
                            sigma[c] = -1
                        del known[len(known) - len(added):]
                        return None
                elif used[t]:
                    for c in added:
                        used[sigma[c]] = False
                        sigma[c] = -1
                    del known[len(known) - len(added):]
                    return None
                else:
                    sigma[k] = t
                    used[t] = True
                    added.append(k)
                    known.append(k)
    return added


def _perm_onto(a: np.ndarray, b: np.ndarray) -> bool:
    """True iff some color permutation sigma satisfies sigma(a) = b."""
    n = a.shape[0]
    sigma = [-1] * n
    used = [False] * n

    def extend(known: list[int]) -> bool:
        src = next((i for i in range(n) if sigma[i] < 0), -1)
        if src < 0:
            return True
        for tgt in range(n):
            if used[tgt]:
                continue
            sigma[src] = tgt
            used[tgt] = True
            known.append(src)
            added = _close_map(a, b, sigma, used, known)
            if added is not None:
                if extend(known):
                    return True
                for c in added:
                    used[sigma[c]] = False
                    sigma[c] = -1
                del known[len(known) - len(added):]
            known.pop()
            sigma[src] = -1
            used[tgt] = False
        return False

    return extend([])


def same_test(M: ColorMatrix, M2: ColorMatrix) -> bool:
    """True iff M maps onto M2 or onto its mirror by a color permutation."""
    if M.size != M2.size:
        raise SizeMismatch(f"sizes differ: {M.size} vs {M2.size}")
    if M.size <= _MIN_KEY_SIZE:
        return _min_key(M) == _min_key(M2)
    a = _array(M)
    return _perm_onto(a, _array(M2)) or _perm_onto(a, _array(mirror_test(M2)))


def enumerate_tests(n: int) -> list[ColorMatrix]:
    """All irreducible color tests of size n, one per permutation/mirror orbit.

    The kernel emits the row-major minimum of each orbit, in ascending order;
    reducible tables are filtered here.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    cnt, tables = _kernels.quandle_search(n, 4096)
    if int(cnt) < 0:
        cnt, tables = _kernels.quandle_search(n, -int(cnt))
    out: list[ColorMatrix] = []
    for r in range(int(cnt)):
        m = _matrix(tables[r].reshape(n, n))
        if irreducible(m):
            out.append(m)
    return out


def affine(n: int, k: int) -> ColorMatrix:
    """Linear test M[i][j] = ((k+1)j - ki) mod n on colors {1..n}."""
    if n < 2:
        raise ValueError("affine tests need n >= 2")
    if math.gcd(k, n) != 1 or math.gcd(k + 1, n) != 1:
        raise GcdViolation(f"gcd(k,n) and gcd(k+1,n) must be 1, got k={k} n={n}")
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            v = ((k + 1) * j - k * i) % n
            row.append(n if v == 0 else v)
        rows.append(tuple(row))
    return ColorMatrix(rows)


def _cycle_type(p: tuple[int, ...]) -> tuple[int, ...]:
    seen = [False] * len(p)
    lengths = []
    for s in range(len(p)):
        if seen[s]:
            continue
        length = 0
        x = s
        while not seen[x]:
            seen[x] = True
            x = p[x] - 1
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def conjugation(m: int, partition: Sequence[int]) -> ColorMatrix:
    """Conjugation table of one symmetric-group conjugacy class.

    Colors are the permutations of cycle type `partition` in lexicographic
    one-line order; the table entry at (i, j) is g_j g_i g_j^{-1}.
    """
    part = tuple(int(p) for p in partition)
    if m < 1 or sum(part) != m or any(p < 1 for p in part) \
            or any(part[t] < part[t + 1] for t in range(len(part) - 1)):
        raise ValueError("partition must be non-increasing positives summing to m")
    elems = sorted(p for p in permutations(range(1, m + 1))
                   if _cycle_type(p) == part)
    index = {p: t for t, p in enumerate(elems)}
    inverses = []
    for g in elems:
        inv = [0] * m
        for x in range(m):
            inv[g[x] - 1] = x + 1
        inverses.append(tuple(inv))
    rows = []
    for gi in elems:
        row = []
        for gj, gj_inv in zip(elems, inverses):
            conj = tuple(gj[gi[gj_inv[x] - 1] - 1] for x in range(m))
            row.append(index[conj] + 1)
        rows.append(tuple(row))
    return ColorMatrix(rows)


def count_colorings(diagram: Diagram, M: ColorMatrix) -> int:
    """Number of arc colorings satisfying every crossing relation.

    At a positive crossing the outgoing under-arc color is M[in][over]; at a
    negative crossing the incoming one is, which inverts to the mirror test.
    """
    a = _array(M)
    am = _array(mirror_test(M))
    inc = diagram.incidence
    in_arc = np.fromiter((t[0] for t in inc), dtype=np.int32, count=len(inc))
    out_arc = np.fromiter((t[1] for t in inc), dtype=np.int32, count=len(inc))
    over_arc = np.fromiter((t[2] for t in inc), dtype=np.int32, count=len(inc))
    positive = np.fromiter((1 if s > 0 else 0 for s in diagram.signs),
                           dtype=np.uint8, count=len(diagram.signs))
    return int(_kernels.coloring_count(
        a, am, in_arc, out_arc, over_arc, positive, len(diagram.arcs)))


_self_mirror_cache: dict[tuple, bool] = {}


def _is_self_mirror(M: ColorMatrix) -> bool:
    key = M.entries
    if key not in _self_mirror_cache:
        _self_mirror_cache[key] = same_test(M, mirror_test(M))
    return _self_mirror_cache[key]


def invariant_vector(diagram: Diagram, suite: Sequence[ColorMatrix]) -> InvariantVector:
    """Coloring counts of one diagram under every test in the suite.

    Identifiers are positional (`t<index>:n<size>`), stable for a fixed
    suite.  Non-self-mirror tests contribute the unordered pair of their own
    and their mirror's counts, making the vector mirror-blind.
    """
    vals: list[tuple[str, int | tuple[int, int]]] = []
    for idx, M in enumerate(suite):
        ident = f"t{idx}:n{M.size}"
        c = count_colorings(diagram, M)
        if _is_self_mirror(M):
            vals.append((ident, c))
        else:
            cm = count_colorings(diagram, mirror_test(M))
            vals.append((ident, (min(c, cm), max(c, cm))))
    return InvariantVector(tuple(vals))


_TEST_RE = re.compile(r"^n=(\d+);(.*)$")


def serialize_test(M: ColorMatrix) -> str:
    body = "|".join(",".join(str(v) for v in row) for row in M.entries)
    return f"n={M.size};{body}"


def parse_test(text: str) -> ColorMatrix:
    m = _TEST_RE.match(text.strip())
    if not m:
        raise ValueError(f"malformed color test: {text!r}")
    n = int(m.group(1))
    rows = m.group(2).split("|")
    if len(rows) != n:
        raise ValueError(f"expected {n} rows, got {len(rows)}")
    return ColorMatrix(tuple(tuple(int(v) for v in row.split(","))
                             for row in rows))
