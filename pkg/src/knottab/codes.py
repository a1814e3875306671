"""Pair-code notation for knot projections.

A projection with n crossings, traversed once from an arbitrary start, meets
each crossing twice; numbering the passages 1..2n turns the projection into a
set of n (over, under) label pairs.  This module owns the representation, the
parity-respecting enumeration, the 4n-element relabeling action (rotations of
the start point and orientation reversal), the canonical orbit representative,
and the over/under role swap.

Realizability of a code is a separate question answered in `realize`.
"""

from __future__ import annotations

import math
import re
from typing import Iterable, Iterator

import numpy as np

from . import _kernels


class InvalidCode(ValueError):
    """Raised when pair data does not describe a valid code."""


class PairCode:
    """Immutable set of (over, under) label pairs covering {1..2n}.

    Pairs are stored sorted ascending by over label; equality and hashing use
    that normalized tuple, so two codes given the same pairs in different
    orders compare equal.
    """

    __slots__ = ("_pairs",)

    def __init__(self, pairs: Iterable[tuple[int, int]]):
        norm = []
        for p in pairs:
            o, u = p
            if not isinstance(o, int) or not isinstance(u, int):
                raise InvalidCode(f"labels must be integers, got {p!r}")
            norm.append((o, u))
        norm.sort()
        n = len(norm)
        seen = set()
        for o, u in norm:
            seen.add(o)
            seen.add(u)
        if len(seen) != 2 * n or (n > 0 and (min(seen) != 1 or max(seen) != 2 * n)):
            raise InvalidCode(
                f"labels must cover 1..{2 * n} exactly once, got {sorted(seen)}")
        self._pairs = tuple(norm)

    @property
    def crossing_count(self) -> int:
        return len(self._pairs)

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return self._pairs

    def flat(self) -> tuple[int, ...]:
        """Labels as [o1, u1, o2, u2, ...] with pairs in stored order."""
        out = []
        for o, u in self._pairs:
            out.append(o)
            out.append(u)
        return tuple(out)

    @classmethod
    def from_flat(cls, flat) -> "PairCode":
        it = iter(flat)
        return cls([(int(o), int(u)) for o, u in zip(it, it)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, PairCode):
            return NotImplemented
        return self._pairs == other._pairs

    def __hash__(self) -> int:
        return hash(self._pairs)

    def __repr__(self) -> str:
        return f"PairCode({list(self._pairs)!r})"

    def __str__(self) -> str:
        return serialize_code(self)


def relabel(code: PairCode, k: int, eps: int) -> PairCode:
    """Shift every label by k after an optional orientation flip.

    Label a becomes ((k + eps*a - 1) mod 2n) + 1; (over, under) roles are
    kept.  With eps = +1 this moves the traversal start point, with eps = -1
    it also reverses the traversal direction.
    """
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    two_n = 2 * code.crossing_count
    if two_n == 0:
        return code
    return PairCode([(((k + eps * o - 1) % two_n) + 1,
                      ((k + eps * u - 1) % two_n) + 1)
                     for o, u in code.pairs])


def canonical_form(code: PairCode) -> PairCode:
    """Orbit representative: the relabeling with the lexicographically least
    flat sequence among all 4n choices of (k, eps)."""
    if code.crossing_count == 0:
        return code
    flat = np.asarray(code.flat(), dtype=np.int32)
    return PairCode.from_flat(_kernels.canonical_min_flat(flat))


def mirror(code: PairCode) -> PairCode:
    """Swap the (over, under) roles in every pair."""
    return PairCode([(u, o) for o, u in code.pairs])


def _enumerate_python(n: int) -> Iterator[PairCode]:
    # reference generator, row-lex order, odd/even parity enforced per pair
    two_n = 2 * n
    used = [False] * (two_n + 1)
    chosen: list[tuple[int, int]] = []

    def rec(min_over: int) -> Iterator[PairCode]:
        if len(chosen) == n:
            yield PairCode(list(chosen))
            return
        for o in range(min_over, two_n + 1):
            if used[o]:
                continue
            used[o] = True
            for u in range(1, two_n + 1):
                if used[u] or (o + u) % 2 == 0:
                    continue
                used[u] = True
                chosen.append((o, u))
                yield from rec(o + 1)
                chosen.pop()
                used[u] = False
            used[o] = False

    yield from rec(1)


def enumerate_codes(n: int, canonical_only: bool = False) -> Iterator[PairCode]:
    """Yield every parity-valid code with n crossings, in lexicographic order
    of the flat sequence; with canonical_only, one representative per
    relabeling orbit.

    Parity-valid means each pair couples one odd and one even label, which is
    necessary (not sufficient) for the code to come from a projection.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        yield PairCode([])
        return
    if not canonical_only:
        yield from _enumerate_python(n)
        return
    cap = int(math.factorial(n) * 2 ** n / (4 * n) * 1.4) + 16
    while True:
        cnt, rows = _kernels.enumerate_parity_flat(n, cap, 1)
        if cnt >= 0:
            break
        cap *= 2
    for r in range(int(cnt)):
        yield PairCode.from_flat(rows[r])


def serialize_code(code: PairCode) -> str:
    """One-line text form `<n>;(o1,u1)(o2,u2)...`, pairs in stored order."""
    body = "".join(f"({o},{u})" for o, u in code.pairs)
    return f"{code.crossing_count};{body}"


_CODE_RE = re.compile(r"^(\d+);((?:\(\d+,\d+\))*)$")
_PAIR_RE = re.compile(r"\((\d+),(\d+)\)")


def parse_code(line: str) -> PairCode:
    """Inverse of serialize_code; raises InvalidCode on malformed input."""
    m = _CODE_RE.match(line.strip())
    if not m:
        raise InvalidCode(f"unparseable code line: {line!r}")
    n = int(m.group(1))
    pairs = [(int(o), int(u)) for o, u in _PAIR_RE.findall(m.group(2))]
    if len(pairs) != n:
        raise InvalidCode(f"declared {n} pairs, found {len(pairs)}: {line!r}")
    return PairCode(pairs)
