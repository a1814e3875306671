"""Drawability of pair codes and construction of planar diagrams.

A code is drawable exactly when every pair of loops one can trace on it
either shares a segment or crosses an even number of times (a Jordan-curve
argument).  The public test is `jordan_test`; `realize` builds an actual
embedding by searching per-crossing chirality assignments for one whose face
count meets Euler's sphere formula, a route that agrees with the loop test on
every exhaustively checked size and is cheaper for large codes.

Terminology: segment s is the diagram interval from label s to label s+1
(mod 2n); a dart is a directed segment, encoded 2*(s-1) forward and
2*(s-1)+1 backward; the four ends of crossing c occupy slots 0 over-in,
1 under-in, 2 over-out, 3 under-out.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .codes import PairCode


class NotRealizable(ValueError):
    """The code does not come from any planar projection."""


class UnknownCrossing(KeyError):
    """Crossing id outside the diagram."""


@dataclass(frozen=True)
class Loop:
    """Closed walk over directed segments.

    segments holds signed segment numbers (+s forward, -s backward);
    turn_choices[i] records what the walk does at the crossing reached at the
    end of segments[i]: pass straight along its strand, or turn onto the
    other one.  No directed segment repeats; a crossing is turned at most
    once per loop.
    """

    segments: tuple[int, ...]
    turn_choices: tuple[str, ...]


@dataclass(frozen=True)
class Diagram:
    """Planar realization of a code.

    signs[c] is the crossing sign (+1 or -1) in the embedding, normalized so
    the crossing containing label 1 is positive; arcs[t] lists the segments
    of the t-th maximal overpass (arcs are delimited by under-labels, in
    ascending under-label order); incidence[c] gives (incoming under-arc,
    outgoing under-arc, over-arc) as arc indices.  embedding_bits records the
    chirality assignment the construction settled on.
    """

    code: PairCode
    signs: tuple[int, ...]
    arcs: tuple[tuple[int, ...], ...]
    incidence: tuple[tuple[int, int, int], ...]
    embedding_bits: int


def _arrays(code: PairCode) -> tuple[np.ndarray, np.ndarray]:
    over = np.array([o for o, _ in code.pairs], dtype=np.int32)
    under = np.array([u for _, u in code.pairs], dtype=np.int32)
    return over, under


def parity_check(code: PairCode) -> bool:
    """True when every pair couples an odd and an even label (necessary for
    drawability, not sufficient)."""
    return all((o + u) % 2 == 1 for o, u in code.pairs)


def _loop_key(darts: list[int]) -> tuple[int, ...]:
    # canonical under rotation and direction reversal
    rev = [d ^ 1 for d in reversed(darts)]
    m = len(darts)
    best = None
    for seq in (darts, rev):
        for r in range(m):
            cand = tuple(seq[r:] + seq[:r])
            if best is None or cand < best:
                best = cand
    return best


def enumerate_loops(code: PairCode) -> list[Loop]:
    """Every loop of the code, at most 3^n of them.

    A loop either passes a crossing straight (possibly on both strands) or
    turns there exactly once; loops are identified up to starting point and
    traversal direction.  Cost grows as 3^n: fine for the sizes where loops
    are inspected directly, while bulk testing goes through jordan_test.
    """
    n = code.crossing_count
    if n == 0:
        return [Loop((), ())]
    over, under = _arrays(code)
    arrive, leave = _kernels._end_tables(over, under)
    keyed: dict[tuple[int, ...], list[int]] = {}
    for state in itertools.product((0, 1, 2), repeat=n):
        for cyc in _valid_cycles(code, state, arrive, leave):
            keyed.setdefault(_loop_key(cyc), cyc)
    loops = []
    for darts in keyed.values():
        segs = tuple((d >> 1) + 1 if d & 1 == 0 else -((d >> 1) + 1)
                     for d in darts)
        choices = tuple("straight" if _exits_straight(d, darts, arrive, leave)
                        else "turn" for d in darts)
        loops.append(Loop(segs, choices))
    loops.sort(key=lambda lp: (len(lp.segments), lp.segments))
    return loops


def _valid_cycles(code, state, arrive, leave):
    n = code.crossing_count
    nd = 4 * n
    seen = [False] * nd
    out = []
    for d0 in range(nd):
        if seen[d0]:
            continue
        cyc = []
        arrivals: dict[int, int] = {}
        ok = True
        d = d0
        while True:
            seen[d] = True
            cyc.append(d)
            e = int(arrive[d])
            c, s = e >> 2, e & 3
            st = state[c]
            if st == 0:
                s2 = s ^ 2
            else:
                s2 = s ^ (1 if st == 1 else 3)
                arrivals[c] = arrivals.get(c, 0) + 1
                if arrivals[c] > 1:
                    ok = False
            d = int(leave[(c << 2) | s2])
            if d == d0:
                break
        if ok:
            out.append(cyc)
    return out


def _exits_straight(d, darts, arrive, leave):
    # the walk went straight iff the dart following d is the same-strand exit
    e = int(arrive[d])
    c, s = e >> 2, e & 3
    nxt = darts[(darts.index(d) + 1) % len(darts)]
    return nxt == int(leave[(c << 2) | (s ^ 2)])


def jordan_test(code: PairCode) -> bool:
    """Loop test for drawability: every unordered loop pair must share a
    segment (in either direction) or cross transversally an even number of
    times; crossings where either loop turns do not count."""
    if not parity_check(code):
        return False
    if code.crossing_count == 0:
        return True
    over, under = _arrays(code)
    for log2 in (14, 18, 22, 24):
        verdict = int(_kernels.jordan_verdict(over, under, log2))
        if verdict >= 0:
            return bool(verdict)
    raise RuntimeError("loop table overflow; code too large for the test")


def _valid_rotation_bits(code: PairCode) -> list[int]:
    """All chirality assignments realizing the code on the sphere."""
    n = code.crossing_count
    if n == 0:
        return [0]
    over, under = _arrays(code)
    cap = 64
    while True:
        cnt, bits = _kernels.valid_rotations(over, under, cap)
        if cnt >= 0:
            return [int(bits[i]) for i in range(int(cnt))]
        cap *= 4


def realize(code: PairCode) -> Diagram:
    """Build a diagram for a drawable code, raising NotRealizable otherwise.

    The embedding search fixes the mirror ambiguity by convention: the
    crossing containing label 1 gets sign +1, reflecting the whole sphere
    when needed.
    """
    return _realize(code, flip_mirror=False)


def _realize(code: PairCode, flip_mirror: bool) -> Diagram:
    n = code.crossing_count
    if not parity_check(code):
        raise NotRealizable(f"parity fails: {code}")
    if n == 0:
        return Diagram(code=code, signs=(), arcs=((),), incidence=(),
                       embedding_bits=0)
    over, under = _arrays(code)
    bits = int(_kernels.rotation_search(over, under))
    if bits < 0:
        raise NotRealizable(f"loop test fails: {code}")
    c1 = next(i for i, (o, u) in enumerate(code.pairs) if 1 in (o, u))
    if (bits >> c1) & 1:
        bits ^= (1 << n) - 1  # global mirror keeps label 1's crossing positive
    if flip_mirror:
        bits ^= (1 << n) - 1
    signs = tuple(1 if (bits >> c) & 1 == 0 else -1 for c in range(n))
    two_n = 2 * n
    unders = sorted(u for _, u in code.pairs)
    arcs = []
    for t in range(n):
        start, end = unders[t], unders[(t + 1) % n]
        segs = []
        s = start
        while True:
            segs.append(s)
            s = s % two_n + 1
            if s == end:
                break
            if len(segs) == two_n:
                break
        arcs.append(tuple(segs))
    out_of = {u: t for t, u in enumerate(unders)}
    incidence = []
    for o, u in code.pairs:
        t_out = out_of[u]
        t_in = (t_out - 1) % n
        t_over = -1
        for t in range(n):
            span = (unders[(t + 1) % n] - unders[t]) % two_n
            if span == 0:
                span = two_n
            if (o - unders[t]) % two_n < span:
                t_over = t
                break
        incidence.append((t_in, t_out, t_over))
    return Diagram(code=code, signs=signs, arcs=tuple(arcs),
                   incidence=tuple(incidence), embedding_bits=bits)


def arcs_at(diagram: Diagram, crossing: int) -> tuple[int, int, int]:
    """(incoming under-arc, outgoing under-arc, over-arc) indices at the
    crossing with the given index into the code's pair order."""
    if not 0 <= crossing < diagram.code.crossing_count:
        raise UnknownCrossing(crossing)
    return diagram.incidence[crossing]
