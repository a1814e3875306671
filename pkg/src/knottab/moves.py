"""Reidemeister moves on pair codes and move-graph classification.

The three moves act purely on labels: kinks insert or delete a pair of
consecutive labels, pokes insert or delete two crossings where one strand
passes twice over another, slides re-pair the three crossings around a
triangular face.  Additions are generated from the faces of an actual
embedding so every emitted code is drawable by construction; deletions are
pattern scans, sound because the deleted bigon or kink loop is uncrossed and
the shadow is connected.

`classify` implements the temporary/permanent numbering scheme: each input
code explores the move graph without exceeding its own crossing count,
absorbing everything it visits into a shared store; touching an earlier
record merges the two classes by minimum id.  Inputs that touch nothing found
a class and then run one bounded excursion two crossings above their level,
which is where chains of tangle flips (poke in, slide across, poke out)
peak.  Class representatives are the records whose temporary and permanent
ids coincide.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

from . import _kernels
from .codes import PairCode, canonical_form, mirror, parse_code, serialize_code
from .realize import _arrays, _valid_rotation_bits, parity_check


class BoundTooSmall(ValueError):
    """An input code exceeds the move bound."""


# Lobe flips between distinct minimal diagrams of one knot decompose as
# poke in, slide across, poke out, so two extra crossings of headroom make
# founders meet; the cap keeps degenerate regions from flooding.
EXCURSION_LIFT = 2
EXCURSION_CAP = 20000


def _compress_delete(code: PairCode, removed: set[int]) -> PairCode:
    keep = sorted(l for o, u in code.pairs for l in (o, u) if l not in removed)
    rank = {l: t + 1 for t, l in enumerate(keep)}
    return PairCode([(rank[o], rank[u]) for o, u in code.pairs
                     if o not in removed])


def _shift_insert(code: PairCode, slots: list[int]) -> list[tuple[int, int]]:
    # relabel around insertions: slots lists post-shift positions in
    # ascending order, two fresh labels per slot
    def new(x: int) -> int:
        y = x
        for s in slots:
            if y >= s:
                y += 2
        return y

    return [(new(o), new(u)) for o, u in code.pairs]


def _r1_additions(code: PairCode) -> set[PairCode]:
    out = set()
    two_n = 2 * code.crossing_count
    for i in range(1, two_n + 2):
        base = _shift_insert(code, [i])
        out.add(PairCode(base + [(i, i + 1)]))
        out.add(PairCode(base + [(i + 1, i)]))
    # kink straddling the basepoint: labels 2n+2 and 1 are cyclically
    # adjacent, the inverse of a wraparound deletion
    base = [(o + 1, u + 1) for o, u in code.pairs]
    out.add(PairCode(base + [(1, two_n + 2)]))
    out.add(PairCode(base + [(two_n + 2, 1)]))
    return out


def _r1_deletions(code: PairCode) -> set[PairCode]:
    out = set()
    two_n = 2 * code.crossing_count
    for o, u in code.pairs:
        if (u - o) % two_n == 1:
            out.add(_compress_delete(code, {o, u}))
        elif (o - u) % two_n == 1:
            out.add(_compress_delete(code, {o, u}))
    return out


def _r2_deletions(code: PairCode) -> set[PairCode]:
    # poke pattern: over labels cyclically adjacent and under labels
    # cyclically adjacent; clasps (mixed-role adjacency) stay
    out = set()
    two_n = 2 * code.crossing_count
    ps = code.pairs
    for a in range(len(ps)):
        for b in range(a + 1, len(ps)):
            do = (ps[b][0] - ps[a][0]) % two_n
            du = (ps[b][1] - ps[a][1]) % two_n
            if do in (1, two_n - 1) and du in (1, two_n - 1):
                out.add(_compress_delete(
                    code, {ps[a][0], ps[a][1], ps[b][0], ps[b][1]}))
    return out


def _r2_symbolic_additions(code: PairCode) -> Iterator[PairCode]:
    # every label-level poke candidate: over pair at slot i, under pair at
    # slot j (or roles swapped), straight and crossed pairings; drawability
    # is the caller's filter
    two_n = 2 * code.crossing_count
    for i in range(1, two_n + 2):
        for j in range(i + 2, two_n + 4):
            base = _shift_insert(code, [i, j])
            for pr in (((i, j), (i + 1, j + 1)),
                       ((i, j + 1), (i + 1, j)),
                       ((j, i), (j + 1, i + 1)),
                       ((j + 1, i), (j, i + 1))):
                yield PairCode(base + list(pr))
    # one strand passage may straddle the basepoint: its labels are 2n+4
    # and 1, cyclically adjacent, with the partner block anywhere inside
    last = two_n + 4
    for j in range(2, two_n + 3):
        base = [(o + 1 + (2 if o + 1 >= j else 0),
                 u + 1 + (2 if u + 1 >= j else 0)) for o, u in code.pairs]
        for pr in (((last, j), (1, j + 1)), ((last, j + 1), (1, j)),
                   ((j, last), (j + 1, 1)), ((j + 1, last), (j, 1))):
            yield PairCode(base + list(pr))


def _self_poke(code: PairCode, seg: int) -> list[PairCode]:
    # curl a segment across itself: four fresh labels on one segment,
    # crossed pairing is the only embeddable one
    i = seg + 1
    base = _shift_insert(code, [i, i + 2])
    return [PairCode(base + [(i, i + 3), (i + 1, i + 2)]),
            PairCode(base + [(i + 3, i), (i + 2, i + 1)])]


def _cross_poke(code: PairCode, sa: int, sb: int, crossed: bool) -> list[PairCode]:
    # poke one segment across a co-facial other; sa < sb; the under slot is
    # expressed post-shift, two past its original position
    i, j = sa + 1, sb + 3
    base = _shift_insert(code, [i, j])
    if crossed:
        pa, pb = (i, j + 1), (i + 1, j)
    else:
        pa, pb = (i, j), (i + 1, j + 1)
    return [PairCode(base + [pa, pb]),
            PairCode(base + [(pa[1], pa[0]), (pb[1], pb[0])])]


def _faces_of(code: PairCode, bits: int) -> list[list[int]]:
    n = code.crossing_count
    over, under = _arrays(code)
    succ = _kernels.face_successors(over, under, bits)
    nd = 4 * n
    seen = [False] * nd
    faces = []
    for d0 in range(nd):
        if seen[d0]:
            continue
        cyc = []
        d = d0
        while not seen[d]:
            seen[d] = True
            cyc.append(d)
            d = int(succ[d])
        faces.append(cyc)
    return faces


def _all_faces(code: PairCode) -> list[list[list[int]]]:
    return [_faces_of(code, bits) for bits in _valid_rotation_bits(code)]


def _poke_additions(code: PairCode, faces_per_embedding=None) -> set[PairCode]:
    """Drawable two-crossing additions, one per face-mate choice.

    The pairing form follows from the face geometry: the face boundary is
    coherently oriented, so two darts traversing their segments with equal
    forward/backward parity see each other antiparallel and the poke pairs
    crosswise; opposite parity pairs straight.

    Sites are keyed by segment, so the segment wrapping label 1 yields one
    labeling where slot enumeration yields two rotations of it.  The result
    matches the slot route exactly after canonicalization, which is the form
    the class search stores.
    """
    n = code.crossing_count
    if n == 0:
        return {PairCode([(1, 4), (2, 3)]), PairCode([(4, 1), (3, 2)])}
    out: set[PairCode] = set()
    if faces_per_embedding is None:
        faces_per_embedding = _all_faces(code)
    done: set[tuple] = set()
    for faces in faces_per_embedding:
        for face in faces:
            for x in range(len(face)):
                dx = face[x]
                sx = (dx >> 1) + 1
                for c in _self_poke(code, sx):
                    out.add(c)
                for y in range(x + 1, len(face)):
                    dy = face[y]
                    sy = (dy >> 1) + 1
                    if sx == sy:
                        continue
                    crossed = (dx & 1) == (dy & 1)
                    a, b = min(sx, sy), max(sx, sy)
                    if (a, b, crossed) in done:
                        continue
                    done.add((a, b, crossed))
                    for c in _cross_poke(code, a, b, crossed):
                        out.add(c)
    return out


def _triangle_segment_sets(code: PairCode, faces_per_embedding=None) -> set[frozenset]:
    if faces_per_embedding is None:
        faces_per_embedding = _all_faces(code)
    tris = set()
    for faces in faces_per_embedding:
        for face in faces:
            if len(face) == 3:
                tris.add(frozenset((d >> 1) + 1 for d in face))
    return tris


def _seg_between(x: int, y: int, two_n: int) -> int:
    # the segment joining cyclically adjacent labels x, y
    return x if (y - x) % two_n == 1 else y


def _r3_moves(code: PairCode, faces_per_embedding=None) -> set[PairCode]:
    n = code.crossing_count
    if n < 3:
        return set()
    two_n = 2 * n
    tris = _triangle_segment_sets(code, faces_per_embedding)
    if not tris:
        return set()
    by_over = {o: (o, u) for o, u in code.pairs}
    out = set()
    wrap = lambda x: (x - 1) % two_n + 1
    for i, j in code.pairs:  # c1: strand X over at i, strand Y under at j
        for di in (1, -1):
            c2 = by_over.get(wrap(i + di))
            if c2 is None:
                continue
            ip, k = c2  # c2: X over at i', strand Z under at k
            for dj in (1, -1):
                c3 = by_over.get(wrap(j + dj))
                if c3 is None:
                    continue
                jp, kp = c3  # c3: Y over at j', Z under at k'
                if (kp - k) % two_n not in (1, two_n - 1):
                    continue
                if len({(i, j), (ip, k), (jp, kp)}) != 3:
                    continue
                sides = frozenset((_seg_between(i, ip, two_n),
                                   _seg_between(j, jp, two_n),
                                   _seg_between(k, kp, two_n)))
                if len(sides) != 3 or sides not in tris:
                    continue
                rest = [p for p in code.pairs
                        if p not in ((i, j), (ip, k), (jp, kp))]
                out.add(PairCode(rest + [(i, kp), (ip, jp), (j, k)]))
    return out


def r1_neighbors(code: PairCode, maxN: int) -> set[PairCode]:
    """Kink additions (bounded by maxN) and kink deletions."""
    out = _r1_deletions(code)
    if code.crossing_count + 1 <= maxN:
        out |= _r1_additions(code)
    return out


def r2_neighbors(code: PairCode, maxN: int) -> set[PairCode]:
    """Poke additions (drawable ones only, bounded by maxN) and deletions."""
    out = _r2_deletions(code)
    if code.crossing_count + 2 <= maxN:
        for cand in _r2_symbolic_additions(code):
            if parity_check(cand):
                over, under = _arrays(cand)
                if int(_kernels.rotation_search(over, under)) >= 0:
                    out.add(cand)
    return out


def r3_neighbors(code: PairCode) -> set[PairCode]:
    """Triangle slides; crossing count never changes."""
    return _r3_moves(code)


def _move_neighbors(code: PairCode, bound: int, include_kinks: bool = True) -> set[PairCode]:
    # one shared embedding sweep feeds pokes and slides
    n = code.crossing_count
    out = _r1_deletions(code) | _r2_deletions(code)
    faces = None
    if n >= 3 or n + 2 <= bound:
        faces = _all_faces(code)
    if n >= 3:
        out |= _r3_moves(code, faces)
    if n + 2 <= bound:
        out |= _poke_additions(code, faces)
    if include_kinks and n + 1 <= bound:
        out |= _r1_additions(code)
    return out


@dataclass(frozen=True)
class ClassRecord:
    canonical_code: PairCode
    permanent_id: int
    temporary_id: int


class ClassStore:
    """Insertion-ordered records with union-find temporaries.

    Keys are byte strings of the flat label sequence (labels fit a byte for
    every feasible size), which keeps a million-record store affordable and
    makes key comparison agree with flat-sequence order.
    """

    def __init__(self):
        self._keys: list[bytes] = []
        self._parent: list[int] = []
        self._expanded: list[int] = []
        self._index: dict[bytes, int] = {}

    def __len__(self) -> int:
        return len(self._keys)

    def find(self, key: bytes) -> int | None:
        return self._index.get(key)

    def insert(self, key: bytes) -> int:
        perm = len(self._keys) + 1
        self._keys.append(key)
        self._parent.append(perm)
        self._expanded.append(-1)
        self._index[key] = perm
        return perm

    def root(self, perm: int) -> int:
        while self._parent[perm - 1] != perm:
            self._parent[perm - 1] = self._parent[self._parent[perm - 1] - 1]
            perm = self._parent[perm - 1]
        return perm

    def merge(self, p: int, q: int) -> int:
        rp, rq = self.root(p), self.root(q)
        if rp > rq:
            rp, rq = rq, rp
        if rp != rq:
            self._parent[rq - 1] = rp
        return rp

    def expanded_bound(self, perm: int) -> int:
        return self._expanded[perm - 1]

    def set_expanded(self, perm: int, bound: int) -> None:
        self._expanded[perm - 1] = bound

    def finalize(self) -> None:
        for perm in range(1, len(self._keys) + 1):
            self._parent[perm - 1] = self.root(perm)

    def code_at(self, perm: int) -> PairCode:
        return PairCode.from_flat(self._keys[perm - 1])

    @property
    def records(self) -> Iterator[ClassRecord]:
        for perm in range(1, len(self._keys) + 1):
            yield ClassRecord(self.code_at(perm), perm, self.root(perm))

    def representatives(self) -> list[tuple[int, PairCode]]:
        return [(r.permanent_id, r.canonical_code) for r in self.records
                if r.temporary_id == r.permanent_id]


def _class_key(code: PairCode, identify_mirrors: bool) -> bytes:
    canon = canonical_form(code)
    key = bytes(canon.flat())
    if identify_mirrors:
        mkey = bytes(canonical_form(mirror(code)).flat())
        if mkey < key:
            key = mkey
    return key


def _search(store: ClassStore, seed_key: bytes, bound: int,
            identify_mirrors: bool, include_kinks: bool = True,
            cap: int | None = None) -> None:
    frontier = deque([seed_key])
    expansions = 0
    while frontier:
        key = frontier.popleft()
        perm = store.find(key)
        if store.expanded_bound(perm) >= bound:
            continue
        if cap is not None and expansions >= cap:
            return
        store.set_expanded(perm, bound)
        expansions += 1
        code = PairCode.from_flat(key)
        for nb in _move_neighbors(code, bound, include_kinks):
            nkey = _class_key(nb, identify_mirrors)
            p2 = store.find(nkey)
            if p2 is None:
                p2 = store.insert(nkey)
                store.merge(perm, p2)
                frontier.append(nkey)
            else:
                store.merge(perm, p2)
                if store.expanded_bound(p2) < bound:
                    frontier.append(nkey)


def classify(codes: Iterable[PairCode], maxN: int,
             identify_mirrors: bool = True,
             excursion_lift: int = EXCURSION_LIFT,
             excursion_cap: int = EXCURSION_CAP) -> ClassStore:
    """Partition the input codes into move-equivalence classes.

    Each input explores moves bounded by its own crossing count; the store
    absorbs every visited code, so shared regions are walked once.  An input
    whose exploration meets no earlier record founds a class and gets one
    capped excursion with two extra crossings (never past maxN), the
    headroom tangle-flip chains need.  Temporary ids end up fully chased:
    afterwards every record points straight at its class representative.
    """
    store = ClassStore()
    for raw in codes:
        n0 = raw.crossing_count
        if n0 > maxN:
            raise BoundTooSmall(
                f"input has {n0} crossings, move bound is {maxN}")
        key = _class_key(raw, identify_mirrors)
        perm = store.find(key)
        if perm is None:
            perm = store.insert(key)
        _search(store, key, n0, identify_mirrors)
        if store.root(perm) == perm and excursion_lift > 0:
            bound = min(n0 + excursion_lift, maxN)
            if bound > n0:
                _search(store, key, bound, identify_mirrors,
                        include_kinks=False, cap=excursion_cap)
    store.finalize()
    return store


def serialize_store(store: ClassStore) -> str:
    """TSV lines `<code>\\t<permanent>\\t<temporary>` sorted by permanent id."""
    lines = [f"{serialize_code(r.canonical_code)}\t{r.permanent_id}\t{r.temporary_id}"
             for r in store.records]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_store(text: str) -> ClassStore:
    store = ClassStore()
    for line in text.splitlines():
        if not line:
            continue
        code_s, perm_s, temp_s = line.split("\t")
        code = parse_code(code_s)
        perm = store.insert(bytes(code.flat()))
        if perm != int(perm_s):
            raise ValueError(f"permanent ids not consecutive at {line!r}")
        store._parent[perm - 1] = int(temp_s)
    return store
