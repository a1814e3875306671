"""Hot numerical kernels shared across the package.

Everything here is nopython-compatible and decorated with maybe_njit: compiled
with numba by default, plain Python when KNOTTAB_PURE=1 (see _njit).

Conventions: labels are 1-based int32; a code with n crossings is a flat row
[o1, u1, o2, u2, ...] with pairs sorted by over label; segment s runs from
label s to label s+1 (mod 2n); dart 2*(s-1)+d is segment s traversed forward
(d=0) or backward (d=1).  Bit masks are int64.
"""

import numpy as np

from ._njit import maybe_njit


@maybe_njit(cache=True)
def canonical_min_flat(flat):
    """Lexicographic minimum of a flat code over all label rotations and
    reflections (at most 4n relabelings), pairs re-sorted by over label."""
    two_n = flat.shape[0]
    n = two_n // 2
    best = np.empty(two_n, np.int32)
    po = np.empty(n, np.int32)
    pu = np.empty(n, np.int32)
    first = True
    for ei in range(2):
        eps = 1 - 2 * ei
        for k in range(two_n):
            for t in range(n):
                po[t] = (k + eps * flat[2 * t] - 1) % two_n + 1
                pu[t] = (k + eps * flat[2 * t + 1] - 1) % two_n + 1
            for a in range(1, n):
                oo = po[a]
                uu = pu[a]
                b = a - 1
                while b >= 0 and po[b] > oo:
                    po[b + 1] = po[b]
                    pu[b + 1] = pu[b]
                    b -= 1
                po[b + 1] = oo
                pu[b + 1] = uu
            if first:
                for t in range(n):
                    best[2 * t] = po[t]
                    best[2 * t + 1] = pu[t]
                first = False
            else:
                cmp = 0
                for t in range(two_n):
                    v = po[t // 2] if t % 2 == 0 else pu[t // 2]
                    if v < best[t]:
                        cmp = -1
                        break
                    if v > best[t]:
                        cmp = 1
                        break
                if cmp < 0:
                    for t in range(n):
                        best[2 * t] = po[t]
                        best[2 * t + 1] = pu[t]
    return best


@maybe_njit(cache=True)
def enumerate_parity_flat(n, cap, canonical_only):
    """All codes on {1..2n} pairing odd with even labels, as flat rows in
    row-lex order; canonical_only keeps orbit minima.  Count -1 = cap hit."""
    two_n = 2 * n
    out = np.empty((cap, two_n), np.int32)
    if n == 0:
        return np.int64(1), out
    cnt = np.int64(0)
    used = np.zeros(two_n + 1, np.uint8)
    co = np.zeros(n, np.int32)
    cu = np.zeros(n, np.int32)
    flat = np.empty(two_n, np.int32)
    level = 0
    while level >= 0:
        if co[level] > 0:
            used[co[level]] = 0
            used[cu[level]] = 0
        o_max = two_n
        if canonical_only == 1 and level == 0:
            o_max = 1  # the orbit minimum always makes label 1 an over
        o = co[level]
        u = cu[level]
        if o == 0:
            o = 1 if level == 0 else co[level - 1] + 1
            u = 0
        found = False
        while o <= o_max:
            if used[o] == 0:
                uu = u + 1
                while uu <= two_n:
                    if used[uu] == 0 and ((uu + o) & 1) == 1:
                        break
                    uu += 1
                if uu <= two_n:
                    u = uu
                    found = True
                    break
            o += 1
            u = 0
        if not found:
            co[level] = 0
            cu[level] = 0
            level -= 1
            continue
        co[level] = o
        cu[level] = u
        used[o] = 1
        used[u] = 1
        if level == n - 1:
            emit = True
            if canonical_only == 1:
                for t in range(n):
                    flat[2 * t] = co[t]
                    flat[2 * t + 1] = cu[t]
                cf = canonical_min_flat(flat)
                for t in range(two_n):
                    if cf[t] != flat[t]:
                        emit = False
                        break
            if emit:
                if cnt >= cap:
                    return np.int64(-1), out
                for t in range(n):
                    out[cnt, 2 * t] = co[t]
                    out[cnt, 2 * t + 1] = cu[t]
                cnt += 1
        else:
            level += 1
    return cnt, out


@maybe_njit(cache=True)
def _end_tables(over, under):
    """Dart arrival slots and exit darts per crossing end.

    Slots at crossing c: 0 over-in, 1 under-in, 2 over-out, 3 under-out.
    arrive[d] = 4c + slot where dart d ends; leave[4c + s] = dart leaving
    through slot s.
    """
    n = over.shape[0]
    two_n = 2 * n
    cross_of = np.zeros(two_n + 1, np.int32)
    overbit = np.zeros(two_n + 1, np.uint8)
    for c in range(n):
        cross_of[over[c]] = c
        overbit[over[c]] = 1
        cross_of[under[c]] = c
    arrive = np.empty(4 * n, np.int32)
    leave = np.empty(4 * n, np.int32)
    for s in range(1, two_n + 1):
        fwd = 2 * (s - 1)
        head = s + 1 if s < two_n else 1
        c = cross_of[head]
        arrive[fwd] = 4 * c + (0 if overbit[head] == 1 else 1)
        c2 = cross_of[s]
        arrive[fwd + 1] = 4 * c2 + (2 if overbit[s] == 1 else 3)
    for c in range(n):
        a = over[c]
        b = under[c]
        pa = a - 1 if a > 1 else two_n
        pb = b - 1 if b > 1 else two_n
        leave[4 * c + 0] = 2 * (pa - 1) + 1
        leave[4 * c + 1] = 2 * (pb - 1) + 1
        leave[4 * c + 2] = 2 * (a - 1)
        leave[4 * c + 3] = 2 * (b - 1)
    return arrive, leave


@maybe_njit(cache=True)
def rotation_search(over, under):
    """Smallest chirality assignment embedding the code in the sphere, or -1.

    Bit c = 0 orders the ends of crossing c counterclockwise as (over-in,
    under-in, over-out, under-out); bit c = 1 reverses the cycle.  An
    assignment works iff the face orbits number n + 2 (Euler, sphere).
    """
    n = over.shape[0]
    if n == 0:
        return np.int64(0)
    arrive, leave = _end_tables(over, under)
    nd = 4 * n
    visited = np.zeros(nd, np.uint8)
    for bits in range(1 << n):
        for d in range(nd):
            visited[d] = 0
        faces = 0
        for d0 in range(nd):
            if visited[d0] == 1:
                continue
            faces += 1
            d = d0
            while True:
                visited[d] = 1
                e = arrive[d]
                c = e >> 2
                s = e & 3
                if (bits >> c) & 1 == 0:
                    s2 = (s + 1) & 3
                else:
                    s2 = (s + 3) & 3
                d = leave[(c << 2) | s2]
                if d == d0:
                    break
        if faces == n + 2:
            return np.int64(bits)
    return np.int64(-1)


@maybe_njit(cache=True)
def valid_rotations(over, under, cap):
    """Every chirality assignment whose face count meets the sphere bound.

    Returns (count, assignments); count -1 means cap was too small.  Codes
    with cut crossings (kinks, sum points) admit several assignments, one per
    flip of an independent lobe.
    """
    n = over.shape[0]
    out = np.empty(cap, np.int64)
    if n == 0:
        out[0] = 0
        return np.int64(1), out
    arrive, leave = _end_tables(over, under)
    nd = 4 * n
    visited = np.zeros(nd, np.uint8)
    m = np.int64(0)
    for bits in range(1 << n):
        for d in range(nd):
            visited[d] = 0
        faces = 0
        for d0 in range(nd):
            if visited[d0] == 1:
                continue
            faces += 1
            d = d0
            while True:
                visited[d] = 1
                e = arrive[d]
                c = e >> 2
                s = e & 3
                if (bits >> c) & 1 == 0:
                    s2 = (s + 1) & 3
                else:
                    s2 = (s + 3) & 3
                d = leave[(c << 2) | s2]
                if d == d0:
                    break
        if faces == n + 2:
            if m >= cap:
                return np.int64(-1), out
            out[m] = bits
            m += 1
    return m, out


@maybe_njit(cache=True)
def face_successors(over, under, bits):
    """Next boundary dart per dart under the given chirality assignment."""
    n = over.shape[0]
    arrive, leave = _end_tables(over, under)
    nd = 4 * n
    succ = np.empty(nd, np.int32)
    for d in range(nd):
        e = arrive[d]
        c = e >> 2
        s = e & 3
        if (bits >> c) & 1 == 0:
            s2 = (s + 1) & 3
        else:
            s2 = (s + 3) & 3
        succ[d] = leave[(c << 2) | s2]
    return succ


@maybe_njit(cache=True)
def loop_triple_keys(over, under, log2_table):
    """Packed (segment-mask, straight-over, straight-under) keys of all loops.

    Sweeps the 3^n per-crossing states (straight / two smoothings); an orbit
    of the induced successor map is kept when it turns at most once at every
    crossing.  Keys are deduplicated in an open-address table; returns
    (count, table) with count -1 on table overflow.
    """
    n = over.shape[0]
    tsize = 1 << log2_table
    table = np.full(tsize, -1, np.int64)
    if n == 0:
        return np.int64(0), table
    arrive, leave = _end_tables(over, under)
    nd = 4 * n
    tmask = tsize - 1
    state = np.zeros(n, np.int8)
    visited = np.zeros(nd, np.uint8)
    arrivals = np.zeros(n, np.int32)
    orbit = np.empty(nd, np.int32)
    nkeys = np.int64(0)
    while True:
        for d in range(nd):
            visited[d] = 0
        for d0 in range(nd):
            if visited[d0] == 1:
                continue
            olen = 0
            segmask = np.int64(0)
            so = np.int64(0)
            su = np.int64(0)
            ok = True
            d = d0
            while True:
                visited[d] = 1
                orbit[olen] = d
                olen += 1
                segmask |= np.int64(1) << (d >> 1)
                e = arrive[d]
                c = e >> 2
                s = e & 3
                st = state[c]
                if st == 0:
                    s2 = s ^ 2
                    if s == 0 or s == 2:
                        so |= np.int64(1) << c
                    else:
                        su |= np.int64(1) << c
                else:
                    if st == 1:
                        s2 = s ^ 1
                    else:
                        s2 = s ^ 3
                    arrivals[c] += 1
                    if arrivals[c] > 1:
                        ok = False
                d = leave[(c << 2) | s2]
                if d == d0:
                    break
            for t in range(olen):
                arrivals[arrive[orbit[t]] >> 2] = 0
            if ok:
                key = (segmask << 32) | (so << 16) | su
                h = (key ^ (key >> 17)) & tmask
                while True:
                    v = table[h]
                    if v == key:
                        break
                    if v == -1:
                        table[h] = key
                        nkeys += 1
                        if nkeys * 2 > tsize:
                            return np.int64(-1), table
                        break
                    h = (h + 1) & tmask
        adv = 0
        while adv < n:
            state[adv] += 1
            if state[adv] < 3:
                break
            state[adv] = 0
            adv += 1
        if adv == n:
            break
    return nkeys, table


@maybe_njit(cache=True)
def jordan_verdict(over, under, log2_table):
    """1 when every loop pair shares a segment or meets transversally an even
    number of times, 0 when some pair meets oddly, -1 on table overflow."""
    n = over.shape[0]
    if n == 0:
        return np.int64(1)
    nkeys, table = loop_triple_keys(over, under, log2_table)
    if nkeys < 0:
        return np.int64(-1)
    keys = np.empty(max(nkeys, 1), np.int64)
    m = 0
    for t in range(table.shape[0]):
        if table[t] != -1:
            keys[m] = table[t]
            m += 1
    for a in range(m):
        ka = keys[a]
        sega = ka >> 32
        soa = (ka >> 16) & np.int64(0xFFFF)
        sua = ka & np.int64(0xFFFF)
        for b in range(a + 1, m):
            kb = keys[b]
            if (sega & (kb >> 32)) != 0:
                continue
            sob = (kb >> 16) & np.int64(0xFFFF)
            sub = kb & np.int64(0xFFFF)
            cnt = 0
            y = soa & sub
            while y != 0:
                y &= y - 1
                cnt += 1
            y = sua & sob
            while y != 0:
                y &= y - 1
                cnt += 1
            if cnt & 1 == 1:
                return np.int64(0)
    return np.int64(1)


@maybe_njit(cache=True)
def realizable_mask(flats):
    """Per-row spherical realizability of a batch of flat codes."""
    rows = flats.shape[0]
    n = flats.shape[1] // 2
    mask = np.zeros(rows, np.uint8)
    over = np.empty(n, np.int32)
    under = np.empty(n, np.int32)
    for r in range(rows):
        for t in range(n):
            over[t] = flats[r, 2 * t]
            under[t] = flats[r, 2 * t + 1]
        if rotation_search(over, under) >= 0:
            mask[r] = 1
    return mask


@maybe_njit(cache=True)
def split_mask(flats):
    """Rows whose labels part into two pair-closed cyclic intervals, each
    holding at least one whole pair (connected-sum / distant-summand shape)."""
    rows = flats.shape[0]
    n = flats.shape[1] // 2
    mask = np.zeros(rows, np.uint8)
    two_n = 2 * n
    part = np.zeros(two_n + 1, np.int32)
    for r in range(rows):
        for t in range(n):
            o = flats[r, 2 * t]
            u = flats[r, 2 * t + 1]
            part[o] = u
            part[u] = o
        hit = 0
        for s in range(1, two_n + 1):
            maxe = 0
            ptr = 0
            while ptr <= maxe:
                lbl = (s - 1 + ptr) % two_n + 1
                pp = (part[lbl] - s) % two_n
                if pp > maxe:
                    maxe = pp
                ptr += 1
            size = maxe + 1
            if size >= 2 and size <= two_n - 2:
                hit = 1
                break
        mask[r] = hit
    return mask


@maybe_njit(cache=True)
def _color_propagate(M0, Minv0, in_arc, out_arc, over_arc, positive, color,
                     trail, tlen, arc, val):
    """Assign color[arc] = val, then close under the crossing relations.

    Returns (ok, tlen); assignments are logged on the trail so the caller can
    unwind after a conflict.
    """
    if color[arc] >= 0:
        return color[arc] == val, tlen
    color[arc] = val
    trail[tlen] = arc
    tlen += 1
    changed = True
    while changed:
        changed = False
        for c in range(in_arc.shape[0]):
            ai = in_arc[c]
            ao = out_arc[c]
            aj = over_arc[c]
            cj = color[aj]
            if cj < 0:
                continue
            ci = color[ai]
            co = color[ao]
            if positive[c] == 1:
                if ci >= 0:
                    w = M0[ci, cj]
                    if co < 0:
                        color[ao] = w
                        trail[tlen] = ao
                        tlen += 1
                        changed = True
                    elif co != w:
                        return False, tlen
                elif co >= 0:
                    color[ai] = Minv0[co, cj]
                    trail[tlen] = ai
                    tlen += 1
                    changed = True
            else:
                if co >= 0:
                    w = M0[co, cj]
                    if ci < 0:
                        color[ai] = w
                        trail[tlen] = ai
                        tlen += 1
                        changed = True
                    elif ci != w:
                        return False, tlen
                elif ci >= 0:
                    color[ao] = Minv0[ci, cj]
                    trail[tlen] = ao
                    tlen += 1
                    changed = True
    return True, tlen


@maybe_njit(cache=True)
def coloring_count(M0, Minv0, in_arc, out_arc, over_arc, positive, n_arcs):
    """Number of arc colorings satisfying every crossing relation.

    Backtracking with forced propagation; matrices are 0-based, Minv0 is the
    column inverse (Minv0[k, j] = i with M0[i, j] = k).
    """
    m = M0.shape[0]
    if in_arc.shape[0] == 0:
        total = np.int64(1)
        for _ in range(n_arcs):
            total *= m
        return total
    color = np.full(n_arcs, -1, np.int32)
    trail = np.empty(n_arcs, np.int32)
    tlen = 0
    barc = np.empty(n_arcs + 1, np.int32)
    bval = np.empty(n_arcs + 1, np.int32)
    btrail = np.empty(n_arcs + 1, np.int32)
    bfresh = np.empty(n_arcs + 1, np.uint8)
    depth = 0
    bfresh[0] = 1
    count = np.int64(0)
    while depth >= 0:
        if bfresh[depth] == 1:
            bfresh[depth] = 0
            a = -1
            for t in range(n_arcs):
                if color[t] < 0:
                    a = t
                    break
            if a < 0:
                count += 1
                depth -= 1
                continue
            barc[depth] = a
            bval[depth] = -1
            btrail[depth] = tlen
        while tlen > btrail[depth]:
            tlen -= 1
            color[trail[tlen]] = -1
        v = bval[depth] + 1
        placed = False
        while v < m:
            ok, t2 = _color_propagate(M0, Minv0, in_arc, out_arc, over_arc,
                                      positive, color, trail, tlen,
                                      barc[depth], v)
            tlen = t2
            if ok:
                placed = True
                break
            while tlen > btrail[depth]:
                tlen -= 1
                color[trail[tlen]] = -1
            v += 1
        bval[depth] = v
        if placed:
            depth += 1
            bfresh[depth] = 1
        else:
            depth -= 1
    return count


@maybe_njit(cache=True)
def _axiom3_full(M):
    nc = M.shape[0]
    for i in range(nc):
        for j in range(nc):
            k = M[i, j]
            for l in range(nc):
                if M[M[l, j], k] != M[M[l, i], j]:
                    return False
    return True


@maybe_njit(cache=True)
def _closed_rows(M, donemask, nc, seen, queue):
    """True if some completed row's closure stalls inside completed rows as a
    proper color subset; such a prefix only completes to reducible tables."""
    for s in range(nc):
        if (donemask >> s) & 1 == 0:
            continue
        for t in range(nc):
            seen[t] = 0
        seen[s] = 1
        queue[0] = s
        qlen = 1
        head = 0
        stalled = True
        while head < qlen:
            i = queue[head]
            head += 1
            if (donemask >> i) & 1 == 0:
                stalled = False
                break
            for j in range(nc):
                v = M[i, j]
                if seen[v] == 0:
                    seen[v] = 1
                    queue[qlen] = v
                    qlen += 1
        if stalled and qlen < nc:
            return True
    return False


@maybe_njit(cache=True)
def _orbit_min(M, Mm, perm, inv, ctr):
    """1 iff M is the row-major minimum over simultaneous relabelings of M
    and its mirror Mm; aborts at the first strictly smaller image."""
    nc = M.shape[0]
    for which in range(2):
        A = M if which == 0 else Mm
        for t in range(nc):
            perm[t] = t
            ctr[t] = 0
        while True:
            for t in range(nc):
                inv[perm[t]] = t
            smaller = False
            decided = False
            for a in range(nc):
                for b in range(nc):
                    v = perm[A[inv[a], inv[b]]]
                    w = M[a, b]
                    if v != w:
                        smaller = v < w
                        decided = True
                        break
                if decided:
                    break
            if smaller:
                return False
            i = 0
            advanced = False
            while i < nc:
                if ctr[i] < i:
                    if i % 2 == 0:
                        tmp = perm[0]
                        perm[0] = perm[i]
                        perm[i] = tmp
                    else:
                        tmp = perm[ctr[i]]
                        perm[ctr[i]] = perm[i]
                        perm[i] = tmp
                    ctr[i] += 1
                    advanced = True
                    break
                ctr[i] = 0
                i += 1
            if not advanced:
                break
    return True


@maybe_njit(cache=True)
def quandle_search(nc, cap):
    """Irreducible orbit-minimal color-test tables of size nc (0-based).

    Depth-first decision search over unset cells with unit propagation:
    every assignment is pushed through each self-distributivity instance it
    touches, and an instance with four known cells forces its fifth, with
    column-bijection masks vetoing bad forces.  A trail records propagated
    cells for exact undo on backtrack.  Branches whose completed rows trap
    a proper closed color subset are cut, first-row cells are capped at one
    more than the column index whether decided or forced (a transposition
    of anything larger with that cap produces a row-major smaller image, so
    such tables are never orbit minima), and at each leaf only the row-major
    minimum of the
    permutation/mirror orbit is kept, so the output holds exactly one table
    per test-equivalence orbit.  Returns (count, tables); a negative count
    is the overflow total when cap was too small, so the caller can rerun
    with an exact allocation.
    """
    sz = nc * nc
    out = np.empty((cap, sz), np.int32)
    if nc == 1:
        out[0, 0] = 0
        return np.int64(1), out
    M = np.full((nc, nc), -1, np.int32)
    colinv = np.full((nc, nc), -1, np.int32)
    colused = np.zeros(nc, np.int64)
    rowfill = np.zeros(nc, np.int32)
    for d in range(nc):
        M[d, d] = d
        colinv[d, d] = d
        colused[d] = np.int64(1) << d
        rowfill[d] = 1
    trail = np.empty(sz, np.int32)
    tlen = 0
    prop = np.empty(sz, np.int32)
    dcell = np.full(sz + 1, -2, np.int32)
    dval = np.empty(sz + 1, np.int32)
    dmark = np.empty(sz + 1, np.int32)
    seen = np.zeros(nc, np.uint8)
    queue = np.empty(nc, np.int32)
    Mm = np.empty((nc, nc), np.int32)
    perm = np.empty(nc, np.int32)
    inv = np.empty(nc, np.int32)
    ctr = np.zeros(nc, np.int32)
    allmask = (np.int64(1) << nc) - np.int64(1)
    cnt = np.int64(0)
    depth = 0
    while depth >= 0:
        if dcell[depth] == -2:
            c = -1
            for t in range(sz):
                if M[t // nc, t % nc] < 0:
                    c = t
                    break
            if c < 0:
                if _axiom3_full(M) and not _closed_rows(
                        M, allmask, nc, seen, queue):
                    for a in range(nc):
                        for b in range(nc):
                            Mm[M[a, b], b] = a
                    if _orbit_min(M, Mm, perm, inv, ctr):
                        if cnt < cap:
                            for a in range(nc):
                                for b in range(nc):
                                    out[cnt, a * nc + b] = M[a, b]
                        cnt += 1
                depth -= 1
                continue
            dcell[depth] = c
            dval[depth] = -1
            dmark[depth] = tlen
        else:
            while tlen > dmark[depth]:
                tlen -= 1
                f = trail[tlen]
                fi = f // nc
                fj = f % nc
                fv = M[fi, fj]
                M[fi, fj] = -1
                colinv[fj, fv] = -1
                colused[fj] &= ~(np.int64(1) << fv)
                rowfill[fi] -= 1
        c = dcell[depth]
        i0 = c // nc
        j0 = c % nc
        vmax = nc - 1
        if i0 == 0 and j0 + 1 < vmax:
            vmax = j0 + 1
        dbase = np.int64(0)
        for r in range(nc):
            if rowfill[r] == nc:
                dbase |= np.int64(1) << r
        v = dval[depth] + 1
        placed = False
        while v <= vmax:
            if (colused[j0] >> v) & 1 == 1:
                v += 1
                continue
            M[i0, j0] = v
            colinv[j0, v] = i0
            colused[j0] |= np.int64(1) << v
            rowfill[i0] += 1
            trail[tlen] = c
            tlen += 1
            prop[0] = c
            plen = 1
            phead = 0
            ok = True
            while phead < plen:
                pc = prop[phead]
                phead += 1
                a = pc // nc
                b = pc % nc
                bad = False
                for t in range(5 * nc):
                    role = t // nc
                    w = t - role * nc
                    if role == 0:
                        l = a
                        x = b
                        y = w
                    elif role == 1:
                        l = a
                        x = w
                        y = b
                    elif role == 2:
                        l = w
                        x = a
                        y = b
                    elif role == 3:
                        x = w
                        y = b
                        l = colinv[x, a]
                        if l < 0:
                            continue
                    else:
                        y = w
                        l = colinv[y, a]
                        x = colinv[y, b]
                        if l < 0 or x < 0:
                            continue
                    p1 = M[l, x]
                    if p1 < 0:
                        continue
                    p2 = M[l, y]
                    if p2 < 0:
                        continue
                    p3 = M[x, y]
                    if p3 < 0:
                        continue
                    va = M[p1, y]
                    vb = M[p2, p3]
                    if va < 0:
                        if vb < 0:
                            continue
                        if (colused[y] >> vb) & 1 == 1:
                            bad = True
                            break
                        if p1 == 0 and vb > y + 1:
                            bad = True
                            break
                        M[p1, y] = vb
                        colinv[y, vb] = p1
                        colused[y] |= np.int64(1) << vb
                        rowfill[p1] += 1
                        fc = p1 * nc + y
                        trail[tlen] = fc
                        tlen += 1
                        prop[plen] = fc
                        plen += 1
                    elif vb < 0:
                        if (colused[p3] >> va) & 1 == 1:
                            bad = True
                            break
                        if p2 == 0 and va > p3 + 1:
                            bad = True
                            break
                        M[p2, p3] = va
                        colinv[p3, va] = p2
                        colused[p3] |= np.int64(1) << va
                        rowfill[p2] += 1
                        fc = p2 * nc + p3
                        trail[tlen] = fc
                        tlen += 1
                        prop[plen] = fc
                        plen += 1
                    elif va != vb:
                        bad = True
                        break
                if bad:
                    ok = False
                    break
            if ok:
                donemask = np.int64(0)
                for r in range(nc):
                    if rowfill[r] == nc:
                        donemask |= np.int64(1) << r
                if donemask != dbase and _closed_rows(
                        M, donemask, nc, seen, queue):
                    ok = False
            if ok:
                dval[depth] = v
                depth += 1
                dcell[depth] = -2
                placed = True
                break
            while tlen > dmark[depth]:
                tlen -= 1
                f = trail[tlen]
                fi = f // nc
                fj = f % nc
                fv = M[fi, fj]
                M[fi, fj] = -1
                colinv[fj, fv] = -1
                colused[fj] &= ~(np.int64(1) << fv)
                rowfill[fi] -= 1
            v += 1
        if not placed:
            dcell[depth] = -2
            depth -= 1
    if cnt > cap:
        return -cnt, out
    return cnt, out


@maybe_njit(cache=True)
def quandle_min_key(M, Mm):
    """Row-major minimum of M and its mirror Mm over simultaneous relabelings
    of rows, columns, and values (the permutation/mirror orbit key)."""
    nc = M.shape[0]
    sz = nc * nc
    best = np.empty(sz, np.int32)
    cur = np.empty(sz, np.int32)
    perm = np.empty(nc, np.int32)
    inv = np.empty(nc, np.int32)
    ctr = np.zeros(nc, np.int32)
    first = True
    for which in range(2):
        A = M if which == 0 else Mm
        for t in range(nc):
            perm[t] = t
            ctr[t] = 0
        while True:
            for t in range(nc):
                inv[perm[t]] = t
            idx = 0
            for a in range(nc):
                for b in range(nc):
                    cur[idx] = perm[A[inv[a], inv[b]]]
                    idx += 1
            if first:
                for t in range(sz):
                    best[t] = cur[t]
                first = False
            else:
                for t in range(sz):
                    if cur[t] < best[t]:
                        for t2 in range(sz):
                            best[t2] = cur[t2]
                        break
                    if cur[t] > best[t]:
                        break
            i = 0
            done = True
            while i < nc:
                if ctr[i] < i:
                    if i % 2 == 0:
                        tmp = perm[0]
                        perm[0] = perm[i]
                        perm[i] = tmp
                    else:
                        tmp = perm[ctr[i]]
                        perm[ctr[i]] = perm[i]
                        perm[i] = tmp
                    ctr[i] += 1
                    done = False
                    break
                ctr[i] = 0
                i += 1
            if done:
                break
    return best
