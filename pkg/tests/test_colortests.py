import itertools
import random

import pytest

from knottab.codes import PairCode, enumerate_codes, mirror, parse_code
from knottab.colortests import (ColorMatrix, GcdViolation, SizeMismatch,
                                affine, conjugation, count_colorings,
                                enumerate_tests, invariant_vector,
                                irreducible, mirror_test, parse_test,
                                same_test, serialize_test, validate)
from knottab.realize import arcs_at, jordan_test, parity_check, realize

TRICOLOR = ColorMatrix([[1, 3, 2], [3, 2, 1], [2, 1, 3]])
TREFOIL = parse_code("3;(1,4)(3,6)(5,2)")
FIG8 = parse_code("4;(1,4)(5,8)(3,6)(7,2)")


def trivial_test(n):
    return ColorMatrix([[i] * n for i in range(1, n + 1)])


def test_validate_examples():
    assert validate(ColorMatrix([[1]]))
    assert validate(TRICOLOR)
    assert not validate(ColorMatrix([[1, 3, 2], [3, 2, 1], [2, 3, 1]]))
    assert not validate(ColorMatrix([[2, 3, 2], [3, 2, 1], [2, 1, 3]]))


def test_two_colors_yield_nothing():
    # axioms 1-2 force the trivial table, which reduces
    candidates = []
    for cols in itertools.product(itertools.permutations((1, 2)), repeat=2):
        M = ColorMatrix([[cols[j][i] for j in range(2)] for i in range(2)])
        if M.entries[0][0] == 1 and M.entries[1][1] == 2:
            candidates.append(M)
    assert candidates == [trivial_test(2)]
    assert validate(trivial_test(2))
    assert not irreducible(trivial_test(2))
    assert enumerate_tests(2) == []


def test_irreducible_examples():
    assert irreducible(TRICOLOR)
    assert irreducible(ColorMatrix([[1]]))
    for n in (2, 3, 4):
        assert validate(trivial_test(n))
        assert not irreducible(trivial_test(n))


def test_same_test_examples():
    assert same_test(TRICOLOR, TRICOLOR)
    assert same_test(TRICOLOR, mirror_test(TRICOLOR))
    with pytest.raises(SizeMismatch):
        same_test(TRICOLOR, enumerate_tests(4)[0])


def test_same_test_permuted():
    rng = random.Random(9)
    for M in enumerate_tests(4) + enumerate_tests(5):
        n = M.size
        perm = list(range(1, n + 1))
        rng.shuffle(perm)
        permuted = ColorMatrix(
            [[perm[M.entries[perm.index(i)][perm.index(j)] - 1]
              for j in range(1, n + 1)] for i in range(1, n + 1)])
        assert validate(permuted)
        assert same_test(M, permuted)


# counts frozen from the published table of tests per color count
@pytest.mark.parametrize("n,count", [
    (1, 1), (2, 0), (3, 1), (4, 1), (5, 2), (6, 2),
])
def test_enumerate_counts(n, count):
    tests = enumerate_tests(n)
    assert len(tests) == count
    for M in tests:
        assert validate(M) and irreducible(M)
    for a, b in itertools.combinations(tests, 2):
        assert not same_test(a, b)


def test_enumerate_three_is_tricolor():
    (M,) = enumerate_tests(3)
    assert same_test(M, TRICOLOR)


def test_affine_examples():
    assert affine(3, 1).entries == TRICOLOR.entries
    with pytest.raises(GcdViolation):
        affine(4, 1)
    with pytest.raises(GcdViolation):
        affine(4, 3)  # gcd(k+1, n) fails
    M = affine(5, 1)
    assert validate(M) and irreducible(M)


def test_conjugation_examples():
    assert same_test(conjugation(3, (2, 1)), TRICOLOR)
    assert conjugation(2, (2,)).size == 1
    cycles = conjugation(3, (3,))
    assert validate(cycles)
    assert not irreducible(cycles)
    assert cycles.entries == trivial_test(2).entries


def partitions(m):
    if m == 0:
        yield ()
        return
    for first in range(m, 0, -1):
        for rest in partitions(m - first):
            if not rest or rest[0] <= first:
                yield (first,) + rest


def test_conjugation_always_validates():
    for m in range(2, 6):
        for part in partitions(m):
            assert validate(conjugation(m, part))


def test_count_colorings_examples():
    unknot = realize(PairCode([]))
    for M in (TRICOLOR, affine(5, 1), affine(7, 2)):
        assert count_colorings(unknot, M) == M.size
    assert count_colorings(realize(TREFOIL), TRICOLOR) == 9
    assert count_colorings(realize(FIG8), TRICOLOR) == 3
    # dihedral 5-color counts pin the classic determinant facts
    assert count_colorings(realize(TREFOIL), affine(5, 1)) == 5
    assert count_colorings(realize(FIG8), affine(5, 1)) == 25


def brute_count(d, M):
    total = 0
    for colors in itertools.product(range(1, M.size + 1),
                                    repeat=len(d.arcs)):
        ok = True
        for c in range(d.code.crossing_count):
            s_in, s_out, s_over = arcs_at(d, c)
            if d.signs[c] > 0:
                ok = M.entries[colors[s_in] - 1][colors[s_over] - 1] == \
                    colors[s_out]
            else:
                ok = M.entries[colors[s_out] - 1][colors[s_over] - 1] == \
                    colors[s_in]
            if not ok:
                break
        total += ok
    return total


def test_count_matches_brute_force():
    rng = random.Random(17)
    pool = [c for n in range(0, 5) for c in enumerate_codes(n, canonical_only=True)
            if not n or (parity_check(c) and jordan_test(c))]
    suite = [TRICOLOR, affine(5, 1), affine(5, 2), conjugation(4, (2, 1, 1)),
             trivial_test(3)]
    for c in rng.sample(pool, 10):
        d = realize(c)
        for M in suite:
            assert count_colorings(d, M) == brute_count(d, M)


def test_constant_colorings_floor():
    rng = random.Random(29)
    pool = [c for n in range(3, 6) for c in enumerate_codes(n, canonical_only=True)
            if parity_check(c) and jordan_test(c)]
    suite = enumerate_tests(5) + [conjugation(4, (2, 1, 1))]
    for c in rng.sample(pool, 12):
        d = realize(c)
        for M in suite:
            assert count_colorings(d, M) >= M.size


def test_mirror_compensation():
    suite = enumerate_tests(3) + enumerate_tests(5) + \
        [conjugation(4, (3, 1)), affine(7, 2)]
    rng = random.Random(37)
    pool = [c for n in range(3, 6) for c in enumerate_codes(n, canonical_only=True)
            if parity_check(c) and jordan_test(c)]
    for c in rng.sample(pool, 10):
        d, dm = realize(c), realize(mirror(c))
        for M in suite:
            pair = {count_colorings(d, M),
                    count_colorings(d, mirror_test(M))}
            pair_m = {count_colorings(dm, M),
                      count_colorings(dm, mirror_test(M))}
            assert pair == pair_m


def test_invariant_vectors():
    suite = enumerate_tests(1) + enumerate_tests(2) + enumerate_tests(3)
    v_un = invariant_vector(realize(PairCode([])), suite)
    v_tre = invariant_vector(realize(TREFOIL), suite)
    v_f8 = invariant_vector(realize(FIG8), suite)
    assert [v for _, v in v_un.entries] == [1, 3]
    assert [v for _, v in v_tre.entries] == [1, 9]
    assert v_tre.entries != v_f8.entries
    assert [v for _, v in v_f8.entries] == [1, 3]


def test_serialization_round_trip():
    assert serialize_test(TRICOLOR) == "n=3;1,3,2|3,2,1|2,1,3"
    assert parse_test("n=3;1,3,2|3,2,1|2,1,3") == TRICOLOR
    for n in range(1, 6):
        for M in enumerate_tests(n):
            assert parse_test(serialize_test(M)) == M


@pytest.mark.parametrize("text", [
    "", "n=2;1,2", "n=1;2", "3;1,3,2|3,2,1|2,1,3", "n=2;1,x|2,1",
])
def test_parse_rejects_malformed(text):
    with pytest.raises(ValueError):
        parse_test(text)
