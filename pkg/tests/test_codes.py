import random

import pytest

from knottab.codes import (InvalidCode, PairCode, canonical_form,
                           enumerate_codes, mirror, parse_code, relabel,
                           serialize_code)

TREFOIL = PairCode([(1, 4), (5, 2), (3, 6)])


def test_empty_code():
    assert PairCode([]).crossing_count == 0
    assert list(enumerate_codes(0)) == [PairCode([])]


def test_pair_order_insignificant():
    a = PairCode([(1, 4), (5, 2), (3, 6)])
    b = PairCode([(3, 6), (1, 4), (5, 2)])
    assert a == b
    assert hash(a) == hash(b)


@pytest.mark.parametrize("pairs", [
    [(1, 2), (1, 4)],          # duplicate label
    [(1, 2), (3, 5)],          # label out of range
    [(1, 3)],                  # hole in coverage
])
def test_invalid_codes_rejected(pairs):
    with pytest.raises(InvalidCode):
        PairCode(pairs)


@pytest.mark.parametrize("n,total", [(1, 2), (2, 8), (3, 48), (4, 384)])
def test_enumeration_totals(n, total):
    codes = list(enumerate_codes(n))
    assert len(codes) == total == len(set(codes))
    for c in codes:
        for o, u in c.pairs:
            assert (o + u) % 2 == 1


# counts measured by exhaustive orbit reduction before the enumerator
# gained its canonical-only path, then frozen
@pytest.mark.parametrize("n,count", [
    (0, 1), (1, 1), (2, 2), (3, 7), (4, 30), (5, 210), (6, 1973),
])
def test_canonical_counts(n, count):
    codes = list(enumerate_codes(n, canonical_only=True))
    assert len(codes) == count
    for c in codes:
        assert canonical_form(c) == c


def test_canonical_only_matches_orbit_reduction():
    for n in range(1, 5):
        via_flag = set(enumerate_codes(n, canonical_only=True))
        via_orbits = {canonical_form(c) for c in enumerate_codes(n)}
        assert via_flag == via_orbits


def test_relabel_identity_and_reversal():
    for c in (TREFOIL, PairCode([(1, 2)])):
        assert relabel(c, 0, 1) == c
        assert relabel(relabel(c, 2, -1), 2, -1) == c


def test_relabel_trefoil_cyclic_symmetry():
    assert relabel(TREFOIL, 2, 1) == TREFOIL


def test_relabel_is_group_action():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randrange(1, 7)
        c = rng.choice(list(enumerate_codes(n, canonical_only=True)))
        k1, k2 = rng.randrange(2 * n), rng.randrange(2 * n)
        e1, e2 = rng.choice((1, -1)), rng.choice((1, -1))
        lhs = relabel(relabel(c, k1, e1), k2, e2)
        rhs = relabel(c, (k2 + e2 * k1) % (2 * n), e1 * e2)
        assert lhs == rhs


def test_canonical_form_idempotent_and_orbit_constant():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randrange(1, 7)
        c = rng.choice(list(enumerate_codes(n, canonical_only=True)))
        canon = canonical_form(c)
        assert canonical_form(canon) == canon
        for k in range(2 * n):
            for e in (1, -1):
                assert canonical_form(relabel(c, k, e)) == canon


def test_mirror_involution_and_single_pair():
    assert mirror(mirror(TREFOIL)) == TREFOIL
    assert mirror(PairCode([(1, 2)])) == PairCode([(2, 1)])


def test_mirror_commutes_with_relabel():
    rng = random.Random(3)
    for _ in range(30):
        n = rng.randrange(1, 6)
        c = rng.choice(list(enumerate_codes(n, canonical_only=True)))
        k, e = rng.randrange(2 * n), rng.choice((1, -1))
        assert mirror(relabel(c, k, e)) == relabel(mirror(c), k, e)


def test_mirror_trefoil_same_orbit():
    # the shift-by-one relabeling swaps odd and even positions, which for
    # this cyclically symmetric code is exactly the role swap
    assert relabel(TREFOIL, 1, 1) == mirror(TREFOIL)
    assert canonical_form(mirror(TREFOIL)) == canonical_form(TREFOIL)


def test_serialization_round_trip():
    assert serialize_code(TREFOIL) == "3;(1,4)(3,6)(5,2)"
    assert serialize_code(PairCode([])) == "0;"
    for n in range(0, 4):
        for c in enumerate_codes(n):
            assert parse_code(serialize_code(c)) == c


@pytest.mark.parametrize("line", ["", "3;(1,4)(3,6)", "1;(1,3)", "x;(1,2)"])
def test_parse_rejects_malformed(line):
    with pytest.raises((InvalidCode, ValueError)):
        parse_code(line)
