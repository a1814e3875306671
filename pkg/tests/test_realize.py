import random

import pytest

from knottab.codes import PairCode, enumerate_codes, mirror
from knottab.realize import (Diagram, NotRealizable, UnknownCrossing,
                             arcs_at, enumerate_loops, jordan_test,
                             parity_check, realize, _realize)

from dt_oracle import dt_realizable

TREFOIL = PairCode([(1, 4), (5, 2), (3, 6)])
# parity holds but two loops cross an odd number of times
UNDRAWABLE5 = PairCode([(1, 4), (3, 6), (5, 8), (7, 10), (9, 2)])


def test_parity_check():
    assert parity_check(PairCode([(1, 2)]))
    assert not parity_check(PairCode([(1, 3), (2, 4)]))
    assert parity_check(UNDRAWABLE5)


def test_loop_counts():
    assert len(enumerate_loops(PairCode([]))) == 1
    assert len(enumerate_loops(PairCode([(1, 2)]))) == 3
    tre = enumerate_loops(TREFOIL)
    assert len(tre) == 15  # measured once; within the 3^3 bound
    assert len(tre) <= 27


def test_loop_bound_and_uniqueness():
    rng = random.Random(7)
    pool = [c for n in range(1, 6) for c in enumerate_codes(n)
            if parity_check(c)]
    for c in rng.sample(pool, 60):
        loops = enumerate_loops(c)
        assert len(loops) <= 3 ** c.crossing_count
        assert len(set(loops)) == len(loops)


def test_jordan_examples():
    assert jordan_test(PairCode([(1, 2)]))
    assert jordan_test(TREFOIL)
    assert not jordan_test(UNDRAWABLE5)


def test_realize_kink_sign_convention():
    d = realize(PairCode([(1, 2)]))
    assert d.signs == (1,)


def test_realize_trefoil_signs_equal():
    d = realize(TREFOIL)
    assert len(set(d.signs)) == 1


def test_realize_rejects_undrawable():
    with pytest.raises(NotRealizable):
        realize(PairCode([(1, 3), (2, 4)]))
    with pytest.raises(NotRealizable):
        realize(UNDRAWABLE5)


def test_arcs_at_trefoil_distinct():
    d = realize(TREFOIL)
    for c in range(3):
        assert len(set(arcs_at(d, c))) == 3


def test_arcs_at_kink_shared_arc():
    d = realize(PairCode([(1, 2)]))
    s_i, s_next, s_j = arcs_at(d, 0)
    assert s_i == s_j


def test_arcs_at_unknown_crossing():
    d = realize(PairCode([]))
    with pytest.raises(UnknownCrossing):
        arcs_at(d, 0)
    with pytest.raises(UnknownCrossing):
        arcs_at(realize(TREFOIL), 3)


def test_realize_succeeds_iff_jordan_passes():
    for n in range(1, 5):
        for c in enumerate_codes(n):
            if not parity_check(c):
                continue
            if jordan_test(c):
                assert isinstance(realize(c), Diagram)
            else:
                with pytest.raises(NotRealizable):
                    realize(c)


def test_arc_invariants():
    for n in range(1, 5):
        for c in enumerate_codes(n):
            if not (parity_check(c) and jordan_test(c)):
                continue
            d = realize(c)
            assert len(d.arcs) == n
            heads = [arc[0] for arc in d.arcs]
            assert sorted(heads) == sorted(u for _, u in c.pairs)
            assert sorted(s for arc in d.arcs for s in arc) == \
                list(range(1, 2 * n + 1))


def test_mirror_convention_flip():
    for n in range(1, 5):
        for c in enumerate_codes(n):
            if not parity_check(c):
                continue
            assert jordan_test(c) == jordan_test(mirror(c))
            if jordan_test(c):
                flipped = _realize(c, flip_mirror=True)
                assert flipped.signs == \
                    tuple(-s for s in realize(c).signs)


def test_dowker_oracle_spot_check():
    # the exhaustive n <= 6 sweep lives in the acceptance suite
    rng = random.Random(19)
    pool = [c for c in enumerate_codes(5) if parity_check(c)]
    for c in rng.sample(pool, 120):
        assert jordan_test(c) == dt_realizable(c)
    for n in range(1, 4):
        for c in enumerate_codes(n):
            if parity_check(c):
                assert jordan_test(c) == dt_realizable(c)
