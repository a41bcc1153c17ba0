from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sdsaudit.lottery import (
    Lottery, SDComparison, ex_ante_dominates, is_manipulation, lottery_from_dict, mask_of, members,
    point_mass, sd_compare, set_manipulation, set_masks, uniform,
)
from sdsaudit.prefs import WeakOrder

from .strategies import lotteries, weak_orders

ABC = WeakOrder.strict([0, 1, 2])
THIRDS = uniform(range(3), 3)
B = point_mass(1, 3)


def _by_definition(order, p, q):
    # every upper contour set of every alternative, not just class boundaries
    ge = [p.mass(order.upper_contour(x)) >= q.mass(order.upper_contour(x)) for x in range(order.m)]
    le = [p.mass(order.upper_contour(x)) <= q.mass(order.upper_contour(x)) for x in range(order.m)]
    if all(ge) and all(le):
        return SDComparison.EQUAL
    if all(ge):
        return SDComparison.P_STRICTLY_PREFERRED
    if all(le):
        return SDComparison.Q_STRICTLY_PREFERRED
    return SDComparison.INCOMPARABLE


def test_incomparable_pair():
    assert sd_compare(ABC, THIRDS, B) == SDComparison.INCOMPARABLE
    assert sd_compare(ABC, B, THIRDS) == SDComparison.INCOMPARABLE


def test_manipulation_examples():
    assert not is_manipulation(ABC, THIRDS, THIRDS)
    assert not is_manipulation(ABC, THIRDS, B)
    assert not is_manipulation(ABC, B, THIRDS)
    assert is_manipulation(ABC, B, point_mass(0, 3))


def test_lottery_validation():
    with pytest.raises(ValueError):
        Lottery((Fraction(1, 2), Fraction(1, 3), Fraction(1, 6) + Fraction(1, 100)))
    with pytest.raises(ValueError):
        Lottery((Fraction(3, 2), Fraction(-1, 2)))
    with pytest.raises(ValueError):
        uniform([], 3)


def test_dict_roundtrip():
    lot = lottery_from_dict({"a": "1/2", "c": "1/2"}, ("a", "b", "c"))
    assert lot.to_dict() == {"a": "1/2", "b": "0", "c": "1/2"}
    assert lot.is_even_chance()
    with pytest.raises(ValueError):
        lottery_from_dict({"z": "1"}, ("a", "b"))


@given(weak_orders(4), lotteries(4), lotteries(4))
def test_boundary_check_matches_definition(o, p, q):
    assert sd_compare(o, p, q) == _by_definition(o, p, q)


@given(weak_orders(4), lotteries(4), lotteries(4))
def test_compare_is_antisymmetric(o, p, q):
    flip = {SDComparison.P_STRICTLY_PREFERRED: SDComparison.Q_STRICTLY_PREFERRED,
            SDComparison.Q_STRICTLY_PREFERRED: SDComparison.P_STRICTLY_PREFERRED}
    c = sd_compare(o, p, q)
    assert sd_compare(o, q, p) == flip.get(c, c)


@given(weak_orders(4), lotteries(4, 6), lotteries(4, 6), lotteries(4, 6))
def test_weak_preference_transitive(o, p, q, r):
    good = (SDComparison.EQUAL, SDComparison.P_STRICTLY_PREFERRED)
    if sd_compare(o, p, q) in good and sd_compare(o, q, r) in good:
        assert sd_compare(o, p, r) in good


@given(weak_orders(4), st.integers(1, 15), st.integers(1, 15))
def test_set_manipulation_matches_lotteries(o, x, y):
    truthful, deviant = uniform(members(x), 4), uniform(members(y), 4)
    assert set_manipulation(set_masks(o), x, y) == is_manipulation(o, truthful, deviant)


def test_mask_helpers():
    assert mask_of([0, 2]) == 5
    assert members(5) == [0, 2]


def test_ex_ante_dominance():
    orders = [ABC, WeakOrder.strict([0, 2, 1])]
    assert ex_ante_dominates(orders, point_mass(0, 3), THIRDS)
    assert not ex_ante_dominates(orders, THIRDS, point_mass(0, 3))
    assert not ex_ante_dominates(orders, THIRDS, THIRDS)


@given(lotteries(4), st.permutations(range(4)))
def test_relabel_preserves_mass(p, perm):
    q = p.relabel(perm)
    assert all(q[perm[x]] == p[x] for x in range(4))
