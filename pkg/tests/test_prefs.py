import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sdsaudit.errors import CapExceeded, NotAdjacent, ProfileParseError
from sdsaudit.prefs import (
    DomainSpec, OrderKind, Permutation, Profile, WeakOrder, adjacent_pairs, adjacent_swap, apply_permutation,
    condorcet_winner, copeland_scores, count_orders, enumerate_orders, enumerate_profiles, majority_margins,
    margin_isomorphism, omni_set, pareto_dominates, pareto_optimal_set, parse_profile, plurality_scores,
    serialize_profile,
)

from .strategies import profiles, weak_orders


def test_parse_weak_order_with_ties():
    p = parse_profile("alts: a b c\n1: a,{b,c}\n")
    assert p.voters[0].classes == (frozenset({0}), frozenset({1, 2}))
    assert not p.is_strict


def test_parse_voter_ranges_and_comments():
    p = parse_profile("# header\nalts: a b c\n1..2: a,b,c  # two voters\n3: c,b,a\n")
    assert p.n == 3
    assert p.voters[0] == p.voters[1] == WeakOrder.strict([0, 1, 2])


@pytest.mark.parametrize("text, line, col", [
    ("alts: a b c\n1: a,b\n", 2, 7),
    ("alts: a b c\n1: a,b,b\n", 2, 8),
    ("alts: a b c\n1: a,b,d\n", 2, 8),
    ("alts: a b c\n1: a,{b,c\n", 2, 10),
    ("alts: a b\n1: a,b\n1: b,a\n", 3, 1),
    ("1: a,b\n", 1, 1),
])
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(ProfileParseError) as exc:
        parse_profile(text)
    assert exc.value.line == line
    assert exc.value.column == col


def test_parse_gap_in_voters():
    with pytest.raises(ProfileParseError, match="no order"):
        parse_profile("alts: a b\n1: a,b\n3: b,a\n")


@given(profiles(4, 3))
def test_serialize_roundtrip(p):
    assert parse_profile(serialize_profile(p)) == p


def test_order_counts():
    assert [count_orders(m, OrderKind.WEAK) for m in range(1, 6)] == [1, 3, 13, 75, 541]
    for m in range(1, 5):
        for kind in OrderKind:
            assert len(enumerate_orders(m, kind)) == count_orders(m, kind)
            assert len(set(enumerate_orders(m, kind))) == count_orders(m, kind)


def test_domain_sizes_and_cap():
    assert DomainSpec(3, 3, OrderKind.WEAK).size() == 2197
    assert DomainSpec(4, 3).size() == 13824
    assert sum(1 for _ in enumerate_profiles(DomainSpec(3, 2))) == 36
    with pytest.raises(CapExceeded):
        DomainSpec(5, 5, cap=1000).check_cap()


def test_enumeration_order_is_lexicographic():
    spec = DomainSpec(3, 2)
    orders = spec.orders()
    got = [tuple(orders.index(o) for o in p.voters) for p in enumerate_profiles(spec)]
    assert got == sorted(got)


def _brute_margin(p, x, y):
    return sum(o.prefers(x, y) for o in p.voters) - sum(o.prefers(y, x) for o in p.voters)


@given(profiles(4, 5))
def test_margins_antisymmetric_and_counted(p):
    mm = majority_margins(p)
    for x, y in itertools.product(range(4), repeat=2):
        assert mm[x, y] == -mm[y, x] == _brute_margin(p, x, y)


@given(profiles(4, 3))
def test_condorcet_winner_matches_definition(p):
    mm = majority_margins(p)
    winners = [x for x in range(4) if all(mm[x, y] > 0 for y in range(4) if y != x)]
    assert condorcet_winner(p) == (winners[0] if winners else None)


@given(profiles(4, 4))
def test_copeland_and_plurality(p):
    mm = majority_margins(p)
    cop = copeland_scores(p)
    for x in range(4):
        others = [y for y in range(4) if y != x]
        assert cop[x] == sum(mm[x, y] > 0 for y in others) + Fraction(sum(mm[x, y] == 0 for y in others), 2)
    plur = plurality_scores(p)
    assert sum(plur) == sum(len(o.tops()) == 1 for o in p.voters)


@given(profiles(4, 3))
def test_pareto_set_is_undominated(p):
    par = pareto_optimal_set(p)
    for y in range(4):
        dominated = any(pareto_dominates(p, x, y) for x in range(4))
        assert (y in par) == (not dominated)
    assert par


@given(profiles(4, 4, strict=True))
def test_omni_set_is_union_of_tops(p):
    assert omni_set(p) == frozenset(o.ranking()[0] for o in p.voters)


def test_adjacent_swap():
    p = parse_profile("alts: a b c\n1: a,b,c\n")
    assert adjacent_pairs(p.voters[0]) == [(0, 1), (1, 2)]
    assert adjacent_swap(p, 0, 0, 1).voters[0] == WeakOrder.strict([1, 0, 2])
    with pytest.raises(NotAdjacent):
        adjacent_swap(p, 0, 0, 2)


@given(profiles(4, 3), st.permutations(range(4)))
def test_margins_commute_with_relabelling(p, perm):
    q = apply_permutation(p, Permutation(tuple(perm)))
    mp, mq = majority_margins(p), majority_margins(q)
    for x, y in itertools.product(range(4), repeat=2):
        assert mq[perm[x], perm[y]] == mp[x, y]
    tau = margin_isomorphism(mp, mq)
    assert tau is not None
    for x, y in itertools.product(range(4), repeat=2):
        assert mp[tau(x), tau(y)] == mq[x, y]


@given(profiles(4, 3))
def test_margin_isomorphism_self_is_identity_or_earlier(p):
    mm = majority_margins(p)
    tau = margin_isomorphism(mm, mm)
    assert tau.mapping <= tuple(range(4))


@given(weak_orders(4))
def test_upper_contours_nested(o):
    bounds = o.boundary_sets()
    assert all(a < b for a, b in zip(bounds, bounds[1:]))
    assert bounds[-1] == frozenset(range(4))


def test_permutation_algebra():
    a = Permutation((1, 2, 0))
    assert a.compose(a.inverse()).mapping == (0, 1, 2)
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))


def test_voter_permutation():
    p = parse_profile("alts: a b\n1: a,b\n2: b,a\n")
    q = apply_permutation(p, Permutation((1, 0), "voters"))
    assert q.voters == (p.voters[1], p.voters[0])
    assert isinstance(q, Profile)
