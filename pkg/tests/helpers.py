"""Hand-built rules used by several test modules."""
from sdsaudit.lottery import point_mass, uniform
from sdsaudit.prefs import DomainSpec, OrderKind, enumerate_profiles
from sdsaudit.rules import TableRule, omninomination_rule


def _tops(p):
    return tuple(o.ranking()[0] for o in p.voters)


def corrupted_omni_tables(m=3, n=3):
    """Two tops-only tables that differ from omninomination on a few top vectors.

    The first swaps the outputs for tops (a,a,b,...) and (c,c,c,...); the second
    hands every all-distinct top vector to alternative a.
    """
    profiles = list(enumerate_profiles(DomainSpec(m, n, OrderKind.STRICT)))
    t1, t2 = (0, 0, 1) + (0,) * (n - 3), (2,) * n
    swapped = {}
    for p in profiles:
        t = _tops(p)
        if t == t1:
            swapped[p.key()] = uniform({2}, m, p.alts)
        elif t == t2:
            swapped[p.key()] = uniform({0, 1}, m, p.alts)
        else:
            swapped[p.key()] = omninomination_rule(p)
    favour_a = {}
    for p in profiles:
        t = _tops(p)
        favour_a[p.key()] = point_mass(0, m, p.alts) if len(set(t)) == n else omninomination_rule(p)
    alts = profiles[0].alts
    return (TableRule(swapped, alts, OrderKind.STRICT, m, n, "omni-swapped"),
            TableRule(favour_a, alts, OrderKind.STRICT, m, n, "omni-favour-a"))
