"""Exhaustive and sampled axiom checkers.

Every checker walks a domain in canonical order and stops at the first
violation, so the reported witness is the minimal one in that order.
Profiles are handled as mixed-radix codes over the domain's order list; the
rule is evaluated once per profile and its lotteries are interned.
"""
from __future__ import annotations

import itertools
import json
import math
import random
from collections import OrderedDict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from . import ratlp
from .errors import DomainMismatch, MissingProfile
from .lottery import Lottery, is_manipulation, sd_compare, SDComparison
from .prefs import (DomainSpec, OrderKind, Profile, WeakOrder, adjacent_pairs, adjacent_swap,
                    condorcet_winner, make_profile, pareto_dominates, pareto_dominators, parse_profile,
                    serialize_profile)
from .rules import INF, SDS, ScoreFunction


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    ABORTED = "ABORTED"


@dataclass
class AxiomReport:
    axiom: str
    verdict: Verdict
    witness: Optional[dict] = None
    stats: dict = field(default_factory=dict)
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS

    def to_dict(self) -> dict:
        out = {"axiom": self.axiom, "verdict": self.verdict.value, "witness": self.witness,
               "checked": {"profiles": self.stats.get("profiles", 0),
                           "deviations": self.stats.get("deviations", 0)}}
        extra = {k: v for k, v in self.stats.items() if k not in ("profiles", "deviations")}
        if extra:
            out["stats"] = extra
        if self.note:
            out["note"] = self.note
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    def line(self) -> str:
        return f"{self.axiom}: {self.verdict.value}" + (f" ({self.note})" if self.note else "")


def _ptext(p: Profile) -> str:
    return serialize_profile(p)


# --------------------------------------------------------------- evaluation

class DomainTable:
    """A domain's profiles as mixed-radix codes; voter 0 is the most significant digit."""

    def __init__(self, spec: DomainSpec):
        self.spec = spec
        self.orders = spec.orders()
        self.K = len(self.orders)
        self.n = spec.n
        self.m = spec.m
        self.names = spec.names
        self.size = spec.check_cap()
        self.weights = [self.K ** (self.n - 1 - i) for i in range(self.n)]
        self.order_index = {o: k for k, o in enumerate(self.orders)}

    def digits(self, idx: int) -> tuple[int, ...]:
        out = []
        for w in self.weights:
            out.append(idx // w)
            idx %= w
        return tuple(out)

    def code(self, digits: Sequence[int]) -> int:
        return sum(d * w for d, w in zip(digits, self.weights))

    def profile(self, idx: int) -> Profile:
        return make_profile(self.names, tuple(self.orders[d] for d in self.digits(idx)))

    def codes(self):
        """(index, digits) in canonical order."""
        return enumerate(itertools.product(range(self.K), repeat=self.n))

    def relabel_table(self, perm: Sequence[int]) -> list[int]:
        return [self.order_index[o.relabel(perm)] for o in self.orders]


class Evaluation:
    """The rule's output on every profile of a domain, interned."""

    def __init__(self, sds: SDS, table: DomainTable, ids, lotteries):
        self.sds = sds
        self.table = table
        self.ids = ids
        self.lotteries = lotteries
        self._intern = {l.probs: k for k, l in enumerate(lotteries)}
        denom = 1
        for l in lotteries:
            for v in l.probs:
                denom = math.lcm(denom, v.denominator)
        self.denom = denom
        self.ints = [tuple(v.numerator * (denom // v.denominator) for v in l.probs) for l in lotteries]
        self._prefix: dict[int, tuple] = {}
        self._bounds = [[tuple(sorted(c)) for c in o.classes] for o in table.orders]

    def lookup(self, probs) -> Optional[int]:
        return self._intern.get(probs)

    def prefix(self, lid: int, d: int) -> tuple:
        """Integer masses of the upper contour sets of order d (all but the last)."""
        key = lid * self.table.K + d
        got = self._prefix.get(key)
        if got is None:
            v = self.ints[lid]
            acc, out = 0, []
            for c in self._bounds[d][:-1]:
                for x in c:
                    acc += v[x]
                out.append(acc)
            got = self._prefix[key] = tuple(out)
        return got


_EVAL_CACHE: "OrderedDict[tuple, Evaluation]" = OrderedDict()
_EVAL_CACHE_SIZE = 6


def evaluate_domain(sds: SDS, spec: DomainSpec) -> Evaluation:
    key = (id(sds), spec)
    hit = _EVAL_CACHE.get(key)
    if hit is not None and hit.sds is sds:
        _EVAL_CACHE.move_to_end(key)
        return hit
    table = DomainTable(spec)
    if sds.kind == OrderKind.STRICT and spec.kind == OrderKind.WEAK:
        raise DomainMismatch(f"{sds.name} is only defined for strict preferences")
    intern: dict[tuple, int] = {}
    by_identity: dict[int, int] = {}  # rules often return shared lottery objects
    lotteries: list[Lottery] = []
    ids = []
    names, orders = table.names, table.orders
    for _, digs in table.codes():
        lot = sds(make_profile(names, tuple(orders[d] for d in digs)))
        k = by_identity.get(id(lot))
        if k is None or lotteries[k] is not lot:
            k = intern.get(lot.probs)
            if k is None:
                k = intern[lot.probs] = len(lotteries)
                lotteries.append(lot)
            if lotteries[k] is lot:
                by_identity[id(lot)] = k
        ids.append(k)
    ev = Evaluation(sds, table, ids, lotteries)
    _EVAL_CACHE[key] = ev
    if len(_EVAL_CACHE) > _EVAL_CACHE_SIZE:
        _EVAL_CACHE.popitem(last=False)
    return ev


def clear_cache() -> None:
    _EVAL_CACHE.clear()


def _require_filterless(spec: DomainSpec):
    if spec.filter is not None:
        raise ValueError("exhaustive checkers need an unfiltered domain")


# ------------------------------------------------------------ strategyproofness

def _sp_witness(ev: Evaluation, idx: int, i: int, idx2: int) -> dict:
    t = ev.table
    return {
        "profile": _ptext(t.profile(idx)),
        "deviator": i,
        "deviation_profile": _ptext(t.profile(idx2)),
        "truthful_lottery": ev.lotteries[ev.ids[idx]].to_dict(),
        "deviant_lottery": ev.lotteries[ev.ids[idx2]].to_dict(),
    }


def _sp_scan(ev: Evaluation, strong: bool, voters: Sequence[int], first_orders: Optional[Sequence[int]]):
    """Scan unilateral deviations; return (witness indices or None, profiles, deviations)."""
    t = ev.table
    ids, K, weights = ev.ids, t.K, t.weights
    prefix = ev.prefix
    if first_orders is None:
        ranges = [range(t.size)]
    else:
        w0 = weights[0]
        ranges = [range(d * w0, (d + 1) * w0) for d in sorted(first_orders)]
    profiles = deviations = 0
    for rng in ranges:
        for idx in rng:
            profiles += 1
            tid = ids[idx]
            for i in voters:
                w = weights[i]
                d = (idx // w) % K
                base = idx - d * w
                pt = None
                for d2 in range(K):
                    if d2 == d:
                        continue
                    deviations += 1
                    did = ids[base + d2 * w]
                    if did == tid:
                        continue
                    if pt is None:
                        pt = prefix(tid, d)
                    pd = prefix(did, d)
                    if strong:
                        bad = any(a < b for a, b in zip(pt, pd))
                    else:
                        bad = pd != pt and all(a >= b for a, b in zip(pd, pt))
                    if bad:
                        return (idx, i, base + d2 * w), profiles, deviations
    return None, profiles, deviations


def _orbit_representatives(table: DomainTable) -> list[int]:
    """One order index per orbit of the order list under relabelling alternatives."""
    seen, reps = set(), []
    perms = list(itertools.permutations(range(table.m)))
    for k, o in enumerate(table.orders):
        if k in seen:
            continue
        reps.append(k)
        for perm in perms:
            seen.add(table.order_index[o.relabel(perm)])
    return reps


def _check_sp(name: str, strong: bool, sds: SDS, spec: DomainSpec, sample: Optional[int],
              seed: int, reduce_symmetry: bool) -> AxiomReport:
    if sample is not None:
        return _check_sp_sampled(name, strong, sds, spec, sample, seed)
    _require_filterless(spec)
    ev = evaluate_domain(sds, spec)
    voters, firsts, note = range(spec.n), None, ""
    stats = {}
    if reduce_symmetry:
        an = check_anonymity(sds, spec)
        ne = check_neutrality(sds, spec)
        if an.passed and ne.passed:
            voters = [0]
            firsts = _orbit_representatives(ev.table)
            note = "reduced by verified anonymity and neutrality"
            stats["symmetry_reduced"] = True
        else:
            note = "symmetry not verified; full scan"
            stats["symmetry_reduced"] = False
    hit, profiles, deviations = _sp_scan(ev, strong, voters, firsts)
    stats.update(profiles=profiles, deviations=deviations)
    if hit is None:
        return AxiomReport(name, Verdict.PASS, None, stats, note)
    return AxiomReport(name, Verdict.FAIL, _sp_witness(ev, *hit), stats, note)


def _check_sp_sampled(name, strong, sds, spec, sample, seed) -> AxiomReport:
    rng = random.Random(seed)
    orders = spec.orders()
    K = len(orders)
    names = spec.names
    bounds = [[tuple(u) for u in o.boundary_sets()[:-1]] for o in orders]
    masses: dict[tuple, tuple] = {}

    def upper_masses(lot, d):
        # keyed by identity; the stored lottery keeps the id from being reused
        key = (id(lot), d)
        got = masses.get(key)
        if got is None or got[0] is not lot:
            if len(masses) > 200_000:
                masses.clear()
            probs = lot.probs
            got = masses[key] = (lot, tuple(sum(probs[x] for x in u) for u in bounds[d]))
        return got[1]

    profiles = deviations = 0
    for _ in range(sample):
        digs = [rng.randrange(K) for _ in range(spec.n)]
        vs = tuple(orders[d] for d in digs)
        p = make_profile(names, vs)
        if spec.filter is not None and not spec.filter(p):
            continue
        profiles += 1
        truth = sds(p)
        for i in range(spec.n):
            d = digs[i]
            tm = None
            for d2 in range(K):
                if d2 == d:
                    continue
                deviations += 1
                p2 = make_profile(names, vs[:i] + (orders[d2],) + vs[i + 1:])
                dev = sds(p2)
                if dev is truth or dev.probs == truth.probs:
                    continue
                if tm is None:
                    tm = upper_masses(truth, d)
                dm = upper_masses(dev, d)
                if strong:
                    bad = any(a < b for a, b in zip(tm, dm))
                else:
                    bad = dm != tm and all(a >= b for a, b in zip(dm, tm))
                if bad:
                    w = {"profile": _ptext(p), "deviator": i, "deviation_profile": _ptext(p2),
                         "truthful_lottery": truth.to_dict(), "deviant_lottery": dev.to_dict()}
                    return AxiomReport(name, Verdict.FAIL, w,
                                       {"profiles": profiles, "deviations": deviations, "sampled": True})
    return AxiomReport(name, Verdict.PASS, None,
                       {"profiles": profiles, "deviations": deviations, "sampled": True, "seed": seed},
                       f"uniform sample of {sample} profiles")


def check_weak_sp(sds: SDS, spec: DomainSpec, sample: Optional[int] = None, seed: int = 0,
                  reduce_symmetry: bool = False) -> AxiomReport:
    """No voter can obtain a strictly SD-preferred lottery by misreporting."""
    return _check_sp("weak-sp", False, sds, spec, sample, seed, reduce_symmetry)


def check_strong_sp(sds: SDS, spec: DomainSpec, sample: Optional[int] = None, seed: int = 0,
                    reduce_symmetry: bool = False) -> AxiomReport:
    """Truthful reporting always gives a lottery SD-preferred to every misreport."""
    return _check_sp("strong-sp", True, sds, spec, sample, seed, reduce_symmetry)


def check_tops_only_monotonicity(sds: SDS, spec: DomainSpec) -> AxiomReport:
    """For every unilateral deviation, f(R) = f(R') or f(R, T_i(R)) > f(R', T_i(R))."""
    _require_filterless(spec)
    ev = evaluate_domain(sds, spec)
    t = ev.table
    ids, K, weights = ev.ids, t.K, t.weights
    tops = [o.classes[0] for o in t.orders]
    ints = ev.ints
    profiles = deviations = 0
    for idx in range(t.size):
        profiles += 1
        tid = ids[idx]
        for i in range(t.n):
            w = weights[i]
            d = (idx // w) % K
            base = idx - d * w
            top = tops[d]
            mt = sum(ints[tid][x] for x in top)
            for d2 in range(K):
                if d2 == d:
                    continue
                deviations += 1
                idx2 = base + d2 * w
                did = ids[idx2]
                if did == tid:
                    continue
                if not mt > sum(ints[did][x] for x in top):
                    return AxiomReport("tops-only-monotonicity", Verdict.FAIL, _sp_witness(ev, idx, i, idx2),
                                       {"profiles": profiles, "deviations": deviations})
    return AxiomReport("tops-only-monotonicity", Verdict.PASS, None,
                       {"profiles": profiles, "deviations": deviations})


# ------------------------------------------------------------- per-profile axioms

def _per_profile(name, sds, spec, bad: Callable[[Profile, Lottery], Optional[dict]]) -> AxiomReport:
    _require_filterless(spec)
    ev = evaluate_domain(sds, spec)
    t = ev.table
    names, orders = t.names, t.orders
    count = 0
    for idx, digs in t.codes():
        count += 1
        p = make_profile(names, tuple(orders[d] for d in digs))
        lot = ev.lotteries[ev.ids[idx]]
        w = bad(p, lot)
        if w is not None:
            w = {"profile": _ptext(p), "lottery": lot.to_dict(), **w}
            return AxiomReport(name, Verdict.FAIL, w, {"profiles": count})
    return AxiomReport(name, Verdict.PASS, None, {"profiles": count})


def check_ex_post_efficiency(sds: SDS, spec: DomainSpec) -> AxiomReport:
    """Pareto-dominated alternatives get probability zero."""

    def bad(p, lot):
        for y, v in enumerate(lot.probs):
            if v:
                dom = pareto_dominators(p, y)
                if dom:
                    x = (dom & -dom).bit_length() - 1
                    return {"dominated": p.alts[y], "dominator": p.alts[x]}
        return None

    return _per_profile("ex-post", sds, spec, bad)


def check_condorcet_consistency(sds: SDS, spec: DomainSpec) -> AxiomReport:
    """A Condorcet winner, when present, gets probability one."""

    def bad(p, lot):
        cw = condorcet_winner(p)
        if cw is not None and lot[cw] != 1:
            return {"condorcet_winner": p.alts[cw]}
        return None

    return _per_profile("condorcet", sds, spec, bad)


def check_strong_condorcet_consistency(sds: SDS, spec: DomainSpec) -> AxiomReport:
    """Point masses occur exactly at Condorcet winners."""

    def bad(p, lot):
        cw = condorcet_winner(p)
        if cw is not None and lot[cw] != 1:
            return {"condorcet_winner": p.alts[cw]}
        if cw is None and len(lot.support()) == 1:
            return {"condorcet_winner": None}
        return None

    return _per_profile("strong-condorcet", sds, spec, bad)


def check_even_chance(sds: SDS, spec: DomainSpec) -> AxiomReport:
    """Every output is uniform on its support."""

    _require_filterless(spec)
    ev = evaluate_domain(sds, spec)
    bad = {k for k, lot in enumerate(ev.lotteries) if not lot.is_even_chance()}
    if not bad:
        return AxiomReport("even-chance", Verdict.PASS, None,
                           {"profiles": ev.table.size, "distinct_lotteries": len(ev.lotteries)})
    idx = next(k for k, lid in enumerate(ev.ids) if lid in bad)
    lot = ev.lotteries[ev.ids[idx]]
    w = {"profile": _ptext(ev.table.profile(idx)), "lottery": lot.to_dict(),
         "support": sorted(lot.names[x] for x in lot.support())}
    return AxiomReport("even-chance", Verdict.FAIL, w, {"profiles": idx + 1})


def check_sd_efficiency(sds: SDS, spec: DomainSpec) -> AxiomReport:
    """No lottery SD-dominates the output (decided by exact LP)."""

    def bad(p, lot):
        q = ratlp.sd_dominated(p, lot)
        return None if q is None else {"dominating_lottery": q.to_dict()}

    return _per_profile("sd-efficiency", sds, spec, bad)


# ---------------------------------------------------------------- symmetry axioms

def _voter_generators(n: int) -> list[tuple[int, ...]]:
    if n < 2:
        return []
    swap = tuple([1, 0] + list(range(2, n)))
    cycle = tuple((i + 1) % n for i in range(n))
    return [swap] if n == 2 else [swap, cycle]


def _alt_generators(m: int) -> list[tuple[int, ...]]:
    if m < 2:
        return []
    swap = tuple([1, 0] + list(range(2, m)))
    cycle = tuple((x + 1) % m for x in range(m))
    return [swap] if m == 2 else [swap, cycle]


def check_anonymity(sds: SDS, spec: DomainSpec) -> AxiomReport:
    """f is invariant under renaming voters (checked on a generating set of permutations)."""
    _require_filterless(spec)
    ev = evaluate_domain(sds, spec)
    t = ev.table
    gens = _voter_generators(t.n)
    count = 0
    for idx, digs in t.codes():
        count += 1
        for g in gens:
            moved = [0] * t.n
            for i, d in enumerate(digs):
                moved[g[i]] = d
            idx2 = t.code(moved)
            if ev.ids[idx2] != ev.ids[idx]:
                w = {"profile": _ptext(t.profile(idx)), "permuted_profile": _ptext(t.profile(idx2)),
                     "voter_permutation": list(g), "lottery": ev.lotteries[ev.ids[idx]].to_dict(),
                     "permuted_lottery": ev.lotteries[ev.ids[idx2]].to_dict()}
                return AxiomReport("anonymity", Verdict.FAIL, w, {"profiles": count})
    return AxiomReport("anonymity", Verdict.PASS, None, {"profiles": count, "generators": len(gens)})


def check_neutrality(sds: SDS, spec: DomainSpec) -> AxiomReport:
    """Renaming alternatives renames the lottery (checked on generators)."""
    _require_filterless(spec)
    ev = evaluate_domain(sds, spec)
    t = ev.table
    gens = _alt_generators(t.m)
    tables = [t.relabel_table(g) for g in gens]
    moved_lot: dict[tuple[int, int], Optional[int]] = {}
    count = 0
    for idx, digs in t.codes():
        count += 1
        lid = ev.ids[idx]
        for gk, (g, rel) in enumerate(zip(gens, tables)):
            idx2 = t.code([rel[d] for d in digs])
            key = (lid, gk)
            if key not in moved_lot:
                moved_lot[key] = ev.lookup(ev.lotteries[lid].relabel(g).probs)
            if ev.ids[idx2] != moved_lot[key]:
                w = {"profile": _ptext(t.profile(idx)), "permuted_profile": _ptext(t.profile(idx2)),
                     "alternative_permutation": {t.names[x]: t.names[g[x]] for x in range(t.m)},
                     "lottery": ev.lotteries[lid].to_dict(),
                     "permuted_lottery": ev.lotteries[ev.ids[idx2]].to_dict()}
                return AxiomReport("neutrality", Verdict.FAIL, w, {"profiles": count})
    return AxiomReport("neutrality", Verdict.PASS, None, {"profiles": count, "generators": len(gens)})


def check_pairwiseness(sds: SDS, spec: DomainSpec, inverse_pairs: bool = True) -> AxiomReport:
    """Outputs depend only on majority margins.

    Also checks that appending a voter together with the exact reverse of
    their order leaves the output unchanged, when the rule accepts n+2 voters.
    """
    _require_filterless(spec)
    ev = evaluate_domain(sds, spec)
    t = ev.table
    seen: dict[tuple, int] = {}
    count = 0
    for idx, digs in t.codes():
        count += 1
        key = tuple(map(sum, zip(*(t.orders[d].signs for d in digs))))
        prev = seen.setdefault(key, idx)
        if ev.ids[prev] != ev.ids[idx]:
            w = {"profile": _ptext(t.profile(prev)), "other_profile": _ptext(t.profile(idx)),
                 "lottery": ev.lotteries[ev.ids[prev]].to_dict(),
                 "other_lottery": ev.lotteries[ev.ids[idx]].to_dict()}
            return AxiomReport("pairwiseness", Verdict.FAIL, w, {"profiles": count})
    stats = {"profiles": count, "margin_classes": len(seen)}
    if not inverse_pairs:
        return AxiomReport("pairwiseness", Verdict.PASS, None, stats)
    extended = 0
    try:
        for idx in range(t.size):
            p = t.profile(idx)
            lot = ev.lotteries[ev.ids[idx]]
            for o in t.orders:
                q = make_profile(p.alts, p.voters + (o, o.reversed()))
                extended += 1
                got = sds(q)
                if got.probs != lot.probs:
                    w = {"profile": _ptext(p), "other_profile": _ptext(q), "lottery": lot.to_dict(),
                         "other_lottery": got.to_dict()}
                    stats["inverse_pair_profiles"] = extended
                    return AxiomReport("pairwiseness", Verdict.FAIL, w, stats)
    except (MissingProfile, DomainMismatch):
        stats["inverse_pair_profiles"] = 0
        return AxiomReport("pairwiseness", Verdict.PASS, None, stats,
                           "rule undefined for n+2 voters; inverse-pair clause skipped")
    stats["inverse_pair_profiles"] = extended
    return AxiomReport("pairwiseness", Verdict.PASS, None, stats)


def check_tops_only(sds: SDS, spec: DomainSpec) -> AxiomReport:
    """Outputs depend only on every voter's top class."""
    _require_filterless(spec)
    ev = evaluate_domain(sds, spec)
    t = ev.table
    top_of = [o.classes[0] for o in t.orders]
    seen: dict[tuple, int] = {}
    count = 0
    for idx, digs in t.codes():
        count += 1
        key = tuple(top_of[d] for d in digs)
        prev = seen.setdefault(key, idx)
        if ev.ids[prev] != ev.ids[idx]:
            w = {"profile": _ptext(t.profile(prev)), "other_profile": _ptext(t.profile(idx)),
                 "lottery": ev.lotteries[ev.ids[prev]].to_dict(),
                 "other_lottery": ev.lotteries[ev.ids[idx]].to_dict()}
            return AxiomReport("tops-only", Verdict.FAIL, w, {"profiles": count})
    return AxiomReport("tops-only", Verdict.PASS, None, {"profiles": count})


# ------------------------------------------------------------ score function laws

def _score_witness(law, p, i, x, y, q, s, s2):
    fmt = lambda v: "inf" if v is INF else str(v)
    return {"law": law, "profile": _ptext(p), "voter": i, "x": p.alts[x], "y": p.alts[y],
            "swapped_profile": _ptext(q), "scores": [fmt(v) for v in s],
            "swapped_scores": [fmt(v) for v in s2]}


def check_score_function_laws(sf: ScoreFunction, spec: DomainSpec, gibbard_balance: bool = False) -> AxiomReport:
    """At most one infinity, localizedness, monotonicity and balancedness on every adjacent swap.

    The swap moves y directly above x for a voter who had x directly above y.
    With gibbard_balance, the finite score changes of x and y must also cancel.
    """
    _require_filterless(spec)
    table = DomainTable(spec)
    names, orders = table.names, table.orders
    cache: dict[int, list] = {}

    def scores(idx):
        s = cache.get(idx)
        if s is None:
            s = cache[idx] = sf.scores(table.profile(idx))
        return s

    count = swaps = 0
    for idx, digs in table.codes():
        count += 1
        p = make_profile(names, tuple(orders[d] for d in digs))
        s = scores(idx)
        if sum(1 for v in s if v is INF) > 1:
            w = {"law": "at-most-one-infinity", "profile": _ptext(p), "scores": [str(v) for v in s]}
            return AxiomReport("score-laws", Verdict.FAIL, w, {"profiles": count, "swaps": swaps})
        for i in range(p.n):
            for x, y in adjacent_pairs(p.voters[i]):
                swaps += 1
                q = adjacent_swap(p, i, x, y)
                s2 = scores(table.code(list(digs[:i]) + [table.order_index[q.voters[i]]] + list(digs[i + 1:])))
                law = None
                if any(s[z] != s2[z] for z in range(p.m) if z not in (x, y)):
                    law = "localizedness"
                elif s2[y] < s[y]:
                    law = "monotonicity"
                elif s[y] == s2[y] and s[x] != s2[x] and not (s[y] is INF or (s[x] is INF and s[y] > 0)):
                    law = "balancedness"
                elif gibbard_balance and INF not in (s[x], s2[x], s[y], s2[y]) and s[x] - s2[x] != s2[y] - s[y]:
                    law = "gibbard-balance"
                if law:
                    return AxiomReport("score-laws", Verdict.FAIL, _score_witness(law, p, i, x, y, q, s, s2),
                                       {"profiles": count, "swaps": swaps})
    return AxiomReport("score-laws", Verdict.PASS, None, {"profiles": count, "swaps": swaps})


# ------------------------------------------------------------------ group power

def _top_mass(ev: Evaluation, idx: int, digs, i: int) -> Fraction:
    lot = ev.lotteries[ev.ids[idx]]
    return lot.mass(ev.table.orders[digs[i]].classes[0])


def _groups_agree(digs, group) -> bool:
    first = digs[group[0]]
    return all(digs[g] == first for g in group)


def is_decisive(sds: SDS, spec: DomainSpec, group: Iterable[int]) -> bool:
    """Whenever the group reports one common order, its top class gets probability one."""
    group = sorted(group)
    ev = evaluate_domain(sds, spec)
    for idx, digs in ev.table.codes():
        if _groups_agree(digs, group) and _top_mass(ev, idx, digs, group[0]) != 1:
            return False
    return True


def is_nominating(sds: SDS, spec: DomainSpec, group: Iterable[int]) -> bool:
    """Whenever the group reports one common order, its top class gets positive probability."""
    group = sorted(group)
    ev = evaluate_domain(sds, spec)
    for idx, digs in ev.table.codes():
        if _groups_agree(digs, group) and _top_mass(ev, idx, digs, group[0]) == 0:
            return False
    return True


def weak_dictators(sds: SDS, spec: DomainSpec) -> list[int]:
    """Voters whose top class always gets positive probability."""
    return [i for i in range(spec.n) if is_nominating(sds, spec, [i])]


@dataclass(frozen=True)
class DictatorshipClass:
    label: str  # DICTATORIAL | BIDICTATORIAL | NEITHER
    voters: tuple[int, ...] = ()

    def __str__(self):
        return self.label + (f"{list(self.voters)}" if self.voters else "")


def classify_dictatorial(sds: SDS, spec: DomainSpec) -> DictatorshipClass:
    ev = evaluate_domain(sds, spec)
    orders = ev.table.orders
    n = spec.n

    def always_covers(group):
        for idx, digs in ev.table.codes():
            lot = ev.lotteries[ev.ids[idx]]
            tops = frozenset().union(*(orders[digs[i]].classes[0] for i in group))
            if lot.mass(tops) != 1:
                return False
        return True

    for i in range(n):
        if always_covers([i]):
            return DictatorshipClass("DICTATORIAL", (i,))
    for i, j in itertools.combinations(range(n), 2):
        if always_covers([i, j]):
            return DictatorshipClass("BIDICTATORIAL", (i, j))
    return DictatorshipClass("NEITHER")


# ------------------------------------------------------------- witness replay

def replay_witness(report: AxiomReport, sds: SDS) -> bool:
    """Re-derive a FAIL from its witness with the plain definitions (no shortcuts)."""
    w = report.witness
    if report.verdict != Verdict.FAIL or w is None:
        return False
    if report.axiom in ("weak-sp", "strong-sp", "tops-only-monotonicity"):
        p = parse_profile(w["profile"])
        q = parse_profile(w["deviation_profile"])
        i = w["deviator"]
        if any(a != b for k, (a, b) in enumerate(zip(p.voters, q.voters)) if k != i) or p.voters[i] == q.voters[i]:
            return False
        fp, fq = sds(p), sds(q)
        if fp.to_dict() != w["truthful_lottery"] or fq.to_dict() != w["deviant_lottery"]:
            return False
        if report.axiom == "weak-sp":
            return is_manipulation(p.voters[i], fp, fq)
        if report.axiom == "strong-sp":
            return sd_compare(p.voters[i], fp, fq) not in (SDComparison.EQUAL, SDComparison.P_STRICTLY_PREFERRED)
        top = p.voters[i].tops()
        return fp != fq and not fp.mass(top) > fq.mass(top)
    p = parse_profile(w["profile"])
    lot = sds(p)
    if report.axiom == "ex-post":
        x, y = p.index(w["dominator"]), p.index(w["dominated"])
        return pareto_dominates(p, x, y) and lot[y] > 0
    if report.axiom in ("condorcet", "strong-condorcet"):
        cw = condorcet_winner(p)
        if cw is not None:
            return lot[cw] != 1
        return report.axiom == "strong-condorcet" and len(lot.support()) == 1
    if report.axiom == "even-chance":
        return not lot.is_even_chance()
    if report.axiom == "sd-efficiency":
        from .lottery import ex_ante_dominates, lottery_from_dict
        q = lottery_from_dict(w["dominating_lottery"], p.alts)
        return ex_ante_dominates(p.voters, q, lot)
    if report.axiom in ("pairwiseness", "tops-only", "anonymity", "neutrality"):
        other = w.get("other_profile") or w.get("permuted_profile")
        q = parse_profile(other)
        lq = sds(q)
        if report.axiom == "pairwiseness":
            from .prefs import majority_margins
            return majority_margins(p) == majority_margins(q) and lot != lq
        if report.axiom == "tops-only":
            return [o.tops() for o in p.voters] == [o.tops() for o in q.voters] and lot != lq
        if report.axiom == "anonymity":
            return sorted(p.voters) == sorted(q.voters) and lot != lq
        perm = [p.index(w["alternative_permutation"][a]) for a in p.alts]
        return [o.relabel(perm) for o in p.voters] == list(q.voters) and lot.relabel(perm) != lq
    return False


AXIOMS: dict[str, Callable] = {
    "weak-sp": check_weak_sp,
    "strong-sp": check_strong_sp,
    "ex-post": check_ex_post_efficiency,
    "condorcet": check_condorcet_consistency,
    "strong-condorcet": check_strong_condorcet_consistency,
    "anonymity": check_anonymity,
    "neutrality": check_neutrality,
    "pairwiseness": check_pairwiseness,
    "tops-only": check_tops_only,
    "even-chance": check_even_chance,
    "sd-efficiency": check_sd_efficiency,
    "tops-only-monotonicity": check_tops_only_monotonicity,
}
