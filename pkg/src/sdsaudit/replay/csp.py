"""Finite-domain search over even-chance outcomes.

Every node is a profile; its value is the non-empty support of a uniform
lottery, encoded as a bitmask over alternatives. Domains are bitmasks over
those values, so support tests are single AND operations.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..errors import BudgetExceeded, ScriptFormatError
from ..lottery import members, set_manipulation, set_masks
from ..prefs import Profile, WeakOrder, condorcet_winner, majority_margins, pareto_dominators

DEFAULT_BUDGET = 10_000_000

UNARIES = ("EX_POST", "CONDORCET", "STRONG_CC", "LEMMA1_ONLY_CW", "LEMMA2_NO_UNTIED_PAIRS")


def value_order(m: int) -> list[int]:
    """Non-empty subsets, smallest first, then lexicographic by members."""
    subs = range(1, 1 << m)
    return sorted(subs, key=lambda s: (s.bit_count(), members(s)))


def unary_allows(name: str, p: Profile, s: int) -> bool:
    size = s.bit_count()
    if name == "EX_POST":
        return all(not pareto_dominators(p, x) for x in members(s))
    cw = condorcet_winner(p)
    if name == "CONDORCET":
        return cw is None or s == 1 << cw
    if name == "STRONG_CC":
        return s == 1 << cw if cw is not None else size != 1
    if name == "LEMMA1_ONLY_CW":
        return size != 1 or (cw is not None and s == 1 << cw)
    if name == "LEMMA2_NO_UNTIED_PAIRS":
        if size != 2:
            return True
        x, y = members(s)
        return majority_margins(p)[x, y] == 0
    raise ScriptFormatError(f"unknown unary constraint {name!r}")


@dataclass
class Edge:
    u: int
    v: int
    kind: str  # WEAK_SP or SYMMETRY
    compat: list  # compat[s] = bitmask of values of v compatible with value s at u
    info: dict = field(default_factory=dict)
    rev: Optional["Edge"] = field(default=None, repr=False, compare=False)


@dataclass
class CSPResult:
    status: str  # SAT | UNSAT | BUDGET_EXCEEDED
    assignment: Optional[dict[str, frozenset]] = None
    trace: list = field(default_factory=list)
    search_nodes: int = 0
    verified: bool = False

    def render(self, names: Sequence[str]) -> dict:
        out = {"status": self.status, "search_nodes": self.search_nodes}
        if self.assignment is not None:
            out["assignment"] = {k: sorted(names[x] for x in v) for k, v in self.assignment.items()}
            out["verified"] = self.verified
        if self.trace:
            out["trace"] = self.trace
        return out


_COMPAT_CACHE: dict[tuple, list] = {}


def sp_compat(m: int, truth_u: WeakOrder, truth_v: WeakOrder) -> list:
    """Pairs (X at u, Y at v) with no manipulation in either direction.

    The deviating voter has truth_u at u and truth_v at v.
    """
    key = (m, truth_u.rank, truth_v.rank)
    got = _COMPAT_CACHE.get(key)
    if got is not None:
        return got
    bu, bv = set_masks(truth_u), set_masks(truth_v)
    full = 1 << m
    compat = [0] * full
    for s in range(1, full):
        mask = 0
        for t in range(1, full):
            if not set_manipulation(bu, s, t) and not set_manipulation(bv, t, s):
                mask |= 1 << t
        compat[s] = mask
    _COMPAT_CACHE[key] = compat
    return compat


def _perm_mask(s: int, perm: Sequence[int]) -> int:
    out = 0
    for x in members(s):
        out |= 1 << perm[x]
    return out


class CSP:
    def __init__(self, m: int, names: Sequence[str]):
        self.m = m
        self.names = tuple(names)
        self.node_names: list[str] = []
        self.profiles: list[Profile] = []
        self.domains: list[int] = []
        self.edges: list[Edge] = []
        self.adj: list[list[Edge]] = []
        self.index: dict[Profile, int] = {}
        self.aliases: dict[str, int] = {}
        self.unary_log: list[str] = []

    # construction
    def add_node(self, name: str, p: Profile) -> int:
        if p.m != self.m:
            raise ScriptFormatError(f"{name} has {p.m} alternatives, expected {self.m}")
        k = self.index.get(p)
        if k is not None:
            self.aliases[name] = k
            return k
        k = len(self.profiles)
        self.index[p] = k
        self.aliases[name] = k
        self.node_names.append(name)
        self.profiles.append(p)
        self.domains.append(sum(1 << s for s in range(1, 1 << self.m)))
        self.adj.append([])
        return k

    def apply_unary(self, name: str, nodes: Optional[Sequence[int]] = None) -> None:
        for k in (range(len(self.profiles)) if nodes is None else nodes):
            p = self.profiles[k]
            dom = self.domains[k]
            for s in range(1, 1 << self.m):
                if dom >> s & 1 and not unary_allows(name, p, s):
                    dom &= ~(1 << s)
            self.domains[k] = dom

    def _add_edge(self, e: Edge) -> None:
        self.edges.append(e)
        self.adj[e.u].append(e)
        table = [0] * (1 << self.m)
        for s in range(1, 1 << self.m):
            c = e.compat[s]
            for t in range(1, 1 << self.m):
                if c >> t & 1:
                    table[t] |= 1 << s
        back = Edge(e.v, e.u, e.kind, table, e.info, rev=e)
        e.rev = back
        self.adj[e.v].append(back)

    def add_sp_edge(self, u: int, v: int, voter: int) -> None:
        pu, pv = self.profiles[u], self.profiles[v]
        compat = sp_compat(self.m, pu.voters[voter], pv.voters[voter])
        self._add_edge(Edge(u, v, "WEAK_SP", compat, {"voter": voter}))

    def add_symmetry_edge(self, u: int, v: int, perm: Sequence[int]) -> None:
        """value(v) must be the image of value(u) under perm."""
        compat = [0] + [1 << _perm_mask(s, perm) for s in range(1, 1 << self.m)]
        self._add_edge(Edge(u, v, "SYMMETRY", compat, {"perm": list(perm)}))

    def auto_sp_edges(self) -> int:
        """Connect every pair of nodes that differ in exactly one voter's order."""
        groups: dict[tuple, list[int]] = {}
        for k, p in enumerate(self.profiles):
            for i in range(p.n):
                groups.setdefault((p.n, i, p.voters[:i], p.voters[i + 1:]), []).append(k)
        count = 0
        for (n, i, _, _), ks in sorted(groups.items(), key=lambda kv: (kv[1][0], kv[0][1])):
            for u, v in itertools.combinations(sorted(ks), 2):
                self.add_sp_edge(u, v, i)
                count += 1
        return count

    # solving
    def _revise(self, doms, e: Edge) -> bool:
        du, dv = doms[e.u], doms[e.v]
        new = du
        s = du
        while s:
            low = s & -s
            val = low.bit_length() - 1
            if not e.compat[val] & dv:
                new &= ~low
            s ^= low
        if new != du:
            doms[e.u] = new
            return True
        return False

    def propagate(self, doms, queue=None, trace=None) -> bool:
        if queue is None:
            queue = deque(e for arcs in self.adj for e in arcs)
        queued = set(id(e) for e in queue)
        while queue:
            e = queue.popleft()
            queued.discard(id(e))
            before = doms[e.u]
            if self._revise(doms, e):
                if trace is not None:
                    removed = before & ~doms[e.u]
                    trace.append(self._trace_line(e, removed))
                if doms[e.u] == 0:
                    return False
                for arc in self.adj[e.u]:
                    back = arc.rev
                    if arc.v != e.v and id(back) not in queued:
                        queue.append(back)
                        queued.add(id(back))
        return True

    def _trace_line(self, e: Edge, removed: int) -> str:
        vals = [self._set_text(s) for s in range(1, 1 << self.m) if removed >> s & 1]
        how = f"voter {e.info['voter'] + 1}" if "voter" in e.info else "symmetry"
        return f"{self.node_names[e.u]}: drop {', '.join(vals)} ({e.kind} with {self.node_names[e.v]}, {how})"

    def _set_text(self, s: int) -> str:
        return "{" + ",".join(self.names[x] for x in members(s)) + "}"

    def solve(self, budget: int = DEFAULT_BUDGET, want_trace: bool = True) -> CSPResult:
        doms = list(self.domains)
        trace: list[str] = list(self.unary_log)
        for k, d in enumerate(doms):
            if d == 0:
                trace.append(f"{self.node_names[k]}: no value survives the unary constraints")
                return CSPResult("UNSAT", None, trace, 0)
        if not self.propagate(doms, trace=trace if want_trace else None):
            return CSPResult("UNSAT", None, trace, 0)
        order = value_order(self.m)
        rank = {s: r for r, s in enumerate(order)}
        counter = [0]

        def search(doms):
            counter[0] += 1
            if counter[0] > budget:
                raise BudgetExceeded(f"search exceeded {budget} nodes")
            open_nodes = [k for k, d in enumerate(doms) if d & (d - 1)]
            if not open_nodes:
                return doms
            k = min(open_nodes, key=lambda j: (doms[j].bit_count(), j))
            vals = sorted((s for s in range(1, 1 << self.m) if doms[k] >> s & 1), key=rank.__getitem__)
            for s in vals:
                trial = list(doms)
                trial[k] = 1 << s
                if self.propagate(trial, deque(a.rev for a in self.adj[k])):
                    got = search(trial)
                    if got is not None:
                        return got
            return None

        try:
            final = search(doms)
        except BudgetExceeded:
            return CSPResult("BUDGET_EXCEEDED", None, [], counter[0])
        if final is None:
            trace.append("search exhausted every branch")
            return CSPResult("UNSAT", None, trace if want_trace else [], counter[0])
        assignment = {}
        for k, d in enumerate(final):
            s = d.bit_length() - 1
            assignment[self.node_names[k]] = frozenset(members(s))
        res = CSPResult("SAT", assignment, [], counter[0])
        res.verified = self.verify(assignment)
        return res

    def verify(self, assignment: dict[str, frozenset]) -> bool:
        """Re-check a solution against the original domains and every edge."""
        vals = []
        for k, nm in enumerate(self.node_names):
            s = sum(1 << x for x in assignment[nm])
            if not self.domains[k] >> s & 1:
                return False
            vals.append(s)
        for e in self.edges:
            if not e.compat[vals[e.u]] >> vals[e.v] & 1:
                return False
        return True


# ------------------------------------------------------------ lemma chains

def _with_top(order: WeakOrder, first: Sequence[int]) -> WeakOrder:
    rest = [c - set(first) for c in order.classes]
    return WeakOrder([[x] for x in first] + [c for c in rest if c])


def lemma1_chain(p: Profile, x: int) -> list[Profile]:
    """Deviation path showing that {x} cannot be chosen when x is no Condorcet winner.

    Voters outside a majority I preferring some y to x move x to the top and
    y second; then one member of I moves y to the top, making y the winner.
    """
    mg = majority_margins(p)
    y = next(z for z in range(p.m) if z != x and mg[z, x] > 0)
    need = (p.n + 1) // 2
    inside = [i for i in range(p.n) if p.voters[i].prefers(y, x)][:need]
    chain, cur = [], p
    for i in range(p.n):
        if i in inside:
            continue
        new = _with_top(cur.voters[i], [x, y])
        if new != cur.voters[i]:
            cur = cur.with_voter(i, new)
            chain.append(cur)
    star = inside[0]
    new = _with_top(cur.voters[star], [y])
    if new != cur.voters[star]:
        chain.append(cur.with_voter(star, new))
    return chain


def lemma2_chain(p: Profile, x: int, y: int) -> list[Profile]:
    """Deviation path showing that {x, y} cannot be chosen unless x and y are majority-tied.

    Voter by voter, x and y become the two top alternatives without changing
    their relative order; the majority winner of the pair ends as Condorcet winner.
    """
    chain, cur = [], p
    for i in range(p.n):
        o = cur.voters[i]
        pair = [x, y] if o.prefers(x, y) else [y, x]
        if o.rank[x] == o.rank[y]:
            raise ValueError("lemma chains need strict preferences")
        new = _with_top(o, pair)
        if new != o:
            cur = cur.with_voter(i, new)
            chain.append(cur)
    return chain


def add_lemma_chains(csp: CSP, base: Sequence[int], which: Sequence[str], axioms: Sequence[str]) -> int:
    """Add chain nodes for every base node and every singleton or pair the lemmas exclude."""
    added = 0
    for k in base:
        p = csp.profiles[k]
        cw = condorcet_winner(p)
        mg = majority_margins(p)
        todo = []
        if "LEMMA1" in which and cw is None:
            todo += [("L1", (x,)) for x in range(p.m)]
        if "LEMMA2" in which:
            todo += [("L2", (x, y)) for x, y in itertools.combinations(range(p.m), 2) if mg[x, y] != 0]
        for tag, xs in todo:
            chain = lemma1_chain(p, xs[0]) if tag == "L1" else lemma2_chain(p, *xs)
            label = "".join(csp.names[x] for x in xs)
            new_nodes = []
            for step, q in enumerate(chain, start=1):
                before = len(csp.profiles)
                node = csp.add_node(f"{csp.node_names[k]}~{tag}{label}.{step}", q)
                if len(csp.profiles) > before:
                    new_nodes.append(node)
                    added += 1
            for ax in axioms:
                csp.apply_unary(ax, new_nodes)
    return added


# --------------------------------------------------------------- full domain

def full_domain_search(axioms: Sequence[str], spec, budget: int = DEFAULT_BUDGET):
    """Search for an even-chance table rule on a whole domain satisfying the axioms.

    Supported axioms: weak-sp, ex-post, condorcet, strong-condorcet,
    anonymity, neutrality (even-chance is built into the value space).
    Returns (CSPResult, TableRule or None).
    """
    from ..lottery import uniform
    from ..prefs import apply_permutation, Permutation, enumerate_profiles
    from ..rules import TableRule

    spec.check_cap()
    csp = CSP(spec.m, spec.names)
    for p in enumerate_profiles(spec):
        csp.add_node(p.key(), p)
    unary = {"ex-post": "EX_POST", "condorcet": "CONDORCET", "strong-condorcet": "STRONG_CC"}
    for ax in axioms:
        if ax in unary:
            csp.apply_unary(unary[ax])
        elif ax not in ("weak-sp", "even-chance", "anonymity", "neutrality"):
            raise ScriptFormatError(f"full-domain search does not support {ax!r}")
    if "weak-sp" in axioms:
        csp.auto_sp_edges()
    if "anonymity" in axioms and spec.n > 1:
        gens = [tuple([1, 0] + list(range(2, spec.n))), tuple((i + 1) % spec.n for i in range(spec.n))]
        for k, p in enumerate(list(csp.profiles)):
            for g in gens:
                q = apply_permutation(p, Permutation(g, "voters"))
                if q != p:
                    csp.add_symmetry_edge(k, csp.index[q], list(range(spec.m)))
    if "neutrality" in axioms and spec.m > 1:
        gens = [tuple([1, 0] + list(range(2, spec.m))), tuple((x + 1) % spec.m for x in range(spec.m))]
        for k, p in enumerate(list(csp.profiles)):
            for g in gens:
                q = apply_permutation(p, Permutation(g))
                csp.add_symmetry_edge(k, csp.index[q], g)
    res = csp.solve(budget, want_trace=False)
    if res.status != "SAT":
        return res, None
    entries = {}
    for k, p in enumerate(csp.profiles):
        entries[p.key()] = uniform(res.assignment[csp.node_names[k]], p.m, p.alts)
    table = TableRule(entries, spec.names, spec.kind, spec.m, spec.n, "table:search")
    return res, table
