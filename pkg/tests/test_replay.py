import copy
import itertools
import json

import pytest
from hypothesis import Phase, given, settings, strategies as st

from sdsaudit.errors import ScriptFormatError
from sdsaudit.lottery import is_manipulation, uniform
from sdsaudit.prefs import (
    DomainSpec, OrderKind, Profile, condorcet_winner, load_profile, majority_margins, margin_isomorphism,
    pareto_optimal_set,
)
from sdsaudit.replay import CSP, Deduction, full_domain_search, load_script, replay_file, run_steps
from sdsaudit.replay.csp import lemma1_chain, lemma2_chain
from sdsaudit.replay.script import build_csp, load_profiles
from sdsaudit.rules import TableRule

from .conftest import PROFILES, PROOFS
from .strategies import profiles, weak_orders

SUBSETS3 = [frozenset(s) for r in (1, 2, 3) for s in itertools.combinations(range(3), r)]


# ------------------------------------------------------------ margin isomorphism

def test_margin_isomorphisms_between_script_profiles():
    r2, h2, r4 = (load_profile(PROFILES / "thm4" / f"{n}.txt") for n in ("R2", "Rhat2", "R4"))
    tau = margin_isomorphism(majority_margins(r2), majority_margins(h2))
    assert tau.as_names(r2.alts) == {"a": "a", "b": "b", "c": "d", "d": "c", "e": "e"}
    tau = margin_isomorphism(majority_margins(r2), majority_margins(r4))
    assert tau.as_names(r2.alts) == {"a": "b", "b": "e", "c": "a", "d": "d", "e": "c"}


def test_margins_of_inverse_pair_cancel():
    p = load_profile(PROFILES / "thm4" / "R1.txt")
    for o in (p.voters[0], p.voters[-1]):
        q = Profile(p.alts, p.voters + (o, o.reversed()))
        assert majority_margins(q) == majority_margins(p)


# ------------------------------------------------------------ CSP vs brute force

def _brute_allowed(name, p, s):
    cw = condorcet_winner(p)
    if name == "EX_POST":
        return s <= pareto_optimal_set(p)
    if name == "CONDORCET":
        return cw is None or s == {cw}
    if name == "STRONG_CC":
        return (s == {cw}) if cw is not None else len(s) != 1
    if name == "LEMMA1_ONLY_CW":
        return len(s) != 1 or s == {cw}
    x, y = sorted(s) if len(s) == 2 else (0, 0)
    return len(s) != 2 or majority_margins(p)[x, y] == 0


def _brute_sat(nodes, unaries, edges):
    doms = [[s for s in SUBSETS3 if all(_brute_allowed(u, p, s) for u in unaries)] for p in nodes]
    for combo in itertools.product(*doms):
        ok = True
        for u, v, i in edges:
            lu, lv = uniform(combo[u], 3), uniform(combo[v], 3)
            if is_manipulation(nodes[u].voters[i], lu, lv) or is_manipulation(nodes[v].voters[i], lv, lu):
                ok = False
                break
        if ok:
            return True
    return False


@st.composite
def csp_instances(draw):
    base = draw(profiles(3, 3, strict=True))
    nodes = [base]
    for _ in range(draw(st.integers(1, 5))):
        src = nodes[draw(st.integers(0, len(nodes) - 1))]
        i = draw(st.integers(0, 2))
        q = src.with_voter(i, draw(weak_orders(3, strict=True)))
        if q not in nodes:
            nodes.append(q)
    unaries = draw(st.lists(st.sampled_from(["EX_POST", "CONDORCET", "STRONG_CC", "LEMMA1_ONLY_CW",
                                             "LEMMA2_NO_UNTIED_PAIRS"]), unique=True))
    return nodes, unaries


@settings(max_examples=40)
@given(csp_instances())
def test_csp_agrees_with_brute_force(inst):
    nodes, unaries = inst
    csp = CSP(3, nodes[0].alts)
    for k, p in enumerate(nodes):
        csp.add_node(f"N{k}", p)
    for u in unaries:
        csp.apply_unary(u)
    csp.auto_sp_edges()
    edges = []
    for u, v in itertools.combinations(range(len(nodes)), 2):
        diff = [i for i in range(3) if nodes[u].voters[i] != nodes[v].voters[i]]
        if len(diff) == 1:
            edges.append((u, v, diff[0]))
    res = csp.solve()
    assert (res.status == "SAT") == _brute_sat(nodes, unaries, edges)
    if res.status == "SAT":
        assert res.verified and csp.verify(res.assignment)


def test_deviation_chains_are_unilateral():
    for name in ("R1", "R4", "Rhat1"):
        p = load_profile(PROFILES / "thm3_n5" / f"{name}.txt")
        for x in range(p.m):
            if condorcet_winner(p) is None:
                chain = [p] + lemma1_chain(p, x)
                for a, b in zip(chain, chain[1:]):
                    assert sum(u != v for u, v in zip(a.voters, b.voters)) == 1
        mm = majority_margins(p)
        for x, y in itertools.combinations(range(p.m), 2):
            if mm[x, y]:
                chain = [p] + lemma2_chain(p, x, y)
                assert all(sum(u != v for u, v in zip(a.voters, b.voters)) == 1 for a, b in zip(chain, chain[1:]))
                # the pair ends on top of every voter with its original majority direction
                assert majority_margins(chain[-1])[x, y] * mm[x, y] > 0


def test_dropping_condorcet_gives_verified_sat():
    data, base = load_script(PROOFS / "thm3_n5.json")
    data = dict(data, unaries=[u for u in data["unaries"] if u != "CONDORCET"])
    res = build_csp(data, base, "unary").solve()
    assert res.status == "SAT" and res.verified


def test_budget_exhaustion_reported():
    data, base = load_script(PROOFS / "thm3_n5.json")
    data = dict(data, unaries=["EX_POST", "LEMMA1_ONLY_CW", "LEMMA2_NO_UNTIED_PAIRS"])
    res = build_csp(data, base, "unary").solve(budget=1)
    assert res.status in ("BUDGET_EXCEEDED", "SAT")


def test_script_rejects_bad_edges(tmp_path):
    data, base = load_script(PROOFS / "thm3_n5.json")
    data = dict(data, edges=[{"u": "R1", "v": "R10", "voter": 1}])
    with pytest.raises(ScriptFormatError):
        build_csp(data, base, "unary")


# ------------------------------------------------------------ full-domain search

@pytest.mark.parametrize("m, n, axioms", [
    (3, 2, ["weak-sp", "even-chance", "ex-post"]),
    (2, 3, ["weak-sp", "condorcet", "ex-post", "even-chance"]),
])
def test_full_domain_search_sat_reverifies(m, n, axioms):
    from sdsaudit.axioms import AXIOMS
    res, table = full_domain_search(axioms, DomainSpec(m, n))
    assert res.status == "SAT" and isinstance(table, TableRule)
    for ax in axioms:
        assert AXIOMS[ax](table, DomainSpec(m, n)).passed, ax


# ------------------------------------------------------------ deduction kernel

def _load(name):
    data, base = load_script(PROOFS / name)
    return data, load_profiles(data["profiles"], base)


def _deduction_after(name, upto):
    data, profs = _load(name)
    ded = Deduction(profs, data["axioms"])
    for st_ in data["steps"][:upto]:
        ded.run_step(st_)
    return ded


def test_pairwise_script_reaches_third_values():
    ded = _deduction_after("thm4.json", 14)
    for prof in ("R2", "R3"):
        assert ded.entails([], ded.claim(prof, "a = 1/3 & b = 1/3 & e = 1/3")).holds


def test_efficiency_script_fails_without_efficiency_step():
    data, profs = _load("thm5.json")
    steps = [s for s in data["steps"] if s["kind"] != "FORCE_EFFICIENCY" or s["profile"] != "R1"]
    res = run_steps(profs, data["axioms"], steps)
    assert res.status == "FAILED"
    failed = steps[res.failed_step - 1]
    assert (failed["kind"], failed["profile"]) == ("ASSERT_VALUE", "R1")
    assert res.counterexample is not None


def test_missing_axiom_fails_step():
    data, profs = _load("thm4.json")
    res = run_steps(profs, [a for a in data["axioms"] if a != "neutrality"], data["steps"])
    assert res.status == "FAILED"
    assert data["steps"][res.failed_step - 1]["kind"] in ("FORCE_NEUTRAL_ISO", "FORCE_SYMMETRY")


def test_wrong_claim_fails():
    data, profs = _load("thm4.json")
    steps = copy.deepcopy(data["steps"])
    steps[10]["claim"] = "a = 1/2 & b = 1/2"
    res = run_steps(profs, data["axioms"], steps)
    assert res.status == "FAILED" and res.failed_step == 11


def test_script_without_contradiction_fails():
    data, profs = _load("thm4.json")
    res = run_steps(profs, data["axioms"], data["steps"][:-1])
    assert res.status == "FAILED" and "without a contradiction" in res.reason


def _touched(step):
    return {step[k] for k in ("profile", "source", "target", "truthful", "deviant") if k in step}


def _reads(steps, k):
    # facts travel along equalities set up by earlier two-profile steps, so a step
    # reads every profile linked to its own by the steps before it
    comp = set(_touched(steps[k]))
    grown = True
    while grown:
        grown = False
        for j in range(k):
            t = _touched(steps[j])
            if len(t) > 1 and t & comp and not t <= comp:
                comp |= t
                grown = True
    return comp


def _linear_extension(data, steps):
    # a step waits for every earlier step touching a profile it reads
    reads = [_reads(steps, k) for k in range(len(steps))]
    remaining = list(range(len(steps)))
    out = []
    while remaining:
        ready = [k for k in remaining
                 if not any(j < k and _touched(steps[j]) & reads[k] for j in remaining)]
        pick = data.draw(st.sampled_from(ready))
        out.append(steps[pick])
        remaining.remove(pick)
    return out


@pytest.mark.parametrize("name", ["thm4.json", "thm5.json"])
@settings(max_examples=5, phases=[Phase.generate])
@given(data=st.data())
def test_independent_steps_commute(name, data):
    script, profs = _load(name)
    order = _linear_extension(data, script["steps"])
    assert run_steps(profs, script["axioms"], order).status == "VERIFIED"


def test_script_files_are_plain_json():
    for path in PROOFS.glob("*.json"):
        data = json.loads(path.read_text())
        assert data["kind"] in ("csp", "deduction")


def test_replay_file_reports_modes():
    out = replay_file(PROOFS / "thm3_n5.json")
    assert out.results == {"unary": "UNSAT", "chains": "UNSAT"} and out.ok


def test_weak_domain_spec_label():
    assert DomainSpec(3, 3, OrderKind.WEAK).label() == "weak m=3 n=3"
