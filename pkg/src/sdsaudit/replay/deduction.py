"""Linear deduction over lottery variables, one block of variables per profile.

A script is a list of steps. Each step checks its side condition on the
profiles themselves, then discharges its claim through `ratlp.implies` against
everything derived so far. Facts are only added after both checks succeed.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ..errors import ScriptFormatError
from ..prefs import Profile, majority_margins, margin_isomorphism, pareto_dominates
from ..ratlp import Constraint, LinearSystem, feasible, implies, parse_linear

STEP_KINDS = (
    "ASSERT_PARETO", "FORCE_SYMMETRY", "FORCE_NEUTRAL_ISO", "FORCE_PAIRWISE", "FORCE_SET_MONOTONE",
    "FORCE_SP", "FORCE_EFFICIENCY", "ASSERT_VALUE", "CONTRADICTION",
)

# axioms a step kind relies on
REQUIRES = {
    "ASSERT_PARETO": {"ex-post"},
    "FORCE_SYMMETRY": set(),  # anonymity/neutrality checked per step
    "FORCE_NEUTRAL_ISO": {"pairwise", "neutrality"},
    "FORCE_PAIRWISE": {"pairwise"},
    "FORCE_SET_MONOTONE": {"pairwise", "weak-sp"},
    "FORCE_SP": {"weak-sp"},
    "FORCE_EFFICIENCY": {"sd-efficiency"},
    "ASSERT_VALUE": set(),
    "CONTRADICTION": set(),
}


class StepFailed(Exception):
    def __init__(self, reason: str, counterexample=None):
        super().__init__(reason)
        self.reason = reason
        self.counterexample = counterexample


@dataclass
class StepRecord:
    index: int
    kind: str
    label: str
    ok: bool
    detail: str = ""
    derived: list = field(default_factory=list)
    cases: int = 0

    def line(self) -> str:
        mark = "ok" if self.ok else "FAILED"
        out = f"[{self.index}] {self.kind} {self.label}: {mark}"
        if self.detail:
            out += f" ({self.detail})"
        if self.derived:
            out += "; derived " + ", ".join(self.derived)
        return out


@dataclass
class ScriptResult:
    status: str  # VERIFIED | FAILED
    steps: list
    failed_step: Optional[int] = None
    reason: str = ""
    counterexample: Optional[dict] = None

    def lines(self) -> list[str]:
        out = [s.line() for s in self.steps]
        if self.status == "FAILED":
            out.append(f"FAILED at step {self.failed_step}: {self.reason}")
            if self.counterexample:
                pt = ", ".join(f"{k}={v}" for k, v in sorted(self.counterexample.items()) if v)
                out.append(f"  counterexample: {pt}")
        else:
            out.append("VERIFIED")
        return out


class Deduction:
    """Facts about the lotteries chosen at a set of named profiles."""

    def __init__(self, profiles: dict[str, Profile], axioms: Sequence[str]):
        self.profiles = dict(profiles)
        self.axioms = set(axioms)
        alts = {p.alts for p in profiles.values()}
        if len(alts) != 1:
            raise ScriptFormatError("all profiles of a script must share one alternative set")
        self.alts = alts.pop()
        self.facts: list[Constraint] = []
        names = []
        for nm in self.profiles:
            if "." in nm:
                raise ScriptFormatError(f"profile name {nm!r} may not contain '.'")
            names += [self.var(nm, x) for x in range(len(self.alts))]
            self.facts.append(Constraint.of({self.var(nm, x): 1 for x in range(len(self.alts))}, "=", 1))
        self.nonneg = frozenset(names)

    # helpers
    def var(self, prof: str, x: int) -> str:
        return f"{prof}.{self.alts[x]}"

    def system(self, extra: Sequence[Constraint] = ()) -> LinearSystem:
        return LinearSystem(self.facts + list(extra), self.nonneg)

    def profile(self, name: str) -> Profile:
        try:
            return self.profiles[name]
        except KeyError:
            raise ScriptFormatError(f"unknown profile {name!r}") from None

    def claim(self, prof: str, text: str) -> list[Constraint]:
        self.profile(prof)
        rename = {a: f"{prof}.{a}" for a in self.alts}
        cons = parse_linear(text, rename)
        for c in cons:
            for v, _ in c.coeffs:
                if v not in self.nonneg:
                    raise ScriptFormatError(f"claim {text!r} mentions unknown variable {v!r}")
        return cons

    def mass(self, prof: str, xs) -> dict[str, Fraction]:
        return {self.var(prof, x): Fraction(1) for x in xs}

    def entails(self, extra: Sequence[Constraint], claim: Sequence[Constraint]):
        return implies(self.system(extra), [list(claim)])

    def alt(self, name: str) -> int:
        try:
            return self.alts.index(name)
        except ValueError:
            raise ScriptFormatError(f"unknown alternative {name!r}") from None

    def perm(self, mapping: dict) -> list[int]:
        tau = list(range(len(self.alts)))
        for k, v in mapping.items():
            tau[self.alt(k)] = self.alt(v)
        if sorted(tau) != list(range(len(self.alts))):
            raise StepFailed(f"{mapping} is not a permutation")
        return tau

    def _need(self, *axioms: str) -> None:
        missing = set(axioms) - self.axioms
        if missing:
            raise StepFailed(f"step relies on undeclared axioms {sorted(missing)}")

    # manipulation as linear constraints
    def no_manip_cases(self, order, truthful: str, deviant: str) -> list[list[Constraint]]:
        """Disjuncts of 'the deviation is not a strict SD-improvement'."""
        cases, equal = [], []
        for u in order.boundary_sets()[:-1]:
            diff = self.mass(deviant, u)
            for v, c in self.mass(truthful, u).items():
                diff[v] = diff.get(v, 0) - c
            cases.append([Constraint.of(diff, "<", 0)])
            equal.append(Constraint.of(diff, "=", 0))
        cases.append(equal)
        return cases

    def deviation_voter(self, truthful: Profile, deviant: Profile, voter: int) -> None:
        """Side condition: only `voter` changes, up to reordering if anonymity is declared."""
        if truthful.n != deviant.n:
            raise StepFailed("profiles have different numbers of voters")
        others = [o for i, o in enumerate(truthful.voters) if i != voter]
        if all(truthful.voters[i] == deviant.voters[i] for i in range(truthful.n) if i != voter):
            if truthful.voters[voter] == deviant.voters[voter]:
                raise StepFailed("the deviator reports the same order in both profiles")
            return
        if "anonymity" not in self.axioms:
            raise StepFailed(f"profiles differ outside voter {voter + 1}")
        rest = Counter(deviant.voters)
        rest.subtract(others)
        if any(v < 0 for v in rest.values()) or sum(rest.values()) != 1:
            raise StepFailed(f"profiles differ outside voter {voter + 1}, even up to voter order")

    # steps
    def run_step(self, step: dict) -> tuple[list[str], str, int]:
        kind = step.get("kind")
        if kind not in STEP_KINDS:
            raise ScriptFormatError(f"unknown step kind {kind!r}")
        self._need(*REQUIRES[kind])
        return getattr(self, "_" + kind.lower())(step)

    def _add(self, cons: Sequence[Constraint]) -> list[str]:
        self.facts.extend(cons)
        return [c.text() for c in cons]

    def _assert_pareto(self, st):
        prof = st["profile"]
        p = self.profile(prof)
        out = []
        for x_name in st["dominated"]:
            x = self.alt(x_name)
            by = [self.alt(b) for b in st.get("by", [])] or range(p.m)
            if not any(pareto_dominates(p, y, x) for y in by if y != x):
                raise StepFailed(f"{x_name} is not Pareto-dominated in {prof}")
            out.append(Constraint.of({self.var(prof, x): 1}, "=", 0))
        return self._add(out), "Pareto side condition holds", 0

    def _symmetry_link(self, source: str, target: str, tau: Sequence[int]) -> list[Constraint]:
        return [Constraint.of({self.var(target, tau[x]): 1, self.var(source, x): -1}, "=", 0)
                for x in range(len(self.alts))]

    def _force_symmetry(self, st):
        src, tgt = st["source"], st.get("target", st["source"])
        p, q = self.profile(src), self.profile(tgt)
        tau = self.perm(st.get("alternatives", {}))
        if tau != list(range(len(tau))):
            self._need("neutrality")
        image = [o.relabel(tau) for o in p.voters]
        if image != list(q.voters):
            if Counter(image) != Counter(q.voters):
                raise StepFailed(f"{tgt} is not the image of {src} under the given relabeling")
            self._need("anonymity")
        return self._add(self._symmetry_link(src, tgt, tau)), "relabeling maps profile onto profile", 0

    def _force_neutral_iso(self, st):
        src, tgt = st["source"], st["target"]
        m1, m2 = majority_margins(self.profile(src)), majority_margins(self.profile(tgt))
        if "alternatives" in st:
            tau = self.perm(st["alternatives"])
            m = m1.m
            if any(m1.flat[tau[x] * m + tau[y]] != m2.flat[x * m + y] for x in range(m) for y in range(m)):
                raise StepFailed("given permutation is not a margin isomorphism")
        else:
            found = margin_isomorphism(m1, m2)
            if found is None:
                raise StepFailed(f"margins of {src} and {tgt} are not isomorphic")
            tau = list(found.mapping)
        # f(target, x) = f(source, tau(x))
        cons = [Constraint.of({self.var(tgt, x): 1, self.var(src, tau[x]): -1}, "=", 0)
                for x in range(len(self.alts))]
        shown = ", ".join(f"{self.alts[x]}->{self.alts[tau[x]]}" for x in range(len(tau)) if tau[x] != x)
        return self._add(cons), f"margin isomorphism {shown or 'identity'}", 0

    def _force_pairwise(self, st):
        src, tgt = st["source"], st["target"]
        if majority_margins(self.profile(src)).flat != majority_margins(self.profile(tgt)).flat:
            raise StepFailed(f"{src} and {tgt} have different majority margins")
        return self._add(self._symmetry_link(src, tgt, list(range(len(self.alts))))), "equal margins", 0

    def _force_set_monotone(self, st):
        src, tgt, x = st["source"], st["target"], self.alt(st["alternative"])
        p, q = self.profile(src), self.profile(tgt)
        if p.n != q.n:
            raise StepFailed("profiles have different numbers of voters")
        changed = 0
        for o, o2 in zip(p.voters, q.voters):
            if o == o2:
                continue
            changed += 1
            if not (o.is_strict and o2.is_strict):
                raise StepFailed("set-monotonicity steps need strict orders")
            r1, r2 = o.ranking(), o2.ranking()
            if [z for z in r1 if z != x] != [z for z in r2 if z != x] or r2.index(x) < r1.index(x):
                raise StepFailed(f"a voter does more than move {st['alternative']} down")
        if not changed:
            raise StepFailed("profiles are identical")
        zero = [Constraint.of({self.var(src, x): 1}, "=", 0)]
        res = self.entails([], zero)
        if not res.holds:
            raise StepFailed(f"cannot show f({src},{st['alternative']}) = 0", res.counterexample)
        derived = self._add(self._symmetry_link(src, tgt, list(range(len(self.alts)))))
        return derived, f"{st['alternative']} has probability 0 and only moves down", res.cases_checked

    def _force_sp(self, st):
        tru, dev = st["truthful"], st["deviant"]
        voter = int(st["voter"]) - 1
        p, q = self.profile(tru), self.profile(dev)
        self.deviation_voter(p, q, voter)
        claim = self.claim(st["profile"], st["claim"])
        total = 0
        for case in self.no_manip_cases(p.voters[voter], tru, dev):
            res = self.entails(case, claim)
            total += res.cases_checked
            if not res.holds:
                raise StepFailed(f"a lottery violating '{st['claim']}' at {st['profile']} does not let voter "
                                 f"{voter + 1} gain by moving from {tru} to {dev}", res.counterexample)
        return self._add(claim), f"voter {voter + 1} would gain from {tru} to {dev} otherwise", total

    def _force_efficiency(self, st):
        prof = st["profile"]
        p = self.profile(prof)
        q = [Fraction(str(st["certificate"].get(a, 0))) for a in self.alts]
        if sum(q) != 1 or min(q) < 0:
            raise StepFailed("certificate is not a lottery")
        claim = self.claim(prof, st["claim"])
        weak, strict = [], []
        for o in p.voters:
            for u in o.boundary_sets()[:-1]:
                qu = sum((q[x] for x in u), Fraction(0))
                # q(U) >= p(U), strictly for at least one upper contour set
                weak.append(Constraint.of(self.mass(prof, u), "<=", qu))
                strict.append(Constraint.of(self.mass(prof, u), "<", qu))
        total = 0
        for c in claim:
            for neg in c.negations():
                for w in weak:
                    res = self.entails([neg], [w])
                    total += res.cases_checked
                    if not res.holds:
                        raise StepFailed("certificate does not dominate every lottery violating the claim",
                                         res.counterexample)
                pt = feasible(self.system([neg] + [s.negations()[0] for s in strict]))
                total += 1
                if pt is not None:
                    raise StepFailed("certificate is not strictly better for anyone at some lottery", pt)
        return self._add(claim), "certificate SD-dominates every lottery violating the claim", total

    def _assert_value(self, st):
        claim = self.claim(st["profile"], st["claim"])
        res = self.entails([], claim)
        if not res.holds:
            raise StepFailed(f"'{st['claim']}' does not follow at {st['profile']}", res.counterexample)
        return [c.text() for c in claim], "follows from the facts so far", res.cases_checked

    def _contradiction(self, st):
        if "truthful" in st:
            tru, dev = st["truthful"], st["deviant"]
            voter = int(st["voter"]) - 1
            p, q = self.profile(tru), self.profile(dev)
            self.deviation_voter(p, q, voter)
            total = 0
            for case in self.no_manip_cases(p.voters[voter], tru, dev):
                total += 1
                pt = feasible(self.system(case))
                if pt is not None:
                    raise StepFailed(f"voter {voter + 1} need not gain from {tru} to {dev}", pt)
            return [], f"voter {voter + 1} gains by moving from {tru} to {dev}", total
        pt = feasible(self.system())
        if pt is not None:
            raise StepFailed("the facts are jointly satisfiable", pt)
        return [], "the facts are jointly infeasible", 1


def step_label(st: dict) -> str:
    if "truthful" in st:
        return f"{st['truthful']} -> {st['deviant']} (voter {st['voter']})"
    if "source" in st:
        return f"{st['source']} -> {st.get('target', st['source'])}"
    return st.get("profile", "")


def run_steps(profiles: dict[str, Profile], axioms: Sequence[str], steps: Sequence[dict]) -> ScriptResult:
    ded = Deduction(profiles, axioms)
    records = []
    for k, st in enumerate(steps, start=1):
        kind = st.get("kind", "?")
        try:
            derived, detail, cases = ded.run_step(st)
        except StepFailed as exc:
            records.append(StepRecord(k, kind, step_label(st), False, exc.reason))
            return ScriptResult("FAILED", records, k, exc.reason, exc.counterexample)
        except KeyError as exc:
            raise ScriptFormatError(f"step {k} ({kind}) lacks field {exc}") from None
        records.append(StepRecord(k, kind, step_label(st), True, detail, derived, cases))
        if kind == "CONTRADICTION":
            return ScriptResult("VERIFIED", records)
    return ScriptResult("FAILED", records, len(steps), "script ends without a contradiction")
