"""Exact rational linear programming.

A dense two-phase simplex over Fractions with Bland's rule, so it always
terminates. Strict inequalities are decided by maximising a shared slack t:
the strict system is feasible iff the best t is positive.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import CaseCap, InfeasibleSystem, SizeLimit

RELATIONS = ("<=", ">=", "=", "<", ">")
_NEGATE = {"<=": (">",), ">=": ("<",), "<": (">=",), ">": ("<=",), "=": ("<", ">")}

MAX_VARIABLES = 64
MAX_CONSTRAINTS = 2000


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[tuple[str, Fraction], ...]
    rel: str
    rhs: Fraction

    @classmethod
    def of(cls, coeffs: Mapping[str, object], rel: str, rhs=0) -> "Constraint":
        if rel == "==":
            rel = "="
        if rel not in RELATIONS:
            raise ValueError(f"unknown relation {rel!r}")
        clean = tuple(sorted((v, Fraction(c)) for v, c in coeffs.items() if Fraction(c) != 0))
        return cls(clean, rel, Fraction(rhs))

    @property
    def strict(self) -> bool:
        return self.rel in ("<", ">")

    def negations(self) -> list["Constraint"]:
        return [Constraint(self.coeffs, r, self.rhs) for r in _NEGATE[self.rel]]

    def value(self, point: Mapping[str, Fraction]) -> Fraction:
        return sum((c * point.get(v, Fraction(0)) for v, c in self.coeffs), Fraction(0))

    def holds(self, point: Mapping[str, Fraction]) -> bool:
        lhs = self.value(point)
        return {
            "<=": lhs <= self.rhs, ">=": lhs >= self.rhs, "=": lhs == self.rhs,
            "<": lhs < self.rhs, ">": lhs > self.rhs,
        }[self.rel]

    def text(self) -> str:
        terms = []
        for v, c in self.coeffs:
            if c == 1:
                terms.append(f"+ {v}")
            elif c == -1:
                terms.append(f"- {v}")
            elif c < 0:
                terms.append(f"- {-c}*{v}")
            else:
                terms.append(f"+ {c}*{v}")
        lhs = " ".join(terms).lstrip("+ ") if terms else "0"
        if lhs.startswith("- "):
            lhs = "-" + lhs[2:]
        return f"{lhs} {self.rel} {self.rhs}"

    def __str__(self):
        return self.text()


@dataclass
class LinearSystem:
    constraints: list[Constraint] = field(default_factory=list)
    nonneg: frozenset = frozenset()

    def add(self, coeffs: Mapping[str, object], rel: str, rhs=0) -> "LinearSystem":
        self.constraints.append(Constraint.of(coeffs, rel, rhs))
        return self

    def extend(self, cons: Iterable[Constraint]) -> "LinearSystem":
        self.constraints.extend(cons)
        return self

    def copy(self) -> "LinearSystem":
        return LinearSystem(list(self.constraints), self.nonneg)

    def __and__(self, other: Iterable[Constraint]) -> "LinearSystem":
        return self.copy().extend(other)

    @property
    def variables(self) -> list[str]:
        seen: dict[str, None] = {}
        for v in sorted(self.nonneg):
            seen[v] = None
        for c in self.constraints:
            for v, _ in c.coeffs:
                seen[v] = None
        return list(seen)

    def satisfied_by(self, point: Mapping[str, Fraction]) -> bool:
        if any(point.get(v, 0) < 0 for v in self.nonneg):
            return False
        return all(c.holds(point) for c in self.constraints)


@dataclass
class LPResult:
    status: str  # optimal | unbounded | infeasible
    value: Optional[Fraction] = None
    point: Optional[dict[str, Fraction]] = None


# ------------------------------------------------------------------ simplex core

def _pivot(rows, obj, r, c):
    pr = rows[r]
    piv = pr[c]
    if piv != 1:
        rows[r] = pr = [v / piv for v in pr]
    for k, row in enumerate(rows):
        if k != r and row[c] != 0:
            f = row[c]
            rows[k] = [a - f * b for a, b in zip(row, pr)]
    for o in obj:
        if o[c] != 0:
            f = o[c]
            o[:] = [a - f * b for a, b in zip(o, pr)]


def _run(rows, basis, obj, allowed):
    """Maximise with Bland's rule. obj[j] holds reduced costs; returns False if unbounded."""
    while True:
        enter = next((j for j in allowed if obj[0][j] > 0), None)
        if enter is None:
            return True
        best, leave = None, None
        for r, row in enumerate(rows):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave is None:
            return False
        _pivot(rows, obj, leave, enter)
        basis[leave] = enter


def _solve(system: LinearSystem, objective: Mapping[str, Fraction]) -> LPResult:
    names = system.variables
    for v in objective:
        if v not in names:
            names.append(v)
    if len(names) > MAX_VARIABLES or len(system.constraints) > MAX_CONSTRAINTS:
        raise SizeLimit(f"{len(names)} variables, {len(system.constraints)} constraints")
    if any(c.strict for c in system.constraints):
        raise ValueError("strict constraints are only supported by feasible()")
    # column layout: each variable is x+ (and x- when free), then slacks, then artificials
    cols: dict[str, tuple[int, Optional[int]]] = {}
    ncol = 0
    for v in names:
        if v in system.nonneg:
            cols[v] = (ncol, None)
            ncol += 1
        else:
            cols[v] = (ncol, ncol + 1)
            ncol += 2
    nvar = ncol
    zero = Fraction(0)
    raw = []
    for c in system.constraints:
        row = [zero] * nvar
        for v, a in c.coeffs:
            pos, neg = cols[v]
            row[pos] += a
            if neg is not None:
                row[neg] -= a
        rel, rhs = c.rel, c.rhs
        if rhs < 0:
            row = [-a for a in row]
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        raw.append((row, rel, rhs))
    n_slack = sum(1 for _, rel, _ in raw if rel != "=")
    n_art = sum(1 for _, rel, _ in raw if rel != "<=")
    width = nvar + n_slack + n_art
    rows, basis = [], []
    s_at, a_at = nvar, nvar + n_slack
    artificial = set()
    for row, rel, rhs in raw:
        full = row + [zero] * (n_slack + n_art) + [rhs]
        if rel == "<=":
            full[s_at] = Fraction(1)
            basis.append(s_at)
            s_at += 1
        else:
            if rel == ">=":
                full[s_at] = Fraction(-1)
                s_at += 1
            full[a_at] = Fraction(1)
            basis.append(a_at)
            artificial.add(a_at)
            a_at += 1
        rows.append(full)
    # phase 1: maximise -sum(artificials)
    ph1 = [zero] * (width + 1)
    for j in artificial:
        ph1[j] = Fraction(-1)
    ph2 = [zero] * (width + 1)
    for v, a in objective.items():
        pos, neg = cols[v]
        ph2[pos] += Fraction(a)
        if neg is not None:
            ph2[neg] -= Fraction(a)
    obj = [ph1, ph2]
    for r, b in enumerate(basis):
        for o in obj:
            if o[b] != 0:
                f = o[b]
                o[:] = [x - f * y for x, y in zip(o, rows[r])]
    if artificial:
        _run(rows, basis, obj, range(width))
        if -ph1[-1] < 0:
            return LPResult("infeasible")
        # drive zero-level artificials out of the basis
        r = 0
        while r < len(rows):
            if basis[r] in artificial:
                j = next((j for j in range(nvar + n_slack) if rows[r][j] != 0), None)
                if j is None:
                    del rows[r]
                    del basis[r]
                    continue
                _pivot(rows, obj, r, j)
                basis[r] = j
            r += 1
    obj = [ph2]
    allowed = range(nvar + n_slack)
    if not _run(rows, basis, obj, allowed):
        return LPResult("unbounded")
    values = [zero] * width
    for r, b in enumerate(basis):
        values[b] = rows[r][-1]
    point = {}
    for v, (pos, neg) in cols.items():
        point[v] = values[pos] - (values[neg] if neg is not None else 0)
    val = sum((Fraction(a) * point[v] for v, a in objective.items()), Fraction(0))
    return LPResult("optimal", val, point)


# ------------------------------------------------------------------ public API

def maximize(system: LinearSystem, objective: Mapping[str, object]) -> LPResult:
    """Maximise a linear objective. Raises InfeasibleSystem if nothing is feasible."""
    res = _solve(system, {v: Fraction(a) for v, a in objective.items()})
    if res.status == "infeasible":
        raise InfeasibleSystem("system has no feasible point")
    return res


def minimize(system: LinearSystem, objective: Mapping[str, object]) -> LPResult:
    res = maximize(system, {v: -Fraction(a) for v, a in objective.items()})
    if res.value is not None:
        res.value = -res.value
    return res


_SLACK = "__strict_slack__"


def feasible(system: LinearSystem) -> Optional[dict[str, Fraction]]:
    """A point satisfying every constraint (strict ones included), or None."""
    strict = [c for c in system.constraints if c.strict]
    if not strict:
        res = _solve(system, {})
        return res.point if res.status == "optimal" else None
    relaxed = LinearSystem([c for c in system.constraints if not c.strict], system.nonneg | {_SLACK})
    for c in strict:
        co = dict(c.coeffs)
        if c.rel == "<":
            co[_SLACK] = co.get(_SLACK, 0) + 1
            relaxed.add(co, "<=", c.rhs)
        else:
            co[_SLACK] = co.get(_SLACK, 0) - 1
            relaxed.add(co, ">=", c.rhs)
    relaxed.add({_SLACK: 1}, "<=", 1)
    res = _solve(relaxed, {_SLACK: 1})
    if res.status != "optimal" or res.value <= 0:
        return None
    point = dict(res.point)
    point.pop(_SLACK, None)
    return point


@dataclass
class ImplicationResult:
    holds: bool
    counterexample: Optional[dict[str, Fraction]] = None
    cases_checked: int = 0


def implies(assumptions: LinearSystem, cases: Sequence[Sequence[Constraint]], case_cap: int = 4096) -> ImplicationResult:
    """Does every point of `assumptions` satisfy at least one of the conjunctive cases?

    Refutes assumptions together with the negation of every case. The negation
    is expanded depth-first and infeasible prefixes are pruned.
    """
    options = [[n for c in case for n in c.negations()] for case in cases]
    if any(not o for o in options):
        # an empty conjunction is always true
        return ImplicationResult(True)
    total = 1
    for o in options:
        total *= len(o)
    if total > case_cap:
        raise CaseCap(f"{total} cases exceed the cap of {case_cap}")
    checked = 0

    def dfs(k, sysk):
        nonlocal checked
        checked += 1
        pt = feasible(sysk)
        if pt is None:
            return None
        if k == len(options):
            return pt
        for neg in options[k]:
            got = dfs(k + 1, sysk & [neg])
            if got is not None:
                return got
        return None

    cex = dfs(0, assumptions.copy())
    return ImplicationResult(cex is None, cex, checked)


# ------------------------------------------------------------ linear predicates

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_.']*)|(<=|>=|==|=|<|>|\+|-|\*|&))")


def parse_linear(text: str, rename: Optional[Mapping[str, str]] = None) -> list[Constraint]:
    """Parse `a + 2*b <= 1/2 & c = 0` into constraints (all terms moved left)."""
    out = []
    for part in text.split("&"):
        toks = []
        pos = 0
        part = part.strip()
        while pos < len(part):
            mt = _TOKEN.match(part, pos)
            if not mt or mt.end() == pos:
                raise ValueError(f"cannot parse {part[pos:]!r}")
            toks.append(mt.group(1) or mt.group(2) or mt.group(3))
            pos = mt.end()
        rels = [k for k, t in enumerate(toks) if t in ("<=", ">=", "==", "=", "<", ">")]
        if len(rels) != 1:
            raise ValueError(f"need exactly one relation in {part!r}")
        k = rels[0]
        left, const_l = _linear_terms(toks[:k], rename)
        right, const_r = _linear_terms(toks[k + 1:], rename)
        coeffs = dict(left)
        for v, c in right.items():
            coeffs[v] = coeffs.get(v, 0) - c
        out.append(Constraint.of(coeffs, toks[k], const_r - const_l))
    return out


def _linear_terms(toks, rename):
    coeffs: dict[str, Fraction] = {}
    const = Fraction(0)
    sign, coef, k = 1, None, 0
    if not toks:
        raise ValueError("empty side of a predicate")
    while k < len(toks):
        t = toks[k]
        if t in "+-":
            sign = sign * (-1 if t == "-" else 1)
        elif t == "*":
            pass
        elif re.fullmatch(r"\d+(?:/\d+)?", t):
            coef = Fraction(t)
            nxt = toks[k + 1] if k + 1 < len(toks) else None
            if nxt not in ("*",) and not (nxt and re.fullmatch(r"[A-Za-z_].*", nxt)):
                const += sign * coef
                sign, coef = 1, None
        else:
            name = rename.get(t, t) if rename else t
            coeffs[name] = coeffs.get(name, 0) + sign * (coef if coef is not None else 1)
            sign, coef = 1, None
        k += 1
    return coeffs, const


# -------------------------------------------------------------- SD efficiency

def sd_dominated(profile, p):
    """Return a lottery that SD-dominates p at the profile, or None if p is SD-efficient."""
    from .lottery import Lottery, ex_ante_dominates

    names = [f"q{x}" for x in range(profile.m)]
    sys_ = LinearSystem(nonneg=frozenset(names))
    sys_.add({v: 1 for v in names}, "=", 1)
    objective: dict[str, Fraction] = {}
    base = Fraction(0)
    for o in profile.voters:
        for u in o.boundary_sets()[:-1]:
            co = {names[x]: 1 for x in u}
            pu = p.mass(u)
            sys_.add(co, ">=", pu)
            base += pu
            for v in co:
                objective[v] = objective.get(v, 0) + 1
    res = maximize(sys_, objective)
    if res.value <= base:
        return None
    q = Lottery(tuple(res.point[v] for v in names), profile.alts)
    if not ex_ante_dominates(profile.voters, q, p):
        raise AssertionError("LP certificate failed re-verification")
    return q
