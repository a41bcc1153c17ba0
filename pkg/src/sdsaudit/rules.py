"""Score functions and social decision schemes (SDSs)."""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .errors import (BadWeights, ConfigOutOfRange, DomainMismatch, MissingProfile,
                     SDSError, ScriptFormatError, SizeLimit, ZeroTotalScore)
from .lottery import Lottery, lottery_from_dict, point_mass, uniform
from .prefs import (OrderKind, Profile, condorcet_winner, copeland_scores, omni_set,
                    pareto_optimal_set, plurality_scores)


class _Infinity:
    """The score value infinity. Compares above every rational."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"

    __str__ = __repr__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("score-infinity")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INF = _Infinity()


def score_ratio(a, b) -> Fraction:
    """a / b with inf/inf = 1 and x/inf = 0."""
    if b is INF:
        return Fraction(1) if a is INF else Fraction(0)
    if a is INF:
        raise ZeroDivisionError("infinite numerator over a finite total")
    return Fraction(a) / b


class ScoreFunction:
    """Maps a strict profile to one score per alternative (a Fraction or INF)."""

    def __init__(self, name: str, scores: Callable[[Profile], list], kind: OrderKind = OrderKind.STRICT):
        self.name = name
        self._scores = scores
        self.kind = OrderKind(kind)

    def scores(self, profile: Profile) -> list:
        return self._scores(profile)

    def __call__(self, profile: Profile, x: int):
        return self._scores(profile)[x]

    def __repr__(self):
        return f"ScoreFunction({self.name})"


def _plurality(p):
    return [Fraction(v) for v in plurality_scores(p)]


plurality_score = ScoreFunction("plurality", _plurality)
copeland_score = ScoreFunction("copeland", lambda p: copeland_scores(p))


def _condorcet_rule_scores(p):
    cw = condorcet_winner(p)
    return [INF if x == cw else Fraction(1) for x in range(p.m)]


condorcet_score = ScoreFunction("condorcet", _condorcet_rule_scores)


def _last_place(p):
    s = [Fraction(0)] * p.m
    for o in p.voters:
        for x in o.classes[-1]:
            s[x] += 1
    return s


# reinforcing y past x can only remove y from last place, so monotonicity fails
last_place_count = ScoreFunction("last-place", _last_place)


def transform(sf: ScoreFunction, g: Callable, name: Optional[str] = None) -> ScoreFunction:
    """Compose with a strictly increasing g on rationals (INF stays INF)."""
    return ScoreFunction(name or f"g({sf.name})",
                         lambda p: [v if v is INF else Fraction(g(v)) for v in sf.scores(p)], sf.kind)


def power_transform(sf: ScoreFunction, k: int) -> ScoreFunction:
    if k < 1:
        raise ValueError("exponent must be a positive integer")
    if k == 1:
        return sf
    return ScoreFunction(f"{sf.name}^{k}",
                         lambda p: [v if v is INF else v ** k for v in sf.scores(p)], sf.kind)


def condorcet_augmented(base: ScoreFunction) -> ScoreFunction:
    """Infinity at the Condorcet winner, the base score elsewhere."""

    def scores(p):
        cw = condorcet_winner(p)
        s = base.scores(p)
        for x, v in enumerate(s):
            if v is INF and x != cw:
                raise SDSError(f"{base.name} gives infinity to a non-Condorcet winner")
        return [INF if x == cw else v for x, v in enumerate(s)]

    return ScoreFunction(f"{base.name}+cw", scores, base.kind)


# ------------------------------------------------------------------------- SDS

class SDS:
    """A rule mapping profiles to lotteries.

    `kind` is the widest domain accepted: WEAK rules also accept strict profiles.
    `tags` are declarations only; the axiom checkers never trust them.
    """

    def __init__(self, name: str, fn: Callable[[Profile], Lottery], kind: OrderKind = OrderKind.STRICT,
                 tags: Iterable[str] = ()):
        self.name = name
        self._fn = fn
        self.kind = OrderKind(kind)
        self.tags = frozenset(tags)

    def __call__(self, profile: Profile) -> Lottery:
        if self.kind == OrderKind.STRICT and not profile.is_strict:
            raise DomainMismatch(f"{self.name} is only defined for strict preferences")
        return self._fn(profile)

    def __repr__(self):
        return f"SDS({self.name})"


def score_based_sds(sf: ScoreFunction) -> SDS:
    def fn(p):
        s = sf.scores(p)
        infs = [x for x, v in enumerate(s) if v is INF]
        if len(infs) > 1:
            raise SDSError(f"{sf.name} assigns infinity to more than one alternative")
        if infs:
            return point_mass(infs[0], p.m, p.alts)
        total = sum(s, Fraction(0))
        if total == 0:
            raise ZeroTotalScore(f"{sf.name} scores sum to zero")
        return Lottery(tuple(v / total for v in s), p.alts)

    return SDS(f"score:{sf.name}", fn, OrderKind.STRICT, ("anonymous", "neutral"))


def _condorcet(p):
    cw = condorcet_winner(p)
    if cw is not None:
        return point_mass(cw, p.m, p.alts)
    return uniform(range(p.m), p.m, p.alts)


condorcet_rule = SDS("condorcet", _condorcet, OrderKind.STRICT, ("anonymous", "neutral", "even_chance"))


def _omni(p):
    return uniform(omni_set(p), p.m, p.alts)


omninomination_rule = SDS("omni", _omni, OrderKind.STRICT,
                          ("anonymous", "neutral", "even_chance", "tops_only"))


@dataclass(frozen=True)
class ParamOmniConfig:
    theta1: int
    theta2: int

    def validate(self, m: int, n: int) -> None:
        lo = (n + 2) // 2  # ceil((n+1)/2)
        if not lo <= self.theta1 <= n + 1:
            raise ConfigOutOfRange(f"theta1={self.theta1} outside {lo}..{n + 1} for n={n}")
        if not 0 <= self.theta2 <= m - 1:
            raise ConfigOutOfRange(f"theta2={self.theta2} outside 0..{m - 1} for m={m}")

    @staticmethod
    def all_valid(m: int, n: int) -> list["ParamOmniConfig"]:
        return [ParamOmniConfig(t1, t2) for t1 in range((n + 2) // 2, n + 2) for t2 in range(m)]


def param_omni_rule(cfg: ParamOmniConfig) -> SDS:
    def fn(p):
        cfg.validate(p.m, p.n)
        s = plurality_scores(p)
        for x in range(p.m):
            if s[x] >= cfg.theta1:
                return point_mass(x, p.m, p.alts)
        om = omni_set(p)
        if len(om) <= cfg.theta2:
            return uniform(om, p.m, p.alts)
        return uniform(range(p.m), p.m, p.alts)

    return SDS(f"param-omni?t1={cfg.theta1}&t2={cfg.theta2}", fn, OrderKind.STRICT,
               ("anonymous", "neutral", "even_chance", "tops_only"))


def random_dictatorship(weights: Optional[Sequence] = None) -> SDS:
    if weights is not None:
        w = [Fraction(v) for v in weights]
        if any(v < 0 for v in w) or sum(w) != 1:
            raise BadWeights("weights must be non-negative and sum to 1")

    def fn(p):
        ws = w if weights is not None else [Fraction(1, p.n)] * p.n
        if len(ws) != p.n:
            raise BadWeights(f"{len(ws)} weights for {p.n} voters")
        probs = [Fraction(0)] * p.m
        for o, wi in zip(p.voters, ws):
            probs[next(iter(o.classes[0]))] += wi
        return Lottery(tuple(probs), p.alts)

    tags = ("anonymous", "neutral", "tops_only") if weights is None else ("neutral", "tops_only")
    return SDS("rd:uniform" if weights is None else "rd:weighted", fn, OrderKind.STRICT, tags)


def serial_dictatorship_set(p: Profile, order: Sequence[int]) -> list[int]:
    """Survivors after each voter in turn keeps their best class among the survivors."""
    alive = list(range(p.m))
    for i in order:
        rank = p.voters[i].rank
        best = min(rank[x] for x in alive)
        alive = [x for x in alive if rank[x] == best]
        if len(alive) == 1:
            break
    return alive


def _rsd(p):
    perms = list(itertools.permutations(range(p.n)))
    denom = len(perms)
    acc = [Fraction(0)] * p.m
    for perm in perms:
        alive = serial_dictatorship_set(p, perm)
        share = Fraction(1, denom * len(alive))
        for x in alive:
            acc[x] += share
    return Lottery(tuple(acc), p.alts)


random_serial_dictatorship = SDS("rsd", _rsd, OrderKind.WEAK, ("anonymous", "neutral"))


def _uniform_pareto(p):
    return uniform(pareto_optimal_set(p), p.m, p.alts)


uniform_pareto_rule = SDS("pareto-uniform", _uniform_pareto, OrderKind.WEAK,
                          ("anonymous", "neutral", "even_chance"))


def constant_rule(xs: Iterable[int], name: Optional[str] = None) -> SDS:
    xs = frozenset(xs)
    if not xs:
        raise ValueError("constant rule needs a non-empty set")

    def fn(p):
        if max(xs) >= p.m:
            raise ConfigOutOfRange("constant set names an alternative outside the profile")
        return uniform(xs, p.m, p.alts)

    return SDS(name or f"const:{sorted(xs)}", fn, OrderKind.WEAK, ("anonymous", "even_chance"))


def _check_voter(i, p):
    if not 0 <= i < p.n:
        raise ConfigOutOfRange(f"voter {i} does not exist for n={p.n}")


def dictatorial_rule(i: int) -> SDS:
    """Serial dictatorship led by voter i; the others break i's ties in index order."""

    def fn(p):
        _check_voter(i, p)
        order = [i] + [k for k in range(p.n) if k != i]
        return uniform(serial_dictatorship_set(p, order), p.m, p.alts)

    return SDS(f"dict:{i}", fn, OrderKind.WEAK, ("neutral", "even_chance"))


def bidictatorial_rule(i: int, j: int) -> SDS:
    """Fair coin between a pick for voter i and a pick for voter j.

    Each pick is a serial dictatorship led by that voter, then the other
    leader, then everyone else; leftover ties go to the lowest index.
    """
    if i == j:
        raise ValueError("bidictatorial rule needs two distinct voters")

    def fn(p):
        _check_voter(i, p)
        _check_voter(j, p)
        rest = [k for k in range(p.n) if k not in (i, j)]
        xi = serial_dictatorship_set(p, [i, j] + rest)[0]
        xj = serial_dictatorship_set(p, [j, i] + rest)[0]
        return uniform({xi, xj}, p.m, p.alts)

    return SDS(f"bidict:{i},{j}", fn, OrderKind.WEAK, ("even_chance",))


def _remark4_small_n(p):
    if p.n > 4:
        raise SizeLimit(f"remark4-n is only defined for n <= 4, got n={p.n}")
    cw = condorcet_winner(p)
    if cw is not None:
        return point_mass(cw, p.m, p.alts)
    return uniform(omni_set(p), p.m, p.alts)


remark4_small_n_rule = SDS("remark4-n", _remark4_small_n, OrderKind.STRICT,
                           ("anonymous", "neutral", "even_chance"))


def _remark4_small_m(p):
    if p.m > 4:
        raise SizeLimit(f"remark4-m is only defined for m <= 4, got m={p.m}")
    cw = condorcet_winner(p)
    if cw is not None:
        return point_mass(cw, p.m, p.alts)
    if p.n % 2 == 0:
        counts = plurality_scores(p)
        half = [x for x in range(p.m) if 2 * counts[x] == p.n]
        if len(half) == 2:
            return uniform(half, p.m, p.alts)
    return uniform(pareto_optimal_set(p), p.m, p.alts)


remark4_small_m_rule = SDS("remark4-m", _remark4_small_m, OrderKind.STRICT,
                           ("anonymous", "neutral", "even_chance"))


# ------------------------------------------------------------------ table rule

class TableRule(SDS):
    """An SDS given by an explicit profile-to-lottery table."""

    def __init__(self, entries: dict[str, Lottery], alts: Sequence[str], kind: OrderKind, m: int, n: int,
                 name: str = "table"):
        self.entries = entries
        self.alts = tuple(alts)
        self.m, self.n = m, n
        super().__init__(name, self._lookup, kind)

    def _lookup(self, p: Profile) -> Lottery:
        try:
            return self.entries[p.key()]
        except KeyError:
            raise MissingProfile(f"table has no entry for {p.key()}") from None

    @classmethod
    def from_function(cls, profiles: Iterable[Profile], fn: Callable[[Profile], Lottery], kind: OrderKind,
                      name: str = "table") -> "TableRule":
        entries, alts, m, n = {}, None, 0, 0
        for p in profiles:
            entries[p.key()] = fn(p)
            alts, m, n = p.alts, p.m, p.n
        return cls(entries, alts, kind, m, n, name)

    def to_json(self) -> dict:
        return {
            "alts": list(self.alts), "kind": OrderKind(self.kind).value, "m": self.m, "n": self.n,
            "entries": {k: v.to_dict() for k, v in self.entries.items()},
        }

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=1, sort_keys=True)

    @classmethod
    def load(cls, path) -> "TableRule":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
            alts = data["alts"]
            entries = {k: lottery_from_dict(v, alts) for k, v in data["entries"].items()}
            return cls(entries, alts, OrderKind(data["kind"]), data["m"], data["n"], f"table:{path}")
        except (KeyError, ValueError, TypeError) as exc:
            raise ScriptFormatError(f"bad table file {path}: {exc}") from exc


def table_rule(entries: dict[str, Lottery], alts, kind=OrderKind.STRICT, m=None, n=None) -> TableRule:
    return TableRule(entries, alts, OrderKind(kind), m or len(alts), n or 0)


# -------------------------------------------------------------- identifiers

_SCORE_BASES = {"plurality": plurality_score, "copeland": copeland_score, "condorcet": condorcet_score,
                "last-place": last_place_count}


def rule_from_id(text: str) -> SDS:
    """Build a rule from a CLI identifier such as `score:copeland^2+cw` or `bidict:0,1`."""
    t = text.strip()
    if t == "condorcet":
        return condorcet_rule
    if t == "omni":
        return omninomination_rule
    if t == "rsd":
        return random_serial_dictatorship
    if t == "rd:uniform":
        return random_dictatorship()
    if t == "pareto-uniform":
        return uniform_pareto_rule
    if t == "remark4-n":
        return remark4_small_n_rule
    if t == "remark4-m":
        return remark4_small_m_rule
    mt = re.fullmatch(r"param-omni\?t1=(\d+)&t2=(\d+)", t)
    if mt:
        return param_omni_rule(ParamOmniConfig(int(mt.group(1)), int(mt.group(2))))
    mt = re.fullmatch(r"score:([a-z-]+)(?:\^(\d+))?(\+cw)?", t)
    if mt and mt.group(1) in _SCORE_BASES:
        sf = power_transform(_SCORE_BASES[mt.group(1)], int(mt.group(2) or 1))
        if mt.group(3):
            sf = condorcet_augmented(sf)
        return score_based_sds(sf)
    mt = re.fullmatch(r"rd:([0-9/,\s]+)", t)
    if mt:
        return random_dictatorship([Fraction(v.strip()) for v in mt.group(1).split(",")])
    mt = re.fullmatch(r"const:\{([^}]*)\}", t)
    if mt:
        return _NamedConstant([v.strip() for v in mt.group(1).split(",") if v.strip()])
    mt = re.fullmatch(r"dict:(\d+)", t)
    if mt:
        return dictatorial_rule(int(mt.group(1)))
    mt = re.fullmatch(r"bidict:(\d+),(\d+)", t)
    if mt:
        return bidictatorial_rule(int(mt.group(1)), int(mt.group(2)))
    if t.startswith("table:"):
        return TableRule.load(t[len("table:"):])
    raise ScriptFormatError(f"unknown rule identifier {text!r}")


class _NamedConstant(SDS):
    """Constant rule whose set is given by alternative names."""

    def __init__(self, names):
        if not names:
            raise ScriptFormatError("const rule needs at least one alternative")
        self.names = names
        super().__init__("const:{" + ",".join(names) + "}", self._fn_named, OrderKind.WEAK,
                         ("anonymous", "even_chance"))

    def _fn_named(self, p):
        try:
            xs = [p.alts.index(nm) for nm in self.names]
        except ValueError:
            raise ConfigOutOfRange(f"{self.names} not all among {p.alts}") from None
        return uniform(xs, p.m, p.alts)
