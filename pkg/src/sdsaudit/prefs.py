"""Preferences, profiles, majority statistics and domain enumeration.

Alternatives are integers 0..m-1; a profile carries the display names.
Voters are indexed 0..n-1 in code and 1..n in the text format.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, Optional, Sequence

from .errors import CapExceeded, NotAdjacent, ProfileParseError

DEFAULT_CAP = 10_000_000


class OrderKind(str, Enum):
    STRICT = "strict"
    WEAK = "weak"


def default_names(m: int) -> tuple[str, ...]:
    if m <= 26:
        return tuple(chr(ord("a") + k) for k in range(m))
    return tuple(f"x{k}" for k in range(m))


class WeakOrder:
    """A complete transitive relation, stored as ordered indifference classes."""

    __slots__ = ("classes", "rank", "m", "signs", "weak_above", "strict_above", "is_strict", "_hash")

    def __init__(self, classes):
        cls = tuple(frozenset(c) for c in classes)
        if any(not c for c in cls):
            raise ValueError("empty indifference class")
        members = [x for c in cls for x in c]
        m = len(members)
        if len(set(members)) != m or set(members) != set(range(m)):
            raise ValueError("classes must partition the alternatives 0..m-1")
        rank = [0] * m
        for k, c in enumerate(cls):
            for x in c:
                rank[x] = k
        self.classes = cls
        self.rank = tuple(rank)
        self.m = m
        self.is_strict = len(cls) == m
        # signs[x*m+y] is +1 if x is strictly above y, -1 if below, 0 if tied
        self.signs = tuple(
            (rank[x] < rank[y]) - (rank[x] > rank[y]) for x in range(m) for y in range(m)
        )
        # bitmasks of the alternatives weakly / strictly above each alternative
        self.weak_above = tuple(sum(1 << z for z in range(m) if rank[z] <= rank[y]) for y in range(m))
        self.strict_above = tuple(sum(1 << z for z in range(m) if rank[z] < rank[y]) for y in range(m))
        self._hash = hash(self.rank)

    @classmethod
    def strict(cls, ranking: Sequence[int]) -> "WeakOrder":
        return cls([[x] for x in ranking])

    @classmethod
    def from_rank(cls, rank: Sequence[int]) -> "WeakOrder":
        levels = sorted(set(rank))
        return cls([[x for x, r in enumerate(rank) if r == lv] for lv in levels])

    @property
    def encoding(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(c)) for c in self.classes)

    def prefers(self, x: int, y: int) -> bool:
        return self.rank[x] < self.rank[y]

    def weakly_prefers(self, x: int, y: int) -> bool:
        return self.rank[x] <= self.rank[y]

    def tops(self) -> frozenset:
        return self.classes[0]

    def upper_contour(self, x: int) -> frozenset:
        r = self.rank[x]
        return frozenset(y for y in range(self.m) if self.rank[y] <= r)

    def boundary_sets(self) -> list[frozenset]:
        """Upper contour sets at each class boundary, top class first."""
        out, acc = [], frozenset()
        for c in self.classes:
            acc = acc | c
            out.append(acc)
        return out

    def reversed(self) -> "WeakOrder":
        return WeakOrder(self.classes[::-1])

    def relabel(self, perm: Sequence[int]) -> "WeakOrder":
        """Order in which perm[x] takes the place of x."""
        return WeakOrder([[perm[x] for x in c] for c in self.classes])

    def ranking(self) -> list[int]:
        if not self.is_strict:
            raise ValueError("order has ties")
        return [next(iter(c)) for c in self.classes]

    def text(self, names: Sequence[str]) -> str:
        parts = []
        for c in self.classes:
            if len(c) == 1:
                parts.append(names[next(iter(c))])
            else:
                parts.append("{" + ",".join(names[x] for x in sorted(c)) + "}")
        return ",".join(parts)

    def __eq__(self, other):
        return isinstance(other, WeakOrder) and self.rank == other.rank

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.encoding < other.encoding

    def __repr__(self):
        return f"WeakOrder({self.text(default_names(self.m))})"


@dataclass(frozen=True)
class Profile:
    alts: tuple[str, ...]
    voters: tuple[WeakOrder, ...]

    def __post_init__(self):
        if not self.voters:
            raise ValueError("profile needs at least one voter")
        m = len(self.alts)
        if any(o.m != m for o in self.voters):
            raise ValueError("every order must rank all alternatives")

    @classmethod
    def build(cls, orders, alts: Optional[Sequence[str]] = None) -> "Profile":
        orders = tuple(orders)
        m = orders[0].m
        return cls(tuple(alts) if alts is not None else default_names(m), orders)

    @property
    def m(self) -> int:
        return len(self.alts)

    @property
    def n(self) -> int:
        return len(self.voters)

    @property
    def is_strict(self) -> bool:
        return all(o.is_strict for o in self.voters)

    def index(self, name: str) -> int:
        return self.alts.index(name)

    def with_voter(self, i: int, order: WeakOrder) -> "Profile":
        vs = list(self.voters)
        vs[i] = order
        return Profile(self.alts, tuple(vs))

    def key(self) -> str:
        return " | ".join(o.text(self.alts) for o in self.voters)

    def text(self) -> str:
        return serialize_profile(self)

    def __str__(self):
        return self.key()


def make_profile(alts: tuple, voters: tuple) -> Profile:
    """Unchecked constructor for hot enumeration loops."""
    p = object.__new__(Profile)
    object.__setattr__(p, "alts", alts)
    object.__setattr__(p, "voters", voters)
    return p


# ---------------------------------------------------------------- text format

_VOTER_LINE = re.compile(r"\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?:")
_NAME = re.compile(r"[A-Za-z0-9_]+")


def parse_order(text: str, alts: Sequence[str], line: Optional[int] = None, col0: int = 0) -> WeakOrder:
    """Parse `a,{b,c},d` against the given alternative names."""
    index = {a: k for k, a in enumerate(alts)}
    classes: list[list[int]] = []
    seen: set[int] = set()
    pos, n = 0, len(text)

    def err(msg, p):
        raise ProfileParseError(msg, line, col0 + p + 1)

    def skip_ws(p):
        while p < n and text[p] in " \t":
            p += 1
        return p

    def read_name(p):
        mt = _NAME.match(text, p)
        if not mt:
            err("expected an alternative name", p)
        name = mt.group(0)
        if name not in index:
            err(f"unknown alternative {name!r}", p)
        x = index[name]
        if x in seen:
            err(f"duplicate alternative {name!r}", p)
        seen.add(x)
        return x, mt.end()

    pos = skip_ws(pos)
    if pos >= n:
        err("empty order", pos)
    while True:
        pos = skip_ws(pos)
        if pos < n and text[pos] == "{":
            pos += 1
            group = []
            while True:
                pos = skip_ws(pos)
                x, pos = read_name(pos)
                group.append(x)
                pos = skip_ws(pos)
                if pos < n and text[pos] == ",":
                    pos += 1
                    continue
                if pos < n and text[pos] == "}":
                    pos += 1
                    break
                err("expected ',' or '}'", pos)
            classes.append(group)
        else:
            x, pos = read_name(pos)
            classes.append([x])
        pos = skip_ws(pos)
        if pos >= n:
            break
        if text[pos] != ",":
            err("expected ','", pos)
        pos += 1
    missing = [alts[x] for x in range(len(alts)) if x not in seen]
    if missing:
        raise ProfileParseError(f"missing alternatives {', '.join(missing)}", line, col0 + n + 1)
    return WeakOrder(classes)


def parse_profile(text: str) -> Profile:
    alts: Optional[tuple[str, ...]] = None
    assigned: dict[int, WeakOrder] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        if alts is None:
            mt = re.match(r"\s*alts\s*:", body)
            if not mt:
                raise ProfileParseError("first line must be 'alts: ...'", lineno, 1)
            names = body[mt.end():].split()
            if not names:
                raise ProfileParseError("no alternatives declared", lineno, mt.end() + 1)
            for nm in names:
                if not _NAME.fullmatch(nm):
                    raise ProfileParseError(f"bad alternative name {nm!r}", lineno, body.index(nm) + 1)
            if len(set(names)) != len(names):
                raise ProfileParseError("duplicate alternative in header", lineno, 1)
            alts = tuple(names)
            continue
        mt = _VOTER_LINE.match(body)
        if not mt:
            raise ProfileParseError("expected '<id>: order' or '<lo>..<hi>: order'", lineno, 1)
        lo = int(mt.group(1))
        hi = int(mt.group(2)) if mt.group(2) else lo
        if lo < 1 or hi < lo:
            raise ProfileParseError(f"bad voter range {lo}..{hi}", lineno, mt.start(1) + 1)
        order = parse_order(body[mt.end():], alts, lineno, mt.end())
        for v in range(lo, hi + 1):
            if v in assigned:
                raise ProfileParseError(f"voter {v} assigned twice", lineno, mt.start(1) + 1)
            assigned[v] = order
    if alts is None:
        raise ProfileParseError("empty profile", 1, 1)
    if not assigned:
        raise ProfileParseError("profile has no voters", None)
    n = max(assigned)
    gaps = [v for v in range(1, n + 1) if v not in assigned]
    if gaps:
        raise ProfileParseError(f"voters {gaps} have no order", None)
    return Profile(alts, tuple(assigned[v] for v in range(1, n + 1)))


def load_profile(path) -> Profile:
    with open(path, encoding="utf-8") as fh:
        return parse_profile(fh.read())


def serialize_profile(p: Profile) -> str:
    lines = ["alts: " + " ".join(p.alts)]
    i = 0
    while i < p.n:
        j = i
        while j + 1 < p.n and p.voters[j + 1] == p.voters[i]:
            j += 1
        ids = f"{i + 1}" if i == j else f"{i + 1}..{j + 1}"
        lines.append(f"{ids}: {p.voters[i].text(p.alts)}")
        i = j + 1
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ basic statistics

def upper_contour(order: WeakOrder, x: int) -> frozenset:
    return order.upper_contour(x)


def tops(p: Profile, i: int) -> frozenset:
    return p.voters[i].tops()


@dataclass(frozen=True)
class MajorityMargins:
    """margin[x][y] = #voters preferring x to y minus #voters preferring y to x."""

    m: int
    flat: tuple[int, ...]

    def __getitem__(self, xy):
        x, y = xy
        return self.flat[x * self.m + y]

    def matrix(self) -> list[list[int]]:
        return [list(self.flat[x * self.m:(x + 1) * self.m]) for x in range(self.m)]

    def beats(self, x: int, y: int) -> bool:
        return self.flat[x * self.m + y] > 0

    def tied(self, x: int, y: int) -> bool:
        return self.flat[x * self.m + y] == 0


def majority_margins(p: Profile) -> MajorityMargins:
    flat = tuple(map(sum, zip(*(o.signs for o in p.voters))))
    return MajorityMargins(p.m, flat)


def condorcet_winner(p: Profile, margins: Optional[MajorityMargins] = None) -> Optional[int]:
    if margins is not None:
        mg = margins.flat
    else:
        mg = tuple(map(sum, zip(*[o.signs for o in p.voters])))
    m = p.m
    if m == 1:
        return 0
    for x in range(m):
        row = mg[x * m:(x + 1) * m]
        if min(row[:x] + row[x + 1:]) > 0:
            return x
    return None


def plurality_scores(p: Profile) -> list[int]:
    """Voters whose top class is the single alternative x. Tied tops count for nobody."""
    s = [0] * p.m
    for o in p.voters:
        t = o.classes[0]
        if len(t) == 1:
            s[next(iter(t))] += 1
    return s


def copeland_scores(p: Profile, margins: Optional[MajorityMargins] = None):
    from fractions import Fraction

    mg = margins.flat if margins is not None else majority_margins(p).flat
    m = p.m
    half = Fraction(1, 2)
    out = []
    for x in range(m):
        wins = ties = 0
        for y in range(m):
            if y == x:
                continue
            v = mg[x * m + y]
            if v > 0:
                wins += 1
            elif v == 0:
                ties += 1
        out.append(wins + half * ties)
    return out


def pareto_dominates(p: Profile, x: int, y: int) -> bool:
    """x Pareto-dominates y: every voter weakly prefers x and someone strictly."""
    strict = False
    for o in p.voters:
        rx, ry = o.rank[x], o.rank[y]
        if rx > ry:
            return False
        if rx < ry:
            strict = True
    return strict


def pareto_optimal_set(p: Profile) -> frozenset:
    return frozenset(y for y in range(p.m) if not pareto_dominators(p, y))


def pareto_dominators(p: Profile, y: int) -> int:
    """Bitmask of the alternatives that Pareto-dominate y."""
    weak, strict = -1, 0
    for o in p.voters:
        weak &= o.weak_above[y]
        strict |= o.strict_above[y]
    return weak & strict


def omni_set(p: Profile) -> frozenset:
    """Alternatives ranked uniquely first by at least one voter."""
    out = set()
    for o in p.voters:
        t = o.classes[0]
        if len(t) == 1:
            out |= t
    return frozenset(out)


# ------------------------------------------------------------- transformations

@dataclass(frozen=True)
class Permutation:
    """A bijection on alternatives or on voters; mapping[k] is the image of k."""

    mapping: tuple[int, ...]
    kind: str = "alternatives"

    def __post_init__(self):
        if sorted(self.mapping) != list(range(len(self.mapping))):
            raise ValueError("not a bijection")
        if self.kind not in ("alternatives", "voters"):
            raise ValueError("kind must be 'alternatives' or 'voters'")

    def __call__(self, k: int) -> int:
        return self.mapping[k]

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.mapping)
        for k, v in enumerate(self.mapping):
            inv[v] = k
        return Permutation(tuple(inv), self.kind)

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other."""
        return Permutation(tuple(self.mapping[other.mapping[k]] for k in range(len(self.mapping))), self.kind)

    def as_names(self, names: Sequence[str]) -> dict[str, str]:
        return {names[k]: names[v] for k, v in enumerate(self.mapping)}


def apply_permutation(p: Profile, perm: Permutation) -> Profile:
    """Rename alternatives (x becomes perm(x)) or move voter i to slot perm(i)."""
    if perm.kind == "alternatives":
        return Profile(p.alts, tuple(o.relabel(perm.mapping) for o in p.voters))
    vs = [None] * p.n
    for i, o in enumerate(p.voters):
        vs[perm.mapping[i]] = o
    return Profile(p.alts, tuple(vs))


def adjacent_swap(p: Profile, i: int, x: int, y: int) -> Profile:
    """Profile in which voter i, who has x directly above y, puts y directly above x."""
    o = p.voters[i]
    rx, ry = o.rank[x], o.rank[y]
    if not (ry == rx + 1 and len(o.classes[rx]) == 1 and len(o.classes[ry]) == 1):
        raise NotAdjacent(f"voter {i} does not rank {p.alts[x]} directly above {p.alts[y]}")
    cls = list(o.classes)
    cls[rx], cls[ry] = cls[ry], cls[rx]
    return p.with_voter(i, WeakOrder(cls))


def adjacent_pairs(order: WeakOrder) -> list[tuple[int, int]]:
    """Pairs (x, y) with x a singleton class directly above the singleton class y."""
    out = []
    for k in range(len(order.classes) - 1):
        a, b = order.classes[k], order.classes[k + 1]
        if len(a) == 1 and len(b) == 1:
            out.append((next(iter(a)), next(iter(b))))
    return out


def margin_isomorphism(m1: MajorityMargins, m2: MajorityMargins) -> Optional[Permutation]:
    """Lexicographically first tau with m1[tau(x), tau(y)] == m2[x, y] for all x, y.

    For pairwise and neutral rules this gives f(R2, x) == f(R1, tau(x)).
    """
    m = m1.m
    if m2.m != m or sorted(m1.flat) != sorted(m2.flat):
        return None
    for cand in itertools.permutations(range(m)):
        if all(m1.flat[cand[x] * m + cand[y]] == m2.flat[x * m + y] for x in range(m) for y in range(m)):
            return Permutation(tuple(cand))
    return None


# ------------------------------------------------------------------ enumeration

def _ordered_partitions(items: tuple[int, ...]):
    if not items:
        yield ()
        return
    for r in range(1, len(items) + 1):
        for first in itertools.combinations(items, r):
            rest = tuple(x for x in items if x not in first)
            for tail in _ordered_partitions(rest):
                yield (first,) + tail


def enumerate_orders(m: int, kind: OrderKind) -> list[WeakOrder]:
    """All orders of the kind, sorted by class-partition encoding."""
    if kind == OrderKind.STRICT:
        orders = [WeakOrder.strict(r) for r in itertools.permutations(range(m))]
    else:
        orders = [WeakOrder(c) for c in _ordered_partitions(tuple(range(m)))]
    return sorted(orders)


def count_orders(m: int, kind: OrderKind) -> int:
    if kind == OrderKind.STRICT:
        return math.factorial(m)
    # ordered Bell (Fubini) numbers
    a = [1]
    for k in range(1, m + 1):
        a.append(sum(math.comb(k, j) * a[k - j] for j in range(1, k + 1)))
    return a[m]


@dataclass(frozen=True)
class DomainSpec:
    m: int
    n: int
    kind: OrderKind = OrderKind.STRICT
    cap: int = DEFAULT_CAP
    alts: Optional[tuple[str, ...]] = None
    filter: Optional[Callable[[Profile], bool]] = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be positive")
        object.__setattr__(self, "kind", OrderKind(self.kind))
        if self.alts is not None and len(self.alts) != self.m:
            raise ValueError("need one name per alternative")

    @property
    def names(self) -> tuple[str, ...]:
        return self.alts if self.alts is not None else default_names(self.m)

    def orders(self) -> list[WeakOrder]:
        return enumerate_orders(self.m, self.kind)

    def size(self) -> int:
        return count_orders(self.m, self.kind) ** self.n

    def check_cap(self) -> int:
        size = self.size()
        if size > self.cap:
            raise CapExceeded(size, self.cap)
        return size

    def label(self) -> str:
        return f"{self.kind.value} m={self.m} n={self.n}"


def enumerate_profiles(spec: DomainSpec) -> Iterator[Profile]:
    """Profiles in lexicographic order of voter order indices, voter 0 most significant."""
    spec.check_cap()
    orders = spec.orders()
    names = spec.names
    for combo in itertools.product(orders, repeat=spec.n):
        p = Profile(names, combo)
        if spec.filter is None or spec.filter(p):
            yield p
