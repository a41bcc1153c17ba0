"""Exact lotteries and stochastic dominance."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .prefs import WeakOrder, default_names


class SDComparison(str, Enum):
    EQUAL = "equal"
    P_STRICTLY_PREFERRED = "p_strictly_preferred"
    Q_STRICTLY_PREFERRED = "q_strictly_preferred"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class Lottery:
    probs: tuple[Fraction, ...]
    alts: Optional[tuple[str, ...]] = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        probs = tuple(Fraction(v) for v in self.probs)
        if any(v < 0 for v in probs):
            raise ValueError("negative probability")
        if sum(probs) != 1:
            raise ValueError(f"probabilities sum to {sum(probs)}, not 1")
        object.__setattr__(self, "probs", probs)

    @property
    def m(self) -> int:
        return len(self.probs)

    @property
    def names(self) -> tuple[str, ...]:
        return self.alts if self.alts is not None else default_names(self.m)

    def __getitem__(self, x: int) -> Fraction:
        return self.probs[x]

    def support(self) -> frozenset:
        return frozenset(x for x, v in enumerate(self.probs) if v > 0)

    def mass(self, xs: Iterable[int]) -> Fraction:
        return sum((self.probs[x] for x in xs), Fraction(0))

    def relabel(self, perm: Sequence[int]) -> "Lottery":
        """Lottery giving perm[x] the probability that x had."""
        out = [Fraction(0)] * self.m
        for x, v in enumerate(self.probs):
            out[perm[x]] = v
        return Lottery(tuple(out), self.alts)

    def is_even_chance(self) -> bool:
        sup = [v for v in self.probs if v > 0]
        return all(v == sup[0] for v in sup)

    def to_dict(self) -> dict[str, str]:
        return {nm: str(v) for nm, v in zip(self.names, self.probs)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def text(self) -> str:
        return ", ".join(f"{nm}: {v}" for nm, v in zip(self.names, self.probs) if v)

    def __repr__(self):
        return f"Lottery({self.text()})"


def point_mass(x: int, m: int, alts=None) -> Lottery:
    return _uniform(frozenset((x,)), m, alts)


def uniform(xs: Iterable[int], m: int, alts=None) -> Lottery:
    return _uniform(frozenset(xs), m, alts)


@lru_cache(maxsize=4096)
def _uniform(xs: frozenset, m: int, alts) -> Lottery:
    if not xs:
        raise ValueError("uniform lottery over an empty set")
    if max(xs) >= m or min(xs) < 0:
        raise ValueError("alternative out of range")
    w = Fraction(1, len(xs))
    return Lottery(tuple(w if k in xs else Fraction(0) for k in range(m)), alts)


even_chance_lottery = uniform


def mass(p: Lottery, xs: Iterable[int]) -> Fraction:
    return p.mass(xs)


def lottery_from_dict(d: dict, alts: Sequence[str]) -> Lottery:
    unknown = set(d) - set(alts)
    if unknown:
        raise ValueError(f"unknown alternatives {sorted(unknown)}")
    return Lottery(tuple(Fraction(str(d.get(a, 0))) for a in alts), tuple(alts))


def sd_compare(order: WeakOrder, p: Lottery, q: Lottery) -> SDComparison:
    """Compare p and q by stochastic dominance with respect to one voter's order."""
    p_ge = q_ge = True
    for u in order.boundary_sets():
        a, b = p.mass(u), q.mass(u)
        if a < b:
            p_ge = False
        elif a > b:
            q_ge = False
    if p_ge and q_ge:
        return SDComparison.EQUAL
    if p_ge:
        return SDComparison.P_STRICTLY_PREFERRED
    if q_ge:
        return SDComparison.Q_STRICTLY_PREFERRED
    return SDComparison.INCOMPARABLE


def sd_weakly_prefers(order: WeakOrder, p: Lottery, q: Lottery) -> bool:
    return sd_compare(order, p, q) in (SDComparison.EQUAL, SDComparison.P_STRICTLY_PREFERRED)


def is_manipulation(order: WeakOrder, truthful: Lottery, deviant: Lottery) -> bool:
    """True iff the deviant lottery is strictly SD-preferred to the truthful one."""
    return sd_compare(order, deviant, truthful) == SDComparison.P_STRICTLY_PREFERRED


def ex_ante_dominates(orders: Sequence[WeakOrder], q: Lottery, p: Lottery) -> bool:
    """q SD-dominates p: every voter weakly prefers q and someone strictly."""
    strict = False
    for o in orders:
        c = sd_compare(o, q, p)
        if c in (SDComparison.Q_STRICTLY_PREFERRED, SDComparison.INCOMPARABLE):
            return False
        if c == SDComparison.P_STRICTLY_PREFERRED:
            strict = True
    return strict


# ------------------------------------------------------ even-chance set compare

def set_masks(order: WeakOrder) -> list[int]:
    """Bitmasks of the order's upper contour sets at class boundaries."""
    out, acc = [], 0
    for c in order.classes:
        for x in c:
            acc |= 1 << x
        out.append(acc)
    return out


def set_manipulation(bounds: Sequence[int], truthful: int, deviant: int) -> bool:
    """Is the uniform lottery on `deviant` strictly SD-better than on `truthful`?

    Sets are bitmasks; bounds are the voter's upper-contour bitmasks. Compares
    |Y & U| / |Y| with |X & U| / |X| by cross-multiplying.
    """
    nx, ny = truthful.bit_count(), deviant.bit_count()
    strict = False
    for u in bounds:
        a = (deviant & u).bit_count() * nx
        b = (truthful & u).bit_count() * ny
        if a < b:
            return False
        if a > b:
            strict = True
    return strict


def mask_of(xs: Iterable[int]) -> int:
    v = 0
    for x in xs:
        v |= 1 << x
    return v


def members(mask: int) -> list[int]:
    out, k = [], 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return out
