"""Exact evaluation and axiom auditing for randomized voting rules."""
from .lottery import Lottery, SDComparison, point_mass, sd_compare, uniform
from .prefs import DomainSpec, OrderKind, Profile, WeakOrder, load_profile, parse_profile
from .rules import SDS, rule_from_id

__version__ = "0.1.0"

__all__ = [
    "DomainSpec", "Lottery", "OrderKind", "Profile", "SDComparison", "SDS", "WeakOrder",
    "load_profile", "parse_profile", "point_mass", "rule_from_id", "sd_compare", "uniform",
]
