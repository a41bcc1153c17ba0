"""Mechanical replay of impossibility arguments."""
from ..prefs import margin_isomorphism
from .csp import CSP, CSPResult, full_domain_search
from .deduction import Deduction, ScriptResult, run_steps
from .script import ReplayOutcome, load_script, replay_file

__all__ = [
    "CSP", "CSPResult", "Deduction", "ReplayOutcome", "ScriptResult", "full_domain_search",
    "load_script", "margin_isomorphism", "replay_file", "run_steps",
]
