"""Loading and running replay scripts stored as JSON."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..errors import ProfileParseError, ScriptFormatError
from ..prefs import load_profile
from .csp import CSP, DEFAULT_BUDGET, UNARIES, add_lemma_chains
from .deduction import run_steps


@dataclass
class ReplayOutcome:
    name: str
    kind: str
    expected: str
    results: dict = field(default_factory=dict)  # mode -> status
    lines: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return bool(self.results) and all(s == self.expected for s in self.results.values())

    @property
    def status(self) -> str:
        stats = set(self.results.values())
        return stats.pop() if len(stats) == 1 else "MIXED"

    def to_dict(self) -> dict:
        return {"name": self.name, "kind": self.kind, "expected": self.expected, "results": self.results,
                "ok": self.ok, "log": self.lines}


def load_script(path) -> tuple[dict, Path]:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ScriptFormatError(f"{path}: {exc}") from None
    if data.get("kind") not in ("csp", "deduction"):
        raise ScriptFormatError(f"{path}: kind must be 'csp' or 'deduction'")
    return data, path.parent


def load_profiles(entries, base: Path) -> dict:
    out = {}
    for ent in entries:
        name, rel = ent["name"], ent["profile"]
        if name in out:
            raise ScriptFormatError(f"profile name {name!r} used twice")
        try:
            out[name] = load_profile(base / rel)
        except FileNotFoundError:
            raise ScriptFormatError(f"profile file {rel} not found") from None
        except ProfileParseError as exc:
            raise ProfileParseError(f"{rel}: {exc.message}", exc.line, exc.column) from None
    return out


def build_csp(data: dict, base: Path, mode: str = "unary") -> CSP:
    profiles = load_profiles(data["nodes"], base)
    first = next(iter(profiles.values()))
    csp = CSP(first.m, first.alts)
    ids = [csp.add_node(nm, p) for nm, p in profiles.items()]
    unaries = list(data.get("unaries", []))
    for u in unaries:
        if u not in UNARIES:
            raise ScriptFormatError(f"unknown unary {u!r}")
    lemma_unaries = set(data.get("lemma_unaries", []))
    if mode == "unary":
        active = unaries
    elif mode == "chains":
        active = [u for u in unaries if u not in lemma_unaries]
    else:
        raise ScriptFormatError(f"unknown lemma mode {mode!r}")
    for u in active:
        csp.apply_unary(u)
    if mode == "chains":
        base_nodes = sorted(set(ids))
        add_lemma_chains(csp, base_nodes, data.get("chain_lemmas", []), active)
    edges = data.get("edges", "auto")
    if edges == "auto":
        csp.auto_sp_edges()
    else:
        for e in edges:
            u, v = csp.aliases[e["u"]], csp.aliases[e["v"]]
            voter = int(e["voter"]) - 1
            pu, pv = csp.profiles[u], csp.profiles[v]
            diff = [i for i in range(pu.n) if pu.voters[i] != pv.voters[i]]
            if diff != [voter]:
                raise ScriptFormatError(f"edge {e['u']}-{e['v']} is not a deviation of voter {voter + 1}")
            csp.add_sp_edge(u, v, voter)
    for s in data.get("symmetry", []):
        u, v = csp.aliases[s["source"]], csp.aliases[s["target"]]
        tau = list(range(csp.m))
        for k, val in s.get("alternatives", {}).items():
            tau[csp.names.index(k)] = csp.names.index(val)
        pu, pv = csp.profiles[u], csp.profiles[v]
        if sorted(o.relabel(tau).rank for o in pu.voters) != sorted(o.rank for o in pv.voters):
            raise ScriptFormatError(f"symmetry {s['source']}->{s['target']} does not map the profiles")
        csp.add_symmetry_edge(u, v, tau)
    return csp


def run_csp(data: dict, base: Path, mode: str, budget: int = DEFAULT_BUDGET):
    csp = build_csp(data, base, mode)
    return csp, csp.solve(budget)


def replay_file(path, budget: int = DEFAULT_BUDGET, modes: Optional[list] = None) -> ReplayOutcome:
    data, base = load_script(path)
    t0 = time.perf_counter()
    out = ReplayOutcome(data.get("name", Path(path).stem), data["kind"], data.get("expect", ""))
    if data["kind"] == "csp":
        for mode in modes or data.get("modes", ["unary"]):
            csp, res = run_csp(data, base, mode, budget)
            out.results[mode] = res.status
            aliases = len(csp.aliases) - len(csp.node_names)
            out.lines.append(f"mode {mode}: {len(csp.node_names)} nodes ({aliases} aliases), "
                             f"{len(csp.edges)} edges, {res.search_nodes} search nodes -> {res.status}")
            if res.status == "SAT":
                out.lines.append(f"  assignment re-verified: {res.verified}")
                for k, v in sorted(res.assignment.items()):
                    out.lines.append(f"  {k}: {{{','.join(csp.names[x] for x in sorted(v))}}}")
            else:
                out.lines += ["  " + t for t in res.trace[:40]]
                if len(res.trace) > 40:
                    out.lines.append(f"  ... {len(res.trace) - 40} more propagation steps")
    else:
        profiles = load_profiles(data["profiles"], base)
        res = run_steps(profiles, data.get("axioms", []), data["steps"])
        out.results["steps"] = res.status
        out.lines += res.lines()
    out.seconds = time.perf_counter() - t0
    return out
