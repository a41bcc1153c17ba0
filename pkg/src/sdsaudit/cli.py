"""Command-line front end.

    sdsaudit eval condorcet profiles/cycle3.txt
    sdsaudit axioms score:plurality^2 --strict -m3 -n3 weak-sp
    sdsaudit replay proofs/thm5.json
    sdsaudit search weak-sp condorcet ex-post --strict -m3 -n3 --out tables/

Exit codes: 0 pass or expected outcome, 1 axiom failure, 2 parse error,
3 rule/domain mismatch, 4 cap or budget exceeded, 5 internal error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .axioms import AXIOMS, Verdict, classify_dictatorial
from .errors import ConfigOutOfRange, SDSError
from .prefs import DomainSpec, OrderKind, enumerate_profiles, load_profile
from .rules import rule_from_id

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_MISMATCH, EXIT_CAP, EXIT_INTERNAL = range(6)
SAMPLED = {"weak-sp", "strong-sp"}


@dataclass
class RunConfig:
    command: str
    rule: Optional[str] = None
    profile: Optional[str] = None
    axioms: list = field(default_factory=list)
    kind: OrderKind = OrderKind.STRICT
    m: int = 3
    n: int = 3
    cap: int = 10_000_000
    budget: int = 10_000_000
    fmt: str = "json"
    sample: Optional[int] = None
    seed: int = 0
    threads: int = 1
    out: Optional[str] = None
    timestamp: bool = False

    def validate(self) -> None:
        if self.cap <= 0 or self.budget <= 0:
            raise ConfigOutOfRange("caps must be positive")
        if self.sample is not None and self.sample <= 0:
            raise ConfigOutOfRange("--sample must be positive")
        if self.threads <= 0:
            raise ConfigOutOfRange("--threads must be positive")

    def spec(self) -> DomainSpec:
        return DomainSpec(self.m, self.n, self.kind, cap=self.cap)


def _emit(cfg: RunConfig, rows: list[dict], text_lines: list[str], stream) -> None:
    if cfg.fmt == "json":
        doc = rows[0] if len(rows) == 1 and cfg.command == "eval" else rows
        if cfg.timestamp:
            doc = {"generated": time.strftime("%Y-%m-%dT%H:%M:%S"), "results": doc}
        stream.write(json.dumps(doc, indent=1) + "\n")
    elif cfg.fmt == "csv":
        keys = list(dict.fromkeys(k for r in rows for k in r))
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in r.items()})
        stream.write(buf.getvalue())
    else:
        stream.write("\n".join(text_lines) + "\n")


def cmd_eval(cfg: RunConfig, stream) -> int:
    rule = rule_from_id(cfg.rule)
    p = load_profile(cfg.profile)
    lot = rule(p)
    _emit(cfg, [lot.to_dict()], [lot.text()], stream)
    return EXIT_OK


def cmd_axioms(cfg: RunConfig, stream) -> int:
    rule = rule_from_id(cfg.rule)
    spec = cfg.spec()
    if cfg.sample is None or not set(cfg.axioms) <= SAMPLED:
        spec.check_cap()
    rows, lines, failed = [], [], False
    for ax in cfg.axioms:
        if ax == "dictatorial":
            cls = classify_dictatorial(rule, spec)
            rows.append({"axiom": ax, "verdict": cls.label, "voters": list(cls.voters)})
            lines.append(f"dictatorial: {cls.label} {list(cls.voters)}")
            continue
        if ax not in AXIOMS:
            raise ConfigOutOfRange(f"unknown axiom {ax!r}; choose from {sorted(AXIOMS)} or 'dictatorial'")
        if ax in SAMPLED:
            rep = AXIOMS[ax](rule, spec, sample=cfg.sample, seed=cfg.seed)
        else:
            rep = AXIOMS[ax](rule, spec)
        rows.append(rep.to_dict())
        lines.append(rep.line())
        if rep.verdict == Verdict.FAIL:
            failed = True
            lines.append("  witness: " + json.dumps(rep.witness))
            if cfg.out:
                out = Path(cfg.out)
                out.mkdir(parents=True, exist_ok=True)
                (out / f"witness_{ax}.json").write_text(rep.to_json() + "\n", encoding="utf-8")
    _emit(cfg, rows, lines, stream)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_replay(cfg: RunConfig, stream, paths, mode=None) -> int:
    from .replay import replay_file

    rows, lines, ok = [], [], True
    for path in paths:
        res = replay_file(path, cfg.budget, [mode] if mode else None)
        rows.append(res.to_dict())
        lines.append(f"== {path}")
        lines += res.lines
        lines.append(f"result: {res.status} (expected {res.expected})")
        ok &= res.ok
        if "BUDGET_EXCEEDED" in res.results.values():
            _emit(cfg, rows, lines, stream)
            return EXIT_CAP
    _emit(cfg, rows, lines, stream)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_search(cfg: RunConfig, stream) -> int:
    from .replay import full_domain_search

    spec = cfg.spec()
    res, table = full_domain_search(cfg.axioms, spec, cfg.budget)
    row = {"status": res.status, "search_nodes": res.search_nodes, "domain": spec.label()}
    lines = [f"{res.status} after {res.search_nodes} search nodes on {spec.label()}"]
    if table is not None:
        row["verified"] = res.verified
        if cfg.out:
            out = Path(cfg.out)
            target = out if out.suffix == ".json" else out / "table.json"
            target.parent.mkdir(parents=True, exist_ok=True)
            table.save(target)
            row["table"] = str(target)
            lines.append(f"table written to {target} (load with table:{target})")
    _emit(cfg, [row], lines, stream)
    return EXIT_CAP if res.status == "BUDGET_EXCEEDED" else EXIT_OK


def cmd_enumerate(cfg: RunConfig, stream, listing: bool) -> int:
    spec = cfg.spec()
    count = spec.check_cap()
    rows = [{"domain": spec.label(), "profiles": count}]
    lines = [f"{spec.label()}: {count} profiles"]
    if listing:
        keys = [p.key() for p in enumerate_profiles(spec)]
        rows[0]["keys"] = keys
        lines += keys
    _emit(cfg, rows, lines, stream)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    kind = common.add_mutually_exclusive_group()
    kind.add_argument("--strict", dest="kind", action="store_const", const=OrderKind.STRICT)
    kind.add_argument("--weak", dest="kind", action="store_const", const=OrderKind.WEAK)
    common.add_argument("-m", type=int, default=3, help="number of alternatives")
    common.add_argument("-n", type=int, default=3, help="number of voters")
    common.add_argument("--cap", type=int, default=10_000_000, help="enumeration cap")
    common.add_argument("--budget", type=int, default=10_000_000, help="search node budget")
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default=None)
    common.add_argument("--sample", type=int, default=None, help="sample N profiles (SP checks only)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1, help="accepted; checks run sequentially")
    common.add_argument("--out", default=None, help="directory for tables and witnesses")
    common.add_argument("--timestamp", action="store_true", help="add a generation time to JSON reports")

    ap = argparse.ArgumentParser(prog="sdsaudit", description="Exact audits of randomized voting rules.")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("eval", parents=[common], help="evaluate a rule on a profile file")
    p.add_argument("rule")
    p.add_argument("profile")
    p = sub.add_parser("axioms", parents=[common], help="audit axioms over a whole domain")
    p.add_argument("rule")
    p.add_argument("axioms", nargs="+")
    p = sub.add_parser("replay", parents=[common], help="replay proof scripts")
    p.add_argument("scripts", nargs="+")
    p.add_argument("--mode", choices=("unary", "chains"), default=None)
    p = sub.add_parser("search", parents=[common], help="search a whole domain for an even-chance rule")
    p.add_argument("axioms", nargs="+")
    p = sub.add_parser("enumerate", parents=[common], help="count (or list) a domain's profiles")
    p.add_argument("--list", action="store_true")
    return ap


def main(argv=None, stream=None) -> int:
    stream = stream or sys.stdout
    args = build_parser().parse_args(argv)
    default_fmt = "text" if args.command in ("replay", "enumerate") else "json"
    cfg = RunConfig(
        command=args.command, rule=getattr(args, "rule", None), profile=getattr(args, "profile", None),
        axioms=list(getattr(args, "axioms", []) or []), kind=args.kind or OrderKind.STRICT, m=args.m, n=args.n,
        cap=args.cap, budget=args.budget, fmt=args.fmt or default_fmt, sample=args.sample, seed=args.seed,
        threads=args.threads, out=args.out, timestamp=args.timestamp,
    )
    try:
        cfg.validate()
        if cfg.command == "eval":
            return cmd_eval(cfg, stream)
        if cfg.command == "axioms":
            return cmd_axioms(cfg, stream)
        if cfg.command == "replay":
            return cmd_replay(cfg, stream, args.scripts, args.mode)
        if cfg.command == "search":
            return cmd_search(cfg, stream)
        return cmd_enumerate(cfg, stream, args.list)
    except SDSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
