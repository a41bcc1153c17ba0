"""Run a rule x axiom matrix on one domain and write it as CSV.

    python3 scripts/audit_matrix.py --strict -m 3 -n 3
    python3 scripts/audit_matrix.py --weak -m 3 -n 3 --rules rsd pareto-uniform dict:0 bidict:0,1 \
        --axioms anonymity neutrality ex-post weak-sp sd-efficiency

Each cell is PASS or FAIL; FAIL witnesses are replayed before they are reported.
"""
import argparse
import csv
import sys
import time

from sdsaudit.axioms import AXIOMS, Verdict, replay_witness
from sdsaudit.errors import DomainMismatch, SizeLimit
from sdsaudit.prefs import DomainSpec, OrderKind
from sdsaudit.rules import rule_from_id

STRICT_RULES = ["condorcet", "omni", "rd:uniform", "score:plurality", "score:copeland", "score:plurality^2",
                "score:copeland^2", "score:condorcet", "score:copeland^2+cw", "param-omni?t1=2&t2=1",
                "remark4-n", "remark4-m"]
DEFAULT_AXIOMS = ["weak-sp", "strong-sp", "even-chance", "ex-post", "condorcet", "anonymity", "neutrality",
                  "pairwiseness", "tops-only"]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    kind = ap.add_mutually_exclusive_group()
    kind.add_argument("--strict", dest="kind", action="store_const", const=OrderKind.STRICT)
    kind.add_argument("--weak", dest="kind", action="store_const", const=OrderKind.WEAK)
    ap.add_argument("-m", type=int, default=3)
    ap.add_argument("-n", type=int, default=3)
    ap.add_argument("--rules", nargs="*", default=STRICT_RULES)
    ap.add_argument("--axioms", nargs="*", default=DEFAULT_AXIOMS)
    ap.add_argument("--out", default=None, help="CSV path (stdout if omitted)")
    args = ap.parse_args(argv)
    spec = DomainSpec(args.m, args.n, args.kind or OrderKind.STRICT)
    rows = []
    for rid in args.rules:
        rule = rule_from_id(rid)
        row = {"rule": rid}
        t0 = time.perf_counter()
        for ax in args.axioms:
            try:
                rep = AXIOMS[ax](rule, spec)
            except (DomainMismatch, SizeLimit):
                row[ax] = "n/a"
                continue
            if rep.verdict == Verdict.FAIL and rep.witness and not replay_witness(rep, rule):
                raise SystemExit(f"witness for {rid} / {ax} does not replay")
            row[ax] = rep.verdict.value
        row["seconds"] = f"{time.perf_counter() - t0:.1f}"
        rows.append(row)
        print(rid, row, file=sys.stderr)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.DictWriter(out, fieldnames=["rule", *args.axioms, "seconds"], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    if args.out:
        out.close()


if __name__ == "__main__":
    main()
