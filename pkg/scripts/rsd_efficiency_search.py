"""Look for weak profiles at which random serial dictatorship is SD-inefficient.

    python3 scripts/rsd_efficiency_search.py                 # m=3 n=2..4 exhaustive
    python3 scripts/rsd_efficiency_search.py -m 4 -n 4 --sample 20000 --seed 1

Prints the first witness per domain (profile, RSD lottery, dominating lottery)
and a JSON summary line.
"""
import argparse
import json
import random
import time

from sdsaudit.lottery import ex_ante_dominates
from sdsaudit.prefs import DomainSpec, OrderKind, Profile, enumerate_profiles, serialize_profile
from sdsaudit.ratlp import sd_dominated
from sdsaudit.rules import random_serial_dictatorship


def scan(spec: DomainSpec, sample=None, seed=0, first_only=True):
    if sample is None:
        profiles = enumerate_profiles(spec)
    else:
        rng = random.Random(seed)
        orders = spec.orders()
        profiles = (Profile.build([rng.choice(orders) for _ in range(spec.n)]) for _ in range(sample))
    checked, hits = 0, []
    for p in profiles:
        checked += 1
        lot = random_serial_dictatorship(p)
        q = sd_dominated(p, lot)
        if q is not None:
            assert ex_ante_dominates(p.voters, q, lot)
            hits.append((p, lot, q))
            if first_only:
                break
    return checked, hits


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-m", type=int, nargs="*", default=[3])
    ap.add_argument("-n", type=int, nargs="*", default=[2, 3, 4])
    ap.add_argument("--sample", type=int, default=None)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--all", action="store_true", help="count every witness instead of stopping at the first")
    args = ap.parse_args(argv)
    summary = []
    for m in args.m:
        for n in args.n:
            spec = DomainSpec(m, n, OrderKind.WEAK, cap=10 ** 9)
            t0 = time.perf_counter()
            checked, hits = scan(spec, args.sample, args.seed, not args.all)
            dt = time.perf_counter() - t0
            print(f"{spec.label()}: {checked} profiles, {len(hits)} inefficient ({dt:.1f}s)")
            if hits:
                p, lot, q = hits[0]
                print(serialize_profile(p).rstrip())
                print(f"  rsd       {lot.text()}")
                print(f"  dominated {q.text()}")
            summary.append({"domain": spec.label(), "checked": checked, "inefficient": len(hits),
                            "sampled": args.sample is not None})
    print(json.dumps(summary))


if __name__ == "__main__":
    main()
