"""Replay every script under proofs/ and print a one-line verdict per file.

    python3 scripts/replay_all.py [--verbose] [--budget N]
"""
import argparse
import sys
from pathlib import Path

from sdsaudit.replay import replay_file

ROOT = Path(__file__).resolve().parent.parent


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--verbose", action="store_true")
    ap.add_argument("--budget", type=int, default=10_000_000)
    args = ap.parse_args(argv)
    ok = True
    for path in sorted((ROOT / "proofs").glob("*.json")):
        res = replay_file(path, args.budget)
        ok &= res.ok
        modes = ", ".join(f"{k}={v}" for k, v in res.results.items())
        print(f"{path.name:22s} {'ok ' if res.ok else 'BAD'} expected {res.expected}: {modes} ({res.seconds:.1f}s)")
        if args.verbose:
            print("\n".join("    " + line for line in res.lines))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
