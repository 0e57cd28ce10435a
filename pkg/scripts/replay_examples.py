#!/usr/bin/env python3
"""Replay the three worked examples and print every check."""
import argparse
import sys

from ttkit.scenarios import SCENARIOS


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("numbers", nargs="*", type=int, default=sorted(SCENARIOS))
    args = ap.parse_args()
    failed = 0
    for n in args.numbers:
        print(f"example {n}")
        for check in SCENARIOS[n]():
            failed += not check.ok
            print(f"  {'PASS' if check.ok else 'FAIL'} {check.name}" + (f"  [{check.detail}]" if check.detail else ""))
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
