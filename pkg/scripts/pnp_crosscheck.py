#!/usr/bin/env python3
"""Compare the eigenray-merge PNP search with the exhaustive leg enumeration.

Random maps on roses of rank 2 and 3 are filtered to expanding primitive
train tracks; both routes must report the same iNPs with the same periods.
"""
import argparse
import random
import sys
import time

from ttkit.graph import rose
from ttkit.graphmap import GraphMap, MapError, transition_matrix
from ttkit.nielsen import find_inps
from ttkit.nielsen_oracle import descriptor_keys, oracle_with_periods
from ttkit.pf import is_primitive, pf_eigen
from ttkit.traintrack import is_train_track, rotationless_power
from ttkit.verdict import Verdict


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=3000)
    ap.add_argument("--max-word", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    compared = with_pnp = inconclusive = mismatches = 0
    t0 = time.time()
    for _ in range(args.trials):
        rank = rng.choice((2, 2, 3))
        letters = "abc"[:rank]
        words = {c: "".join(rng.choice(letters + letters.upper()) for _ in range(rng.randint(1, args.max_word)))
                 for c in letters}
        try:
            g = GraphMap.from_words(rose(rank), words)
        except MapError:
            continue
        m = transition_matrix(g)
        if not is_train_track(g) or not is_primitive(m):
            continue
        pf = pf_eigen(m)
        if pf.lam <= 1.0001:
            continue
        res = find_inps(g, pf=pf)
        if res.status is Verdict.INCONCLUSIVE:
            inconclusive += 1
            continue
        try:
            oracle = oracle_with_periods(g, pf, res.critical, rotationless_power(g))
        except RuntimeError:
            inconclusive += 1
            continue
        compared += 1
        with_pnp += bool(oracle)
        if oracle != descriptor_keys(res):
            mismatches += 1
            print(f"MISMATCH {words}: oracle {oracle} primary {descriptor_keys(res)}")
    print(f"compared {compared} maps ({with_pnp} with PNPs), {inconclusive} skipped as inconclusive, "
          f"{mismatches} mismatches, {time.time() - t0:.1f} s")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
