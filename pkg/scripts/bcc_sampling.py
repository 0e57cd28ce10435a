#!/usr/bin/env python3
"""Sample cancellations against the bounded-cancellation bound.

For each map, random tight concatenations ``alpha . beta`` are drawn and the
PF length lost when tightening ``g(alpha) g(beta)`` is compared with the bound.
"""
import argparse
import random
import sys

from ttkit.graph import tighten
from ttkit.graphmap import power, transition_matrix
from ttkit.nielsen import bcc_bound, cancellation
from ttkit.pf import pf_eigen
from ttkit.scenarios import fibonacci, psi


def sample(g, rng, samples, max_len):
    pf = pf_eigen(transition_matrix(g))
    bound = bcc_bound(g, pf).value
    gr = g.graph
    worst = 0.0
    drawn = 0
    while drawn < samples:
        alpha = tighten(gr, [rng.randrange(gr.num_half_edges) for _ in range(rng.randint(1, max_len))])
        beta = tighten(gr, [rng.randrange(gr.num_half_edges) for _ in range(rng.randint(1, max_len))])
        if not alpha or not beta or gr.reverse[alpha[-1]] == beta[0]:
            continue
        worst = max(worst, cancellation(g, pf.lengths, alpha, beta))
        drawn += 1
    return bound, worst


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=5000)
    ap.add_argument("--max-len", type=int, default=12)
    ap.add_argument("--powers", type=int, nargs="*", default=[1, 2, 3, 6, 13])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    violated = False
    print(f"{'map':>12} {'bound':>10} {'worst':>10} {'ratio':>7}")
    for base in (psi(), fibonacci()):
        for k in args.powers:
            g = power(base, k)
            bound, worst = sample(g, rng, args.samples, args.max_len)
            violated |= worst > bound + 1e-9
            print(f"{g.name:>12} {bound:10.4f} {worst:10.4f} {worst / bound:7.3f}")
    return 1 if violated else 0


if __name__ == "__main__":
    sys.exit(main())
