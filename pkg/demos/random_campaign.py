"""Seeded campaign: draw random sites and prestacks, and count how often the
proper-stack axioms hold, how often the result is a stack, and whether any
instance is proper without being a stack.

    python demos/random_campaign.py --seeds 200 --objects 4
"""

import argparse
import collections
import time

from finstack.gallery import Bounds, random_prestack, random_site
from finstack.proper import verify_theorem


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--seeds", type=int, default=200)
    parser.add_argument("--objects", type=int, default=3)
    parser.add_argument("--labels", type=int, default=2)
    parser.add_argument("--arbitrary-fibers", action="store_true")
    args = parser.parse_args()
    bounds = Bounds(objects=args.objects, labels=args.labels, lattice_fibers=not args.arbitrary_fibers)

    start = time.perf_counter()
    tally = collections.Counter()
    failing = collections.Counter()
    counterexamples = []
    for seed in range(args.seeds):
        site = random_site(seed, bounds)
        s = random_prestack(seed, site, bounds)
        report = verify_theorem(s, site)
        if report.proper:
            tally["proper"] += 1
            if report.theorem.falsified:
                counterexamples.append(seed)
        else:
            failing.update(report.failing())
    print(f"{args.seeds} instances in {time.perf_counter() - start:.1f}s")
    print(f"proper: {tally['proper']}, failing axioms: {dict(sorted(failing.items()))}")
    print(f"proper but not a stack: {counterexamples or 'none'}")


if __name__ == "__main__":
    main()
