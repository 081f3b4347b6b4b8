"""How many restarts does the alignment search need?

Samples random (gold, predicted) graph pairs small enough for the exact
oracle, then reports, per restart budget, how often hill climbing finds
the true optimum and how far short it falls when it misses.  The search
can never exceed the oracle; any such pair would be a bug and aborts.

Usage:
    python scripts/oracle_agreement.py --pairs 500 --max-vars 6
"""

import argparse
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

import graphgen  # noqa: E402  (test helper, imported after path setup)

from amrbench.analysis import extract_triples  # noqa: E402
from amrbench.smatch import brute_force_score, hill_climb  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=500)
    ap.add_argument("--max-vars", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument(
        "--restarts", type=int, nargs="+", default=[0, 1, 2, 4, 8],
        help="restart budgets to compare",
    )
    args = ap.parse_args()

    pairs = []
    for i in range(args.pairs):
        rng = random.Random(args.seed * 1_000_003 + i)
        gold, pred = graphgen.random_pair(rng, max_vars=args.max_vars)
        pairs.append((extract_triples(gold), extract_triples(pred)))

    t0 = time.perf_counter()
    exact = [brute_force_score(g, p).matched for g, p in pairs]
    oracle_time = time.perf_counter() - t0
    print(f"{args.pairs} pairs, exact oracle in {oracle_time:.2f}s")
    print(f"{'restarts':>8}  {'agree':>7}  {'rate':>6}  {'max gap':>7}  {'time':>6}")

    for budget in args.restarts:
        t0 = time.perf_counter()
        agree = 0
        worst_gap = 0
        for i, (g, p) in enumerate(pairs):
            got = hill_climb(g, p, restarts=budget, seed=i).matched
            if got > exact[i]:
                print(f"pair {i}: search {got} > oracle {exact[i]}", file=sys.stderr)
                return 1
            agree += got == exact[i]
            worst_gap = max(worst_gap, exact[i] - got)
        dt = time.perf_counter() - t0
        print(
            f"{budget:>8}  {agree:>4}/{args.pairs}  {agree / args.pairs:>6.1%}"
            f"  {worst_gap:>7}  {dt:>5.2f}s"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
