"""How often monotonicity tightens some bound, by grid coarseness.

Coarse grids put mass exactly on the boundary (zero cells, triple sums equal
to one), which is where the verdict flips.

    python scripts/content_frequency.py --count 400
"""

import argparse

from monobounds.analysis import identifying_content, sample_consistent_P
from monobounds.model import AssumptionSet


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=400)
    args = ap.parse_args()

    print(f"{'denominator':>11}  {'content':>8}  {'two-sided':>9}")
    for den in (2, 3, 4, 6, 10, 20, 50, 100, 1000):
        content = two_sided = 0
        for k in range(args.count):
            P, _ = sample_consistent_P(args.seed * 1_000_003 + k, den, AssumptionSet.EM)
            rep = identifying_content(P)
            content += rep.verdict
            two_sided += rep.two_sided_noncompliance
        print(f"{den:>11}  {content / args.count:>8.1%}  {two_sided / args.count:>9.1%}")


if __name__ == "__main__":
    main()
