"""Closed form vs LP over a seeded stream of EM-consistent distributions.

    python scripts/verify_sweep.py --seed 1 --count 2000 --max-denominator 1000
"""

import argparse
import time

from monobounds.analysis import identifying_content, lp_bounds_table, sample_stream
from monobounds.closed_form import bounds_table
from monobounds.model import ALL_EVENTS, AssumptionSet


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--max-denominator", type=int, default=1000)
    args = ap.parse_args()

    start = time.perf_counter()
    mismatches = verdict_errors = with_content = 0
    for P, _ in sample_stream(args.seed, args.count, args.max_denominator):
        cf, lp = bounds_table(P), lp_bounds_table(P)
        mismatches += sum(cf[e, a] != lp[e, a] for e in ALL_EVENTS for a in AssumptionSet)
        verdict = identifying_content(P).verdict
        with_content += verdict
        verdict_errors += verdict != lp.content
    elapsed = time.perf_counter() - start
    print(f"samples            {args.count}")
    print(f"interval mismatches {mismatches} (of {args.count * 32})")
    print(f"verdict mismatches  {verdict_errors}")
    print(f"with content        {with_content} ({with_content / args.count:.1%})")
    print(f"time                {elapsed:.1f}s ({1000 * elapsed / args.count:.1f} ms/sample)")


if __name__ == "__main__":
    main()
