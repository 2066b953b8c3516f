"""Size of the dual vertex set for every event, direction and assumption set.

The dual feasible region does not depend on the data, so one pass covers
all distributions; the data only choose which vertex is optimal.

    python scripts/dual_vertex_census.py data/p_star.json
"""

import argparse
import json
from collections import Counter

from monobounds.constraints import build_lp, event_functional
from monobounds.lp import Direction, solve
from monobounds.model import ALL_EVENTS, AssumptionSet, parse_data_distribution
from monobounds.polyhedra import dual_optimum, enumerate_dual_vertices


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("data", help="distribution JSON file")
    args = ap.parse_args()
    with open(args.data) as fh:
        P = parse_data_distribution(json.load(fh))

    print(f"{'event':<22}{'a':<4}{'dir':<5}{'vertices':>9}{'optimal':>9}  bound")
    for a in AssumptionSet:
        spec = build_lp(P, a)
        for e in ALL_EVENTS:
            f = event_functional(e)
            for d in Direction:
                verts = enumerate_dual_vertices(spec, f, d)
                best = dual_optimum(verts, d)
                assert best == solve(spec, f, d).value
                hits = Counter(v.objective_value for v in verts)[best]
                print(f"{str(e):<22}{a.value:<4}{d.value:<5}{len(verts):>9}{hits:>9}  {best}")


if __name__ == "__main__":
    main()
