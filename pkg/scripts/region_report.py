#!/usr/bin/env python3
"""Print a full analysis of one channel: link regimes, role assignments,
region bounds, vertices, and which outer-bound constraints are redundant.

The vertex list is what an external plotting tool needs to draw the region.
"""
import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from gicmix import (  # noqa: E402
    capacity_region,
    classify_link,
    constraint_is_redundant,
    enumerate_vertices,
    find_mixed_assignments,
    outer_bound,
    parse_config,
    verify_reduction,
)
from gicmix.cli import figure2_config  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", help="channel JSON file (default: built-in example)")
    args = ap.parse_args()

    cfg = parse_config(Path(args.config).read_text()) if args.config else figure2_config()

    print("links:")
    for tx in (1, 2, 3):
        for rx in (1, 2, 3):
            if tx == rx:
                continue
            other = next(u for u in (1, 2, 3) if u not in (tx, rx))
            regime = classify_link(cfg, tx, rx, other)
            print(f"  {tx} -> {rx}: {regime.strength.value:12s} margin {regime.margin:+.4f}")

    assignments = find_mixed_assignments(cfg)
    print(f"role assignments: {[(a.very_strong, a.strong) for a in assignments] or 'none'}")

    poly = outer_bound(cfg)
    print(f"outer bound ({len(poly)} constraints):")
    for k, hs in enumerate(poly.halfspaces):
        mark = "redundant" if constraint_is_redundant(poly, k) else "needed"
        print(f"  {hs.tag:24s} <= {hs.b:.6f}  [{mark}]")

    if assignments:
        asg = assignments[0]
        cap = capacity_region(cfg, asg)
        verts = enumerate_vertices(cap)
        print(f"capacity region vertices ({len(verts)}):")
        for v in verts:
            print(f"  ({v[0]:.6f}, {v[1]:.6f}, {v[2]:.6f})")
        report = verify_reduction(cfg, asg)
        print(f"reduction comparisons all hold: {report.all_hold}")
        for row in report.receivers:
            print(f"  receiver {row.receiver}: first decodes {row.first_decoded}, "
                  f"pair-sum margin {row.sum_bound.margin:+.6f} bits")


if __name__ == "__main__":
    main()
