#!/usr/bin/env python3
"""Support/consensus metrics over bundled synthetic vote sets.

Builds four synthetic conditions whose policy counts and majority tallies
match recorded classroom deliberations, prints the per-condition support
percentages, and shows per-policy split indexes for a few reference tallies.

Usage: python scripts/consensus_metrics_demo.py
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from agorum.analytics import PolicyVoteCount, gini, majority_supported, percent_half_up, weighted_gini

CONDITIONS = [
    # (name, participants, total policies, majority-supported policies)
    ("class 1 / policy-only", 22, 31, 7),
    ("class 1 / case-grounded", 20, 19, 14),
    ("class 2 / policy-only", 14, 19, 7),
    ("class 2 / case-grounded", 12, 11, 8),
]

REFERENCE_TALLIES = [(16, 0), (18, 1), (4, 10), (4, 13), (5, 5)]


def synthesize(participants: int, total: int, supported: int) -> list[PolicyVoteCount]:
    margin = participants // 2 + 2
    counts = []
    for index in range(total):
        if index < supported:
            counts.append(PolicyVoteCount(f"p{index:02d}", margin, 0))
        else:
            counts.append(PolicyVoteCount(f"p{index:02d}", 1, 1))
    return counts


def main() -> int:
    print(f"{'condition':<26} {'n':>3} {'policies':>9} {'majority':>9} {'pct':>5} {'w-split':>8}")
    for name, participants, total, supported in CONDITIONS:
        counts = synthesize(participants, total, supported)
        got_supported = sum(1 for c in counts if majority_supported(c, participants))
        assert got_supported == supported
        pct = percent_half_up(got_supported, total)
        print(f"{name:<26} {participants:>3} {total:>9} {got_supported:>9} {pct:>4}% {weighted_gini(counts):>8.4f}")

    print()
    print("per-policy split index for reference tallies (0 = unanimous, 0.5 = even split):")
    for up, down in REFERENCE_TALLIES:
        print(f"  {up:>2} up / {down:>2} down -> {gini(up, down):.6f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
