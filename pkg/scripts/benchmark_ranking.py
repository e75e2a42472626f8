#!/usr/bin/env python3
"""Wall-clock benchmark: deform and rank a 45-chair collection per pose.

Usage:
    python scripts/benchmark_ranking.py [--count 45] [--seed 777] [--repeat 3]
"""

import argparse
import time

from ergofit.analytics import POSE_ORDER, rank
from ergofit.avatar import Avatar
from ergofit.generator import generate_corpus


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=45)
    ap.add_argument("--seed", type=int, default=777)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    per_style = (args.count + 3) // 4
    collection = generate_corpus(per_style, seed=args.seed)[: args.count]
    print(f"collection: {len(collection)} shapes, "
          f"{sum(len(s.components) for s in collection)} components")

    for pose in POSE_ORDER:
        avatar = Avatar.default(pose)
        rank(collection[:1], avatar, pose)  # warm-up
        best = float("inf")
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            entries = rank(collection, avatar, pose)
            best = min(best, time.perf_counter() - t0)
        top = entries[0]
        print(f"{pose:15s} best of {args.repeat}: {best * 1000:7.1f} ms  "
              f"(top: {top[0]}, E={top[1]:.3f})")


if __name__ == "__main__":
    main()
