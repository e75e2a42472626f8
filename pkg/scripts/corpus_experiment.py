#!/usr/bin/env python3
"""End-to-end corpus experiment: generate, classify, embed, plot.

Builds a seeded four-style chair corpus, computes per-pose deformation
costs, reports classification accuracy against the generator labels, and
writes a 2D MDS scatter colored by style.

Usage:
    python scripts/corpus_experiment.py [--per-style 10] [--seed 2026]
        [--out corpus_embedding.png]
"""

import argparse
import time

from ergofit.analytics import POSE_ORDER, classify, distance_matrix, mds_embed
from ergofit.avatar import Avatar
from ergofit.generator import generate_corpus

STYLE_POSE = {"office": "normal_sitting", "bench": "bench_sitting",
              "beach": "beach_lying", "bar": "bar_sitting"}
COLORS = {"office": "tab:blue", "bench": "tab:orange",
          "beach": "tab:green", "bar": "tab:red"}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--per-style", type=int, default=10)
    ap.add_argument("--seed", type=int, default=2026)
    ap.add_argument("--out", default="corpus_embedding.png")
    args = ap.parse_args()

    corpus = generate_corpus(args.per_style, seed=args.seed)
    avatar = Avatar.default()
    t0 = time.perf_counter()
    result = classify(corpus, avatar, POSE_ORDER)
    elapsed = time.perf_counter() - t0

    style_of = {s.id: s.style_label for s in corpus}
    hits = sum(result.labels[s.id] == STYLE_POSE[s.style_label] for s in corpus)
    print(f"classified {len(corpus)} shapes in {elapsed:.1f}s, "
          f"accuracy {hits}/{len(corpus)} ({hits / len(corpus):.0%})")
    for pose in POSE_ORDER:
        members = result.clusters[pose]
        print(f"  {pose:15s} <- {len(members)} shapes")

    emb = mds_embed(distance_matrix(list(result.cost_vectors)),
                    tuple(v.shape_id for v in result.cost_vectors))
    print(f"embedding stress {emb.stress:.3f}")

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(7, 6))
    for style in COLORS:
        idx = [i for i, sid in enumerate(emb.ids) if style_of[sid] == style]
        ax.scatter(emb.coords[idx, 0], emb.coords[idx, 1],
                   c=COLORS[style], label=style, s=45)
    ax.legend()
    ax.set_title(f"MDS embedding of deformation-cost distances (stress {emb.stress:.3f})")
    ax.set_xlabel("u")
    ax.set_ylabel("v")
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
