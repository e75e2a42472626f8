"""Command-line entry points: generate, deform, rank, classify, embed,
coretrieve, serve.

Exit codes: 0 on success, 1 on runtime errors (with a diagnostic on
stderr), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

from . import analytics
from .avatar import Avatar, avatar_from_dict
from .config import DEFAULT_CONFIG
from .constraints import derive_constraints, groups_to_dict
from .generator import STYLES, generate_corpus
from .reshaper import propagate
from .shape import load_collection, load_shape, save_shape


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ergofit",
                                     description="Ergonomics-driven shape reshaping and ranking")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a procedural shape corpus")
    p.add_argument("--style", choices=STYLES + ("all",), default="all")
    p.add_argument("--count", type=int, default=10, help="number of shapes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("deform", help="deform one shape to fit an avatar pose")
    p.add_argument("--shape", required=True)
    p.add_argument("--pose", default="normal_sitting")
    p.add_argument("--avatar", help="avatar document (JSON)")
    p.add_argument("--out", help="deformed shape file")
    p.add_argument("--report", help="report file (defaults next to --out)")
    p.add_argument("--dump-constraints", action="store_true",
                   help="print the derived constraint groups and exit")
    p.add_argument("--epsilon", type=float, help="contact epsilon override (meters)")

    p = sub.add_parser("rank", help="rank a collection for one pose")
    p.add_argument("--collection", required=True)
    p.add_argument("--pose", default="normal_sitting")
    p.add_argument("--avatar")
    p.add_argument("--out", help="CSV output (stdout when omitted)")
    p.add_argument("--epsilon", type=float)

    p = sub.add_parser("classify", help="label shapes by their cheapest pose")
    p.add_argument("--collection", required=True)
    p.add_argument("--poses", default=",".join(analytics.POSE_ORDER))
    p.add_argument("--avatar")
    p.add_argument("--out")
    p.add_argument("--epsilon", type=float)

    p = sub.add_parser("embed", help="2D MDS embedding of the collection")
    p.add_argument("--collection", required=True)
    p.add_argument("--poses", default=",".join(analytics.POSE_ORDER))
    p.add_argument("--metric", choices=("euclidean", "min-component"), default="euclidean")
    p.add_argument("--avatar")
    p.add_argument("--out")
    p.add_argument("--epsilon", type=float)

    p = sub.add_parser("coretrieve", help="co-retrieve a chair, table and monitor")
    p.add_argument("--chairs", required=True)
    p.add_argument("--tables")
    p.add_argument("--monitors")
    p.add_argument("--pose", default="normal_sitting")
    p.add_argument("--avatar")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--collection", required=True)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--snapshot", help="session snapshot file")
    return parser


def _load_avatar(path: str | None, pose: str | None = None) -> Avatar:
    if path:
        avatar = avatar_from_dict(json.loads(Path(path).read_text()))
    else:
        avatar = Avatar.default()
    if pose and avatar.pose.name != pose:
        avatar = avatar.with_pose(pose)
    return avatar


def _write_csv(path: str | None, header: list[str], rows: list[list]):
    if path:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows(rows)
    else:
        w = csv.writer(sys.stdout)
        w.writerow(header)
        w.writerows(rows)


def _cmd_generate(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.style == "all":
        per = math.ceil(args.count / len(STYLES))
        shapes = generate_corpus(per, seed=args.seed)[: args.count]
    else:
        shapes = generate_corpus(args.count, seed=args.seed, styles=(args.style,))
    for i, shape in enumerate(shapes):
        save_shape(shape, out / f"{i:03d}-{shape.id}.json")
    print(f"wrote {len(shapes)} shapes to {out}")
    return 0


def _cmd_deform(args) -> int:
    shape = load_shape(args.shape, epsilon=args.epsilon)
    avatar = _load_avatar(args.avatar, args.pose)
    groups = derive_constraints(avatar, shape, DEFAULT_CONFIG.constraints)
    if args.dump_constraints:
        json.dump(groups_to_dict(groups), sys.stdout, indent=2, sort_keys=True)
        print()
        return 0
    deformed, record = propagate(shape, groups, DEFAULT_CONFIG)
    report = analytics.deformation_report(shape, deformed, record, groups)
    if args.out:
        save_shape(deformed, args.out)
        report_path = args.report or str(Path(args.out).with_suffix(".report.json"))
        Path(report_path).write_text(json.dumps(report, indent=2, sort_keys=True))
        print(f"wrote {args.out} and {report_path}")
    else:
        json.dump(report, sys.stdout, indent=2, sort_keys=True)
        print()
    return 0


def _cmd_rank(args) -> int:
    collection = load_collection(args.collection, epsilon=args.epsilon)
    avatar = _load_avatar(args.avatar, args.pose)
    ranking = analytics.rank(collection, avatar, args.pose)
    rows = [[i + 1, sid, repr(e)] for i, (sid, e) in enumerate(ranking)]
    _write_csv(args.out, ["rank", "shape_id", "energy"], rows)
    return 0


def _cmd_classify(args) -> int:
    collection = load_collection(args.collection, epsilon=args.epsilon)
    poses = tuple(args.poses.split(","))
    avatar = _load_avatar(args.avatar)
    result = analytics.classify(collection, avatar, poses)
    rows = []
    for v in result.cost_vectors:
        rows.append([v.shape_id] + [repr(c) for c in v.costs] + [result.labels[v.shape_id]])
    _write_csv(args.out, ["shape_id"] + [f"cost_{p}" for p in poses] + ["label"], rows)
    return 0


def _cmd_embed(args) -> int:
    collection = load_collection(args.collection, epsilon=args.epsilon)
    poses = tuple(args.poses.split(","))
    avatar = _load_avatar(args.avatar)
    result = analytics.classify(collection, avatar, poses)
    vectors = list(result.cost_vectors)
    d = analytics.distance_matrix(vectors, args.metric,
                                  DEFAULT_CONFIG.analytics.argmin_penalty)
    emb = analytics.mds_embed(d, tuple(v.shape_id for v in vectors))
    rows = []
    for i, v in enumerate(vectors):
        rows.append([v.shape_id] + [repr(c) for c in v.costs]
                    + [result.labels[v.shape_id], repr(float(emb.coords[i, 0])),
                       repr(float(emb.coords[i, 1])), repr(emb.stress)])
    _write_csv(args.out, ["shape_id"] + [f"cost_{p}" for p in poses]
               + ["label", "u", "v", "stress"], rows)
    return 0


def _cmd_coretrieve(args) -> int:
    avatar = _load_avatar(args.avatar, args.pose)
    collections = [("chair", load_collection(args.chairs))]
    if args.tables:
        collections.append(("table", load_collection(args.tables)))
    if args.monitors:
        collections.append(("monitor", load_collection(args.monitors)))
    results = analytics.coretrieve(avatar, args.pose, collections)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    summary = []
    for r in results:
        save_shape(r.deformed, out / f"{r.category}-{r.shape_id}.json")
        summary.append({"category": r.category, "shape_id": r.shape_id,
                        "energy": r.energy, "placement": r.placement.tolist()})
    (out / "coretrieve.json").write_text(json.dumps(summary, indent=2, sort_keys=True))
    print(f"wrote {len(results)} placed objects to {out}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    collection = load_collection(args.collection)
    port = int(os.environ.get("ERGOFIT_PORT", args.port))
    app = create_app(collection, snapshot_path=args.snapshot)
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "deform": _cmd_deform,
    "rank": _cmd_rank,
    "classify": _cmd_classify,
    "embed": _cmd_embed,
    "coretrieve": _cmd_coretrieve,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except KeyboardInterrupt:
        return 1
    except Exception as exc:
        print(f"ergofit {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
