"""Acceptance suite: one test per release criterion, at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS line per
criterion.
"""

import json
import time

import numpy as np
import pytest
from lsq_oracle import random_instance, solve_oracle

from ergofit import analytics
from ergofit.analytics import (
    POSE_ORDER,
    classify,
    distance_matrix,
    mds_embed,
    rank,
    record_energy,
)
from ergofit.avatar import Avatar
from ergofit.constraints import check_constraint, derive_constraints, groups_to_dict
from ergofit.generator import generate_corpus
from ergofit.reshaper import (
    TransformClass,
    contact_separations,
    fit_contact_transform,
    fit_objective,
    propagate,
    symmetry_mismatches,
)
from ergofit.shape import dumps_shape

STYLE_POSE = {"office": "normal_sitting", "bench": "bench_sitting",
              "beach": "beach_lying", "bar": "bar_sitting"}


def ok(name):
    print(f"\n[ACCEPTANCE] {name}: PASS")


def test_zero_deformation_identity(corpus_runs, corpus40, avatars):
    """A shape already satisfying all constraints comes back unchanged, E = 2."""
    checked = 0
    for style, pose in STYLE_POSE.items():
        shape = next(s for s in corpus40 if s.style_label == style)
        fitted = corpus_runs[(shape.id, pose)][2]   # satisfies everything now
        groups = derive_constraints(avatars[pose], fitted)
        again, record = propagate(fitted, groups)
        assert dumps_shape(again) == dumps_shape(fitted)
        assert all(t.is_identity for t in record.component_transforms.values())
        energy, parts = record_energy(fitted, record)
        assert energy == 2.0
        assert all(p.e == 2.0 for p in parts)
        checked += 1
    assert checked == 4
    ok("zero-deformation identity (output unchanged, E exactly 2)")


FIT_SEEDS = {TransformClass.TRANSLATION: 101,
             TransformClass.TRANSLATION_AXIS_SCALE: 202,
             TransformClass.TRANSLATION_ROTATION_AXIS_SCALE: 303}


@pytest.mark.parametrize("klass", list(FIT_SEEDS))
def test_transform_fit_matches_normal_equations_oracle(klass):
    """1000 randomized instances per class, residual difference <= 1e-9."""
    rng = np.random.default_rng(FIT_SEEDS[klass])
    worst = 0.0
    for _ in range(1000):
        src, dst, center, frame, weights = random_instance(rng, klass)
        fit = fit_contact_transform(src, dst, klass, center, frame=frame, axis_weights=weights)
        oracle = solve_oracle(src, dst, klass, center, frame=frame, axis_weights=weights)
        j_fit = fit_objective(fit, src, dst, klass, center, frame, weights)
        j_oracle = fit_objective(oracle, src, dst, klass, center, frame, weights)
        worst = max(worst, abs(j_fit - j_oracle))
    assert worst <= 1e-9
    ok(f"least-squares optimality vs oracle [{klass.value}] (worst gap {worst:.2e})")


def test_constraint_satisfaction_on_corpus(corpus_runs):
    """Every emitted constraint ends satisfied (<= 1e-6) or declared; conflicts <= 5%."""
    total = 0
    conflicted = 0
    for (sid, pose), (shape, groups, deformed, record) in corpus_runs.items():
        declared = {json.dumps(c["constraint"], sort_keys=True) for c in record.conflicts}
        for g in groups:
            for c in g.constraints:
                total += 1
                res = check_constraint(c, deformed)
                if res.violation > 1e-6:
                    assert json.dumps(c.to_dict(), sort_keys=True) in declared, (sid, pose, c.kind)
                    conflicted += 1
    assert conflicted <= 0.05 * total
    ok(f"constraint satisfaction ({total - conflicted}/{total} satisfied, "
       f"{conflicted} declared conflicts)")


def test_structure_preservation_on_corpus(corpus_runs):
    """Contact separation <= 2 epsilon and symmetry mirror-match, 100% of edges."""
    contact_edges = 0
    symmetry_edges = 0
    for (sid, pose), (shape, groups, deformed, record) in corpus_runs.items():
        eps = shape.default_epsilon()
        seps = contact_separations(shape, record)
        contact_edges += len(seps)
        assert max(seps.values()) <= 2 * eps, (sid, pose)
        matches = symmetry_mismatches(shape, deformed)
        symmetry_edges += len(matches)
        assert all(matches.values()), (sid, pose)
    ok(f"structure preservation (100% of {contact_edges} contact and "
       f"{symmetry_edges} symmetry edge checks)")


def test_classification_accuracy(corpus40, avatars):
    """>= 90% of the 40-shape corpus labeled with its generator style, < 60 s."""
    t0 = time.perf_counter()
    result = classify(corpus40, avatars["normal_sitting"], POSE_ORDER)
    elapsed = time.perf_counter() - t0
    hits = sum(1 for s in corpus40 if result.labels[s.id] == STYLE_POSE[s.style_label])
    accuracy = hits / len(corpus40)
    assert accuracy >= 0.90
    assert elapsed < 60.0
    ok(f"classification ({hits}/{len(corpus40)} = {accuracy:.0%} in {elapsed:.1f}s)")


def test_timing_45_chairs_under_two_seconds():
    """Deform and rank 45 chairs for one pose in under 2 s (cold per-shape work)."""
    collection = generate_corpus(12, seed=777)[:45]
    assert len(collection) == 45
    avatar = Avatar.default("normal_sitting")
    rank(collection[:1], avatar, "normal_sitting")  # warm numpy/solver paths
    t0 = time.perf_counter()
    entries = rank(collection, avatar, "normal_sitting")
    elapsed = time.perf_counter() - t0
    assert len(entries) == 45
    assert elapsed < 2.0
    ok(f"timing (45 chairs deformed and ranked in {elapsed:.2f}s)")


def test_ranking_sanity_office_vs_bench(corpus40, corpus_vectors, avatars):
    """Office chairs prefer normal sitting; benches outrank offices for benches."""
    by_id = {v.shape_id: v for v in corpus_vectors}
    i_norm = POSE_ORDER.index("normal_sitting")
    i_bench = POSE_ORDER.index("bench_sitting")
    offices = [s for s in corpus40 if s.style_label == "office"]
    benches = [s for s in corpus40 if s.style_label == "bench"]
    for o in offices:
        assert by_id[o.id].costs[i_norm] < by_id[o.id].costs[i_bench]
    ranking = rank(offices + benches, avatars["bench_sitting"], "bench_sitting")
    position = {sid: i for i, (sid, _) in enumerate(ranking)}
    assert max(position[b.id] for b in benches) < min(position[o.id] for o in offices)
    ok("ranking sanity (office cheaper in normal pose; benches above offices)")


def test_mds_fidelity_and_style_separability(corpus40, corpus_vectors):
    """Planar distances reproduced to 1e-6; styles linearly separable >= 90%."""
    rng = np.random.default_rng(5)
    pts = rng.normal(size=(15, 2))
    d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    emb = mds_embed(d)
    got = np.linalg.norm(emb.coords[:, None, :] - emb.coords[None, :, :], axis=2)
    assert np.max(np.abs(got - d)) <= 1e-6
    assert emb.stress >= 0.0

    dm = distance_matrix(list(corpus_vectors))
    corpus_emb = mds_embed(dm, tuple(v.shape_id for v in corpus_vectors))
    style_of = {s.id: s.style_label for s in corpus40}
    labels = [style_of[sid] for sid in corpus_emb.ids]
    from sklearn.svm import LinearSVC
    clf = LinearSVC(C=100.0, max_iter=50000).fit(corpus_emb.coords, labels)
    accuracy = clf.score(corpus_emb.coords, labels)
    assert accuracy >= 0.90
    ok(f"MDS fidelity (planar 1e-6; style separability {accuracy:.0%}, "
       f"stress {corpus_emb.stress:.3f})")


def _full_pipeline(seed: int) -> bytes:
    """generate -> constraints -> propagate -> rank -> embed, serialized."""
    collection = generate_corpus(3, seed=seed)
    avatar = Avatar.default("normal_sitting")
    blob = {"shapes": [dumps_shape(s) for s in collection]}
    vectors = []
    for shape in collection:
        per_pose = []
        for pose in POSE_ORDER:
            posed = avatar.with_pose(pose)
            groups = derive_constraints(posed, shape)
            deformed, record = propagate(shape, groups)
            energy, _ = record_energy(shape, record)
            per_pose.append(energy)
            blob.setdefault("constraints", []).append(groups_to_dict(groups))
            blob.setdefault("deformed", []).append(dumps_shape(deformed))
        vectors.append(analytics.CostVector(shape.id, tuple(POSE_ORDER), tuple(per_pose)))
    blob["rank"] = rank(collection, avatar, "normal_sitting")
    emb = mds_embed(distance_matrix(vectors), tuple(v.shape_id for v in vectors))
    blob["embedding"] = {"ids": list(emb.ids), "coords": emb.coords.tolist(),
                         "stress": emb.stress}
    return json.dumps(blob, sort_keys=True).encode()


def test_full_pipeline_deterministic():
    """Two runs with one seed produce byte-identical artifacts end to end."""
    a = _full_pipeline(31415)
    b = _full_pipeline(31415)
    assert a == b
    ok("determinism (full pipeline byte-identical across runs)")
