"""HTTP service backing the explorer UI.

Sessions hold a mutable avatar; shape geometry and preset tables are
read-only. Ranking and deformation responses are pure functions of
(collection, session avatar) and are cached per avatar hash, so replaying
a request log reproduces every body byte for byte.
"""

from __future__ import annotations

import json
import threading
from contextlib import asynccontextmanager
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import analytics
from .avatar import (
    BONES,
    JOINTS,
    Avatar,
    AvatarValidationError,
    avatar_from_dict,
    avatar_hash,
    avatar_to_dict,
    default_attributes,
    set_attribute,
)
from .config import DEFAULT_CONFIG
from .shape import Shape, shape_to_dict

POSES = analytics.POSE_ORDER


def _body(payload, status: int = 200, headers: dict | None = None) -> Response:
    return Response(content=json.dumps(payload, sort_keys=True),
                    status_code=status, media_type="application/json", headers=headers)


class Session:
    def __init__(self, session_id: str):
        self.id = session_id
        self.avatar = Avatar.default()
        self.edit_counter = 0
        self.lock = threading.Lock()
        self.cache: dict[tuple, str] = {}   # (avatar_hash, kind, ...) -> body

    @property
    def hash(self) -> str:
        return avatar_hash(self.avatar)

    def apply_edit(self, doc: dict) -> None:
        """Attribute edits, preset selection, or explicit joint positions."""
        if not isinstance(doc, dict):
            raise AvatarValidationError("avatar edit must be an object")
        avatar = self.avatar
        for tag, vals in (doc.get("attributes") or {}).items():
            if not isinstance(vals, dict):
                raise AvatarValidationError(f"attributes['{tag}'] must be an object")
            for attr, value in vals.items():
                if not isinstance(value, (int, float)):
                    raise AvatarValidationError(f"attributes['{tag}'].{attr} must be a number")
                avatar = set_attribute(avatar, tag, attr, float(value), asymmetric=True)
        pose_doc = doc.get("pose")
        if pose_doc:
            if "joint_positions" in pose_doc:
                avatar = avatar_from_dict({"attributes": {
                    t: {"length": a.length, "width": a.width, "thickness": a.thickness}
                    for t, a in avatar.attributes.items()}, "pose": pose_doc})
            elif "name" in pose_doc:
                avatar = avatar.with_pose(pose_doc["name"])
            else:
                raise AvatarValidationError("pose edit needs 'name' or 'joint_positions'")
        old_hash = self.hash
        self.avatar = avatar
        if self.hash != old_hash:
            self.cache.clear()
        self.edit_counter += 1


def create_app(collection: list[Shape], config=DEFAULT_CONFIG,
               snapshot_path: str | None = None) -> FastAPI:
    sessions: dict[str, Session] = {}
    state_lock = threading.Lock()
    counter = {"next": 1}

    @asynccontextmanager
    async def lifespan(_app):
        if snapshot_path and Path(snapshot_path).exists():
            data = json.loads(Path(snapshot_path).read_text())
            counter["next"] = data.get("next", 1)
            for sid, doc in data.get("sessions", {}).items():
                s = Session(sid)
                s.avatar = avatar_from_dict(doc["avatar"])
                s.edit_counter = doc.get("edit_counter", 0)
                sessions[sid] = s
        yield
        if snapshot_path:
            data = {"next": counter["next"],
                    "sessions": {sid: {"avatar": avatar_to_dict(s.avatar),
                                       "edit_counter": s.edit_counter}
                                 for sid, s in sessions.items()}}
            Path(snapshot_path).write_text(json.dumps(data, sort_keys=True))

    app = FastAPI(title="ergofit", docs_url=None, redoc_url=None, lifespan=lifespan)
    # the explorer UI is served separately; this is a local single-user tool
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    shapes = {s.id: s for s in collection}
    shape_docs = {s.id: json.dumps(shape_to_dict(s), sort_keys=True) for s in collection}

    def _not_found(what: str) -> Response:
        return _body({"error": f"unknown {what}"}, status=404)

    def _session(sid: str) -> Session | None:
        return sessions.get(sid)

    def _session_body(s: Session) -> dict:
        return {"session_id": s.id, "edit_counter": s.edit_counter,
                "avatar_hash": s.hash, "avatar": avatar_to_dict(s.avatar),
                "pose_positions": {j: s.avatar.pose.position(j).tolist() for j in JOINTS}}

    @app.exception_handler(Exception)
    async def _on_error(request: Request, exc: Exception):
        return JSONResponse({"error": str(exc)}, status_code=500)

    # -- sessions ----------------------------------------------------------

    @app.post("/v1/sessions")
    def create_session():
        with state_lock:
            sid = f"s{counter['next']}"
            counter["next"] += 1
            sessions[sid] = Session(sid)
        s = sessions[sid]
        return _body(_session_body(s))

    @app.get("/v1/sessions/{sid}")
    def get_session(sid: str):
        s = _session(sid)
        if s is None:
            return _not_found("session")
        return _body(_session_body(s))

    @app.put("/v1/sessions/{sid}/avatar")
    async def put_avatar(sid: str, request: Request):
        s = _session(sid)
        if s is None:
            return _not_found("session")
        try:
            doc = await request.json()
        except Exception:
            return _body({"error": "body must be JSON"}, status=422)
        with s.lock:
            try:
                s.apply_edit(doc)
            except AvatarValidationError as exc:
                return _body({"error": str(exc)}, status=422)
            return _body(_session_body(s))

    # -- shapes ------------------------------------------------------------

    @app.get("/v1/shapes")
    def list_shapes():
        entries = []
        for s in collection:
            box = s.aabb
            entries.append({"id": s.id, "style_label": s.style_label,
                            "components": len(s.components),
                            "aabb": {"min": box.min.tolist(), "max": box.max.tolist()}})
        return _body({"shapes": entries})

    @app.get("/v1/shapes/{shape_id}")
    def get_shape(shape_id: str):
        if shape_id not in shape_docs:
            return _not_found("shape")
        return Response(content=shape_docs[shape_id], media_type="application/json")

    @app.get("/v1/presets")
    def presets():
        attrs = {t: {"length": a.length, "width": a.width, "thickness": a.thickness}
                 for t, a in sorted(default_attributes().items())}
        return _body({"poses": list(POSES), "default_attributes": attrs,
                      "joints": list(JOINTS), "bones": [list(b) for b in BONES]})

    # -- ranking and deformation --------------------------------------------

    @app.get("/v1/sessions/{sid}/ranking")
    def ranking(sid: str, pose: str = "normal_sitting"):
        s = _session(sid)
        if s is None:
            return _not_found("session")
        if pose not in POSES:
            return _body({"error": f"unknown pose '{pose}'"}, status=422)
        key = (s.hash, "ranking", pose)
        cached = s.cache.get(key)
        if cached is not None:
            return Response(content=cached, media_type="application/json",
                            headers={"X-Cache": "hit"})
        entries = analytics.rank(collection, s.avatar, pose, config)
        body = json.dumps({"pose": pose, "avatar_hash": s.hash,
                           "edit_counter": s.edit_counter,
                           "entries": [{"shape_id": sid_, "energy": e} for sid_, e in entries]},
                          sort_keys=True)
        # the counter is echoed for staleness control but must not break
        # byte-identity for an unchanged avatar, so cache keyed on hash only
        s.cache[key] = body
        return Response(content=body, media_type="application/json",
                        headers={"X-Cache": "miss"})

    @app.get("/v1/sessions/{sid}/shapes/{shape_id}/deformed")
    def deformed(sid: str, shape_id: str, pose: str = "normal_sitting"):
        s = _session(sid)
        if s is None:
            return _not_found("session")
        if shape_id not in shapes:
            return _not_found("shape")
        if pose not in POSES:
            return _body({"error": f"unknown pose '{pose}'"}, status=422)
        key = (s.hash, "deformed", pose, shape_id)
        cached = s.cache.get(key)
        if cached is not None:
            return Response(content=cached, media_type="application/json",
                            headers={"X-Cache": "hit"})
        shape = shapes[shape_id]
        deformed_shape, record, groups = analytics.deform_for_pose(shape, s.avatar, pose, config)
        body = json.dumps({
            "pose": pose, "avatar_hash": s.hash,
            "original": shape_to_dict(shape),
            "deformed": shape_to_dict(deformed_shape),
            "report": analytics.deformation_report(shape, deformed_shape, record, groups),
        }, sort_keys=True)
        s.cache[key] = body
        return Response(content=body, media_type="application/json",
                        headers={"X-Cache": "miss"})

    return app
