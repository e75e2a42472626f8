// Explorer wiring: session bootstrap, debounced avatar edits, live re-ranking
// with stale-response discarding, and the original/deformed overlay.

import { createApiClient } from './api.js';
import { rateLimitedTrailing } from './debounce.js';
import { dragJoint } from './skeleton.js';
import { ResponseGate } from './staleness.js';
import { createControls } from './controls.js';
import { createGallery } from './gallery.js';
import { createViewer } from './viewer.js';
import type { AvatarEdit, Presets, SessionInfo, Vec3 } from './types.js';

const API_BASE =
  new URLSearchParams(location.search).get('api') ?? 'http://127.0.0.1:8000';
const EDIT_MIN_INTERVAL_MS = 100; // at most 10 avatar updates per second

async function boot() {
  const api = createApiClient(API_BASE);
  const viewer = createViewer(document.getElementById('top-panel')!);
  const gallery = createGallery(document.getElementById('bottom-panel')!);
  const controls = createControls(document.getElementById('controls')!);
  const poseLabel = document.getElementById('pose-label')!;

  const gate = new ResponseGate();
  let session: SessionInfo;
  let presets: Presets;
  let pose = 'normal_sitting';
  let selectedShape: string | null = null;
  let livePositions: Record<string, Vec3> | null = null; // mid-drag preview

  try {
    [session, presets] = await Promise.all([api.createSession(), api.getPresets()]);
  } catch (err) {
    controls.showError(`service unreachable at ${API_BASE}: ${String(err)}`);
    throw err;
  }

  const drawAvatar = () => {
    viewer.showAvatar(livePositions ?? session.pose_positions, presets.bones, session.avatar.attributes);
  };

  const refreshOverlay = async () => {
    if (!selectedShape) {
      viewer.showShapes(null, null);
      return;
    }
    const ticket = gate.ticket('overlay');
    const body = await api.getDeformed(session.session_id, selectedShape, pose);
    if (!gate.admit('overlay', ticket)) return; // a newer overlay is in flight
    viewer.showShapes(body.original, body.deformed);
  };

  const refreshRanking = async () => {
    const ticket = gate.ticket('ranking');
    const body = await api.getRanking(session.session_id, pose);
    if (!gate.admit('ranking', ticket)) return; // stale: a newer edit exists
    if (selectedShape === null || !body.entries.some((e) => e.shape_id === selectedShape)) {
      selectedShape = body.entries[0]?.shape_id ?? null;
    }
    gallery.render(body.entries, selectedShape);
    await refreshOverlay();
  };

  const applySession = (s: SessionInfo) => {
    session = s;
    livePositions = null;
    controls.showError(null);
    drawAvatar();
    void refreshRanking();
  };

  const pushEdit = rateLimitedTrailing<AvatarEdit>((edit) => {
    api
      .putAvatar(session.session_id, edit)
      .then(applySession)
      .catch((err) => {
        // revert to the last accepted state and surface the invariant
        controls.showError(String(err.message ?? err));
        livePositions = null;
        drawAvatar();
      });
  }, EDIT_MIN_INTERVAL_MS);

  controls.onEdit((edit) => {
    if (edit.pose && 'name' in edit.pose) pose = poseOf(edit.pose.name);
    pushEdit(edit);
  });

  const poseOf = (name: string) => {
    poseLabel.textContent = name.replace('_', ' ');
    return name;
  };

  gallery.onSelect((shapeId) => {
    selectedShape = shapeId;
    void refreshRanking();
  });

  viewer.onJointDrag((ev) => {
    const base = livePositions ?? session.pose_positions;
    if (!ev.done) {
      livePositions = dragJoint(
        base,
        presets.bones,
        'chest',
        ev.joint,
        ev.screenDelta,
        ev.camera,
        session.avatar.attributes,
      );
      drawAvatar();
      return;
    }
    if (livePositions) {
      pushEdit({ pose: { joint_positions: livePositions } });
      pushEdit.flush();
    }
  });

  controls.render(presets, session.avatar.attributes);
  poseOf(pose);
  drawAvatar();
  await refreshRanking();
}

void boot();
