// Top panel: avatar plus the selected shape's original (blue) and deformed
// (red) geometry in one orbitable scene; joint spheres are draggable.

import * as THREE from 'three';
import { avatarObject, shapeToObject } from './geometry.js';
import type { CameraBasis } from './skeleton.js';
import type { ShapeDoc, Vec3 } from './types.js';

export const ORIGINAL_COLOR = 0x2c7fb8;
export const DEFORMED_COLOR = 0xd7301f;

export interface JointDragEvent {
  joint: string;
  screenDelta: [number, number];
  camera: CameraBasis;
  done: boolean;
}

export interface Viewer {
  showShapes(original: ShapeDoc | null, deformed: ShapeDoc | null): void;
  showAvatar(
    positions: Record<string, Vec3>,
    bones: [string, string, string][],
    attributes: Record<string, { length: number; width: number; thickness: number }>,
  ): void;
  onJointDrag(cb: (ev: JointDragEvent) => void): void;
  cameraBasis(): CameraBasis;
  dispose(): void;
}

export function createViewer(container: HTMLElement): Viewer {
  const renderer = new THREE.WebGLRenderer({ antialias: true });
  renderer.setPixelRatio(Math.min(window.devicePixelRatio, 2));
  renderer.setSize(container.clientWidth, container.clientHeight);
  renderer.setClearColor(0xf4f4f0);
  container.appendChild(renderer.domElement);

  const scene = new THREE.Scene();
  const camera = new THREE.PerspectiveCamera(
    45,
    container.clientWidth / Math.max(1, container.clientHeight),
    0.01,
    100,
  );
  const target = new THREE.Vector3(0, 0.5, 0);
  let azimuth = 0.5;
  let elevation = 0.25;
  let radius = 2.6;

  const placeCamera = () => {
    camera.position.set(
      target.x + radius * Math.cos(elevation) * Math.sin(azimuth),
      target.y + radius * Math.sin(elevation),
      target.z + radius * Math.cos(elevation) * Math.cos(azimuth),
    );
    camera.lookAt(target);
  };
  placeCamera();

  scene.add(new THREE.HemisphereLight(0xffffff, 0x888899, 0.9));
  const sun = new THREE.DirectionalLight(0xffffff, 0.8);
  sun.position.set(2, 4, 3);
  scene.add(sun);
  scene.add(new THREE.GridHelper(4, 16, 0xcccccc, 0xe5e5e0));

  let originalGroup: THREE.Group | null = null;
  let deformedGroup: THREE.Group | null = null;
  let avatarGroup: THREE.Group | null = null;
  let jointMeshes = new Map<string, THREE.Mesh>();
  let dragCb: (ev: JointDragEvent) => void = () => undefined;

  const raycaster = new THREE.Raycaster();
  let draggingJoint: string | null = null;
  let orbiting = false;
  let last: [number, number] = [0, 0];

  const basis = (): CameraBasis => {
    const forward = target.clone().sub(camera.position).normalize();
    const right = forward.clone().cross(new THREE.Vector3(0, 1, 0)).normalize();
    const up = right.clone().cross(forward);
    return {
      right: right.toArray() as Vec3,
      up: up.toArray() as Vec3,
      forward: forward.toArray() as Vec3,
    };
  };

  // ~world units per pixel at the target depth, so drags track the cursor
  const worldPerPixel = () =>
    (2 * radius * Math.tan((camera.fov * Math.PI) / 360)) / renderer.domElement.clientHeight;

  const pointerNdc = (ev: PointerEvent): THREE.Vector2 => {
    const rect = renderer.domElement.getBoundingClientRect();
    return new THREE.Vector2(
      ((ev.clientX - rect.left) / rect.width) * 2 - 1,
      -((ev.clientY - rect.top) / rect.height) * 2 + 1,
    );
  };

  renderer.domElement.addEventListener('pointerdown', (ev) => {
    raycaster.setFromCamera(pointerNdc(ev), camera);
    const hits = raycaster.intersectObjects([...jointMeshes.values()]);
    if (hits.length) {
      draggingJoint = hits[0].object.userData.joint as string;
    } else {
      orbiting = true;
    }
    last = [ev.clientX, ev.clientY];
    renderer.domElement.setPointerCapture(ev.pointerId);
  });

  renderer.domElement.addEventListener('pointermove', (ev) => {
    const dx = ev.clientX - last[0];
    const dy = ev.clientY - last[1];
    if (draggingJoint) {
      last = [ev.clientX, ev.clientY];
      const k = worldPerPixel();
      dragCb({ joint: draggingJoint, screenDelta: [dx * k, -dy * k], camera: basis(), done: false });
    } else if (orbiting) {
      last = [ev.clientX, ev.clientY];
      azimuth -= dx * 0.008;
      elevation = Math.min(1.4, Math.max(-0.2, elevation + dy * 0.006));
      placeCamera();
    }
  });

  const endDrag = (ev: PointerEvent) => {
    if (draggingJoint) {
      dragCb({ joint: draggingJoint, screenDelta: [0, 0], camera: basis(), done: true });
    }
    draggingJoint = null;
    orbiting = false;
    renderer.domElement.releasePointerCapture?.(ev.pointerId);
  };
  renderer.domElement.addEventListener('pointerup', endDrag);
  renderer.domElement.addEventListener('pointercancel', endDrag);
  renderer.domElement.addEventListener('wheel', (ev) => {
    radius = Math.min(8, Math.max(0.8, radius * (1 + ev.deltaY * 0.001)));
    placeCamera();
    ev.preventDefault();
  });

  let alive = true;
  const animate = () => {
    if (!alive) return;
    requestAnimationFrame(animate);
    renderer.render(scene, camera);
  };
  animate();

  const swap = (slot: THREE.Group | null, next: THREE.Group | null): THREE.Group | null => {
    if (slot) scene.remove(slot);
    if (next) scene.add(next);
    return next;
  };

  return {
    showShapes(original, deformed) {
      originalGroup = swap(
        originalGroup,
        original ? shapeToObject(original, ORIGINAL_COLOR, 0.45) : null,
      );
      deformedGroup = swap(deformedGroup, deformed ? shapeToObject(deformed, DEFORMED_COLOR, 0.9) : null);
    },
    showAvatar(positions, bones, attributes) {
      const built = avatarObject(positions, bones, attributes);
      avatarGroup = swap(avatarGroup, built.group);
      jointMeshes = built.jointMeshes;
    },
    onJointDrag(cb) {
      dragCb = cb;
    },
    cameraBasis: basis,
    dispose() {
      alive = false;
      renderer.dispose();
      container.removeChild(renderer.domElement);
    },
  };
}
