// Skeleton math mirrored from the service: forward kinematics for preset
// direction tables and the screen-drag-to-bone-plane projection. Drags are
// computed here only to propose joint positions; the service validates and
// owns the result.

import type { BoneAttributes, Vec3 } from './types.js';

export type Bone = [string, string, string]; // parent, child, tag

const sub = (a: Vec3, b: Vec3): Vec3 => [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
const add = (a: Vec3, b: Vec3): Vec3 => [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
const scale = (a: Vec3, s: number): Vec3 => [a[0] * s, a[1] * s, a[2] * s];
const dot = (a: Vec3, b: Vec3): number => a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
export const norm = (a: Vec3): number => Math.sqrt(dot(a, a));
export const cross = (a: Vec3, b: Vec3): Vec3 => [
  a[1] * b[2] - a[2] * b[1],
  a[2] * b[0] - a[0] * b[2],
  a[0] * b[1] - a[1] * b[0],
];
export const normalize = (a: Vec3): Vec3 => scale(a, 1 / norm(a));

export interface CameraBasis {
  right: Vec3;
  up: Vec3;
  forward: Vec3;
}

export function childrenOf(bones: Bone[], joint: string): string[] {
  return bones.filter(([p]) => p === joint).map(([, c]) => c);
}

export function boneToChild(bones: Bone[], joint: string): Bone | undefined {
  return bones.find(([, c]) => c === joint);
}

export function subtreeOf(bones: Bone[], joint: string): string[] {
  const out = [joint];
  for (const child of childrenOf(bones, joint)) out.push(...subtreeOf(bones, child));
  return out;
}

/** Joint positions from per-bone unit directions and attribute lengths. */
export function forwardKinematics(
  root: string,
  rootPosition: Vec3,
  bones: Bone[],
  directions: Record<string, Vec3>,
  attributes: Record<string, BoneAttributes>,
): Record<string, Vec3> {
  const pos: Record<string, Vec3> = { [root]: rootPosition };
  for (const [parent, child, tag] of bones) {
    const d = normalize(directions[tag]);
    pos[child] = add(pos[parent], scale(d, attributes[tag].length));
  }
  return pos;
}

/**
 * Propose new joint positions for a screen drag.
 *
 * The screen delta maps into the plane of the joint's two incident bones
 * (bone direction + camera up for leaf joints; the camera plane when the
 * incident bones are collinear). The parent bone rotates so the joint moves
 * toward the target and the joint's subtree translates along, preserving
 * every bone length. Dragging the root translates the whole body.
 */
export function dragJoint(
  positions: Record<string, Vec3>,
  bones: Bone[],
  root: string,
  joint: string,
  screenDelta: [number, number],
  camera: CameraBasis,
  attributes: Record<string, BoneAttributes>,
): Record<string, Vec3> {
  const [dx, dy] = screenDelta;
  if (dx === 0 && dy === 0) return positions;
  const delta = add(scale(camera.right, dx), scale(camera.up, dy));
  const out: Record<string, Vec3> = { ...positions };

  if (joint === root) {
    for (const j of Object.keys(out)) out[j] = add(out[j], delta);
    return out;
  }

  const bone = boneToChild(bones, joint);
  if (!bone) throw new Error(`joint '${joint}' has no parent bone`);
  const [parent, , tag] = bone;
  const d1 = sub(positions[joint], positions[parent]);
  const children = childrenOf(bones, joint);
  const d2 = children.length ? sub(positions[children[0]], positions[joint]) : camera.up;
  let projected = delta;
  const n = cross(d1, d2);
  if (norm(n) > 1e-9) {
    const nn = normalize(n);
    projected = sub(delta, scale(nn, dot(delta, nn)));
  }

  const target = add(positions[joint], projected);
  const offset = sub(target, positions[parent]);
  const dist = norm(offset);
  const length = attributes[tag].length;
  const next = dist > 1e-12 ? add(positions[parent], scale(offset, length / dist)) : positions[joint];
  const shift = sub(next, positions[joint]);
  for (const j of subtreeOf(bones, joint)) out[j] = add(out[j], shift);
  return out;
}

export function boneLengthErrors(
  positions: Record<string, Vec3>,
  bones: Bone[],
  attributes: Record<string, BoneAttributes>,
): number {
  let worst = 0;
  for (const [parent, child, tag] of bones) {
    const got = norm(sub(positions[child], positions[parent]));
    worst = Math.max(worst, Math.abs(got - attributes[tag].length));
  }
  return worst;
}
