// Shape documents to three.js objects: triangle meshes when faces ship with
// the file, proxy boxes/cylinders otherwise.

import * as THREE from 'three';
import type { ComponentDoc, ProxyDoc, ShapeDoc, Vec3 } from './types.js';

function proxyMesh(proxy: ProxyDoc, material: THREE.Material): THREE.Mesh {
  if (proxy.kind === 'cylinder') {
    const geom = new THREE.CylinderGeometry(proxy.radius!, proxy.radius!, 2 * proxy.half_length!, 16);
    const mesh = new THREE.Mesh(geom, material);
    mesh.quaternion.setFromUnitVectors(
      new THREE.Vector3(0, 1, 0),
      new THREE.Vector3(...proxy.axis!).normalize(),
    );
    mesh.position.set(...proxy.center);
    return mesh;
  }
  const h = proxy.half_extents!;
  const geom = new THREE.BoxGeometry(2 * h[0], 2 * h[1], 2 * h[2]);
  const mesh = new THREE.Mesh(geom, material);
  const axes = proxy.axes!;
  const m = new THREE.Matrix4().makeBasis(
    new THREE.Vector3(...axes[0]),
    new THREE.Vector3(...axes[1]),
    new THREE.Vector3(...axes[2]),
  );
  mesh.quaternion.setFromRotationMatrix(m);
  mesh.position.set(...proxy.center);
  return mesh;
}

function facesMesh(comp: ComponentDoc, material: THREE.Material): THREE.Mesh {
  const geom = new THREE.BufferGeometry();
  const positions = new Float32Array(comp.samples.flat());
  geom.setAttribute('position', new THREE.BufferAttribute(positions, 3));
  geom.setIndex(comp.faces!.flat());
  geom.computeVertexNormals();
  return new THREE.Mesh(geom, material);
}

export function shapeToObject(doc: ShapeDoc, color: number, opacity = 1.0): THREE.Group {
  const group = new THREE.Group();
  const material = new THREE.MeshLambertMaterial({
    color,
    transparent: opacity < 1.0,
    opacity,
  });
  for (const comp of doc.components) {
    group.add(comp.faces && comp.faces.length ? facesMesh(comp, material) : proxyMesh(comp.proxy, material));
  }
  group.name = doc.id;
  return group;
}

export function avatarObject(
  positions: Record<string, Vec3>,
  bones: [string, string, string][],
  attributes: Record<string, { length: number; width: number; thickness: number }>,
): { group: THREE.Group; jointMeshes: Map<string, THREE.Mesh> } {
  const group = new THREE.Group();
  const boneMaterial = new THREE.MeshLambertMaterial({ color: 0xd9a066, transparent: true, opacity: 0.75 });
  const jointMaterial = new THREE.MeshLambertMaterial({ color: 0x394b59 });
  const jointMeshes = new Map<string, THREE.Mesh>();

  for (const [parent, child, tag] of bones) {
    const a = new THREE.Vector3(...positions[parent]);
    const b = new THREE.Vector3(...positions[child]);
    const attr = attributes[tag];
    const ellipsoid = new THREE.Mesh(new THREE.SphereGeometry(0.5, 12, 10), boneMaterial);
    ellipsoid.scale.set(attr.width, attr.length, attr.thickness);
    ellipsoid.position.copy(a.clone().add(b).multiplyScalar(0.5));
    const dir = b.clone().sub(a).normalize();
    ellipsoid.quaternion.setFromUnitVectors(new THREE.Vector3(0, 1, 0), dir);
    group.add(ellipsoid);
  }
  for (const [joint, p] of Object.entries(positions)) {
    const mesh = new THREE.Mesh(new THREE.SphereGeometry(0.022, 10, 8), jointMaterial);
    mesh.position.set(...p);
    mesh.userData.joint = joint;
    jointMeshes.set(joint, mesh);
    group.add(mesh);
  }
  return { group, jointMeshes };
}
