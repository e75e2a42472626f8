// Payload shapes of the /v1 API.

export type Vec3 = [number, number, number];

export interface BoneAttributes {
  length: number;
  width: number;
  thickness: number;
}

export interface AvatarDoc {
  attributes: Record<string, BoneAttributes>;
  pose: { name: string; joint_positions?: Record<string, Vec3> };
}

export interface SessionInfo {
  session_id: string;
  edit_counter: number;
  avatar_hash: string;
  avatar: AvatarDoc;
  pose_positions: Record<string, Vec3>;
}

export interface ShapeSummary {
  id: string;
  style_label: string | null;
  components: number;
  aabb: { min: Vec3; max: Vec3 };
}

export interface ProxyDoc {
  kind: 'cuboid' | 'cylinder';
  center: Vec3;
  axes?: Vec3[];
  half_extents?: Vec3;
  axis?: Vec3;
  radius?: number;
  half_length?: number;
}

export interface ComponentDoc {
  id: string;
  tag: string;
  samples: Vec3[];
  faces?: number[][];
  proxy: ProxyDoc;
}

export interface ShapeDoc {
  id: string;
  components: ComponentDoc[];
  style_label?: string;
}

export interface RankingEntry {
  shape_id: string;
  energy: number;
}

export interface RankingResponse {
  pose: string;
  avatar_hash: string;
  edit_counter: number;
  entries: RankingEntry[];
}

export interface ConstraintReportRow {
  kind: string;
  target_tag: string;
  target_value: number;
  band: [number, number];
  measured: number;
  violation: number;
  satisfied: boolean;
}

export interface DeformedResponse {
  pose: string;
  avatar_hash: string;
  original: ShapeDoc;
  deformed: ShapeDoc;
  report: {
    total_energy: number;
    constraints: ConstraintReportRow[];
  };
}

export interface Presets {
  poses: string[];
  default_attributes: Record<string, BoneAttributes>;
  joints: string[];
  bones: [string, string, string][]; // parent joint, child joint, bone tag
}

export type AvatarEdit = {
  attributes?: Record<string, Partial<BoneAttributes>>;
  pose?: { name: string } | { joint_positions: Record<string, Vec3> };
};
