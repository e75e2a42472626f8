// Typed client for the ergofit /v1 service.

import type {
  AvatarEdit,
  DeformedResponse,
  Presets,
  RankingResponse,
  SessionInfo,
  ShapeDoc,
  ShapeSummary,
} from './types.js';

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface ApiClient {
  createSession(): Promise<SessionInfo>;
  getSession(sid: string): Promise<SessionInfo>;
  putAvatar(sid: string, edit: AvatarEdit): Promise<SessionInfo>;
  listShapes(): Promise<ShapeSummary[]>;
  getShape(id: string): Promise<ShapeDoc>;
  getRanking(sid: string, pose: string): Promise<RankingResponse>;
  getDeformed(sid: string, shapeId: string, pose: string): Promise<DeformedResponse>;
  getPresets(): Promise<Presets>;
}

async function parse<T>(res: Response): Promise<T> {
  const body = await res.json().catch(() => ({}));
  if (!res.ok) {
    const message = (body as { error?: string }).error ?? `HTTP ${res.status}`;
    throw new ApiError(res.status, message);
  }
  return body as T;
}

export function createApiClient(base: string, fetchImpl: FetchLike = fetch): ApiClient {
  const url = (path: string) => `${base.replace(/\/$/, '')}${path}`;
  return {
    createSession: () => fetchImpl(url('/v1/sessions'), { method: 'POST' }).then(parse<SessionInfo>),
    getSession: (sid) => fetchImpl(url(`/v1/sessions/${sid}`)).then(parse<SessionInfo>),
    putAvatar: (sid, edit) =>
      fetchImpl(url(`/v1/sessions/${sid}/avatar`), {
        method: 'PUT',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify(edit),
      }).then(parse<SessionInfo>),
    listShapes: () =>
      fetchImpl(url('/v1/shapes'))
        .then(parse<{ shapes: ShapeSummary[] }>)
        .then((b) => b.shapes),
    getShape: (id) => fetchImpl(url(`/v1/shapes/${id}`)).then(parse<ShapeDoc>),
    getRanking: (sid, pose) =>
      fetchImpl(url(`/v1/sessions/${sid}/ranking?pose=${encodeURIComponent(pose)}`)).then(
        parse<RankingResponse>,
      ),
    getDeformed: (sid, shapeId, pose) =>
      fetchImpl(
        url(`/v1/sessions/${sid}/shapes/${shapeId}/deformed?pose=${encodeURIComponent(pose)}`),
      ).then(parse<DeformedResponse>),
    getPresets: () => fetchImpl(url('/v1/presets')).then(parse<Presets>),
  };
}
