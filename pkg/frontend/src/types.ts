/** Shared types for the face-animation web client. */

export type JobStatus = "queued" | "running" | "succeeded" | "failed";

export const TERMINAL_STATUSES: ReadonlySet<JobStatus> = new Set([
  "succeeded",
  "failed",
]);

/** Job record as returned by GET /api/jobs/{id}. */
export interface ServerJob {
  id: string;
  status: JobStatus;
  created_at: number;
  params: { width: number; height: number; fps: number; seed: number };
  url: string;
  result_url?: string;
  frames?: number;
  fps?: number;
  width?: number;
  height?: number;
  duration_s?: number;
  media_type?: string;
  error?: string;
}

/** Entry from GET /api/pose-library. */
export interface LibraryEntry {
  id: string;
  name: string;
  duration_s: number;
  fps: number;
}

/** Canonical pose document (GET /api/pose-library/{id}, pose artifacts). */
export interface PoseDocument {
  version: number;
  schema_id: string;
  fps: number;
  width: number;
  height: number;
  frames: { kp: [number, number, number][] }[];
}

export type PoseMode = "library" | "video" | "audio";

/** What the user sees per job; mirrors the last polled server status. */
export interface UiJobView {
  id: string;
  status: JobStatus;
  submittedAt: number;
  poseSource: string;
  resultUrl: string | null;
  error: string | null;
}
