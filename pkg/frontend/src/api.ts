/** Thin typed client over the documented /api surface.
 *
 * Every request the UI makes goes through this module, so the mock-server
 * tests can assert that nothing outside the documented endpoints is ever
 * called.
 */

import type { LibraryEntry, PoseDocument, ServerJob } from "./types.js";

export type FetchLike = (
  url: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(detail);
  }
}

async function errorDetail(resp: Response): Promise<string> {
  try {
    const doc = await resp.json();
    if (typeof doc?.detail === "string") return doc.detail;
    return JSON.stringify(doc);
  } catch {
    return `HTTP ${resp.status}`;
  }
}

export interface JobParams {
  width?: number;
  height?: number;
  fps?: number;
  seed?: number;
}

export interface JobSubmission {
  reference: File;
  poseSource: string; // "library:<id>" | "pose:<artifact>"
  params?: JobParams;
}

export class ApiClient {
  constructor(
    private readonly fetchFn: FetchLike,
    private readonly base: string = "",
  ) {}

  private async request(url: string, init?: RequestInit): Promise<Response> {
    const resp = await this.fetchFn(this.base + url, init);
    if (!resp.ok) {
      throw new ApiError(resp.status, await errorDetail(resp));
    }
    return resp;
  }

  async listLibrary(): Promise<LibraryEntry[]> {
    return (await this.request("/api/pose-library")).json();
  }

  async getLibraryPose(id: string): Promise<PoseDocument> {
    return (
      await this.request(`/api/pose-library/${encodeURIComponent(id)}`)
    ).json();
  }

  async extractPose(video: File): Promise<{ pose_id: string }> {
    const form = new FormData();
    form.append("video", video);
    return (
      await this.request("/api/pose/extract", { method: "POST", body: form })
    ).json();
  }

  async poseFromAudio(audio: File): Promise<{ pose_id: string }> {
    const form = new FormData();
    form.append("audio", audio);
    return (
      await this.request("/api/pose/from-audio", {
        method: "POST",
        body: form,
      })
    ).json();
  }

  async submitJob(submission: JobSubmission): Promise<ServerJob> {
    const form = new FormData();
    form.append("reference", submission.reference);
    form.append("pose_source", submission.poseSource);
    const params = submission.params ?? {};
    for (const key of ["width", "height", "fps", "seed"] as const) {
      const value = params[key];
      if (value !== undefined) form.append(key, String(value));
    }
    return (
      await this.request("/api/jobs", { method: "POST", body: form })
    ).json();
  }

  async getJob(id: string): Promise<ServerJob> {
    return (
      await this.request(`/api/jobs/${encodeURIComponent(id)}`)
    ).json();
  }

  async listJobs(): Promise<ServerJob[]> {
    return (await this.request("/api/jobs")).json();
  }
}
