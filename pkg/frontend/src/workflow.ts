/** Submission workflow: resolve the pose source, then submit the job.
 *
 * Non-library modes are a two-call sequence: the upload goes to the pose
 * endpoint first, and the job then references the returned pose artifact.
 */

import { ApiClient, ApiError, JobParams } from "./api.js";
import type { AppEvent } from "./state.js";
import type { PoseMode } from "./types.js";

export interface SubmissionForm {
  reference: File;
  mode: PoseMode;
  libraryId?: string;
  upload?: File;
  params?: JobParams;
}

const REFERENCE_ERRORS = ["NoFace", "InvalidImage", "TooLarge"];

function fieldFor(detail: string): "reference" | "pose" {
  return REFERENCE_ERRORS.some((p) => detail.startsWith(p))
    ? "reference"
    : "pose";
}

function describeSource(form: SubmissionForm): string {
  if (form.mode === "library") return `library: ${form.libraryId}`;
  return `${form.mode}: ${form.upload?.name ?? "upload"}`;
}

/** Runs the full submission; returns the events to apply to the state. */
export async function submitJob(
  api: ApiClient,
  form: SubmissionForm,
): Promise<AppEvent[]> {
  try {
    let poseSource: string;
    if (form.mode === "library") {
      if (!form.libraryId) throw new ApiError(0, "no library pose selected");
      poseSource = `library:${form.libraryId}`;
    } else {
      if (!form.upload) throw new ApiError(0, "no upload selected");
      const resolved =
        form.mode === "audio"
          ? await api.poseFromAudio(form.upload)
          : await api.extractPose(form.upload);
      poseSource = `pose:${resolved.pose_id}`;
    }
    const job = await api.submitJob({
      reference: form.reference,
      poseSource,
      params: form.params,
    });
    return [
      { type: "job-accepted", job, poseSource: describeSource(form) },
    ];
  } catch (err) {
    // 4xx details are surfaced verbatim on the owning form field
    const message = err instanceof ApiError ? err.detail : String(err);
    return [{ type: "submit-rejected", field: fieldFor(message), message }];
  }
}
