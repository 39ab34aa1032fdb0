/** Application state and its pure update function.
 *
 * The view is a pure function of this state, and this state is a pure
 * function of the event log (server responses plus local form input), so
 * replaying a recorded transcript reproduces the exact same UI.
 */

import type {
  JobStatus,
  LibraryEntry,
  PoseMode,
  ServerJob,
  UiJobView,
} from "./types.js";
import { TERMINAL_STATUSES } from "./types.js";

export type LibraryState =
  | { kind: "loading" }
  | { kind: "ready"; entries: LibraryEntry[] }
  | { kind: "error"; message: string };

export interface FormState {
  referenceName: string | null;
  mode: PoseMode;
  libraryId: string | null;
  uploadName: string | null;
  referenceError: string | null;
  poseError: string | null;
  submitting: boolean;
}

export interface AppState {
  library: LibraryState;
  jobs: UiJobView[];
  /** Shown when polling fails; existing data stays on screen. */
  staleBanner: string | null;
  form: FormState;
  previewPoseId: string | null;
}

export const initialState: AppState = {
  library: { kind: "loading" },
  jobs: [],
  staleBanner: null,
  form: {
    referenceName: null,
    mode: "library",
    libraryId: null,
    uploadName: null,
    referenceError: null,
    poseError: null,
    submitting: false,
  },
  previewPoseId: null,
};

export type AppEvent =
  | { type: "library-loaded"; entries: LibraryEntry[] }
  | { type: "library-failed"; message: string }
  | { type: "reference-chosen"; name: string }
  | { type: "mode-chosen"; mode: PoseMode }
  | { type: "library-id-chosen"; id: string }
  | { type: "upload-chosen"; name: string }
  | { type: "preview-opened"; id: string }
  | { type: "preview-closed" }
  | { type: "submit-started" }
  | { type: "job-accepted"; job: ServerJob; poseSource: string }
  | { type: "submit-rejected"; field: "reference" | "pose"; message: string }
  | { type: "job-updated"; job: ServerJob }
  | { type: "poll-failed"; message: string }
  | { type: "poll-recovered" };

function viewOf(job: ServerJob, poseSource: string): UiJobView {
  return {
    id: job.id,
    status: job.status,
    submittedAt: job.created_at ?? 0,
    poseSource,
    resultUrl: job.result_url ?? null,
    error: job.error ?? null,
  };
}

/** Pure state transition; never mutates its input. */
export function apply(state: AppState, event: AppEvent): AppState {
  switch (event.type) {
    case "library-loaded":
      return { ...state, library: { kind: "ready", entries: event.entries } };
    case "library-failed":
      return {
        ...state,
        library: { kind: "error", message: event.message },
      };
    case "reference-chosen":
      return {
        ...state,
        form: {
          ...state.form,
          referenceName: event.name,
          referenceError: null,
        },
      };
    case "mode-chosen":
      return {
        ...state,
        form: {
          ...state.form,
          mode: event.mode,
          libraryId: null,
          uploadName: null,
          poseError: null,
        },
      };
    case "library-id-chosen":
      return {
        ...state,
        form: { ...state.form, libraryId: event.id, poseError: null },
      };
    case "upload-chosen":
      return {
        ...state,
        form: { ...state.form, uploadName: event.name, poseError: null },
      };
    case "preview-opened":
      return { ...state, previewPoseId: event.id };
    case "preview-closed":
      return { ...state, previewPoseId: null };
    case "submit-started":
      return {
        ...state,
        form: {
          ...state.form,
          submitting: true,
          referenceError: null,
          poseError: null,
        },
      };
    case "job-accepted":
      return {
        ...state,
        form: { ...state.form, submitting: false },
        jobs: [...state.jobs, viewOf(event.job, event.poseSource)],
      };
    case "submit-rejected":
      return {
        ...state,
        form: {
          ...state.form,
          submitting: false,
          referenceError:
            event.field === "reference"
              ? event.message
              : state.form.referenceError,
          poseError:
            event.field === "pose" ? event.message : state.form.poseError,
        },
      };
    case "job-updated":
      return {
        ...state,
        staleBanner: null,
        jobs: state.jobs.map((j) =>
          j.id === event.job.id ? viewOf(event.job, j.poseSource) : j,
        ),
      };
    case "poll-failed":
      return { ...state, staleBanner: event.message };
    case "poll-recovered":
      return { ...state, staleBanner: null };
  }
}

export function replay(events: AppEvent[]): AppState {
  return events.reduce(apply, initialState);
}

/** Submission is enabled once a reference image and a resolved pose source
 * both exist. */
export function canSubmit(form: FormState): boolean {
  if (form.submitting || form.referenceName === null) return false;
  if (form.mode === "library") return form.libraryId !== null;
  return form.uploadName !== null;
}

export function isTerminal(status: JobStatus): boolean {
  return TERMINAL_STATUSES.has(status);
}
