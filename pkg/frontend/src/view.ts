/** Pure HTML rendering of the application state. */

import type { AppState } from "./state.js";
import { canSubmit } from "./state.js";
import type { UiJobView } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function renderBanner(state: AppState): string {
  if (!state.staleBanner) return "";
  return `<div class="banner" role="alert">Showing last known data — ${escapeHtml(
    state.staleBanner,
  )}</div>`;
}

function renderLibrary(state: AppState): string {
  const lib = state.library;
  if (lib.kind === "loading") {
    return `<p class="library-loading">Loading pose library…</p>`;
  }
  if (lib.kind === "error") {
    return (
      `<p class="library-error">${escapeHtml(lib.message)}</p>` +
      `<button data-action="retry-library">Retry</button>`
    );
  }
  if (lib.entries.length === 0) {
    return `<p class="library-empty">No poses in the library yet.</p>`;
  }
  const cards = lib.entries
    .map(
      (e) =>
        `<div class="pose-card${
          state.form.libraryId === e.id ? " selected" : ""
        }" data-pose-id="${escapeHtml(e.id)}">` +
        `<span class="pose-name">${escapeHtml(e.name)}</span>` +
        `<span class="pose-duration">${e.duration_s.toFixed(1)} s @ ${
          e.fps
        } fps</span>` +
        `<button data-action="preview" data-pose-id="${escapeHtml(
          e.id,
        )}">Preview</button>` +
        `</div>`,
    )
    .join("");
  return `<div class="pose-cards">${cards}</div>`;
}

function renderForm(state: AppState): string {
  const f = state.form;
  const refError = f.referenceError
    ? `<p class="field-error" data-field="reference">${escapeHtml(
        f.referenceError,
      )}</p>`
    : "";
  const poseError = f.poseError
    ? `<p class="field-error" data-field="pose">${escapeHtml(f.poseError)}</p>`
    : "";
  const modes = (["library", "video", "audio"] as const)
    .map(
      (m) =>
        `<label><input type="radio" name="mode" value="${m}"${
          f.mode === m ? " checked" : ""
        }/> ${m}</label>`,
    )
    .join("");
  const chosen = f.referenceName
    ? `<span class="file-name">${escapeHtml(f.referenceName)}</span>`
    : "";
  return (
    `<form class="submit-form">` +
    `<div class="field"><label>Reference face <input type="file" name="reference" accept="image/*"/></label>${chosen}${refError}</div>` +
    `<div class="field"><span>Pose source:</span>${modes}${poseError}</div>` +
    `<button type="submit" data-action="submit"${
      canSubmit(f) ? "" : " disabled"
    }>${f.submitting ? "Submitting…" : "Generate"}</button>` +
    `</form>`
  );
}

function renderJob(job: UiJobView): string {
  const badge = `<span class="badge badge-${job.status}">${job.status}</span>`;
  const result =
    job.status === "succeeded" && job.resultUrl
      ? `<video controls src="${escapeHtml(job.resultUrl)}"></video>` +
        `<a href="${escapeHtml(job.resultUrl)}" download>Download</a>`
      : "";
  const error =
    job.status === "failed" && job.error
      ? `<p class="job-error">${escapeHtml(job.error)}</p>`
      : "";
  return (
    `<li class="job" data-job-id="${escapeHtml(job.id)}">` +
    `${badge}<span class="job-source">${escapeHtml(job.poseSource)}</span>` +
    `${result}${error}</li>`
  );
}

function renderJobs(state: AppState): string {
  if (state.jobs.length === 0) {
    return `<p class="jobs-empty">No jobs yet.</p>`;
  }
  return `<ul class="jobs">${state.jobs.map(renderJob).join("")}</ul>`;
}

function renderPreview(state: AppState): string {
  if (!state.previewPoseId) return "";
  return (
    `<div class="preview" data-pose-id="${escapeHtml(state.previewPoseId)}">` +
    `<canvas width="256" height="256"></canvas>` +
    `<button data-action="close-preview">Close</button></div>`
  );
}

/** The whole UI as a function of state. */
export function render(state: AppState): string {
  return (
    `<main>` +
    renderBanner(state) +
    `<section class="library">${renderLibrary(state)}</section>` +
    renderPreview(state) +
    `<section class="form">${renderForm(state)}</section>` +
    `<section class="jobs-panel">${renderJobs(state)}</section>` +
    `</main>`
  );
}
