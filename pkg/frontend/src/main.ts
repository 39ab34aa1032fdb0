/** Browser wiring: events in, state through `apply`, HTML out. */

import { ApiClient } from "./api.js";
import { JobPoller } from "./poller.js";
import { PosePreview, adaptCanvas } from "./preview.js";
import { AppEvent, AppState, apply, initialState } from "./state.js";
import { render } from "./view.js";
import { submitJob } from "./workflow.js";

export function mount(root: HTMLElement, api: ApiClient): void {
  let state: AppState = initialState;
  let previewTimer: number | null = null;

  const poller = new JobPoller(api, dispatch);

  function dispatch(event: AppEvent): void {
    state = apply(state, event);
    draw();
  }

  function draw(): void {
    root.innerHTML = render(state);
    bind();
  }

  async function loadLibrary(): Promise<void> {
    try {
      dispatch({ type: "library-loaded", entries: await api.listLibrary() });
    } catch (err) {
      dispatch({
        type: "library-failed",
        message: err instanceof Error ? err.message : String(err),
      });
    }
  }

  async function openPreview(id: string): Promise<void> {
    dispatch({ type: "preview-opened", id });
    const canvas = root.querySelector<HTMLCanvasElement>(".preview canvas");
    if (!canvas) return;
    const doc = await api.getLibraryPose(id);
    const preview = new PosePreview(adaptCanvas(canvas), doc);
    const started = performance.now();
    if (previewTimer !== null) window.clearInterval(previewTimer);
    previewTimer = window.setInterval(() => {
      preview.renderAt(performance.now() - started);
    }, 1000 / doc.fps);
  }

  function closePreview(): void {
    if (previewTimer !== null) window.clearInterval(previewTimer);
    previewTimer = null;
    dispatch({ type: "preview-closed" });
  }

  async function handleSubmit(): Promise<void> {
    const refInput = root.querySelector<HTMLInputElement>(
      'input[name="reference"]',
    );
    const reference = refInput?.files?.[0];
    if (!reference) return;
    dispatch({ type: "submit-started" });
    const events = await submitJob(api, {
      reference,
      mode: state.form.mode,
      libraryId: state.form.libraryId ?? undefined,
      upload: pendingUpload ?? undefined,
    });
    for (const event of events) {
      dispatch(event);
      if (event.type === "job-accepted") {
        poller.track(event.job.id);
        void poller.run((ms) => new Promise((r) => setTimeout(r, ms)));
      }
    }
  }

  let pendingUpload: File | null = null;

  function bind(): void {
    root
      .querySelector(".submit-form")
      ?.addEventListener("submit", (e) => {
        e.preventDefault();
        void handleSubmit();
      });
    root
      .querySelector<HTMLInputElement>('input[name="reference"]')
      ?.addEventListener("change", (e) => {
        const file = (e.target as HTMLInputElement).files?.[0];
        if (file) dispatch({ type: "reference-chosen", name: file.name });
      });
    for (const radio of root.querySelectorAll<HTMLInputElement>(
      'input[name="mode"]',
    )) {
      radio.addEventListener("change", () => {
        pendingUpload = null;
        dispatch({
          type: "mode-chosen",
          mode: radio.value as AppState["form"]["mode"],
        });
      });
    }
    for (const card of root.querySelectorAll<HTMLElement>(".pose-card")) {
      card.addEventListener("click", () => {
        const id = card.dataset.poseId;
        if (id) dispatch({ type: "library-id-chosen", id });
      });
    }
    root
      .querySelector('[data-action="retry-library"]')
      ?.addEventListener("click", () => void loadLibrary());
    for (const btn of root.querySelectorAll<HTMLElement>(
      '[data-action="preview"]',
    )) {
      btn.addEventListener("click", (e) => {
        e.stopPropagation();
        const id = btn.dataset.poseId;
        if (id) void openPreview(id);
      });
    }
    root
      .querySelector('[data-action="close-preview"]')
      ?.addEventListener("click", closePreview);
  }

  draw();
  void loadLibrary();
}

declare global {
  interface Window {
    faceanimMount?: typeof mount;
  }
}

if (typeof document !== "undefined") {
  const root = document.getElementById("app");
  if (root) mount(root, new ApiClient((url, init) => fetch(url, init)));
}
