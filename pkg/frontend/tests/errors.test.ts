/** Rejected submissions surface the server's detail message inline on the
 * owning form field; nothing is added to the job list. */

import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { replay } from "../src/state.js";
import type { AppEvent } from "../src/state.js";
import { render } from "../src/view.js";
import { submitJob } from "../src/workflow.js";
import { MockServer, pngFile, wavFile } from "./mockServer.js";

describe("NoFace rejection", () => {
  it("renders the detail verbatim on the reference field", async () => {
    const server = new MockServer();
    server.onJson("POST", /^\/api\/jobs$/, {
      status: 422,
      body: { detail: "NoFace: no face detected in reference image" },
    });
    const api = new ApiClient(server.fetch);

    const events: AppEvent[] = [{ type: "submit-started" }];
    events.push(
      ...(await submitJob(api, {
        reference: pngFile("crowd.png"),
        mode: "library",
        libraryId: "nod",
      })),
    );

    const state = replay(events);
    expect(state.jobs).toHaveLength(0);
    expect(state.form.referenceError).toBe(
      "NoFace: no face detected in reference image",
    );
    expect(state.form.poseError).toBeNull();
    expect(state.form.submitting).toBe(false);

    const html = render(state);
    expect(html).toContain(
      '<p class="field-error" data-field="reference">NoFace: no face detected in reference image</p>',
    );
  });

  it("routes pose-side failures to the pose field", async () => {
    const server = new MockServer();
    server.onJson("POST", /^\/api\/pose\/from-audio$/, {
      status: 422,
      body: { detail: "UnsupportedMedia: could not decode audio" },
    });
    const api = new ApiClient(server.fetch);

    const events = await submitJob(api, {
      reference: pngFile(),
      mode: "audio",
      upload: wavFile("noise.wav"),
    });
    const state = replay(events);
    expect(state.form.poseError).toBe(
      "UnsupportedMedia: could not decode audio",
    );
    expect(state.form.referenceError).toBeNull();
    expect(render(state)).toContain(
      'data-field="pose">UnsupportedMedia: could not decode audio</p>',
    );
    // pose upload failed, so no job request was ever made
    expect(server.callSignatures()).toEqual(["POST /api/pose/from-audio"]);
  });

  it("escapes markup in error details", () => {
    const state = replay([
      {
        type: "submit-rejected",
        field: "reference",
        message: 'NoFace: <img src="x">',
      },
    ]);
    const html = render(state);
    expect(html).toContain("NoFace: &lt;img src=&quot;x&quot;&gt;");
    expect(html).not.toContain('<img src="x">');
  });
});

describe("ApiError", () => {
  it("carries status and FastAPI-style detail", async () => {
    const server = new MockServer();
    server.onJson("GET", /^\/api\/jobs\/missing$/, {
      status: 404,
      body: { detail: "job not found" },
    });
    const api = new ApiClient(server.fetch);
    const err = await api.getJob("missing").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(404);
    expect(err.detail).toBe("job not found");
  });
});
