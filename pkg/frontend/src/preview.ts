/** Client-side pose preview: draws keypoints per frame at the sequence
 * fps, looping. Rendering goes through a minimal 2D surface interface so
 * tests can record draw commands instead of needing a real canvas. */

import type { PoseDocument } from "./types.js";

export interface DrawSurface {
  readonly width: number;
  readonly height: number;
  clear(): void;
  dot(x: number, y: number): void;
}

export function loopDurationSeconds(doc: PoseDocument): number {
  return doc.frames.length / doc.fps;
}

/** Frame index shown at a given time since the loop started. */
export function frameIndexAt(doc: PoseDocument, timeMs: number): number {
  const raw = Math.floor((timeMs / 1000) * doc.fps);
  return ((raw % doc.frames.length) + doc.frames.length) % doc.frames.length;
}

export function drawFrame(
  surface: DrawSurface,
  doc: PoseDocument,
  index: number,
  confidenceThreshold = 0.05,
): void {
  surface.clear();
  for (const [x, y, c] of doc.frames[index].kp) {
    if (c <= confidenceThreshold) continue;
    surface.dot(x * (surface.width - 1), y * (surface.height - 1));
  }
}

export class PosePreview {
  constructor(
    private readonly surface: DrawSurface,
    private readonly doc: PoseDocument,
  ) {}

  renderAt(timeMs: number): number {
    const index = frameIndexAt(this.doc, timeMs);
    drawFrame(this.surface, this.doc, index);
    return index;
  }
}

export function adaptCanvas(
  canvas: HTMLCanvasElement,
  radius = 2,
): DrawSurface {
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("2D canvas unavailable");
  return {
    width: canvas.width,
    height: canvas.height,
    clear: () => ctx.clearRect(0, 0, canvas.width, canvas.height),
    dot: (x, y) => {
      ctx.beginPath();
      ctx.arc(x, y, radius, 0, 2 * Math.PI);
      ctx.fill();
    },
  };
}
