import { Api, ApiError } from "./api.js";
import type { Coil, CutReport, CutsJson, GeometryPayload, PointMm, SimStepPayload } from "./types.js";

export type CoilState = "green" | "grey";

// Pure client state. Physics verdicts (survivors, power, leak) are copied out
// of service responses; the store only snaps strokes, keeps the undo stack
// and coalesces sim requests.
export class DesignerStore {
  geometry: GeometryPayload | null = null;
  analysisRaw: Record<string, unknown> | null = null;
  report: CutReport | null = null;
  offline = false;
  lastError = "";

  // undo stack: scenario history, oldest first; the live scenario is the top
  private history: CutsJson[] = [{ cuts: [] }];

  sim: SimStepPayload | null = null;
  displayedPower = "0";
  displayedQ = "";
  private simInFlight = false;
  private simPending: { x: number; y: number } | null = null;

  constructor(private api: Api) {}

  get scenario(): CutsJson {
    return this.history[this.history.length - 1];
  }

  get undoDepth(): number {
    return this.history.length - 1;
  }

  get leakBanner(): boolean {
    return this.report?.leak_risk ?? false;
  }

  async refresh(): Promise<void> {
    try {
      const first = this.geometry === null;
      this.geometry = await this.api.getGeometry();
      this.report = this.geometry.report;
      if (first) {
        // adopt whatever scenario the service already holds as the undo base
        this.history = [this.geometry.scenario];
      }
      const analysis = await this.api.getAnalysis();
      this.analysisRaw = analysis as unknown as Record<string, unknown>;
      // displayed Q is the verbatim serialized response field
      this.displayedQ = JSON.stringify(analysis.electrical.q_factor);
      this.offline = false;
    } catch (err) {
      if (err instanceof ApiError) {
        this.lastError = err.detail;
        this.offline = false;
      } else {
        this.offline = true; // unreachable service: banner, no stale interaction
      }
    }
  }

  // --- cut tool ---------------------------------------------------------

  /** Snap a pointer stroke (mm floats) to the integer mm grid, dropping
   *  consecutive duplicates. */
  snapStroke(points: PointMm[]): PointMm[] {
    const out: PointMm[] = [];
    for (const [x, y] of points) {
      const p: PointMm = [Math.round(x), Math.round(y)];
      const last = out[out.length - 1];
      if (!last || last[0] !== p[0] || last[1] !== p[1]) out.push(p);
    }
    return out;
  }

  /** Mirror of the service-side rejection: non-adjacent stroke edges must not
   *  touch. */
  strokeSelfIntersects(pts: PointMm[]): boolean {
    const n = pts.length - 1;
    const closed = n >= 2 && pts[0][0] === pts[n][0] && pts[0][1] === pts[n][1];
    for (let i = 0; i < n; i++) {
      for (let j = i + 2; j < n; j++) {
        if (closed && i === 0 && j === n - 1) continue;
        if (segmentsTouch(pts[i], pts[i + 1], pts[j], pts[j + 1])) return true;
      }
    }
    return false;
  }

  /** Append one stroke as a new cut; the whole scenario is re-sent (service
   *  state is replaced per POST). Returns an error string instead of posting
   *  when the stroke is degenerate or self-intersecting. */
  async applyStroke(points: PointMm[]): Promise<string | null> {
    const snapped = this.snapStroke(points);
    if (snapped.length < 2) return "stroke needs at least 2 points";
    if (this.strokeSelfIntersects(snapped)) return "stroke self-intersects";
    const next: CutsJson = { cuts: [...this.scenario.cuts, snapped] };
    try {
      const resp = await this.api.postCut(next);
      this.history.push(resp.scenario);
      this.report = resp.report;
      if (this.geometry) this.geometry.report = resp.report;
      return null;
    } catch (err) {
      if (err instanceof ApiError) return err.detail;
      this.offline = true;
      return "service unreachable";
    }
  }

  async undo(): Promise<void> {
    if (this.history.length < 2) return;
    const prev = this.history[this.history.length - 2];
    const resp = await this.api.postCut(prev);
    this.history.pop();
    this.report = resp.report;
    if (this.geometry) this.geometry.report = resp.report;
  }

  // --- rx drag ----------------------------------------------------------

  /** Request a sim step at the pointer; at most one request in flight, the
   *  latest pointer position wins while waiting. Failed requests keep the
   *  last known state (never extrapolate). */
  async rxMove(xMm: number, yMm: number): Promise<void> {
    if (this.simInFlight) {
      this.simPending = { x: xMm, y: yMm };
      return;
    }
    this.simInFlight = true;
    try {
      const state = await this.api.simStep(xMm, yMm);
      this.sim = state;
      this.displayedPower = JSON.stringify(state.total_power);
    } catch {
      /* degrade to last known state */
    } finally {
      this.simInFlight = false;
      const pending = this.simPending;
      this.simPending = null;
      if (pending) void this.rxMove(pending.x, pending.y);
    }
  }

  get simBusy(): boolean {
    return this.simInFlight;
  }

  // --- view helpers -----------------------------------------------------

  coilStates(): Map<string, CoilState> {
    const out = new Map<string, CoilState>();
    if (!this.geometry || !this.report) return out;
    const alive = new Set(this.report.surviving_coils.map((c) => key(c)));
    for (const { coil } of this.geometry.coils) {
      out.set(key(coil), alive.has(key(coil)) ? "green" : "grey");
    }
    return out;
  }

  severedSegmentIds(): Set<number> {
    return new Set((this.report?.severed_segments ?? []).map((s) => s.segment));
  }

  activeCoils(): Coil[] {
    return this.sim?.active ?? [];
  }
}

export function key(c: Coil): string {
  return `${c[0]},${c[1]}`;
}

function orient(a: PointMm, b: PointMm, c: PointMm): number {
  const v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  return v > 0 ? 1 : v < 0 ? -1 : 0;
}

function onSegment(p: PointMm, a: PointMm, b: PointMm): boolean {
  return (
    orient(a, b, p) === 0 &&
    Math.min(a[0], b[0]) <= p[0] && p[0] <= Math.max(a[0], b[0]) &&
    Math.min(a[1], b[1]) <= p[1] && p[1] <= Math.max(a[1], b[1])
  );
}

export function segmentsTouch(p1: PointMm, p2: PointMm, q1: PointMm, q2: PointMm): boolean {
  const o1 = orient(p1, p2, q1);
  const o2 = orient(p1, p2, q2);
  const o3 = orient(q1, q2, p1);
  const o4 = orient(q1, q2, p2);
  if (o1 !== o2 && o3 !== o4) return true;
  return (
    (o1 === 0 && onSegment(q1, p1, p2)) ||
    (o2 === 0 && onSegment(q2, p1, p2)) ||
    (o3 === 0 && onSegment(p1, q1, q2)) ||
    (o4 === 0 && onSegment(p2, q1, q2))
  );
}
