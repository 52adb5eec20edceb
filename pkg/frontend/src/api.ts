import type { AnalysisPayload, CutResponse, CutsJson, GeometryPayload, SimStepPayload } from "./types.js";

// Every response body passes through `intercept` before parsing, so tests can
// byte-compare what the service said against what the UI ended up displaying.
export type Interceptor = (route: string, rawBody: string) => void;

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`${status}: ${detail}`);
  }
}

export class Api {
  constructor(
    private base: string = "",
    private intercept: Interceptor | null = null,
    private fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(route: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.base + route, init);
    const raw = await resp.text();
    if (this.intercept) this.intercept(route, raw);
    if (!resp.ok) {
      let detail = raw;
      try {
        const parsed = JSON.parse(raw);
        detail = parsed.detail ?? parsed.error ?? raw;
      } catch {
        /* non-JSON error body: keep raw */
      }
      throw new ApiError(resp.status, String(detail));
    }
    return JSON.parse(raw) as T;
  }

  getGeometry(): Promise<GeometryPayload> {
    return this.request("/geometry");
  }

  getAnalysis(): Promise<AnalysisPayload> {
    return this.request("/analysis");
  }

  postCut(scenario: CutsJson): Promise<CutResponse> {
    return this.request("/cut", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(scenario),
    });
  }

  simStep(xMm: number, yMm: number): Promise<SimStepPayload> {
    return this.request("/sim/step", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ x_mm: xMm, y_mm: yMm }),
    });
  }
}
