import { DesignerStore, key } from "./store.js";
import type { PointMm } from "./types.js";

// Minimal 2D surface so the renderer stays testable without a DOM.
export interface Surface {
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
}

export class Viewport {
  constructor(
    public sheetHalfMm: number,
    public widthPx: number,
    public heightPx: number,
    public marginPx = 20,
  ) {}

  get scale(): number {
    return (Math.min(this.widthPx, this.heightPx) - 2 * this.marginPx) / (2 * this.sheetHalfMm);
  }

  toPx([x, y]: PointMm): [number, number] {
    return [
      this.widthPx / 2 + x * this.scale,
      this.heightPx / 2 - y * this.scale, // mm y axis points up
    ];
  }

  toMm(px: number, py: number): PointMm {
    return [
      (px - this.widthPx / 2) / this.scale,
      (this.heightPx / 2 - py) / this.scale,
    ];
  }
}

const COLORS = {
  sheet: "#f8f6f0",
  outline: "#555",
  coilGreen: "#2e9e44",
  coilGrey: "#9a9a9a",
  tree: "#2a6fd6",
  treeSevered: "#b0b0b0",
  cut: "#c22",
  rx: "#7a2ea0",
  active: "#ffb300",
};

export function render(store: DesignerStore, ctx: Surface, vp: Viewport,
                       liveStroke: PointMm[] = [], rxPos: PointMm | null = null): void {
  ctx.clearRect(0, 0, vp.widthPx, vp.heightPx);
  const g = store.geometry;
  if (!g) return;

  const [x0, y0] = vp.toPx([-g.sheet_half_mm, g.sheet_half_mm]);
  const side = 2 * g.sheet_half_mm * vp.scale;
  ctx.fillStyle = COLORS.sheet;
  ctx.fillRect(x0, y0, side, side);
  ctx.strokeStyle = COLORS.outline;
  ctx.lineWidth = 1.5;
  ctx.strokeRect(x0, y0, side, side);

  // feed tree, severed segments greyed
  const severed = store.severedSegmentIds();
  const nodeById = new Map(g.tree.nodes.map((n) => [n.id, n]));
  for (const seg of g.tree.segments) {
    const a = nodeById.get(seg.a)!;
    const b = nodeById.get(seg.b)!;
    ctx.strokeStyle = severed.has(seg.id) ? COLORS.treeSevered : COLORS.tree;
    ctx.lineWidth = 1;
    ctx.beginPath();
    const [ax, ay] = vp.toPx([a.x_mm, a.y_mm]);
    const [bx, by] = vp.toPx([b.x_mm, b.y_mm]);
    ctx.moveTo(ax, ay);
    ctx.lineTo(bx, by);
    ctx.stroke();
  }

  // coils: survivors green, cut coils grey; active coils ringed
  const states = store.coilStates();
  const active = new Set(store.activeCoils().map((c) => key(c)));
  for (const { coil, center_mm, outer_side_mm } of g.coils) {
    const [cx, cy] = vp.toPx(center_mm);
    const half = (outer_side_mm / 2) * vp.scale;
    ctx.fillStyle = states.get(key(coil)) === "green" ? COLORS.coilGreen : COLORS.coilGrey;
    ctx.fillRect(cx - half, cy - half, 2 * half, 2 * half);
    if (active.has(key(coil))) {
      ctx.strokeStyle = COLORS.active;
      ctx.lineWidth = 4;
      ctx.strokeRect(cx - half - 4, cy - half - 4, 2 * half + 8, 2 * half + 8);
    }
  }

  // committed cuts, then the stroke being drawn
  for (const cut of store.scenario.cuts) drawPolyline(ctx, vp, cut, COLORS.cut, 2);
  if (liveStroke.length >= 2) drawPolyline(ctx, vp, liveStroke, COLORS.cut, 1);

  if (rxPos) {
    const [rx, ry] = vp.toPx(rxPos);
    ctx.fillStyle = COLORS.rx;
    ctx.beginPath();
    ctx.arc(rx, ry, 8, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function drawPolyline(ctx: Surface, vp: Viewport, pts: PointMm[], color: string, width: number): void {
  ctx.strokeStyle = color;
  ctx.lineWidth = width;
  ctx.beginPath();
  const [sx, sy] = vp.toPx(pts[0]);
  ctx.moveTo(sx, sy);
  for (const p of pts.slice(1)) {
    const [x, y] = vp.toPx(p);
    ctx.lineTo(x, y);
  }
  ctx.stroke();
}
