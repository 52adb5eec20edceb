import { Api } from "./api.js";
import { render, Viewport } from "./canvas.js";
import { DesignerStore } from "./store.js";
import type { PointMm } from "./types.js";

const canvas = document.getElementById("sheet") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const offlineBanner = document.getElementById("offline-banner")!;
const leakBanner = document.getElementById("leak-banner")!;
const errorLine = document.getElementById("error-line")!;
const powerGauge = document.getElementById("power-gauge")!;
const qReadout = document.getElementById("q-readout")!;
const survivorCount = document.getElementById("survivor-count")!;
const undoButton = document.getElementById("undo") as HTMLButtonElement;
const modeButtons = {
  cut: document.getElementById("mode-cut") as HTMLButtonElement,
  rx: document.getElementById("mode-rx") as HTMLButtonElement,
};

const store = new DesignerStore(new Api(""));
let vp = new Viewport(100, canvas.width, canvas.height);
let mode: "cut" | "rx" = "cut";
let stroke: PointMm[] = [];
let rxPos: PointMm | null = null;
let rxFrameQueued = false;

function repaint(): void {
  render(store, ctx, vp, stroke, rxPos);
  offlineBanner.hidden = !store.offline;
  leakBanner.hidden = !store.leakBanner;
  // displayed numbers are verbatim response fields (store copies, never computes)
  powerGauge.textContent = store.displayedPower;
  qReadout.textContent = store.displayedQ;
  survivorCount.textContent = String(store.report?.surviving_coils.length ?? "-");
  undoButton.disabled = store.undoDepth === 0;
}

function setMode(m: "cut" | "rx"): void {
  mode = m;
  modeButtons.cut.classList.toggle("selected", m === "cut");
  modeButtons.rx.classList.toggle("selected", m === "rx");
  if (m === "cut") rxPos = null;
  repaint();
}

function pointerMm(ev: PointerEvent): PointMm {
  const rect = canvas.getBoundingClientRect();
  return vp.toMm(ev.clientX - rect.left, ev.clientY - rect.top);
}

canvas.addEventListener("pointerdown", (ev) => {
  if (store.offline) return;
  canvas.setPointerCapture(ev.pointerId);
  if (mode === "cut") {
    stroke = [pointerMm(ev)];
  } else {
    rxPos = pointerMm(ev);
    queueRxStep();
  }
  repaint();
});

canvas.addEventListener("pointermove", (ev) => {
  if (store.offline || !canvas.hasPointerCapture(ev.pointerId)) return;
  if (mode === "cut") {
    stroke.push(pointerMm(ev));
  } else {
    rxPos = pointerMm(ev);
    queueRxStep();
  }
  repaint();
});

canvas.addEventListener("pointerup", async (ev) => {
  if (!canvas.hasPointerCapture(ev.pointerId)) return;
  canvas.releasePointerCapture(ev.pointerId);
  if (mode === "cut" && stroke.length >= 2) {
    const err = await store.applyStroke(stroke);
    errorLine.textContent = err ?? "";
  }
  stroke = [];
  repaint();
});

// one /sim/step per animation frame at most; the store additionally keeps a
// single request in flight and coalesces the latest position
function queueRxStep(): void {
  if (rxFrameQueued || !rxPos) return;
  rxFrameQueued = true;
  requestAnimationFrame(async () => {
    rxFrameQueued = false;
    if (rxPos) {
      await store.rxMove(rxPos[0], rxPos[1]);
      repaint();
    }
  });
}

undoButton.addEventListener("click", async () => {
  await store.undo();
  errorLine.textContent = "";
  repaint();
});

modeButtons.cut.addEventListener("click", () => setMode("cut"));
modeButtons.rx.addEventListener("click", () => setMode("rx"));

async function boot(): Promise<void> {
  await store.refresh();
  if (store.geometry) {
    vp = new Viewport(store.geometry.sheet_half_mm, canvas.width, canvas.height);
  }
  setMode("cut");
  repaint();
  if (store.offline) setTimeout(boot, 2000); // retry until the service is up
}

void boot();
