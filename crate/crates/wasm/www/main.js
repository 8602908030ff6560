import init, { compare_propagators, noise_fidelity, optimize_pulse } from "./pkg/hyqoc_wasm.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

// Draws each series as a polyline over shared x values.
function plot(canvas, xs, series, { ymin, ymax, labels = [], dashed = [] } = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 36;
  ctx.clearRect(0, 0, w, h);
  const all = series.flat().filter(Number.isFinite);
  const lo = ymin ?? Math.min(...all);
  let hi = ymax ?? Math.max(...all);
  if (hi === lo) hi = lo + 1;
  const x0 = xs[0], x1 = xs[xs.length - 1] || 1;
  const px = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (w - 2 * pad);
  const py = (y) => h - pad / 2 - ((y - lo) / (hi - lo)) * (h - pad);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad / 2, w - 2 * pad, h - pad);
  ctx.fillStyle = "#555";
  ctx.font = "11px sans-serif";
  ctx.fillText(hi.toPrecision(3), 2, pad / 2 + 8);
  ctx.fillText(lo.toPrecision(3), 2, h - pad / 2);
  ctx.fillText(String(x1), w - pad - 10, h - 4);
  series.forEach((ys, i) => {
    ctx.strokeStyle = COLORS[i % COLORS.length];
    ctx.setLineDash(dashed[i] ? [5, 4] : []);
    ctx.beginPath();
    ys.forEach((y, k) => (k ? ctx.lineTo(px(xs[k]), py(y)) : ctx.moveTo(px(xs[k]), py(y))));
    ctx.stroke();
    if (labels[i]) {
      ctx.fillStyle = ctx.strokeStyle;
      ctx.fillText(labels[i], pad + 6 + 90 * i, pad / 2 + 14);
    }
  });
  ctx.setLineDash([]);
}

function bars(canvas, xs, groups, labels) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 36;
  ctx.clearRect(0, 0, w, h);
  const hi = Math.max(...groups.flat(), 1e-12);
  const slot = (w - 2 * pad) / xs.length;
  const bw = slot / (groups.length + 1);
  ctx.font = "11px sans-serif";
  groups.forEach((g, i) => {
    ctx.fillStyle = COLORS[i];
    g.forEach((v, k) => {
      const bh = (v / hi) * (h - pad);
      ctx.fillRect(pad + k * slot + i * bw, h - pad / 2 - bh, bw, bh);
    });
    ctx.fillText(labels[i], pad + 6 + 50 * i, 12);
  });
  ctx.fillStyle = "#555";
  ctx.fillText(`ω from 0 to ${xs[xs.length - 1].toFixed(3)} a.u.`, w - 180, h - 4);
}

const num = (id) => Number(document.getElementById(id).value);
const show = (id, text) => (document.getElementById(id).textContent = text);

function guarded(outId, f) {
  return () => {
    try {
      f();
    } catch (e) {
      show(outId, `error: ${e}`);
    }
  };
}

function runCompare() {
  const r = JSON.parse(compare_propagators(num("cmp-amp"), num("cmp-dt")));
  const col = (rows, k) => rows.map((p) => p[k]);
  const series = [0, 1, 2].flatMap((k) => [col(r.euler, k), col(r.circuit, k)]);
  plot(document.getElementById("cmp-pop"), r.times, series, {
    ymin: 0,
    ymax: 1,
    labels: ["P0 Euler", "P0 circuit", "P1 Euler", "P1 circuit", "P2 Euler", "P2 circuit"],
    dashed: [false, true, false, true, false, true],
  });
  plot(document.getElementById("cmp-dev"), r.times, [r.deviation], { ymin: 0, labels: ["Δε"] });
  const verdict = r.max_deviation < 0.02 ? "below" : "above";
  show("cmp-out", `max Δε = ${r.max_deviation.toFixed(4)} (${verdict} 0.02), ${r.two_qubit_gates} CNOTs`);
}

function runNoise() {
  const r = JSON.parse(noise_fidelity(num("noise-bf"), num("noise-dp")));
  const floor = r.steps.map(() => r.thermal_floor);
  plot(document.getElementById("noise-plot"), r.steps, [r.fidelity, r.purity, floor], {
    ymin: 0,
    ymax: 1,
    labels: ["fidelity", "purity", "1/8"],
    dashed: [false, false, true],
  });
  show("noise-out", `final fidelity ${r.fidelity.at(-1).toFixed(4)}, leakage ${r.leakage.at(-1).toFixed(4)}`);
}

function runGa() {
  const out = document.getElementById("ga-out");
  out.textContent = "running...";
  // let the status paint before the synchronous run blocks the page
  setTimeout(guarded("ga-out", () => {
    const t = performance.now();
    const r = JSON.parse(optimize_pulse(num("ga-seed"), num("ga-gen"), num("ga-pop")));
    const gens = r.best_population.map((_, i) => i);
    plot(document.getElementById("ga-history"), gens, [r.best_population], { ymin: 0, ymax: 1, labels: ["best P1"] });
    bars(document.getElementById("ga-spectrum"), r.omega, r.spectrum, ["x", "y", "z"]);
    const secs = ((performance.now() - t) / 1000).toFixed(1);
    show("ga-out", `final population ${r.final_population.toFixed(4)} after ${r.evaluations} evaluations (${secs} s)`);
  }), 20);
}

await init();
document.getElementById("cmp-run").onclick = guarded("cmp-out", runCompare);
document.getElementById("noise-run").onclick = guarded("noise-out", runNoise);
document.getElementById("ga-run").onclick = runGa;
guarded("cmp-out", runCompare)();
guarded("noise-out", runNoise)();
