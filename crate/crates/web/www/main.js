// Built by: wasm-bindgen --target web --out-dir www/pkg <path to overlay_outage_web.wasm>
import init, { op_curves, do_cg_report, monte_carlo } from "./pkg/overlay_outage_web.js";

const form = document.getElementById("form");
const out = document.getElementById("out");
const canvas = document.getElementById("chart");
const ctx = canvas.getContext("2d");

const PARAM_KEYS = ["snr_db", "alpha", "rho", "r0", "m0", "m1", "m2", "m3", "m4"];
const STYLES = {
  exact: [],
  approx: [6, 4],
  asymptotic: [2, 3],
};
const COLORS = { primary: "#1f5fbf", secondary: "#c0392b" };

function num(name) {
  return Number(form.elements[name].value);
}

// The swept key is left out so the axis value is not overridden.
function params(skip) {
  const p = {};
  for (const k of PARAM_KEYS) {
    if (k !== skip) p[k] = num(k);
  }
  return JSON.stringify(p);
}

function show(text, isError = false) {
  out.textContent = text;
  out.className = isError ? "err" : "";
}

function run(f) {
  try {
    f();
  } catch (e) {
    show(String(e.message ?? e), true);
  }
}

function drawCurves(data) {
  const W = canvas.width, H = canvas.height;
  const pad = { l: 60, r: 150, t: 15, b: 40 };
  ctx.clearRect(0, 0, W, H);

  const ys = [];
  for (const sys of ["primary", "secondary"]) {
    for (const s of Object.keys(STYLES)) {
      for (const v of data[sys][s]) if (v > 0) ys.push(Math.log10(v));
    }
  }
  if (ys.length === 0) return;
  const yMin = Math.max(Math.floor(Math.min(...ys)), -12);
  const yMax = 0;
  const xMin = data.x[0], xMax = data.x[data.x.length - 1];
  const px = (x) => pad.l + ((x - xMin) / (xMax - xMin || 1)) * (W - pad.l - pad.r);
  const py = (ly) => pad.t + ((yMax - ly) / (yMax - yMin || 1)) * (H - pad.t - pad.b);

  ctx.strokeStyle = "#ddd";
  ctx.fillStyle = "#333";
  ctx.font = "12px sans-serif";
  ctx.setLineDash([]);
  for (let e = yMin; e <= yMax; e++) {
    ctx.beginPath();
    ctx.moveTo(pad.l, py(e));
    ctx.lineTo(W - pad.r, py(e));
    ctx.stroke();
    ctx.fillText(`1e${e}`, 10, py(e) + 4);
  }
  for (let i = 0; i < data.x.length; i += Math.ceil(data.x.length / 10)) {
    const x = data.x[i];
    ctx.fillText(String(+x.toFixed(3)), px(x) - 8, H - pad.b + 18);
  }
  ctx.fillText(data.axis, (W - pad.r) / 2, H - 5);

  let legendY = pad.t + 10;
  for (const sys of ["primary", "secondary"]) {
    for (const [s, dash] of Object.entries(STYLES)) {
      ctx.strokeStyle = COLORS[sys];
      ctx.setLineDash(dash);
      ctx.lineWidth = 2;
      ctx.beginPath();
      let pen = false;
      data[sys][s].forEach((v, i) => {
        if (!(v > 0)) {
          pen = false;
          return;
        }
        const y = Math.max(Math.log10(v), yMin);
        if (pen) ctx.lineTo(px(data.x[i]), py(y));
        else ctx.moveTo(px(data.x[i]), py(y));
        pen = true;
      });
      ctx.stroke();
      ctx.beginPath();
      ctx.moveTo(W - pad.r + 10, legendY);
      ctx.lineTo(W - pad.r + 40, legendY);
      ctx.stroke();
      ctx.fillText(`${sys} ${s}`, W - pad.r + 45, legendY + 4);
      legendY += 18;
    }
  }
  ctx.setLineDash([]);
  ctx.lineWidth = 1;
}

function plot() {
  const axis = form.elements.axis.value;
  const data = JSON.parse(op_curves(params(axis), axis, num("start"), num("stop"), num("step")));
  drawCurves(data);
  show(data.notes.length ? data.notes.join("\n") : `${data.x.length} points`);
}

function docg() {
  const r = JSON.parse(do_cg_report(params()));
  const line = (name, c) => {
    const cg = c.coding_gain_db == null ? "undefined" : `${c.coding_gain_db.toFixed(3)} dB`;
    const d = c.diversity_order == null ? "undefined" : c.diversity_order;
    return `${name}: ${c.regime ?? ""} DO=${d} CG=${cg}${c.note ? `  (${c.note})` : ""}`;
  };
  show([line("primary", r.primary), line("secondary", r.secondary)].join("\n"));
}

function mc() {
  const r = JSON.parse(monte_carlo(params(), num("trials"), num("seed")));
  const line = (name, c) =>
    `${name}: mc=${c.p_hat.toExponential(4)} ± ${c.stderr.toExponential(2)}  exact=${c.exact.toExponential(4)}  |z|=${c.z.toFixed(2)}`;
  show([`${r.trials} trials, seed ${r.seed}`, line("primary", r.primary), line("secondary", r.secondary)].join("\n"));
}

document.getElementById("plot").addEventListener("click", () => run(plot));
document.getElementById("docg").addEventListener("click", () => run(docg));
document.getElementById("mc").addEventListener("click", () => run(mc));
form.elements.axis.addEventListener("change", () => {
  const snr = form.elements.axis.value === "snr_db";
  form.elements.start.value = snr ? 0 : 0.05;
  form.elements.stop.value = snr ? 40 : 0.95;
  form.elements.step.value = snr ? 1 : 0.05;
});

await init();
run(plot);
