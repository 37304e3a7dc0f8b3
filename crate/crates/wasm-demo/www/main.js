import init, { rejection_rates, bandwidth_trace, weight_map } from "./pkg/dyadcov_wasm.js";

const COLORS = {
  iid: "#999999", white: "#e41a1c", oneway1: "#ff7f00", oneway2: "#fdbf6f",
  twoway: "#a65628", dyadic: "#377eb8", dn: "#4daf4a", dn_nodc: "#b2df8a",
  jk: "#984ea3", jk_nodc: "#cab2d6",
};

const num = (form, name) => Number(form.elements[name].value);

function axes(ctx, w, h, pad, xs, ymax, xlabel) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#444";
  ctx.fillStyle = "#444";
  ctx.font = "12px system-ui";
  ctx.beginPath();
  ctx.moveTo(pad, pad / 2);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad / 2, h - pad);
  ctx.stroke();
  for (let t = 0; t <= 4; t++) {
    const v = (ymax * t) / 4;
    const y = h - pad - ((h - 1.5 * pad) * t) / 4;
    ctx.fillText(v.toFixed(2), 4, y + 4);
  }
  xs.forEach((x, idx) => {
    const px = pad + ((w - 1.5 * pad) * idx) / Math.max(xs.length - 1, 1);
    ctx.fillText(String(x), px - 8, h - pad + 16);
  });
  ctx.fillText(xlabel, w / 2, h - 6);
}

// rejection curves

const rates = document.querySelector("#rates");
const ratesForm = rates.querySelector("form");
const ratesCanvas = rates.querySelector("canvas");

function drawRates(xs, series, label) {
  const ctx = ratesCanvas.getContext("2d");
  const { width: w, height: h } = ratesCanvas;
  const pad = 44;
  const all = Object.values(series).flat().filter(Number.isFinite);
  const ymax = Math.max(0.1, Math.ceil(Math.max(...all, 0) * 10) / 10);
  axes(ctx, w, h, pad, xs, ymax, label);
  const px = (idx) => pad + ((w - 1.5 * pad) * idx) / Math.max(xs.length - 1, 1);
  const py = (v) => h - pad - ((h - 1.5 * pad) * v) / ymax;
  ctx.setLineDash([4, 4]);
  ctx.strokeStyle = "#000";
  ctx.beginPath();
  ctx.moveTo(pad, py(0.05));
  ctx.lineTo(w - pad / 2, py(0.05));
  ctx.stroke();
  ctx.setLineDash([]);
  for (const [name, ys] of Object.entries(series)) {
    ctx.strokeStyle = COLORS[name];
    ctx.lineWidth = 2;
    ctx.beginPath();
    ys.forEach((v, idx) => (idx ? ctx.lineTo(px(idx), py(v)) : ctx.moveTo(px(idx), py(v))));
    ctx.stroke();
  }
  ctx.lineWidth = 1;
  rates.querySelector(".legend").innerHTML = Object.keys(series)
    .map((k) => `<span style="--c:${COLORS[k]}">${k}</span>`)
    .join("");
}

const nextFrame = () => new Promise((r) => setTimeout(r, 0));

let runId = 0;
ratesForm.addEventListener("submit", async (ev) => {
  ev.preventDefault();
  const id = ++runId;
  const status = rates.querySelector(".status");
  const param = ratesForm.elements.param.value;
  const xs = ratesForm.elements.values.value.split(",").map(Number).filter(Number.isFinite);
  const base = { rho: 0.5, omega: 1, gamma: 0.5 };
  const series = {};
  for (let idx = 0; idx < xs.length; idx++) {
    status.textContent = `running ${idx + 1} of ${xs.length}…`;
    await nextFrame();
    if (id !== runId) return;
    const p = { ...base, [param]: xs[idx] };
    let out;
    try {
      out = JSON.parse(rejection_rates(
        num(ratesForm, "n"), num(ratesForm, "k"), p.rho, p.omega, p.gamma,
        num(ratesForm, "reps"), num(ratesForm, "seed"),
      ));
    } catch (e) {
      status.textContent = String(e.message ?? e);
      return;
    }
    for (const [k, v] of Object.entries(out.rejection)) (series[k] ??= []).push(v);
    drawRates(xs.slice(0, idx + 1), series, param);
  }
  status.textContent = "done";
});

// bandwidth trace

const bw = document.querySelector("#bandwidth");
const bwForm = bw.querySelector("form");

function drawTrace() {
  bwForm.querySelectorAll("input[type=range]").forEach((el) => (el.nextElementSibling.value = el.value));
  let t;
  try {
    t = JSON.parse(bandwidth_trace(num(bwForm, "n"), num(bwForm, "k"), num(bwForm, "rho"), num(bwForm, "seed")));
  } catch (e) {
    bw.querySelector(".summary").textContent = String(e.message ?? e);
    return;
  }
  const canvas = bw.querySelector("canvas");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 44;
  const lags = t.rho_max.map((_, i) => i + 1);
  axes(ctx, w, h, pad, lags, 1, "lag h");
  const slot = (w - 1.5 * pad) / lags.length;
  const py = (v) => h - pad - (h - 1.5 * pad) * v;
  t.rho_max.forEach((v, i) => {
    ctx.fillStyle = i + 1 === t.L ? "#4daf4a" : v < t.threshold ? "#9ecae1" : "#3182bd";
    ctx.fillRect(pad + i * slot + slot * 0.15, py(v), slot * 0.7, h - pad - py(v));
  });
  ctx.strokeStyle = "#e41a1c";
  ctx.beginPath();
  ctx.moveTo(pad, py(t.threshold));
  ctx.lineTo(w - pad / 2, py(t.threshold));
  ctx.stroke();
  bw.querySelector(".summary").textContent =
    `L = ${t.L}, cap = ${t.h_max}, threshold = ${t.threshold.toFixed(4)}` +
    (t.defaulted ? " (no qualifying lag, cap used)" : "");
}

bwForm.addEventListener("input", drawTrace);

// kernel weights

const wt = document.querySelector("#weights");
const wtForm = wt.querySelector("form");
const wtCanvas = wt.querySelector("canvas");

function drawWeights() {
  wtForm.querySelectorAll("input[type=range]").forEach((el) => (el.nextElementSibling.value = el.value));
  const n = num(wtForm, "n");
  wtForm.elements.i.max = n;
  wtForm.elements.j.max = n;
  let grid;
  try {
    grid = weight_map(n, num(wtForm, "i"), num(wtForm, "j"), num(wtForm, "l"));
  } catch {
    return;
  }
  const ctx = wtCanvas.getContext("2d");
  const cell = wtCanvas.width / n;
  ctx.clearRect(0, 0, wtCanvas.width, wtCanvas.height);
  for (let p = 0; p < n; p++) {
    for (let q = 0; q < n; q++) {
      const v = grid[p * n + q];
      if (Number.isNaN(v)) continue;
      const shade = Math.round(255 - 200 * v);
      ctx.fillStyle = v === 0 ? "#f7f7f7" : `rgb(${shade},${shade},255)`;
      ctx.fillRect(q * cell, p * cell, cell, cell);
    }
  }
  ctx.strokeStyle = "#e41a1c";
  ctx.lineWidth = 2;
  ctx.strokeRect((num(wtForm, "j") - 1) * cell, (num(wtForm, "i") - 1) * cell, cell, cell);
  ctx.lineWidth = 1;
}

wtForm.addEventListener("input", drawWeights);
wtCanvas.addEventListener("click", (ev) => {
  const rect = wtCanvas.getBoundingClientRect();
  const n = num(wtForm, "n");
  const q = Math.floor(((ev.clientX - rect.left) / rect.width) * n) + 1;
  const p = Math.floor(((ev.clientY - rect.top) / rect.height) * n) + 1;
  if (p === q) return;
  wtForm.elements.i.value = Math.min(p, q);
  wtForm.elements.j.value = Math.max(p, q);
  drawWeights();
});

await init();
drawTrace();
drawWeights();
