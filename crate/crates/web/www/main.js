import init, { kernel_heatmap, multiplier_profile, blaschke_growth } from "./pkg/diskops_web.js";

const $ = (id) => document.getElementById(id);

function parsePairs(text) {
  return text.split(",").map((s) => s.trim()).filter((s) => s.length).map(Number);
}

function guard(errId, fn) {
  $(errId).textContent = "";
  try {
    fn();
  } catch (e) {
    $(errId).textContent = String(e);
  }
}

function drawKernel() {
  guard("k-err", () => {
    const canvas = $("k-canvas");
    const size = canvas.width;
    const grid = 160;
    const values = kernel_heatmap($("k-space").value, +$("k-re").value, +$("k-im").value, grid);
    let lo = Infinity, hi = -Infinity;
    for (const v of values) {
      if (Number.isFinite(v)) {
        lo = Math.min(lo, Math.log(v));
        hi = Math.max(hi, Math.log(v));
      }
    }
    const ctx = canvas.getContext("2d");
    const img = ctx.createImageData(grid, grid);
    values.forEach((v, i) => {
      const t = Number.isFinite(v) ? (Math.log(v) - lo) / (hi - lo || 1) : -1;
      const o = 4 * i;
      if (t < 0) {
        img.data.set([255, 255, 255, 255], o);
      } else {
        img.data.set([Math.round(255 * t), Math.round(80 + 100 * (1 - Math.abs(2 * t - 1))), Math.round(255 * (1 - t)), 255], o);
      }
    });
    const off = new OffscreenCanvas(grid, grid);
    off.getContext("2d").putImageData(img, 0, 0);
    ctx.imageSmoothingEnabled = true;
    ctx.clearRect(0, 0, size, size);
    ctx.drawImage(off, 0, 0, size, size);
  });
}

function plotSeries(canvas, series, colors, xs) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 30;
  ctx.clearRect(0, 0, w, h);
  const all = series.flat();
  const lo = Math.min(0, ...all), hi = Math.max(...all);
  const x = (i) => pad + (i / Math.max(1, xs.length - 1)) * (w - 2 * pad);
  const y = (v) => h - pad - ((v - lo) / (hi - lo || 1)) * (h - 2 * pad);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.fillText(hi.toPrecision(4), 2, pad);
  ctx.fillText(lo.toPrecision(4), 2, h - pad);
  xs.forEach((label, i) => ctx.fillText(String(label), x(i) - 8, h - 10));
  series.forEach((s, k) => {
    ctx.strokeStyle = colors[k];
    ctx.beginPath();
    s.forEach((v, i) => (i ? ctx.lineTo(x(i), y(v)) : ctx.moveTo(x(i), y(v))));
    ctx.stroke();
  });
}

function runMultiplier() {
  guard("m-err", () => {
    const out = multiplier_profile($("m-space").value, new Float64Array(parsePairs($("m-coeffs").value)), 4096);
    const sup = out[out.length - 1];
    const ns = [], est = [];
    for (let i = 0; i + 1 < out.length - 1; i += 2) {
      ns.push(out[i]);
      est.push(out[i + 1]);
    }
    plotSeries($("m-canvas"), [est, est.map(() => sup)], ["#1f77b4", "#aaa"], ns);
    $("m-out").textContent = ns.map((n, i) => `N=${n}\t${est[i].toPrecision(15)}`).join("\n") + `\nsup|f| = ${sup.toPrecision(15)}`;
  });
}

function runGrowth() {
  guard("b-err", () => {
    const zeros = new Float64Array(parsePairs($("b-zeros").value));
    const n = 12;
    const a = blaschke_growth("S12", zeros, n);
    const b = blaschke_growth("S2", zeros, n);
    plotSeries($("b-canvas"), [Array.from(a), Array.from(b)], ["#1f77b4", "#ff7f0e"], [...Array(n + 1).keys()]);
  });
}

await init();
for (const id of ["k-space", "k-re", "k-im"]) $(id).addEventListener("input", drawKernel);
$("k-canvas").addEventListener("click", (ev) => {
  const r = ev.target.getBoundingClientRect();
  const re = (2 * (ev.clientX - r.left)) / r.width - 1;
  const im = 1 - (2 * (ev.clientY - r.top)) / r.height;
  if (Math.hypot(re, im) < 0.95) {
    $("k-re").value = re.toFixed(2);
    $("k-im").value = im.toFixed(2);
    drawKernel();
  }
});
$("m-run").addEventListener("click", runMultiplier);
$("b-run").addEventListener("click", runGrowth);
drawKernel();
runMultiplier();
runGrowth();
