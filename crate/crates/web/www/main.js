import init, { response_curve, region_flags, floquet_comparison } from "./pkg/loopsense_web.js";

function controls(section) {
  const inputs = section.querySelectorAll("input[type=range]");
  const read = () => {
    const v = {};
    for (const el of inputs) {
      v[el.name] = parseFloat(el.value);
      el.nextElementSibling.textContent = el.value;
    }
    return v;
  };
  return { inputs, read };
}

function wire(id, draw) {
  const section = document.getElementById(id);
  const { inputs, read } = controls(section);
  const canvas = section.querySelector("canvas");
  const err = section.querySelector(".err");
  const redraw = () => {
    try {
      err.textContent = "";
      draw(canvas, read());
    } catch (e) {
      err.textContent = String(e);
    }
  };
  for (const el of inputs) el.addEventListener("input", redraw);
  redraw();
}

function plot(canvas, xs, series, yMax) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 36;
  ctx.clearRect(0, 0, w, h);
  const x0 = xs[0], x1 = xs[xs.length - 1];
  const px = (x) => pad + ((x - x0) / (x1 - x0)) * (w - 2 * pad);
  const py = (y) => h - pad - (Math.min(y, yMax) / yMax) * (h - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#555";
  ctx.fillText(yMax.toPrecision(3), 2, pad + 4);
  ctx.fillText("0", 2, h - pad);
  ctx.fillText(x0.toPrecision(3), pad, h - pad + 14);
  ctx.fillText(x1.toPrecision(3), w - pad - 30, h - pad + 14);

  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.setLineDash(s.dash || []);
    ctx.beginPath();
    let pen = false;
    s.ys.forEach((y, i) => {
      if (!Number.isFinite(y)) { pen = false; return; }
      pen ? ctx.lineTo(px(xs[i]), py(y)) : ctx.moveTo(px(xs[i]), py(y));
      pen = true;
    });
    ctx.stroke();
  }
  ctx.setLineDash([]);
}

function column(flat, stride, k) {
  const out = [];
  for (let i = k; i < flat.length; i += stride) out.push(flat[i]);
  return out;
}

function drawSpectrum(canvas, v) {
  const flat = response_curve(v.c, v.z, v.k2, v.eta, v.phi, 0.01, 401);
  const xs = column(flat, 3, 0);
  const r = column(flat, 3, 1);
  const n = column(flat, 3, 2);
  const yMax = Math.max(1.2, Math.min(8, 1.1 * Math.max(...r)));
  plot(canvas, xs, [
    { ys: r, color: "#1f6fb4" },
    { ys: n, color: "#c0392b" },
    { ys: xs.map(() => 0.5), color: "#888", dash: [4, 4] },
  ], yMax);
}

function drawRegion(canvas, v) {
  const n = 100;
  const flags = region_flags(v.k2, v.eta, 3.0, 0.99, n);
  const ctx = canvas.getContext("2d");
  const cell = canvas.width / n;
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      const f = flags[i * n + j];
      let color = "#fff";
      if (f & 4) color = "#bbb";
      else if ((f & 1) && (f & 2)) color = "#2c3e50";
      else if (f & 1) color = "#e67e22";
      else if (f & 2) color = "#27ae60";
      else if (f & 8) color = "#f5b7b1";
      ctx.fillStyle = color;
      ctx.fillRect(j * cell, canvas.height - (i + 1) * cell, Math.ceil(cell), Math.ceil(cell));
    }
  }
}

function drawFloquet(canvas, v) {
  const flat = floquet_comparison(v.kw, v.z, 0.95, 1.0, 0.1, 3.0, 120);
  const xs = column(flat, 5, 0);
  const cols = [1, 2, 3, 4].map((k) => column(flat, 5, k));
  const finite = cols.flat().filter(Number.isFinite);
  const yMax = Math.max(1.2, Math.min(8, 1.1 * Math.max(...finite)));
  plot(canvas, xs, [
    { ys: cols[0], color: "#1f6fb4" },
    { ys: cols[1], color: "#1f6fb4", dash: [6, 4] },
    { ys: cols[2], color: "#c0392b" },
    { ys: cols[3], color: "#c0392b", dash: [6, 4] },
  ], yMax);
}

await init();
wire("spectrum", drawSpectrum);
wire("region", drawRegion);
wire("floquet", drawFloquet);
