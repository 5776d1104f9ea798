import init, { invariants_json, moment_json, surface_spectrum_json } from "./pkg/wml_web.js";

const $ = (id) => document.getElementById(id);

function guarded(out, f) {
  try {
    out.classList.remove("err");
    f();
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e);
  }
}

function plot(canvas, curve) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 36;
  ctx.clearRect(0, 0, w, h);
  if (curve.length === 0) return;
  const xs = curve.map((p) => p[0]), ys = curve.map((p) => p[1]);
  const x0 = Math.min(...xs), x1 = Math.max(...xs);
  let y0 = Math.min(0, ...ys), y1 = Math.max(...ys);
  if (y1 === y0) y1 = y0 + 1;
  const sx = (x) => pad + ((x - x0) / Math.max(1, x1 - x0)) * (w - 2 * pad);
  const sy = (y) => h - pad - ((y - y0) / (y1 - y0)) * (h - 2 * pad);

  ctx.strokeStyle = "#888";
  ctx.beginPath();
  ctx.moveTo(pad, sy(0));
  ctx.lineTo(w - pad, sy(0));
  ctx.moveTo(pad, pad);
  ctx.lineTo(pad, h - pad);
  ctx.stroke();

  ctx.fillStyle = "#333";
  ctx.font = "12px sans-serif";
  ctx.fillText(y1.toPrecision(3), 2, sy(y1) + 4);
  ctx.fillText(y0.toPrecision(3), 2, sy(y0) + 4);
  ctx.fillText(`n = ${x0}`, pad, h - 12);
  ctx.fillText(`n = ${x1}`, w - pad - 40, h - 12);

  ctx.strokeStyle = "#1f5fbf";
  ctx.beginPath();
  curve.forEach(([x, y], i) => (i === 0 ? ctx.moveTo(sx(x), sy(y)) : ctx.lineTo(sx(x), sy(y))));
  ctx.stroke();
  ctx.fillStyle = "#1f5fbf";
  for (const [x, y] of curve) {
    ctx.beginPath();
    ctx.arc(sx(x), sy(y), 2.5, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function laurentText(l) {
  if (l.e0 === null) return "0";
  const terms = l.coeffs
    .map((c, i) => [c, l.e0 - i])
    .filter(([c]) => c !== "0")
    .map(([c, e]) => (e === 0 ? c : `${c}·n^${e}`));
  return terms.join(" + ") + " + …";
}

await init();

$("inv-go").onclick = () =>
  guarded($("inv-out"), () => {
    const r = JSON.parse(invariants_json($("inv-word").value, Number($("inv-rank").value)));
    $("inv-out").textContent = JSON.stringify(r, null, 2);
  });

$("mom-go").onclick = () =>
  guarded($("mom-out"), () => {
    const r = JSON.parse(moment_json($("mom-word").value, $("mom-t").value, 1, 24));
    $("mom-value").textContent = `E = ${r.value.text}    (valid for n ≥ ${r.n_min})    ~ ${laurentText(r.laurent)}`;
    plot($("mom-plot"), r.curve);
    $("mom-out").textContent = JSON.stringify(r, null, 2);
  });

$("surf-go").onclick = () =>
  guarded($("surf-out"), () => {
    const r = JSON.parse(surface_spectrum_json($("surf-words").value, Number($("surf-k").value)));
    $("surf-out").textContent = JSON.stringify(r, null, 2);
  });
