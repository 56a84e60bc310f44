import init, { fig1, profile, features } from "./pkg/dynfeat_wasm.js";

const COLORS = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#a6761d"];
const $ = (id) => document.getElementById(id);

function plot(canvas, series) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 40;
  ctx.clearRect(0, 0, w, h);
  const all = series.flatMap((s) => s.values);
  let lo = Math.min(0, ...all), hi = Math.max(0, ...all);
  if (hi === lo) hi = lo + 1;
  const tMax = Math.max(...series.map((s) => s.values.length - 1), 1);
  const x = (t) => pad + (t / tMax) * (w - 2 * pad);
  const y = (v) => h - pad - ((v - lo) / (hi - lo)) * (h - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.moveTo(pad, y(0));
  ctx.lineTo(w - pad, y(0));
  ctx.moveTo(pad, pad / 2);
  ctx.lineTo(pad, h - pad);
  ctx.stroke();
  ctx.fillStyle = "#444";
  ctx.font = "12px sans-serif";
  ctx.fillText(hi.toPrecision(3), 2, y(hi) + 4);
  ctx.fillText(lo.toPrecision(3), 2, y(lo) + 4);
  for (let t = 0; t <= tMax; t += Math.max(1, Math.round(tMax / 10))) {
    ctx.fillText(String(t), x(t) - 3, h - pad + 16);
  }

  series.forEach((s, k) => {
    ctx.strokeStyle = s.color ?? COLORS[k % COLORS.length];
    ctx.lineWidth = 2;
    ctx.beginPath();
    s.values.forEach((v, t) => (t === 0 ? ctx.moveTo(x(t), y(v)) : ctx.lineTo(x(t), y(v))));
    ctx.stroke();
  });
}

function guard(errBox, f) {
  return () => {
    errBox.textContent = "";
    try {
      f();
    } catch (e) {
      errBox.textContent = String(e);
    }
  };
}

const drawFig1 = guard($("fig-err"), () => {
  const curves = JSON.parse(fig1(+$("fig-n").value, +$("fig-t").value, +$("fig-seed").value));
  plot($("fig-canvas"), curves);
  $("legend").innerHTML = curves
    .map((c, k) => `<span style="color:${COLORS[k]}">&#9632; ${c.topology} (λ₂ = ${c.eigenvalue.toFixed(3)}${c.degenerate ? ", degenerate" : ""})</span>`)
    .join("");
});

const drawProfile = guard($("graph-err"), () => {
  const p = JSON.parse(profile($("edges").value, $("attr").value, +$("prof-t").value));
  plot($("prof-canvas"), [p]);
  const lambda = p.eigenvalue === null ? "" : `, λ₂ = ${p.eigenvalue.toFixed(4)}`;
  $("prof-info").textContent = `n = ${p.n}, m = ${p.m}${lambda}; u(0) = ${p.values[0].toPrecision(4)}`;
});

const drawFeatures = guard($("graph-err"), () => {
  const f = JSON.parse(features($("edges").value, $("family").value));
  const rows = f.names.map((name, i) => {
    const flag = f.degenerate.includes(name) ? " *" : "";
    return `<tr><th>${name}</th><td>${f.values[i].toPrecision(6)}${flag}</td></tr>`;
  });
  $("feat-table").innerHTML = rows.join("") + (f.degenerate.length ? "<tr><td colspan=2>* degenerate eigenspace</td></tr>" : "");
});

await init();
$("fig-run").onclick = drawFig1;
$("prof-run").onclick = drawProfile;
$("feat-run").onclick = drawFeatures;
drawFig1();
drawProfile();
