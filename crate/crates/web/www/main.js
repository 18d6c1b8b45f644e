import init, { cone_geometry, lrtim_curve, vqse_spectrum } from "./pkg/qdmera_web.js";

const $ = (id) => document.getElementById(id);
const NS = "http://www.w3.org/2000/svg";

function el(name, attrs, text) {
  const e = document.createElementNS(NS, name);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  if (text !== undefined) e.textContent = text;
  return e;
}

function clear(svg) {
  while (svg.firstChild) svg.removeChild(svg.firstChild);
}

function guarded(info, f) {
  return () => {
    info.classList.remove("err");
    try {
      f();
    } catch (e) {
      info.classList.add("err");
      info.textContent = String(e.message ?? e);
    }
  };
}

function drawCone() {
  const g = JSON.parse(cone_geometry(+$("cone-n").value, $("cone-side").value, +$("cone-m").value));
  $("cone-info").textContent =
    `cone: ${g.cone_qubits} qubits (closed form ${g.predicted_qubits}), ${g.angles} free angles, ` +
    `${g.gates.filter((x) => x.in_cone).length} of ${g.gates.length} gates`;
  const svg = $("cone-svg");
  clear(svg);
  const W = +svg.getAttribute("width"), H = +svg.getAttribute("height");
  const dy = (H - 40) / Math.max(1, g.num_qubits - 1);
  const dx = (W - 80) / Math.max(1, g.gates.length);
  const y = (w) => 20 + w * dy;
  const kept = new Set(g.cone_wires);
  const outs = new Set(g.outputs);
  for (let w = 0; w < g.num_qubits; w++) {
    svg.append(el("line", { x1: 40, x2: W - 20, y1: y(w), y2: y(w), stroke: kept.has(w) ? "#888" : "#ddd" }));
    svg.append(el("text", { x: 8, y: y(w) + 4, fill: outs.has(w) ? "#c00" : "#444" }, w));
  }
  g.gates.forEach((gate, k) => {
    const x = 50 + k * dx + dx / 2;
    const [a, b] = gate.wires;
    const color = gate.in_cone ? "#1f6fd1" : "#ccc";
    svg.append(el("line", { x1: x, x2: x, y1: y(a), y2: y(b), stroke: color, "stroke-width": 3 }));
    for (const w of [a, b]) svg.append(el("circle", { cx: x, cy: y(w), r: 4, fill: color }));
  });
}

function linePlot(svg, xs, ys, color, ymin, ymax) {
  const W = +svg.getAttribute("width"), H = +svg.getAttribute("height");
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const px = (x) => 50 + ((x - x0) / (x1 - x0 || 1)) * (W - 70);
  const py = (v) => H - 30 - ((v - ymin) / (ymax - ymin || 1)) * (H - 50);
  svg.append(el("polyline", {
    points: xs.map((x, i) => `${px(x)},${py(ys[i])}`).join(" "),
    fill: "none", stroke: color, "stroke-width": 2,
  }));
  xs.forEach((x, i) => svg.append(el("circle", { cx: px(x), cy: py(ys[i]), r: 3, fill: color })));
  svg.append(el("text", { x: 50, y: H - 8 }, `h = ${x0.toFixed(2)}`));
  svg.append(el("text", { x: W - 90, y: H - 8 }, `h = ${x1.toFixed(2)}`));
  svg.append(el("text", { x: 4, y: 18 }, ymax.toFixed(3)));
  svg.append(el("text", { x: 4, y: H - 30 }, ymin.toFixed(3)));
}

function drawCurve() {
  const m = +$("lr-m").value;
  const rows = JSON.parse(lrtim_curve(+$("lr-n").value, +$("lr-alpha").value, m,
    +$("lr-hmin").value, +$("lr-hmax").value, +$("lr-points").value));
  const svg = $("lr-svg");
  clear(svg);
  linePlot(svg, rows.map((r) => r.h), rows.map((r) => r.entropy), "#1f6fd1", 0, m * Math.LN2);
  const peak = rows.reduce((a, b) => (b.entropy > a.entropy ? b : a));
  $("lr-info").textContent =
    `entropy of the first ${m} spins in nats (axis up to M ln 2); largest value ${peak.entropy.toFixed(4)} at h = ${peak.h.toFixed(3)}`;
}

function drawSpectrum() {
  const s = JSON.parse(vqse_spectrum(+$("sp-n").value, $("sp-side").value, +$("sp-m").value, +$("sp-seed").value));
  $("sp-info").textContent =
    `entropy: VQSE ${s.estimated_entropy.toFixed(8)}, exact ${s.exact_entropy.toFixed(8)}; final loss ${s.loss.toExponential(3)}`;
  const svg = $("sp-svg");
  clear(svg);
  const W = +svg.getAttribute("width"), H = +svg.getAttribute("height");
  const n = s.exact.length;
  const bw = (W - 60) / n;
  const py = (v) => (H - 30) * (1 - v) + 10;
  s.exact.forEach((v, i) => {
    const x = 40 + i * bw;
    svg.append(el("rect", { x: x + 2, y: py(v), width: bw / 2 - 3, height: H - 20 - py(v), fill: "#999" }));
    const e = s.estimate[i];
    svg.append(el("rect", { x: x + bw / 2, y: py(e), width: bw / 2 - 3, height: H - 20 - py(e), fill: "#1f6fd1" }));
    svg.append(el("text", { x: x + 2, y: H - 4 }, `λ${i}`));
  });
  svg.append(el("text", { x: W - 200, y: 20, fill: "#999" }, "exact"));
  svg.append(el("text", { x: W - 140, y: 20, fill: "#1f6fd1" }, "VQSE"));
}

await init();
$("status").textContent = "Ready.";
$("cone-go").onclick = guarded($("cone-info"), drawCone);
$("lr-go").onclick = guarded($("lr-info"), drawCurve);
$("sp-go").onclick = guarded($("sp-info"), drawSpectrum);
drawCone();
