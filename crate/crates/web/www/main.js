import init, { solve, eigen, alpha } from "./pkg/cubicbranch_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const iv = ([lo, hi]) => `[${lo.toPrecision(12)}, ${hi.toPrecision(12)}]`;

function run(out, f) {
  $(out).classList.remove("err");
  $(out).textContent = "working...";
  // let the browser repaint before blocking on the computation
  setTimeout(() => {
    try {
      $(out).textContent = f();
    } catch (e) {
      $(out).classList.add("err");
      $(out).textContent = String(e.message ?? e);
    }
  }, 10);
}

function draw(r) {
  const c = $("plot");
  const n = r.resolution;
  c.width = c.height = n;
  const ctx = c.getContext("2d");
  const img = ctx.createImageData(n, n);
  const top = Math.max(...r.samples, 1e-12);
  r.samples.forEach((v, i) => {
    const t = Math.max(0, v / top);
    const x = Math.floor(i / n), y = i % n;
    const p = 4 * ((n - 1 - y) * n + x);
    img.data[p] = 255 * t;
    img.data[p + 1] = 80 + 120 * t * (1 - t);
    img.data[p + 2] = 255 * (1 - t);
    img.data[p + 3] = 255;
  });
  ctx.putImageData(img, 0, 0);
}

await init();

$("solve").onclick = () => run("solve-out", () => {
  const r = JSON.parse(solve(num("lambda"), num("n"), 64));
  draw(r);
  $("delta").value = r.delta[1].toPrecision(6);
  $("l4").value = r.l4[1].toPrecision(6);
  return [
    `ω(½,½)  ∈ ${iv(r.center)}`,
    `positive: ${r.positive}`,
    `‖defect‖₂ ≤ ${r.delta_hat[1].toExponential(4)}`,
    `δ (H⁻¹)  ≤ ${r.delta[1].toExponential(4)}`,
    `‖ω‖₄    ∈ ${iv(r.l4)}`,
  ].join("\n");
});

$("eigen").onclick = () => run("eigen-out", () => {
  const r = JSON.parse(eigen(num("lambda"), num("n"), num("ne")));
  $("k").value = r.k[1].toPrecision(8);
  const path = r.steps.map((s) => `s=${s.s} m=${s.m}`).join(", ");
  return [
    `κ₁ ∈ ${iv(r.kappa[0])}`,
    `κ₂ ∈ ${iv(r.kappa[1])}`,
    `K  ≤ ${r.k[1].toPrecision(8)}`,
    `homotopy: ${path}`,
  ].join("\n");
});

$("alpha").onclick = () => run("alpha-out", () => {
  const r = JSON.parse(alpha(num("delta"), num("k"), num("l4")));
  if (!r.ok) return `no radius: ${r.reason}\nmax ψ ∈ ${iv(r.psi_max)}`;
  return [
    `α ≤ ${r.alpha.toExponential(5)}`,
    `ᾱ ∈ ${iv(r.alpha_bar)}`,
    `max ψ ∈ ${iv(r.psi_max)}`,
    `contraction constant ≤ ${r.contraction.toPrecision(6)}`,
  ].join("\n");
});
