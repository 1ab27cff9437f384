import init, { rectangle_graph, padic_certificate, lattice_profile } from "./pkg/gl2ext_web.js";

const $ = (id) => document.getElementById(id);

function show(out, f) {
  try {
    const v = JSON.parse(f());
    const dot = v.dot;
    delete v.dot;
    out.className = "";
    out.textContent = JSON.stringify(v, null, 2) + (dot ? "\n\n" + dot : "");
  } catch (e) {
    out.className = "error";
    out.textContent = String(e);
  }
}

await init();

$("rect-run").onclick = () =>
  show($("rect-out"), () => rectangle_graph($("rect-omega").value));

$("cert-run").onclick = () =>
  show($("cert-out"), () => {
    const p = Number.parseInt($("cert-p").value, 10);
    if (!Number.isInteger(p) || p < 0) throw "p must be a positive integer";
    return padic_certificate(p, $("cert-roots").value, $("cert-x").checked);
  });

$("prof-run").onclick = () =>
  show($("prof-out"), () =>
    lattice_profile($("prof-lo").value, $("prof-hi").value, $("prof-s").value, $("prof-origin").value, $("prof-t").value));
