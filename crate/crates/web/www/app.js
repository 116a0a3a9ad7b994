import init, { invariants, check_plane, multseq } from "./pkg/planebranch_web.js";

const el = (id) => document.getElementById(id);

function escape(s) {
  return String(s).replace(/[&<>]/g, (c) => ({ "&": "&amp;", "<": "&lt;", ">": "&gt;" })[c]);
}

function verdict(ok, text) {
  return `<p class="verdict ${ok ? "yes" : "no"}">${escape(text)}</p>`;
}

function runs(seq) {
  if (seq.runs.length === 0) return "1";
  return seq.runs.map(([e, c]) => (c === 1 ? `${e}` : `${e}^${c}`)).join(",");
}

function show(target, v, summary) {
  const head = v.error ? verdict(false, `${v.error}: ${v.reason}`) : summary(v);
  el(target).innerHTML = head + `<pre>${escape(JSON.stringify(v, null, 2))}</pre>`;
}

function branchSummary(v) {
  const s = v.semigroup;
  const lines = [
    `semigroup <${s.generators.join(",")}>, conductor ${s.conductor}, ${s.genus} gaps`,
    `multiplicity sequence ${runs(v.multiplicity_sequence)}`,
    `generating function ${v.generating_function.text}`,
  ];
  return `<p>${lines.map(escape).join("<br>")}</p>`;
}

function planeSummary(v) {
  const text = v.plane ? "plane" : `not plane: ${v.reason}`;
  return verdict(v.plane, text) +
    `<p>descent chain ${escape(v.iterative_criterion.chain.join(","))}</p>`;
}

function sequenceSummary(v) {
  if (v.plane_admissible) {
    return verdict(true, `plane admissible, semigroup <${v.semigroup.join(",")}>`);
  }
  return verdict(false, v.reason ?? "not admissible for a branch");
}

const ops = {
  branch: [invariants, branchSummary],
  semigroup: [check_plane, planeSummary],
  sequence: [multseq, sequenceSummary],
};

await init();

for (const [name, [fn, summary]] of Object.entries(ops)) {
  const run = () => show(`out-${name}`, JSON.parse(fn(el(name).value)), summary);
  el(`run-${name}`).addEventListener("click", run);
  el(name).addEventListener("keydown", (e) => e.key === "Enter" && run());
  run();
}

for (const a of document.querySelectorAll(".examples a")) {
  a.addEventListener("click", () => {
    el(a.dataset.for).value = a.textContent;
    el(`run-${a.dataset.for}`).click();
  });
}
