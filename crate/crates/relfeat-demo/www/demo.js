import init, { Playground } from "./pkg/relfeat_demo.js";

const canvas = document.getElementById("canvas");
const ctx = canvas.getContext("2d");
const readout = document.getElementById("readout");
const graphInfo = document.getElementById("graphInfo");

const SHELL_COLORS = [
  "#d62728", "#ff7f0e", "#ffbf00", "#2ca02c",
  "#17becf", "#1f77b4", "#9467bd", "#8c564b", "#e377c2",
];
const CLUSTER_COLORS = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
  "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
  "#98df8a", "#ff9896", "#c5b0d5", "#c49c94",
];

let playground = null;
let positions = [];
let edgePairs = [];
let source = 0;

function currentMode() {
  return document.querySelector("input[name=mode]:checked").value;
}

function rebuildGraph() {
  const preset = document.getElementById("preset").value;
  const n = Number(document.getElementById("n").value);
  const seed = Number(document.getElementById("seed").value) >>> 0;
  playground = new Playground(preset, n, seed);
  positions = playground.positions();
  edgePairs = playground.edges();
  source = Math.min(source, playground.node_count() - 1);
  graphInfo.textContent =
    `${playground.node_count()} nodes, ${playground.edge_count()} edges`;
  render();
}

function nodeXY(i) {
  const pad = 14;
  return [
    pad + positions[2 * i] * (canvas.width - 2 * pad),
    pad + positions[2 * i + 1] * (canvas.height - 2 * pad),
  ];
}

function drawGraph(nodeColor, nodeRadius) {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "rgba(120,120,120,0.35)";
  ctx.lineWidth = 1;
  ctx.beginPath();
  for (let e = 0; e < edgePairs.length; e += 2) {
    const [x1, y1] = nodeXY(edgePairs[e]);
    const [x2, y2] = nodeXY(edgePairs[e + 1]);
    ctx.moveTo(x1, y1);
    ctx.lineTo(x2, y2);
  }
  ctx.stroke();
  const n = playground.node_count();
  for (let i = 0; i < n; i++) {
    const [x, y] = nodeXY(i);
    ctx.beginPath();
    ctx.arc(x, y, nodeRadius(i), 0, 2 * Math.PI);
    ctx.fillStyle = nodeColor(i);
    ctx.fill();
    if (i === source && currentMode() !== "clusters") {
      ctx.lineWidth = 2.5;
      ctx.strokeStyle = "#000";
      ctx.stroke();
    }
  }
}

function renderShells() {
  const dmax = Number(document.getElementById("dmax").value);
  const depth = playground.shell_depths(source, dmax);
  const counts = new Map();
  for (const d of depth) {
    if (d > 0) counts.set(d, (counts.get(d) || 0) + 1);
  }
  drawGraph(
    (i) => {
      const d = depth[i];
      if (d === 0) return "#000";
      if (d < 0) return "#ddd";
      return SHELL_COLORS[(d - 1) % SHELL_COLORS.length];
    },
    () => 6,
  );
  let lines = `source node ${source}`;
  for (let d = 1; d <= dmax; d++) {
    lines += `\ndistance ${d}: ${counts.get(d) || 0} node(s)`;
  }
  readout.textContent = lines;
}

function renderRwr() {
  const r = Number(document.getElementById("r").value);
  const heat = playground.rwr_heat(source, r);
  let max = 0;
  for (let i = 0; i < heat.length; i++) {
    if (i !== source) max = Math.max(max, heat[i]);
  }
  const floor = 1e-7;
  drawGraph(
    (i) => {
      if (i === source) return "#000";
      const v = heat[i];
      if (v <= floor || max <= floor) return "#ddd";
      // log scale between the floor and the largest non-source mass
      const t = Math.min(1, Math.log(v / floor) / Math.log(max / floor));
      const hue = 230 - 230 * t;
      return `hsl(${hue}, 85%, ${62 - 18 * t}%)`;
    },
    (i) => (i === source ? 7 : 4 + 4 * Math.min(1, heat[i] / (max || 1))),
  );
  const mass = heat[source];
  readout.textContent =
    `source node ${source}, walk weight r = ${r.toFixed(2)}\n` +
    `probability at source: ${mass.toFixed(4)}\n` +
    `largest mass elsewhere: ${max.toExponential(2)}`;
}

function renderClusters() {
  const c = Number(document.getElementById("c").value);
  const seed = Number(document.getElementById("seed").value) >>> 0;
  const labels = playground.cluster_labels(c, seed);
  const cut = playground.cluster_edge_cut(c, seed);
  const balance = playground.cluster_balance(c, seed);
  drawGraph((i) => CLUSTER_COLORS[labels[i] % CLUSTER_COLORS.length], () => 6);
  readout.textContent =
    `c = ${c} clusters\nedge cut: ${cut}\nbalance: ${balance.toFixed(3)} (cap 1.10)`;
}

function render() {
  if (!playground) return;
  const mode = currentMode();
  document.getElementById("shellControls").style.display =
    mode === "shells" ? "" : "none";
  document.getElementById("rwrControls").style.display =
    mode === "rwr" ? "" : "none";
  document.getElementById("clusterControls").style.display =
    mode === "clusters" ? "" : "none";
  try {
    if (mode === "shells") renderShells();
    else if (mode === "rwr") renderRwr();
    else renderClusters();
  } catch (err) {
    readout.textContent = `error: ${err}`;
  }
}

canvas.addEventListener("click", (event) => {
  const rect = canvas.getBoundingClientRect();
  const x = event.clientX - rect.left;
  const y = event.clientY - rect.top;
  let best = 0;
  let bestDist = Infinity;
  for (let i = 0; i < playground.node_count(); i++) {
    const [nx, ny] = nodeXY(i);
    const d = (nx - x) ** 2 + (ny - y) ** 2;
    if (d < bestDist) {
      bestDist = d;
      best = i;
    }
  }
  source = best;
  render();
});

for (const id of ["preset", "seed"]) {
  document.getElementById(id).addEventListener("change", rebuildGraph);
}
document.getElementById("n").addEventListener("input", () => {
  document.getElementById("nValue").textContent =
    document.getElementById("n").value;
});
document.getElementById("n").addEventListener("change", rebuildGraph);
document.getElementById("dmax").addEventListener("input", () => {
  document.getElementById("dmaxValue").textContent =
    document.getElementById("dmax").value;
  render();
});
document.getElementById("r").addEventListener("input", () => {
  document.getElementById("rValue").textContent =
    Number(document.getElementById("r").value).toFixed(2);
  render();
});
document.getElementById("c").addEventListener("change", render);
for (const radio of document.querySelectorAll("input[name=mode]")) {
  radio.addEventListener("change", render);
}

await init();
rebuildGraph();
