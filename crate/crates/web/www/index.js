import init, { graph, solve, reduce, PlaySession } from "./pkg/rcg_web.js";

const $ = (id) => document.getElementById(id);

const SAMPLE_INSTANCE = `c two paths; the short one can be cut
p rcg 5 5 1 1
s 1
z 5
a 1 2 1 1
a 2 5 2 1
a 1 3 1 1
a 3 4 3 1
a 4 5 5 1
`;

const SAMPLE_FORMULA = `p cnf 3 3
e 1 0
a 2 0
e 3 0
1 -2 -3 0
-1 2 -3 0
1 -2 3 0
`;

let session = null;

function show(text, isError = false) {
  const out = $("output");
  out.textContent = text;
  out.className = isError ? "err" : "";
}

// Vertices are placed by hop distance from the start, then spread vertically.
function layout(g) {
  const depth = new Array(g.vertices + 1).fill(-1);
  depth[g.start] = 0;
  const queue = [g.start];
  while (queue.length) {
    const v = queue.shift();
    for (const a of g.arcs) {
      if (a.tail === v && depth[a.head] < 0) {
        depth[a.head] = depth[v] + 1;
        queue.push(a.head);
      }
    }
  }
  const maxDepth = Math.max(0, ...depth);
  for (let v = 1; v <= g.vertices; v++) if (depth[v] < 0) depth[v] = maxDepth + 1;
  const columns = new Map();
  for (let v = 1; v <= g.vertices; v++) {
    if (!columns.has(depth[v])) columns.set(depth[v], []);
    columns.get(depth[v]).push(v);
  }
  const canvas = $("canvas");
  const cols = Math.max(...columns.keys()) + 1;
  const pos = [];
  for (const [d, vs] of columns) {
    vs.forEach((v, i) => {
      pos[v] = {
        x: 40 + (cols === 1 ? 0 : (d * (canvas.width - 80)) / (cols - 1)),
        y: ((i + 1) * canvas.height) / (vs.length + 1),
      };
    });
  }
  return pos;
}

// `marks` maps arc id to a colour; `here` is the traveler's vertex.
function draw(g, marks = new Map(), here = g.start) {
  const canvas = $("canvas");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const pos = layout(g);
  const small = g.arcs.length <= 40;
  const seen = new Map();
  ctx.font = "11px monospace";
  for (const a of g.arcs) {
    const p = pos[a.tail], q = pos[a.head];
    // parallel and opposite arcs bend apart
    const key = Math.min(a.tail, a.head) + "-" + Math.max(a.tail, a.head);
    const k = seen.get(key) || 0;
    seen.set(key, k + 1);
    const bend = (k + 1) * 18 * (a.tail < a.head ? 1 : -1);
    const mx = (p.x + q.x) / 2, my = (p.y + q.y) / 2;
    const len = Math.hypot(q.x - p.x, q.y - p.y) || 1;
    const cx = mx - ((q.y - p.y) / len) * bend, cy = my + ((q.x - p.x) / len) * bend;
    ctx.strokeStyle = marks.get(a.id) || "#999";
    ctx.lineWidth = marks.has(a.id) ? 2.5 : 1;
    ctx.beginPath();
    ctx.moveTo(p.x, p.y);
    ctx.quadraticCurveTo(cx, cy, q.x, q.y);
    ctx.stroke();
    // arrow head near the target
    const t = 0.85;
    const ax = (1 - t) * (1 - t) * p.x + 2 * (1 - t) * t * cx + t * t * q.x;
    const ay = (1 - t) * (1 - t) * p.y + 2 * (1 - t) * t * cy + t * t * q.y;
    const ang = Math.atan2(q.y - cy, q.x - cx);
    ctx.beginPath();
    ctx.moveTo(ax, ay);
    ctx.lineTo(ax - 8 * Math.cos(ang - 0.4), ay - 8 * Math.sin(ang - 0.4));
    ctx.lineTo(ax - 8 * Math.cos(ang + 0.4), ay - 8 * Math.sin(ang + 0.4));
    ctx.closePath();
    ctx.fillStyle = ctx.strokeStyle;
    ctx.fill();
    if (small) {
      ctx.fillStyle = "#333";
      ctx.fillText(`a${a.id}@${a.label}`, (mx + cx) / 2 + 3, (my + cy) / 2 - 3);
    }
  }
  for (let v = 1; v <= g.vertices; v++) {
    const p = pos[v];
    ctx.beginPath();
    ctx.arc(p.x, p.y, v === here ? 11 : 8, 0, 2 * Math.PI);
    ctx.fillStyle = v === here ? "#f5c400" : v === g.target ? "#7c7" : v === g.start ? "#79f" : "#fff";
    ctx.fill();
    ctx.strokeStyle = "#333";
    ctx.lineWidth = 1;
    ctx.stroke();
    ctx.fillStyle = "#000";
    ctx.fillText(v === g.start ? "s" : v === g.target ? "z" : String(v), p.x - 4, p.y + 4);
  }
}

function currentGraph() {
  return JSON.parse(graph($("instance").value));
}

function guarded(f) {
  return () => {
    try {
      f();
    } catch (e) {
      show(String(e), true);
    }
  };
}

function renderSession() {
  const v = JSON.parse(session.view());
  const g = currentGraph();
  const marks = new Map();
  for (const a of v.delayed) marks.set(a, "#d33");
  for (const a of v.pending) marks.set(a, "#e80");
  for (const m of v.moves) if (!marks.has(m.arc)) marks.set(m.arc, "#2a2");
  draw(g, marks, v.position);
  $("log").textContent =
    `you are the ${v.human}; traveler at ${v.position}, time ${v.clock}, ${v.remaining} delays left\n\n` +
    v.log.join("\n");
  const controls = $("controls");
  controls.replaceChildren();
  if (v.phase === "move") {
    controls.append("move: ");
    for (const m of v.moves) {
      const b = document.createElement("button");
      b.textContent = `a${m.arc} to ${m.head}, departs ${m.departs}, arrives ${m.arrives}${m.delayed ? " (delayed)" : ""}`;
      b.onclick = guarded(() => {
        session.take(m.arc);
        renderSession();
      });
      controls.append(b);
    }
  } else if (v.phase === "announce") {
    controls.append(`delay up to ${v.max_announce}: `);
    const boxes = v.candidates.map((a) => {
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.value = a;
      label.append(box, ` a${a} `);
      controls.append(label);
      return box;
    });
    const go = document.createElement("button");
    go.textContent = "announce";
    go.onclick = guarded(() => {
      session.announce(Uint32Array.from(boxes.filter((b) => b.checked).map((b) => Number(b.value))));
      renderSession();
    });
    controls.append(go);
  } else {
    const pre = document.createElement("pre");
    pre.textContent = session.transcript();
    controls.append(`game over: ${v.winner} wins. Transcript:`, pre);
  }
}

function startSession(humanTraveler) {
  return guarded(() => {
    if (session) session.free();
    session = new PlaySession($("instance").value, humanTraveler);
    show("");
    renderSession();
  });
}

await init();
$("instance").value = SAMPLE_INSTANCE;
$("formula").value = SAMPLE_FORMULA;
draw(currentGraph());

$("draw").onclick = guarded(() => draw(currentGraph()));
$("solve").onclick = guarded(() => {
  const t0 = performance.now();
  const r = JSON.parse(solve($("instance").value, $("mode").value));
  const ms = (performance.now() - t0).toFixed(1);
  draw(currentGraph());
  show(
    `${r.winner} wins\nstates=${r.states} memo_hits=${r.memo_hits} memo_entries=${r.memo_entries} ` +
      `peak_depth=${r.peak_depth} relevant_times=${r.relevant_times} time=${ms}ms`,
  );
});
$("reduce").onclick = guarded(() => {
  const r = JSON.parse(reduce($("formula").value, $("loose").checked));
  $("instance").value = r.instance;
  draw(currentGraph());
  const truth = r.truth === null ? "unknown" : r.truth;
  show(
    `n=${r.variables} m=${r.clauses} forall=${r.universal} budget=${r.budget} ` +
      `vertices=${r.vertices} arcs=${r.arcs}\nformula value: ${truth}\n\n${r.map}`,
  );
});
$("as-traveler").onclick = startSession(true);
$("as-adversary").onclick = startSession(false);
