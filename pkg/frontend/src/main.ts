/** Attack arena page: load a bundle, click vertices, watch the guards. */

import { loadBundle, ArenaBundle } from "./bundle.js";
import { DefenseBroken, Engine, Turn } from "./engine.js";
import { layout, Point } from "./layout.js";

const SVG = "http://www.w3.org/2000/svg";
const GUARD_COLOR = "#8a2be2"; // the familiar purple tokens

interface Ui {
  engine: Engine;
  positions: Map<string, Point>;
  svg: SVGSVGElement;
  tokens: Map<string, SVGCircleElement>;
  busy: boolean;
}

let ui: Ui | null = null;

function el<K extends keyof HTMLElementTagNameMap>(tag: K, attrs: Record<string, string> = {}) {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  return node;
}

function statusLine(text: string, broken = false) {
  const bar = document.getElementById("status")!;
  bar.textContent = text;
  bar.className = broken ? "broken" : "";
}

function appendLog(turn: Turn) {
  const log = document.getElementById("log")!;
  const row = el("div");
  row.textContent = `#${ui!.engine.turns.length} attack ${turn.attack}: ${turn.state} -> ${turn.next}`;
  log.prepend(row);
}

function redrawLog() {
  const log = document.getElementById("log")!;
  log.textContent = "";
  ui!.engine.turns.forEach((t, i) => {
    const row = el("div");
    row.textContent = `#${i + 1} attack ${t.attack}: ${t.state} -> ${t.next}`;
    log.prepend(row);
  });
}

function drawBoard(bundle: ArenaBundle) {
  const host = document.getElementById("board")!;
  host.textContent = "";
  const svg = document.createElementNS(SVG, "svg");
  svg.setAttribute("viewBox", "0 0 800 560");
  const positions = layout(bundle.graph, 800, 560);
  for (const [a, b] of bundle.graph.edges) {
    const line = document.createElementNS(SVG, "line");
    const pa = positions.get(a)!;
    const pb = positions.get(b)!;
    line.setAttribute("x1", String(pa.x));
    line.setAttribute("y1", String(pa.y));
    line.setAttribute("x2", String(pb.x));
    line.setAttribute("y2", String(pb.y));
    line.setAttribute("stroke", "#999");
    svg.appendChild(line);
  }
  const tokens = new Map<string, SVGCircleElement>();
  for (const v of bundle.graph.vertices) {
    const p = positions.get(v)!;
    const spot = document.createElementNS(SVG, "circle");
    spot.setAttribute("cx", String(p.x));
    spot.setAttribute("cy", String(p.y));
    spot.setAttribute("r", "14");
    spot.setAttribute("fill", "#f4f4f4");
    spot.setAttribute("stroke", "#444");
    spot.addEventListener("click", () => onAttack(v));
    svg.appendChild(spot);
    const label = document.createElementNS(SVG, "text");
    label.setAttribute("x", String(p.x));
    label.setAttribute("y", String(p.y - 18));
    label.setAttribute("text-anchor", "middle");
    label.setAttribute("font-size", "11");
    label.textContent = v;
    svg.appendChild(label);
    const token = document.createElementNS(SVG, "circle");
    token.setAttribute("cx", String(p.x));
    token.setAttribute("cy", String(p.y));
    token.setAttribute("r", "9");
    token.setAttribute("fill", GUARD_COLOR);
    token.setAttribute("visibility", "hidden");
    token.style.transition = "cx 0.45s, cy 0.45s";
    svg.appendChild(token);
    tokens.set(v, token);
  }
  host.appendChild(svg);
  ui = { engine: new Engine(bundle), positions, svg: svg as SVGSVGElement, tokens, busy: false };
  placeGuards();
  statusLine(`loaded: ${bundle.graph.vertices.length} vertices, initial state ${bundle.initial}`);
}

function placeGuards() {
  const occ = ui!.engine.occupied();
  for (const [v, token] of ui!.tokens) {
    token.setAttribute("visibility", occ.has(v) ? "visible" : "hidden");
    const p = ui!.positions.get(v)!;
    token.setAttribute("cx", String(p.x));
    token.setAttribute("cy", String(p.y));
  }
}

function animate(turn: Turn, done: () => void) {
  // slide each moving token along its edge, then snap the board
  const moving = turn.moves.filter(([a, b]) => a !== b);
  for (const [a, b] of moving) {
    const token = ui!.tokens.get(a);
    const target = ui!.positions.get(b)!;
    if (token) {
      token.setAttribute("cx", String(target.x));
      token.setAttribute("cy", String(target.y));
    }
  }
  window.setTimeout(() => {
    placeGuards();
    done();
  }, 480);
}

function onAttack(vertex: string) {
  if (!ui || ui.busy) return;
  ui.busy = true;
  let turn: Turn;
  try {
    turn = ui.engine.attack(vertex);
  } catch (e) {
    if (e instanceof DefenseBroken) {
      statusLine(`DEFENSE BROKEN: attack on ${e.attack} from ${e.state}`, true);
      ui.busy = false;
      return;
    }
    throw e;
  }
  appendLog(turn);
  statusLine(`turn ${ui.engine.turns.length}: state ${turn.next}`);
  animate(turn, () => {
    ui!.busy = false;
  });
}

function wireControls() {
  document.getElementById("file")!.addEventListener("change", (ev) => {
    const input = ev.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    file.text().then((text) => {
      try {
        drawBoard(loadBundle(text));
      } catch (e) {
        statusLine(`rejected bundle: ${e}`, true);
      }
    });
  });
  document.getElementById("undo")!.addEventListener("click", () => {
    if (!ui || ui.busy) return;
    if (ui.engine.undo()) {
      placeGuards();
      redrawLog();
      statusLine(`undid a turn; state ${ui.engine.current}`);
    }
  });
  document.getElementById("reset")!.addEventListener("click", () => {
    if (!ui || ui.busy) return;
    ui.engine.reset();
    placeGuards();
    redrawLog();
    statusLine(`reset to ${ui.engine.current}`);
  });
  document.getElementById("export-log")!.addEventListener("click", () => {
    if (!ui) return;
    const blob = new Blob([JSON.stringify(ui.engine.exportLog(), null, 1)], {
      type: "application/json",
    });
    const a = el("a", { download: "attack-log.json" }) as HTMLAnchorElement;
    a.href = URL.createObjectURL(blob);
    a.click();
  });
}

wireControls();
