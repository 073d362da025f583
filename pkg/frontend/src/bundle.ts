/** Arena bundle parsing and validation (schema "arena/1"). */

export type Move = [string, string];

export interface ArenaBundle {
  version: string;
  graph: { vertices: string[]; edges: [string, string][] };
  states: Record<string, string[]>;
  strategy_edges: [string, string][];
  transitions: Record<string, Move[]>;
  initial: string;
}

export class BundleError extends Error {
  constructor(message: string, public path: string) {
    super(`${path}: ${message}`);
  }
}

function isPair(x: unknown): x is [string, string] {
  return Array.isArray(x) && x.length === 2 && x.every((t) => typeof t === "string");
}

/** Parse and validate a bundle; throws BundleError with a JSON-ish path. */
export function loadBundle(text: string): ArenaBundle {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (e) {
    throw new BundleError(`not JSON: ${e}`, "$");
  }
  const b = doc as ArenaBundle;
  if (b.version !== "arena/1") {
    throw new BundleError(`unsupported version ${String(b.version)}`, "$.version");
  }
  if (!b.graph || !Array.isArray(b.graph.vertices) || !Array.isArray(b.graph.edges)) {
    throw new BundleError("missing graph", "$.graph");
  }
  const verts = new Set(b.graph.vertices);
  const adjacency = new Map<string, Set<string>>();
  for (const v of verts) adjacency.set(v, new Set());
  b.graph.edges.forEach((e, i) => {
    if (!isPair(e) || !verts.has(e[0]) || !verts.has(e[1])) {
      throw new BundleError("edge references unknown vertex", `$.graph.edges[${i}]`);
    }
    adjacency.get(e[0])!.add(e[1]);
    adjacency.get(e[1])!.add(e[0]);
  });
  if (!b.states || typeof b.states !== "object") {
    throw new BundleError("missing states", "$.states");
  }
  for (const [sid, occ] of Object.entries(b.states)) {
    for (const v of occ) {
      if (!verts.has(v)) {
        throw new BundleError(`state occupies unknown vertex ${v}`, `$.states.${sid}`);
      }
    }
  }
  b.strategy_edges.forEach((e, i) => {
    if (!isPair(e) || !(e[0] in b.states) || !(e[1] in b.states)) {
      throw new BundleError("strategy edge references unknown state", `$.strategy_edges[${i}]`);
    }
  });
  for (const [key, moves] of Object.entries(b.transitions)) {
    const parts = key.split("->");
    if (parts.length !== 2 || !(parts[0] in b.states) || !(parts[1] in b.states)) {
      throw new BundleError("bad transition key", `$.transitions.${key}`);
    }
    moves.forEach((m, i) => {
      if (!isPair(m)) {
        throw new BundleError("bad move", `$.transitions.${key}[${i}]`);
      }
      const [a, c] = m;
      if (a !== c && !adjacency.get(a)?.has(c)) {
        throw new BundleError(`move (${a},${c}) is not along an edge`, `$.transitions.${key}[${i}]`);
      }
    });
  }
  if (!(b.initial in b.states)) {
    throw new BundleError("initial state missing", "$.initial");
  }
  return b;
}

/** Natural ordering matching the solver's state ids (s0, s1, ..., s10). */
export function naturalCompare(a: string, b: string): number {
  const split = (s: string) => s.split(/(\d+)/).filter((t) => t.length > 0);
  const xs = split(a);
  const ys = split(b);
  for (let i = 0; i < Math.max(xs.length, ys.length); i++) {
    const x = xs[i] ?? "";
    const y = ys[i] ?? "";
    const nx = /^\d+$/.test(x) ? parseInt(x, 10) : null;
    const ny = /^\d+$/.test(y) ? parseInt(y, 10) : null;
    if (nx !== null && ny !== null) {
      if (nx !== ny) return nx - ny;
    } else if (x !== y) {
      return x < y ? -1 : 1;
    }
  }
  return 0;
}
