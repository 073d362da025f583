/** Board layout: cycles pinned to circles, trees relaxed around them. */

export interface Point {
  x: number;
  y: number;
}

interface LayoutInput {
  vertices: string[];
  edges: [string, string][];
}

function cyclesOf(input: LayoutInput): string[][] {
  // DFS cycle extraction; on a cactus every back edge closes one cycle
  const adj = new Map<string, string[]>();
  for (const v of input.vertices) adj.set(v, []);
  for (const [a, b] of input.edges) {
    adj.get(a)!.push(b);
    adj.get(b)!.push(a);
  }
  const parent = new Map<string, string | null>();
  const order: string[] = [];
  const cycles: string[][] = [];
  const seen = new Set<string>();
  const start = [...input.vertices].sort()[0];
  const stack: [string, string | null][] = [[start, null]];
  while (stack.length) {
    const [v, p] = stack.pop()!;
    if (seen.has(v)) continue;
    seen.add(v);
    parent.set(v, p);
    order.push(v);
    for (const w of [...adj.get(v)!].sort().reverse()) {
      if (!seen.has(w)) {
        stack.push([w, v]);
      } else if (w !== p) {
        const path = [v];
        let cur: string | null = v;
        while (cur && cur !== w) {
          cur = parent.get(cur) ?? null;
          if (cur) path.push(cur);
        }
        if (cur === w && path.length >= 3) cycles.push(path);
      }
    }
  }
  return cycles;
}

export function layout(input: LayoutInput, width: number, height: number): Map<string, Point> {
  const pos = new Map<string, Point>();
  const n = input.vertices.length;
  const sorted = [...input.vertices].sort();
  sorted.forEach((v, i) => {
    const angle = (2 * Math.PI * i) / n;
    pos.set(v, {
      x: width / 2 + 0.35 * width * Math.cos(angle),
      y: height / 2 + 0.35 * height * Math.sin(angle),
    });
  });
  const pinned = new Set<string>();
  const cycles = cyclesOf(input);
  // spread cycle centers, pin members to their circle
  cycles.forEach((cycle, ci) => {
    const cx = width / 2 + (ci - (cycles.length - 1) / 2) * (width / (cycles.length + 1));
    const cy = height / 2;
    const r = Math.min(width, height) / (3 + cycles.length);
    cycle.forEach((v, i) => {
      if (pinned.has(v)) return;
      const angle = (2 * Math.PI * i) / cycle.length;
      pos.set(v, { x: cx + r * Math.cos(angle), y: cy + r * Math.sin(angle) });
      pinned.add(v);
    });
  });
  // relax the rest toward their neighbors a few rounds
  const adj = new Map<string, string[]>();
  for (const v of input.vertices) adj.set(v, []);
  for (const [a, b] of input.edges) {
    adj.get(a)!.push(b);
    adj.get(b)!.push(a);
  }
  for (let round = 0; round < 60; round++) {
    for (const v of sorted) {
      if (pinned.has(v)) continue;
      const ns = adj.get(v)!;
      if (!ns.length) continue;
      let x = 0;
      let y = 0;
      for (const w of ns) {
        x += pos.get(w)!.x;
        y += pos.get(w)!.y;
      }
      x /= ns.length;
      y /= ns.length;
      // keep a margin from the anchor so leaves fan out
      const dx = x - width / 2;
      const dy = y - height / 2;
      const len = Math.hypot(dx, dy) || 1;
      pos.set(v, {
        x: x + (dx / len) * 40,
        y: y + (dy / len) * 40,
      });
    }
  }
  // nudge overlapping vertices apart
  for (let round = 0; round < 30; round++) {
    for (const v of sorted) {
      for (const w of sorted) {
        if (v >= w) continue;
        const pv = pos.get(v)!;
        const pw = pos.get(w)!;
        const d = Math.hypot(pv.x - pw.x, pv.y - pw.y);
        if (d < 28) {
          const push = (28 - d) / 2 + 1;
          const ux = (pv.x - pw.x) / (d || 1);
          const uy = (pv.y - pw.y) / (d || 1);
          if (!pinned.has(v)) pos.set(v, { x: pv.x + ux * push, y: pv.y + uy * push });
          if (!pinned.has(w)) pos.set(w, { x: pw.x - ux * push, y: pw.y - uy * push });
        }
      }
    }
  }
  return pos;
}
