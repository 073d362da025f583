import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { loadBundle, naturalCompare } from "../src/bundle.js";
import { DefenseBroken, Engine, randomSession } from "../src/engine.js";

const bundle = () =>
  loadBundle(readFileSync(join(__dirname, "fixtures", "arena.json"), "utf-8"));

describe("Engine", () => {
  it("stays put when the attacked vertex is occupied", () => {
    const e = new Engine(bundle());
    const occupied = [...e.occupied()].sort()[0];
    const turn = e.attack(occupied);
    expect(turn.next).toBe(turn.state);
    expect(turn.moves.every(([a, b]) => a === b)).toBe(true);
  });

  it("moves to the smallest covering neighbor state", () => {
    const b = bundle();
    const e = new Engine(b);
    const occ = e.occupied();
    const target = b.graph.vertices.find((v) => !occ.has(v))!;
    const turn = e.attack(target);
    expect(b.states[turn.next]).toContain(target);
    // no smaller neighbor state also covers the vertex
    const nbrs = b.strategy_edges
      .filter((p) => p.includes(turn.state))
      .map(([x, y]) => (x === turn.state ? y : x))
      .filter((n) => b.states[n].includes(target))
      .sort(naturalCompare);
    expect(turn.next).toBe(nbrs[0]);
  });

  it("undo and reset are exact history replay", () => {
    const e = new Engine(bundle());
    const verts = [...e.bundle.graph.vertices].sort();
    const before = e.current;
    e.attack(verts[3]);
    e.attack(verts[7]);
    const two = e.current;
    e.attack(verts[1]);
    expect(e.undo()).toBe(true);
    expect(e.current).toBe(two);
    expect(e.undo()).toBe(true);
    expect(e.undo()).toBe(true);
    expect(e.current).toBe(before);
    expect(e.undo()).toBe(false);
    e.attack(verts[2]);
    e.reset();
    expect(e.current).toBe(e.bundle.initial);
    expect(e.turns.length).toBe(0);
  });

  it("breaks only on tampered bundles", () => {
    const doc = bundle();
    const victim = Object.keys(doc.states).sort(naturalCompare)[0];
    // strand a vertex: remove it from every state except unreachable ones
    const vertex = doc.states[victim][0];
    for (const sid of Object.keys(doc.states)) {
      doc.states[sid] = doc.states[sid].filter((v) => v !== vertex);
    }
    const e = new Engine(doc);
    expect(() => e.attack(vertex)).toThrowError(DefenseBroken);
  });

  it("survives a scripted 1000-attack session", () => {
    const e = new Engine(bundle());
    const turns = randomSession(e, 1000, 99);
    expect(turns.length).toBe(1000);
  });
});
