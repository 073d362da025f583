import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { BundleError, loadBundle, naturalCompare } from "../src/bundle.js";

const fixture = () =>
  readFileSync(join(__dirname, "fixtures", "arena.json"), "utf-8");

describe("loadBundle", () => {
  it("loads the exported fixture", () => {
    const b = loadBundle(fixture());
    expect(b.version).toBe("arena/1");
    expect(b.graph.vertices.length).toBeGreaterThanOrEqual(10);
    expect(b.initial in b.states).toBe(true);
  });

  it("rejects a wrong version", () => {
    const doc = JSON.parse(fixture());
    doc.version = "arena/2";
    expect(() => loadBundle(JSON.stringify(doc))).toThrowError(BundleError);
  });

  it("rejects a corrupted move with its path", () => {
    const doc = JSON.parse(fixture());
    const key = Object.keys(doc.transitions).sort()[0];
    doc.transitions[key] = [["v0", "definitely-not-adjacent"]];
    try {
      loadBundle(JSON.stringify(doc));
      expect.unreachable();
    } catch (e) {
      expect(e).toBeInstanceOf(BundleError);
      expect((e as BundleError).path).toContain(`$.transitions.${key}`);
    }
  });

  it("rejects states over unknown vertices", () => {
    const doc = JSON.parse(fixture());
    const sid = Object.keys(doc.states).sort()[0];
    doc.states[sid] = ["ghost"];
    expect(() => loadBundle(JSON.stringify(doc))).toThrowError(/unknown vertex/);
  });
});

describe("naturalCompare", () => {
  it("orders solver state ids numerically", () => {
    const ids = ["s10", "s2", "s0", "s1"];
    expect(ids.sort(naturalCompare)).toEqual(["s0", "s1", "s2", "s10"]);
  });
});
