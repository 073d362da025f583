/** Defense engine: the same smallest-state response policy as the solver,
 * plus pure history so undo is exact replay. */

import { ArenaBundle, Move, naturalCompare } from "./bundle.js";

export interface Turn {
  state: string;
  attack: string;
  moves: Move[];
  next: string;
}

export class DefenseBroken extends Error {
  constructor(public attack: string, public state: string) {
    super(`no response to an attack on ${attack} from ${state}`);
  }
}

export class Engine {
  readonly bundle: ArenaBundle;
  private neighbors = new Map<string, string[]>();
  private log: Turn[] = [];

  constructor(bundle: ArenaBundle) {
    this.bundle = bundle;
    for (const sid of Object.keys(bundle.states)) this.neighbors.set(sid, []);
    for (const [a, b] of bundle.strategy_edges) {
      this.neighbors.get(a)!.push(b);
      this.neighbors.get(b)!.push(a);
    }
    for (const [sid, ns] of this.neighbors) {
      this.neighbors.set(sid, [...new Set(ns)].sort(naturalCompare));
    }
  }

  get current(): string {
    return this.log.length ? this.log[this.log.length - 1].next : this.bundle.initial;
  }

  get turns(): readonly Turn[] {
    return this.log;
  }

  occupied(state = this.current): Set<string> {
    return new Set(this.bundle.states[state]);
  }

  /** One orientation of a transition is stored; derive the other on demand. */
  movesBetween(from: string, to: string): Move[] {
    const fwd = this.bundle.transitions[`${from}->${to}`];
    if (fwd) return fwd;
    const rev = this.bundle.transitions[`${to}->${from}`];
    if (rev) return rev.map(([a, b]) => [b, a] as Move);
    return [];
  }

  /** Defender's reply; stationary turn when the attack is already covered. */
  attack(vertex: string): Turn {
    const state = this.current;
    const occ = this.occupied(state);
    let turn: Turn;
    if (occ.has(vertex)) {
      turn = {
        state,
        attack: vertex,
        moves: [...occ].sort().map((v) => [v, v] as Move),
        next: state,
      };
    } else {
      const target = (this.neighbors.get(state) ?? []).find((n) =>
        this.bundle.states[n].includes(vertex),
      );
      if (target === undefined) {
        throw new DefenseBroken(vertex, state);
      }
      turn = { state, attack: vertex, moves: this.movesBetween(state, target), next: target };
    }
    this.log.push(turn);
    return turn;
  }

  undo(): boolean {
    return this.log.pop() !== undefined;
  }

  reset(): void {
    this.log = [];
  }

  /** Attack log for replay through the solver's simulate command. */
  exportLog(): { attacks: string[]; states: string[] } {
    return {
      attacks: this.log.map((t) => t.attack),
      states: this.log.map((t) => t.next),
    };
  }
}

/** Deterministic 32-bit generator so scripted sessions are reproducible. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function randomSession(engine: Engine, attacks: number, seed: number): Turn[] {
  const rng = mulberry32(seed);
  const verts = [...engine.bundle.graph.vertices].sort();
  const out: Turn[] = [];
  for (let i = 0; i < attacks; i++) {
    const v = verts[Math.floor(rng() * verts.length)];
    out.push(engine.attack(v));
  }
  return out;
}
