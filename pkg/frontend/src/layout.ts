/** Seeded force-directed layout so subgraph drawings are reproducible. */

import type { NetworkEdge, NetworkNode } from "./types.js";

/** mulberry32: tiny deterministic PRNG. */
export function seededRandom(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export interface Point {
  x: number;
  y: number;
}

export function springLayout(
  nodes: NetworkNode[],
  edges: NetworkEdge[],
  seed = 7,
  iterations = 80,
): Map<string, Point> {
  const n = nodes.length;
  const rand = seededRandom(seed);
  const xs = new Float64Array(n);
  const ys = new Float64Array(n);
  for (let i = 0; i < n; i++) {
    xs[i] = rand() * 2 - 1;
    ys[i] = rand() * 2 - 1;
  }
  const index = new Map(nodes.map((node, i) => [node.term, i]));
  const links = edges
    .filter((e) => index.has(e.source) && index.has(e.target))
    .map((e) => ({ i: index.get(e.source)!, j: index.get(e.target)!, w: e.p }));

  if (n > 1) {
    const k = 1 / Math.sqrt(n);
    const dx = new Float64Array(n);
    const dy = new Float64Array(n);
    for (let it = 0; it < iterations; it++) {
      dx.fill(0);
      dy.fill(0);
      for (let i = 0; i < n; i++) {
        for (let j = i + 1; j < n; j++) {
          let ddx = xs[i] - xs[j];
          let ddy = ys[i] - ys[j];
          const dist2 = ddx * ddx + ddy * ddy + 1e-9;
          const f = (k * k) / dist2;
          ddx *= f;
          ddy *= f;
          dx[i] += ddx;
          dy[i] += ddy;
          dx[j] -= ddx;
          dy[j] -= ddy;
        }
      }
      for (const { i, j, w } of links) {
        const ddx = xs[i] - xs[j];
        const ddy = ys[i] - ys[j];
        const dist = Math.sqrt(ddx * ddx + ddy * ddy) + 1e-9;
        const f = ((dist / k) * w) / dist;
        dx[i] -= ddx * f;
        dy[i] -= ddy * f;
        dx[j] += ddx * f;
        dy[j] += ddy * f;
      }
      const step = 0.1 * (1 - it / iterations);
      for (let i = 0; i < n; i++) {
        const len = Math.sqrt(dx[i] * dx[i] + dy[i] * dy[i]) + 1e-9;
        const lim = Math.min(len, step);
        xs[i] += (dx[i] / len) * lim;
        ys[i] += (dy[i] / len) * lim;
      }
    }
  }

  // Normalize into the unit box with a small margin.
  let minX = Infinity, maxX = -Infinity, minY = Infinity, maxY = -Infinity;
  for (let i = 0; i < n; i++) {
    minX = Math.min(minX, xs[i]);
    maxX = Math.max(maxX, xs[i]);
    minY = Math.min(minY, ys[i]);
    maxY = Math.max(maxY, ys[i]);
  }
  const spanX = maxX - minX || 1;
  const spanY = maxY - minY || 1;
  const out = new Map<string, Point>();
  nodes.forEach((node, i) => {
    out.set(node.term, {
      x: 0.05 + 0.9 * ((xs[i] - minX) / spanX),
      y: 0.05 + 0.9 * ((ys[i] - minY) / spanY),
    });
  });
  return out;
}
