/** Interactive query panel: ranked answers plus a subgraph of the query
 * set and its top answers. Clicking an answer adds it to the query set,
 * which is the feedback loop that makes the console interactive. */

import { springLayout } from "../layout.js";
import type { NetworkEdge, NetworkNode, QueryResponse, QueryState } from "../types.js";
import { CLASS_COLORS } from "../types.js";

const esc = (s: string): string =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

export function answerListHtml(response: QueryResponse | null): string {
  if (!response) {
    return `<p class="hint">Pick one or more vocabulary terms and run a query.</p>`;
  }
  const items = response.answers
    .map(
      (a) =>
        `<li class="answer" data-term="${esc(a.term)}">` +
        `<span class="dot" style="background:${CLASS_COLORS[a.class]}"></span>` +
        `<span class="answer-term">${esc(a.term)}</span>` +
        `<span class="answer-score">${a.score.toFixed(6)}</span></li>`,
    )
    .join("");
  const meta = response.graph_meta;
  return (
    `<p class="query-meta">${meta.graph} graph, phi=${meta.phi}, alpha=${meta.alpha}, ` +
    `${response.answers.length} answers</p>` +
    `<ol class="answers">${items}</ol>`
  );
}

export function chipListHtml(query: QueryState): string {
  return query.terms
    .map((t) => `<span class="chip" data-term="${esc(t)}">${esc(t)} <a class="chip-x">x</a></span>`)
    .join("");
}

/** Induced subgraph of Q plus the top answers, drawn with a seeded layout. */
export function subgraphSvg(
  queryTerms: string[],
  response: QueryResponse | null,
  network: { nodes: NetworkNode[]; edges: NetworkEdge[] },
  minWeight: number,
  topAnswers = 8,
  size = 420,
  seed = 7,
): string {
  const keep = new Set(queryTerms);
  for (const a of (response?.answers ?? []).slice(0, topAnswers)) keep.add(a.term);
  const nodes = network.nodes.filter((n) => keep.has(n.term));
  const edges = network.edges.filter(
    (e) => keep.has(e.source) && keep.has(e.target) && e.p >= minWeight,
  );
  const pos = springLayout(nodes, edges, seed);
  const sx = (t: string): string => ((pos.get(t)?.x ?? 0.5) * size).toFixed(1);
  const sy = (t: string): string => ((pos.get(t)?.y ?? 0.5) * size).toFixed(1);
  const lines = edges
    .map(
      (e) =>
        `<line x1="${sx(e.source)}" y1="${sy(e.source)}" x2="${sx(e.target)}" y2="${sy(e.target)}" ` +
        `stroke="#999" stroke-width="${(0.5 + 2 * e.p).toFixed(2)}" opacity="${(0.3 + 0.7 * e.p).toFixed(2)}">` +
        `<title>p=${e.p}</title></line>`,
    )
    .join("");
  const circles = nodes
    .map(
      (n) =>
        `<g class="net-node" data-term="${esc(n.term)}">` +
        `<circle cx="${sx(n.term)}" cy="${sy(n.term)}" r="${keep.has(n.term) && queryTerms.includes(n.term) ? 9 : 6}" ` +
        `fill="${CLASS_COLORS[n.class]}" stroke="${queryTerms.includes(n.term) ? "#000" : "none"}"/>` +
        `<text x="${sx(n.term)}" y="${sy(n.term)}" dy="-10" text-anchor="middle">${esc(n.term)}</text></g>`,
    )
    .join("");
  return (
    `<svg viewBox="0 0 ${size} ${size}" width="${size}" height="${size}" class="subgraph">` +
    `${lines}${circles}</svg>`
  );
}
