/** Pair browsers: top direct pairs and the semi-metric ranking.
 *
 * Tables are rendered row-for-row from the service payloads; clicking a
 * pair pulls up the posts that co-mention it, linking population-level
 * edges back to user-level evidence. */

import type { DirectPairRow, SemimetricRow } from "../types.js";

const esc = (s: string): string =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

const fmt = (x: number): string => x.toFixed(6);

export function directRowCells(row: DirectPairRow): string[] {
  return [row.term_i, row.term_j, row.class_i, row.class_j, fmt(row.p)];
}

export function semimetricRowCells(row: SemimetricRow): string[] {
  return [
    row.term_i,
    row.term_j,
    row.class_i,
    row.class_j,
    row.d_direct === null ? "" : fmt(row.d_direct),
    fmt(row.d_closed),
    row.indirect ? "INDIRECT" : row.ratio === null ? "INF" : fmt(row.ratio),
    fmt(row.p_closed),
  ];
}

const DIRECT_HEADER = ["term", "term", "class", "class", "p"];
const SEMI_HEADER = ["term", "term", "class", "class", "d direct", "d closed", "ratio", "p closed"];

function tableHtml(
  header: string[],
  rows: { cells: string[]; indirect?: boolean; pair: [string, string] }[],
  kind: string,
): string {
  const head = header.map((h) => `<th>${esc(h)}</th>`).join("");
  const body = rows
    .map(
      (r) =>
        `<tr class="pair-row${r.indirect ? " tier-indirect" : ""}" ` +
        `data-term-i="${esc(r.pair[0])}" data-term-j="${esc(r.pair[1])}">` +
        r.cells.map((c) => `<td>${esc(c)}</td>`).join("") +
        `</tr>`,
    )
    .join("");
  return (
    `<table class="pairs-table pairs-${kind}">` +
    `<thead><tr>${head}</tr></thead><tbody>${body}</tbody></table>`
  );
}

export function directTableHtml(rows: DirectPairRow[]): string {
  return tableHtml(
    DIRECT_HEADER,
    rows.map((r) => ({ cells: directRowCells(r), pair: [r.term_i, r.term_j] })),
    "direct",
  );
}

export function semimetricTableHtml(rows: SemimetricRow[]): string {
  return tableHtml(
    SEMI_HEADER,
    rows.map((r) => ({
      cells: semimetricRowCells(r),
      indirect: r.indirect,
      pair: [r.term_i, r.term_j],
    })),
    "semimetric",
  );
}

export function renderPairsTable(
  container: HTMLElement,
  html: string,
  onPairClick: (termI: string, termJ: string) => void,
): void {
  container.innerHTML = html;
  container.querySelectorAll<HTMLElement>(".pair-row").forEach((el) => {
    el.addEventListener("click", () => {
      onPairClick(el.dataset.termI ?? "", el.dataset.termJ ?? "");
    });
  });
}
