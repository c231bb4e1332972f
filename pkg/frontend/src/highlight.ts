/** Split post text into plain and highlighted segments from tag spans.
 *
 * Spans come from the service verbatim (half-open char offsets into the
 * served text) and are guaranteed non-overlapping; rendering preserves
 * every character of the original text. */

import type { TagSpan, TermClass } from "./types.js";

export interface Segment {
  text: string;
  tag: TagSpan | null;
}

export function segmentText(text: string, tags: TagSpan[]): Segment[] {
  const ordered = [...tags].sort((a, b) => a.start - b.start);
  const segments: Segment[] = [];
  let cursor = 0;
  for (const tag of ordered) {
    if (tag.start < cursor || tag.end > text.length || tag.end <= tag.start) {
      throw new Error(
        `invalid tag span [${tag.start}, ${tag.end}) for text of length ${text.length}`,
      );
    }
    if (tag.start > cursor) {
      segments.push({ text: text.slice(cursor, tag.start), tag: null });
    }
    segments.push({ text: text.slice(tag.start, tag.end), tag });
    cursor = tag.end;
  }
  if (cursor < text.length) {
    segments.push({ text: text.slice(cursor), tag: null });
  }
  return segments;
}

/** Spans recovered from segments; must equal the input tag spans. */
export function spansOf(segments: Segment[]): TagSpan[] {
  const spans: TagSpan[] = [];
  let cursor = 0;
  for (const seg of segments) {
    if (seg.tag) {
      spans.push({ ...seg.tag, start: cursor, end: cursor + seg.text.length });
    }
    cursor += seg.text.length;
  }
  return spans;
}

const escapeHtml = (s: string): string =>
  s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");

/** Deterministic HTML for a post body with class-colored highlights. */
export function highlightHtml(text: string, tags: TagSpan[]): string {
  return segmentText(text, tags)
    .map((seg) =>
      seg.tag
        ? `<mark class="tag tag-${seg.tag.class || "unknown"}" data-term="${escapeHtml(seg.tag.term)}">${escapeHtml(seg.text)}</mark>`
        : escapeHtml(seg.text),
    )
    .join("");
}

export function classOfTerm(term: string, tags: TagSpan[]): TermClass | null {
  const hit = tags.find((t) => t.term === term);
  return hit ? hit.class : null;
}
