/** Timeline view: posts in time order with class-colored dictionary
 * matches, a per-day frequency chart, and a post detail panel. */

import { frequencySvg } from "../chart.js";
import { highlightHtml } from "../highlight.js";
import type { PostPayload, TimelinePayload } from "../types.js";

const esc = (s: string): string =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

export function postHtml(post: PostPayload): string {
  const when = post.timestamp.replace("T", " ").replace("Z", " UTC");
  return (
    `<article class="post" data-post-id="${esc(post.post_id)}">` +
    `<header class="post-meta">${esc(when)}</header>` +
    `<p class="post-body">${highlightHtml(post.text, post.tags)}</p>` +
    `</article>`
  );
}

export function timelineHtml(payload: TimelinePayload): string {
  const posts = payload.posts.map(postHtml).join("");
  return (
    `<section class="timeline" data-user="${esc(payload.user_id)}">` +
    `<h2>${esc(payload.user_id)} <small>(${payload.posts.length} posts)</small></h2>` +
    frequencySvg(payload.daily_counts) +
    `<div class="posts">${posts}</div>` +
    `</section>`
  );
}

export function detailHtml(post: PostPayload): string {
  const rows = post.tags
    .map(
      (t) =>
        `<tr><td>${esc(t.term)}</td><td>${esc(t.class)}</td><td>[${t.start}, ${t.end})</td></tr>`,
    )
    .join("");
  return (
    `<div class="post-detail">` +
    `<h3>${esc(post.post_id)}</h3>` +
    `<p>${highlightHtml(post.text, post.tags)}</p>` +
    `<table class="detail-tags"><thead><tr><th>term</th><th>class</th><th>span</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>` +
    `</div>`
  );
}

export function renderTimeline(
  container: HTMLElement,
  payload: TimelinePayload,
  onPostClick: (post: PostPayload) => void,
): void {
  container.innerHTML = timelineHtml(payload);
  const byId = new Map(payload.posts.map((p) => [p.post_id, p]));
  container.querySelectorAll<HTMLElement>(".post").forEach((el) => {
    el.addEventListener("click", () => {
      const post = byId.get(el.dataset.postId ?? "");
      if (post) onPostClick(post);
    });
  });
}

export function renderTimelineError(container: HTMLElement, message: string): void {
  // Inline error: the rest of the view keeps its state.
  container.innerHTML = `<p class="inline-error">${esc(message)}</p>`;
}
