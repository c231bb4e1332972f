/** App wiring: one page with a timeline panel, pair browsers, and the
 * interactive query console, all driven by the termnet service. */

import { ApiClient, ApiError } from "./api.js";
import { QuerySession, initialState } from "./state.js";
import type { NetworkPayload, PostPayload, ResolutionName } from "./types.js";
import { detailHtml, renderTimeline, renderTimelineError } from "./views/timeline.js";
import { directTableHtml, renderPairsTable, semimetricTableHtml } from "./views/pairs.js";
import { answerListHtml, chipListHtml, subgraphSvg } from "./views/query.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function apiBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  return fromQuery ?? "http://127.0.0.1:8765";
}

async function start(): Promise<void> {
  const client = new ApiClient(apiBase());
  const session = new QuerySession(client, initialState("day"));
  let network: NetworkPayload | null = null;

  const statusEl = el<HTMLElement>("status");
  const fail = (err: unknown): void => {
    statusEl.textContent =
      err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
  };

  // Vocabulary + autocomplete.
  try {
    const terms = await client.terms();
    session.setVocabulary(terms.terms.map((t) => t.term));
    const datalist = el<HTMLDataListElement>("vocab");
    datalist.innerHTML = terms.terms
      .map((t) => `<option value="${t.term}">${t.term} (${t.class}, ${t.count})</option>`)
      .join("");
    statusEl.textContent = `${terms.terms.length} vocabulary terms loaded`;
  } catch (err) {
    fail(err);
    return;
  }

  const resolution = (): ResolutionName => session.state.resolution;

  const refreshNetwork = async (): Promise<void> => {
    try {
      network = await client.network(resolution(), 0.0);
    } catch {
      network = null;
    }
  };
  await refreshNetwork();

  // --- query console ---------------------------------------------------
  const answersEl = el<HTMLElement>("answers");
  const chipsEl = el<HTMLElement>("query-chips");
  const subgraphEl = el<HTMLElement>("subgraph");

  const renderQuery = (): void => {
    chipsEl.innerHTML = chipListHtml(session.state.query);
    chipsEl.querySelectorAll<HTMLElement>(".chip").forEach((chip) => {
      chip.querySelector(".chip-x")?.addEventListener("click", () => {
        session.removeTerm(chip.dataset.term ?? "");
        void runQuery();
      });
    });
    answersEl.innerHTML = answerListHtml(session.lastResponse);
    answersEl.querySelectorAll<HTMLElement>(".answer").forEach((item) => {
      item.addEventListener("click", () => {
        if (session.addTerm(item.dataset.term ?? "")) void runQuery();
      });
    });
    const minWeight = session.state.networkFilter.minWeight;
    subgraphEl.innerHTML = network
      ? subgraphSvg(session.state.query.terms, session.lastResponse, network, minWeight)
      : "";
  };

  const runQuery = async (): Promise<void> => {
    try {
      await session.run();
      statusEl.textContent = "";
    } catch (err) {
      fail(err);
    }
    renderQuery();
  };

  el<HTMLButtonElement>("add-term").addEventListener("click", () => {
    const input = el<HTMLInputElement>("term-input");
    if (session.addTerm(input.value.trim())) {
      input.value = "";
      void runQuery();
    } else {
      statusEl.textContent = `"${input.value}" is not in the vocabulary`;
    }
  });
  el<HTMLSelectElement>("phi").addEventListener("change", (ev) => {
    session.setPhi((ev.target as HTMLSelectElement).value as never);
    void runQuery();
  });
  el<HTMLInputElement>("alpha").addEventListener("change", (ev) => {
    session.setAlpha(Number((ev.target as HTMLInputElement).value));
    void runQuery();
  });
  el<HTMLSelectElement>("graph-choice").addEventListener("change", (ev) => {
    session.setGraph((ev.target as HTMLSelectElement).value as never);
    void runQuery();
  });

  // --- timeline panel ----------------------------------------------------
  const timelineEl = el<HTMLElement>("timeline");
  const detailEl = el<HTMLElement>("post-detail");
  const showTimeline = async (userId: string): Promise<void> => {
    try {
      const payload = await client.timeline(userId);
      session.selectUser(userId);
      renderTimeline(timelineEl, payload, (post: PostPayload) => {
        detailEl.innerHTML = detailHtml(post);
      });
    } catch (err) {
      renderTimelineError(
        timelineEl,
        err instanceof ApiError ? err.message : String(err),
      );
    }
  };
  el<HTMLButtonElement>("load-user").addEventListener("click", () => {
    void showTimeline(el<HTMLInputElement>("user-input").value.trim());
  });

  // --- pair browsers -------------------------------------------------------
  const evidenceEl = el<HTMLElement>("pair-evidence");
  const showEvidence = async (termI: string, termJ: string): Promise<void> => {
    try {
      const found = await client.searchPosts(termI, 200);
      const both = found.posts.filter((p) => p.tags.some((t) => t.term === termJ));
      evidenceEl.innerHTML =
        `<h3>${termI} + ${termJ}: ${both.length} co-mentioning posts</h3>` +
        both.map((p) => detailHtml(p)).join("");
    } catch (err) {
      fail(err);
    }
  };

  const loadPairs = async (): Promise<void> => {
    try {
      const direct = await client.directPairs({ resolution: resolution(), k: 25 });
      renderPairsTable(el("pairs-direct"), directTableHtml(direct.rows), showEvidence);
    } catch (err) {
      fail(err);
    }
    try {
      const semi = await client.semimetricPairs({ resolution: resolution(), k: 25 });
      renderPairsTable(el("pairs-semimetric"), semimetricTableHtml(semi.rows), showEvidence);
    } catch {
      el("pairs-semimetric").innerHTML = `<p class="hint">closure not built for this resolution</p>`;
    }
  };
  await loadPairs();

  el<HTMLSelectElement>("resolution").addEventListener("change", async (ev) => {
    session.state = { ...session.state, resolution: (ev.target as HTMLSelectElement).value as ResolutionName };
    await refreshNetwork();
    await loadPairs();
    void runQuery();
  });

  renderQuery();
}

window.addEventListener("DOMContentLoaded", () => {
  void start();
});
