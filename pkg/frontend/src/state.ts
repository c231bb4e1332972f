/** Explorer view state and the query session driver.
 *
 * Concurrent requests are allowed; every dispatch carries a sequence
 * number and responses that arrive after a newer dispatch are discarded,
 * so the rendered answers always belong to the latest query. */

import type { ApiClient } from "./api.js";
import type { GraphKind, PhiName, QueryResponse, ResolutionName } from "./types.js";

export interface QueryState {
  terms: string[];
  phi: PhiName;
  alpha: number;
  graph: GraphKind;
}

export interface NetworkFilter {
  minWeight: number;
  classes: string | null;
}

export interface ViewState {
  resolution: ResolutionName;
  selectedUser: string | null;
  query: QueryState;
  networkFilter: NetworkFilter;
  history: string[];
}

export function initialState(resolution: ResolutionName = "day"): ViewState {
  return {
    resolution,
    selectedUser: null,
    query: { terms: [], phi: "min", alpha: 0.05, graph: "direct" },
    networkFilter: { minWeight: 0.05, classes: null },
    history: [],
  };
}

export type StateListener = (state: ViewState) => void;

export class QuerySession {
  readonly client: ApiClient;
  state: ViewState;
  lastResponse: QueryResponse | null = null;
  /** Vocabulary from /terms; query terms must come from here. */
  vocabulary: Set<string> = new Set();
  private seq = 0;
  private applied = 0;
  private listeners: StateListener[] = [];

  constructor(client: ApiClient, state?: ViewState) {
    this.client = client;
    this.state = state ?? initialState();
  }

  onChange(listener: StateListener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const l of this.listeners) l(this.state);
  }

  setVocabulary(terms: Iterable<string>): void {
    this.vocabulary = new Set(terms);
  }

  /** Add a vocabulary term to Q (answer click or autocomplete pick). */
  addTerm(term: string): boolean {
    if (!this.vocabulary.has(term) || this.state.query.terms.includes(term)) {
      return false;
    }
    this.state = {
      ...this.state,
      query: { ...this.state.query, terms: [...this.state.query.terms, term] },
      history: [...this.state.history, `+${term}`],
    };
    this.emit();
    return true;
  }

  removeTerm(term: string): void {
    this.state = {
      ...this.state,
      query: {
        ...this.state.query,
        terms: this.state.query.terms.filter((t) => t !== term),
      },
      history: [...this.state.history, `-${term}`],
    };
    this.emit();
  }

  setGraph(graph: GraphKind): void {
    this.state = { ...this.state, query: { ...this.state.query, graph } };
    this.emit();
  }

  setPhi(phi: PhiName): void {
    this.state = { ...this.state, query: { ...this.state.query, phi } };
    this.emit();
  }

  setAlpha(alpha: number): void {
    this.state = { ...this.state, query: { ...this.state.query, alpha } };
    this.emit();
  }

  selectUser(userId: string | null): void {
    this.state = { ...this.state, selectedUser: userId };
    this.emit();
  }

  /** Fire the current query; stale responses are dropped. Returns the
   * response if it was applied, null if superseded. */
  async run(): Promise<QueryResponse | null> {
    const { terms, phi, alpha, graph } = this.state.query;
    if (terms.length === 0) {
      this.lastResponse = null;
      this.emit();
      return null;
    }
    const ticket = ++this.seq;
    const response = await this.client.query({
      terms,
      phi,
      alpha,
      graph,
      resolution: this.state.resolution,
    });
    if (ticket < this.applied || ticket < this.seq) {
      return null; // a newer request already resolved, or is in flight
    }
    this.applied = ticket;
    this.lastResponse = response;
    this.emit();
    return response;
  }
}
