/** Payload shapes exactly as published by the termnet service schemas. */

export type TermClass = "drug" | "symptom" | "natural_product" | "";

export type ResolutionName = "day" | "week" | "month";

export type PhiName = "min" | "max" | "avg";

export type GraphKind = "direct" | "closed";

export interface TermRow {
  term: string;
  class: TermClass;
  count: number;
}

export interface TermsPayload {
  terms: TermRow[];
}

export interface TagSpan {
  term: string;
  class: TermClass;
  start: number;
  end: number;
}

export interface PostPayload {
  post_id: string;
  user_id?: string;
  timestamp: string;
  text: string;
  tags: TagSpan[];
}

export interface TimelinePayload {
  user_id: string;
  posts: PostPayload[];
  daily_counts: { date: string; count: number }[];
}

export interface PostsSearchPayload {
  term: string;
  total: number;
  posts: PostPayload[];
}

export interface NetworkNode {
  term: string;
  class: TermClass;
}

export interface NetworkEdge {
  source: string;
  target: string;
  p: number;
  d: number;
}

export interface NetworkPayload {
  resolution: ResolutionName;
  graph: GraphKind;
  min_weight: number;
  nodes: NetworkNode[];
  edges: NetworkEdge[];
}

export interface DirectPairRow {
  term_i: string;
  term_j: string;
  class_i: TermClass;
  class_j: TermClass;
  p: number;
}

export interface DirectPairsPayload {
  resolution: ResolutionName;
  k: number;
  rows: DirectPairRow[];
}

export interface SemimetricRow {
  term_i: string;
  term_j: string;
  class_i: TermClass;
  class_j: TermClass;
  d_direct: number | null;
  d_closed: number;
  ratio: number | null;
  indirect: boolean;
  p_closed: number;
}

export interface SemimetricPairsPayload {
  resolution: ResolutionName;
  k: number;
  rows: SemimetricRow[];
}

export interface PcaPayload {
  resolution: ResolutionName;
  eigenvalues: number[];
  n_components: number;
  terms: { term: string; class: TermClass; correlations: number[] }[];
}

export interface QueryRequest {
  terms: string[];
  phi?: PhiName;
  alpha?: number;
  graph?: GraphKind;
  resolution?: ResolutionName;
}

export interface AnswerRow {
  term: string;
  class: TermClass;
  score: number;
}

export interface QueryResponse {
  answers: AnswerRow[];
  graph_meta: {
    resolution: ResolutionName;
    graph: GraphKind;
    phi: PhiName;
    alpha: number;
    terms: number;
    sigma: number;
  };
}

export interface ErrorPayload {
  error: { code: string; message: string; stage?: string };
}

export const CLASS_COLORS: Record<TermClass, string> = {
  drug: "#1f77b4",
  symptom: "#d62728",
  natural_product: "#2ca02c",
  "": "#7f7f7f",
};
