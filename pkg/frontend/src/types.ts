/** Wire types of the /api/v1 endpoints (mirrors docs/openapi.json). */

export type Measure = "bhattacharyya" | "kld_forward" | "kld_backward";
export type Direction = "backward" | "forward";

export interface NodeRef {
  epoch: number;
  id: number;
}

export interface HealthResponse {
  status: string;
  bundle_hash: string;
}

export interface EpochInfo {
  index: number;
  start: string;
  end: string;
  documents: number;
  topics: number;
}

export interface TermWeight {
  term: string;
  weight: number;
}

export interface TopicSummary {
  epoch: number;
  id: number;
  mass: number;
  token_count: number;
  top_terms: TermWeight[];
  labels: string[];
}

export interface WordCloudResponse {
  epoch: number;
  id: number;
  terms: TermWeight[];
}

export interface GraphEdge {
  from: NodeRef;
  to: NodeRef;
  raw_weight: number;
  relatedness: number;
  surviving: boolean;
}

export interface GraphResponse {
  measure: Measure;
  zeta: number | null;
  nodes: NodeRef[];
  edges: GraphEdge[];
}

export interface TraceEdge {
  from: NodeRef;
  to: NodeRef;
}

export interface TraceResponse {
  root: NodeRef;
  direction: Direction;
  measure: Measure;
  nodes: NodeRef[];
  edges: TraceEdge[];
}

export interface EventEntry {
  epoch: number;
  topic_id: number;
  labels: string[];
  evidence: Record<string, { measure: Measure; from: NodeRef; to: NodeRef }[]>;
}

export interface SearchHit {
  epoch: number;
  topic_id: number;
  score: number;
  matched_terms: string[];
}

export interface RepruneResponse {
  revision_hash: string;
  surviving_edge_count: number;
}

export interface StatsResponse {
  per_epoch: {
    epoch: number;
    start: string;
    end: string;
    documents: number;
    tokens: number;
    topics: number;
  }[];
  surviving_edges: Record<string, { earlier_epoch: number; later_epoch: number; surviving: number }[]>;
  events_per_epoch: { epoch: number; counts: Record<string, number> }[];
}

export interface ApiErrorBody {
  status: number;
  code: string;
  message: string;
}

export function nodeKey(node: NodeRef): string {
  return `${node.epoch}:${node.id}`;
}

export function sameNode(a: NodeRef | null, b: NodeRef | null): boolean {
  return !!a && !!b && a.epoch === b.epoch && a.id === b.id;
}
