/**
 * JSON schemas of the selection service. These mirror the server's
 * responses field-for-field; the UI renders them without reinterpretation.
 */

export type Mode = "by_citations" | "by_size" | "by_distance_to_selected";

export type Status = "accepted" | "rejected" | "undecided";

/** Fields present on every response. */
export interface Envelope {
  schema_version: number;
  corpus_hash: string;
  presentation_mode: Mode;
  cutoff: number;
}

export interface ClusterView {
  id: number;
  paper_count: number;
  citations: number;
  period: string;
  status: Status;
  /** Null while nothing is accepted (the server prints the sentinel). */
  distance_to_selected: number | null;
  /** Server-formatted distance, e.g. "  5.51" or the "******" sentinel. */
  distance_display: string;
  representative_id: number;
}

export interface PaperView {
  id: number;
  title: string;
  authors: string[];
  source: string;
  addresses: string[];
  year: number | null;
  citations: number;
}

export interface ClusterDetail extends ClusterView {
  /** Ranked by citations, then year, then id (server order). */
  members: PaperView[];
}

export interface MetaResponse extends Envelope {
  query_name: string;
  source_format: string;
  n_records: number;
  n_clusters: number;
  modes: Mode[];
}

export interface ClustersResponse extends Envelope {
  /** Already in presentation order; never re-sort client-side. */
  clusters: ClusterView[];
}

export interface ClusterDetailResponse extends Envelope {
  cluster: ClusterDetail;
}

export interface DecisionResponse extends Envelope {
  cluster_id: number;
  status: Status;
}

export interface CountResponse extends Envelope {
  count: number;
}

export interface SelectionSummary {
  papers: number;
  citations: number;
  citations_per_paper: number;
  year_min: number | null;
  year_max: number | null;
  h_index: number;
}

export interface SelectionResponse extends Envelope {
  accepted_cluster_ids: number[];
  summary: SelectionSummary | null;
  papers: PaperView[];
}

export interface LogEntry {
  seq: number;
  action: string;
  [key: string]: unknown;
}

export interface LogResponse extends Envelope {
  log: LogEntry[];
}
