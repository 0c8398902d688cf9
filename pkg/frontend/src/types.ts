/** Shapes exchanged with the summarization API. */

export type LabelMode = 'keywords' | 'fields';

export interface KeywordScore {
  term: string;
  score: number;
}

export interface FieldCount {
  field: string;
  count: number;
}

export interface ClusterLabel {
  keywords: KeywordScore[];
  top_fields: FieldCount[];
}

export interface SummaryCluster {
  id: number;
  size: number;
  label: ClusterLabel;
  sample_members: string[];
  members?: string[];
}

export interface SummaryFlow {
  src: number;
  dst: number;
  raw_sum: number;
  rate: number;
  normalized_rate: number;
}

export interface ConfigEcho {
  k: number;
  l: number;
  similarity: string;
  use_attribute: boolean;
  attribute: string;
  use_time: boolean;
  lambda_aug: number;
  lambda_decay: number;
  seed: number;
  max_iter: number;
  rel_tol: number;
  prune: string;
  restarts: number;
}

export interface SummaryDiagnostics {
  objective_trace: number[];
  effective_k: number;
  warnings: string[];
}

export interface SummaryDocument {
  schema_version: number;
  config: ConfigEcho;
  source_cluster: number;
  clusters: SummaryCluster[];
  flows: SummaryFlow[];
  diagnostics: SummaryDiagnostics;
  source?: string;
  job?: string;
  cached?: boolean;
}

export interface SummarizeRequest {
  source: string;
  k: number;
  l: number;
  similarity: string;
  augment: string | null;
  augment_time: boolean;
  prune: string;
  seed?: number;
}

export interface NodeHit {
  id: string;
  title: string;
  in_degree: number;
  year?: number | null;
  venue?: string | null;
}

export interface NodeSearchResponse {
  query: string;
  total: number;
  hits: NodeHit[];
}

export interface MemberRow {
  id: string;
  in_degree: number;
  title?: string;
  year?: number | null;
  venue?: string | null;
}

export interface MembersPage {
  job: string;
  cluster: number;
  total: number;
  offset: number;
  limit: number;
  members: MemberRow[];
  has_more: boolean;
}

export interface MetaResponse {
  nodes: number;
  links: number;
  has_metadata: boolean;
  defaults: ConfigEcho;
  max_k: number;
  page_limit: number;
}
