// Shapes of the API's JSON responses.

export interface Health {
  version: string;
  cases: number;
}

export interface CaseSummary {
  case_id: string;
  source_org: string;
  year: string;
  month: string;
  case_topics: string[];
  severity_indicators: string[];
  platforms: string[];
  agencies: string[];
  investigation_types: string[];
  relationship_to_victim: string;
  registered_sex_offender: boolean;
  text_chars: number;
}

export interface CaseList {
  cases: CaseSummary[];
  total: number;
}

export interface Span {
  case_id: string;
  feature_path: string;
  start: number;
  end: number;
  matched_text: string;
  rule_id: string;
}

export interface FactorExplanation {
  factor: string;
  weight: number;
  value: number;
  spans: Omit<Span, "case_id">[];
}

export interface PriorityResult {
  case_id: string;
  factor_scores: Record<string, number>;
  raw_score: number;
  normalized_score: number;
  rank: number;
  band: "High" | "Medium" | "Low";
  explanation: FactorExplanation[];
}

export interface CaseDetail {
  case_id: string;
  source_org: string;
  year: string;
  month: string;
  raw_text: string;
  features: Record<string, unknown>;
  spans: Span[];
  created_at: string;
  priority: PriorityResult | null;
}

export interface SubGroup {
  group_id: string;
  cluster_name: string;
  member_case_ids: string[];
  mean_pairwise_similarity: number;
  shared_characteristics: Record<string, string[]>;
  description: string;
}

export interface ClusterEntry {
  name: string;
  case_ids: string[];
  size: number;
  coverage_percent: number;
  avg_similarity: number | null;
  subgroups: SubGroup[];
  ungrouped: string[];
}

export interface ClusterReport {
  total_cases: number;
  threshold: number;
  weights: Record<string, number>;
  clusters: ClusterEntry[];
  elapsed_ms: number;
}

export interface TagStat {
  name: string;
  count: number;
  percent: number;
}

export interface Insights {
  total_cases: number;
  platform_stats: TagStat[];
  severity_distribution: TagStat[];
  topic_stats: TagStat[];
  agency_stats: TagStat[];
  patterns: {
    rso_count: number;
    rso_percent: number;
    stranger_cases: number;
    family_cases: number;
    dominant_case_type: string | null;
  };
  keywords_global: [string, number][];
  keywords_per_group: Record<string, [string, number][]>;
  platform_trends: Record<string, TagStat[]>;
  topic_cooccurrence: [string, string, number][];
  platform_severity_counts: [string, string, number][];
}

export type TagCategory =
  | "case_topics"
  | "severity_indicators"
  | "platforms"
  | "investigation_types"
  | "relationships"
  | "rso";

export type TagMap = Record<TagCategory, string[]>;

export interface TagSelection {
  category: TagCategory;
  tag: string;
}

export interface FilterEntry {
  case: CaseSummary;
  spans: Span[];
  defaulted_tags: { category: string; tag: string; justification: string }[];
}

export interface FilterResponse {
  query: { category: string; tag: string }[];
  total: number;
  cases: FilterEntry[];
}
