/** Shapes of the embedded VisData payload (schema_version 1). */

export interface TopicSummary {
  id: number;
  display_rank: number;
  proportion: number;
  x: number;
  y: number;
}

export interface TermStats {
  term: string;
  overall_freq: number;
  /** Per-topic arrays, indexed by the original topic id. */
  est_freq: number[];
  log_prob: number[];
  log_lift: number[];
  conditional: number[];
}

export interface CorpusStats {
  documents: number;
  answers: number;
  tokens: number;
  vocabulary: number;
}

export interface VisData {
  schema_version: number;
  question: string;
  lambda_default: number;
  corpus_stats: CorpusStats;
  topics: TopicSummary[];
  terms: TermStats[];
}

export interface ExplorerState {
  selectedTopic: number | null;
  selectedTerm: string | null;
  lambda: number;
}
