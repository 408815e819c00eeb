/**
 * Wire types for the session API.
 *
 * These mirror the server payloads field for field. The UI never
 * derives its own numbers: every score, budget figure, and selection
 * shown on screen comes from a `Snapshot` returned by the server.
 */

export type BudgetMode = 'words' | 'sentences';
export type ConceptUnit = 'unigram' | 'bigram' | 'sentence';
export type ScoringMode = 'coverage' | 'occurrence';
export type FeedbackAction = 'accept' | 'reject';

export interface BudgetConfig {
  mode: BudgetMode;
  limit: number;
}

/** Session creation config; omitted fields use server defaults. */
export interface SessionConfigBody {
  budget: BudgetConfig;
  unit?: ConceptUnit;
  scoring?: ScoringMode;
  query_batch_size?: number;
  max_iterations?: number;
  grouping_threshold?: number;
}

export interface DocumentInput {
  doc_id: string;
  text: string;
  title?: string;
}

export interface CorpusCreated {
  corpus_id: string;
  cluster_id: string;
  num_documents: number;
  num_sentences: number;
}

export interface GroupMember {
  sent_id: number;
  text: string;
}

/** One concept offered for labeling, with its sentence-group context. */
export interface QueryItem {
  concept: string;
  unit: string;
  occurrence_count: number;
  best_sent_id: number;
  group: GroupMember[];
}

export interface SummaryEntry {
  sent_id: number;
  doc_id: string;
  text: string;
  group_sent_ids: number[];
}

/** Full session state as returned by every mutating endpoint. */
export interface Snapshot {
  session_id: string;
  corpus_id: string;
  cluster_id: string;
  iteration: number;
  terminated: boolean;
  termination_reason: string | null;
  unit: string;
  scoring: string;
  budget: BudgetConfig;
  score: number;
  raw_score: number;
  used_budget: number;
  num_sentences: number;
  num_concepts: number;
  summary: SummaryEntry[];
  pending_queries: QueryItem[];
}

export interface QueriesResponse {
  session_id: string;
  terminated: boolean;
  queries: QueryItem[];
}

/** One labeled concept in a feedback submission. */
export interface FeedbackRecord {
  concept: string;
  action: FeedbackAction;
  weight: number;
  confidence?: number;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  field?: string;
}
