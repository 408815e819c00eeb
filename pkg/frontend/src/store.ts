/**
 * Client-side draft state for one pending query batch.
 *
 * Drafts live here until the user submits; nothing is sent per
 * keystroke. A query with no accept/reject choice stays out of the
 * submitted batch entirely. Once the session terminates the store is
 * locked and every mutator becomes a no-op.
 */

import type { FeedbackAction, FeedbackRecord, QueryItem } from './types.js';

export const WEIGHT_STEP = 0.05;

/** Clamp to [0, 1] and snap to the slider step grid. */
export function clampToStep(value: number): number {
  if (!Number.isFinite(value)) return 1.0;
  const clamped = Math.min(1.0, Math.max(0.0, value));
  const steps = Math.round(clamped / WEIGHT_STEP);
  return Number((steps * WEIGHT_STEP).toFixed(2));
}

interface Draft {
  action: FeedbackAction | null;
  weight: number;
  confidence: number;
}

export class DraftStore {
  private drafts = new Map<string, Draft>();
  private rejectedSentences = new Set<number>();
  private locked = false;

  /** Start drafts for a fresh pending batch, dropping stale entries. */
  reset(queries: QueryItem[]): void {
    if (this.locked) return;
    this.drafts = new Map();
    for (const query of queries) {
      this.drafts.set(query.concept, {
        action: null,
        weight: 1.0,
        confidence: 1.0,
      });
    }
    this.rejectedSentences = new Set();
  }

  setAction(concept: string, action: FeedbackAction): void {
    if (this.locked) return;
    const draft = this.drafts.get(concept);
    if (draft) draft.action = action;
  }

  setWeight(concept: string, weight: number): void {
    if (this.locked) return;
    const draft = this.drafts.get(concept);
    if (draft) draft.weight = clampToStep(weight);
  }

  setConfidence(concept: string, confidence: number): void {
    if (this.locked) return;
    const draft = this.drafts.get(concept);
    if (draft) draft.confidence = clampToStep(confidence);
  }

  toggleReject(sentId: number): void {
    if (this.locked) return;
    if (this.rejectedSentences.has(sentId)) {
      this.rejectedSentences.delete(sentId);
    } else {
      this.rejectedSentences.add(sentId);
    }
  }

  get(concept: string): Readonly<Draft> | undefined {
    return this.drafts.get(concept);
  }

  /** Answered drafts in insertion order; unanswered ones are omitted. */
  batch(): FeedbackRecord[] {
    const records: FeedbackRecord[] = [];
    for (const [concept, draft] of this.drafts) {
      if (draft.action === null) continue;
      records.push({
        concept,
        action: draft.action,
        weight: draft.weight,
        confidence: draft.confidence,
      });
    }
    return records;
  }

  rejects(): number[] {
    return [...this.rejectedSentences].sort((a, b) => a - b);
  }

  get isLocked(): boolean {
    return this.locked;
  }

  /** Freeze the store once the session terminates. */
  lock(): void {
    this.locked = true;
  }

  clear(): void {
    if (this.locked) return;
    this.drafts = new Map();
    this.rejectedSentences = new Set();
  }
}
