/**
 * Browser entry point: wires the fetch client, draft store, and
 * renderer into the page. All interaction is event-delegated from the
 * app root so re-rendering never drops listeners.
 */

import { ApiError, Client } from './api.js';
import { renderApp } from './render.js';
import { clampToStep, DraftStore } from './store.js';
import type { DocumentInput, Snapshot } from './types.js';

const API_BASE =
  document.documentElement.dataset['apiBase'] ?? 'http://127.0.0.1:8000';

const client = new Client(API_BASE);
const store = new DraftStore();

let snapshot: Snapshot | null = null;
let retry: (() => Promise<void>) | null = null;

function mustGet(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id} in the host page`);
  return el;
}

const root = mustGet('app');
const banner = mustGet('error-banner');

function showError(err: unknown, retryFn: (() => Promise<void>) | null): void {
  const message =
    err instanceof ApiError
      ? `${err.code}: ${err.field ? `${err.field}: ` : ''}${err.message}`
      : err instanceof Error
        ? err.message
        : String(err);
  retry = retryFn;
  banner.textContent = message;
  if (retryFn) {
    const button = document.createElement('button');
    button.type = 'button';
    button.textContent = 'Retry';
    button.addEventListener('click', () => {
      void runRetry();
    });
    banner.append(' ', button);
  }
  banner.hidden = false;
}

async function runRetry(): Promise<void> {
  const fn = retry;
  clearError();
  if (fn) await fn();
}

function clearError(): void {
  retry = null;
  banner.hidden = true;
  banner.textContent = '';
}

function apply(next: Snapshot, freshBatch: boolean): void {
  snapshot = next;
  if (next.terminated) {
    store.lock();
  } else if (freshBatch) {
    store.reset(next.pending_queries);
  }
  root.innerHTML = renderApp(next, store);
}

/** Submit the drafted batch; drafts survive a transport failure. */
async function submitBatch(): Promise<void> {
  if (!snapshot || snapshot.terminated) return;
  const sessionId = snapshot.session_id;
  const batch = store.batch();
  const rejects = store.rejects();
  try {
    const next = await client.submitFeedback(sessionId, batch, rejects);
    clearError();
    apply(next, true);
  } catch (err) {
    showError(err, err instanceof ApiError && err.status === 0
      ? submitBatch
      : null);
  }
}

async function markSatisfied(): Promise<void> {
  if (!snapshot) return;
  try {
    const next = await client.markSatisfied(snapshot.session_id);
    clearError();
    apply(next, false);
  } catch (err) {
    showError(err, err instanceof ApiError && err.status === 0
      ? markSatisfied
      : null);
  }
}

async function exportSummary(format: 'text' | 'structured'): Promise<void> {
  if (!snapshot) return;
  try {
    const payload =
      format === 'text'
        ? await client.exportText(snapshot.session_id)
        : JSON.stringify(
            await client.exportStructured(snapshot.session_id),
            null,
            2,
          );
    clearError();
    const pane = document.createElement('pre');
    pane.className = 'export-pane';
    pane.textContent = payload;
    root.querySelector('.export-pane')?.remove();
    root.append(pane);
  } catch (err) {
    showError(err, null);
  }
}

root.addEventListener('click', (event) => {
  const target = event.target;
  if (!(target instanceof HTMLElement)) return;
  const action = target.dataset['action'];
  if (!action || target.hasAttribute('disabled')) return;
  switch (action) {
    case 'accept':
    case 'reject': {
      const concept = target.dataset['concept'];
      if (concept && snapshot) {
        store.setAction(concept, action);
        root.innerHTML = renderApp(snapshot, store);
      }
      break;
    }
    case 'toggle-reject': {
      const sentId = Number(target.dataset['sentId']);
      if (Number.isInteger(sentId) && snapshot) {
        store.toggleReject(sentId);
        root.innerHTML = renderApp(snapshot, store);
      }
      break;
    }
    case 'submit':
      void submitBatch();
      break;
    case 'satisfied':
      void markSatisfied();
      break;
    case 'export-text':
      void exportSummary('text');
      break;
    case 'export-structured':
      void exportSummary('structured');
      break;
    default:
      break;
  }
});

root.addEventListener('input', (event) => {
  const target = event.target;
  if (!(target instanceof HTMLInputElement)) return;
  const field = target.dataset['field'];
  const concept = target.dataset['concept'];
  if (!concept || (field !== 'weight' && field !== 'confidence')) return;
  const value = clampToStep(Number(target.value));
  if (field === 'weight') {
    store.setWeight(concept, value);
  } else {
    store.setConfidence(concept, value);
  }
  const label = target.parentElement?.querySelector('.value');
  if (label) label.textContent = value.toFixed(2);
});

const uploadForm = document.getElementById('upload-form');
uploadForm?.addEventListener('submit', (event) => {
  event.preventDefault();
  void startSession();
});

/** Parse one document per line: `doc_id<TAB>text`. */
function parseDocuments(rawText: string): DocumentInput[] {
  const documents: DocumentInput[] = [];
  for (const line of rawText.split('\n')) {
    const trimmed = line.trim();
    if (!trimmed) continue;
    const tab = trimmed.indexOf('\t');
    if (tab < 0) {
      documents.push({ doc_id: `doc${documents.length}`, text: trimmed });
    } else {
      documents.push({
        doc_id: trimmed.slice(0, tab),
        text: trimmed.slice(tab + 1),
      });
    }
  }
  return documents;
}

function selectValue(id: string): string {
  const el = document.getElementById(id);
  return el instanceof HTMLSelectElement ? el.value : '';
}

async function startSession(): Promise<void> {
  const clusterInput = document.getElementById('cluster-id');
  const docsInput = document.getElementById('documents');
  const limitInput = document.getElementById('budget-limit');
  if (
    !(clusterInput instanceof HTMLInputElement) ||
    !(docsInput instanceof HTMLTextAreaElement) ||
    !(limitInput instanceof HTMLInputElement)
  ) {
    return;
  }
  const documents = parseDocuments(docsInput.value);
  const mode =
    selectValue('budget-mode') === 'sentences' ? 'sentences' : 'words';
  const unitValue = selectValue('concept-unit');
  const unit =
    unitValue === 'bigram' || unitValue === 'sentence' ? unitValue : 'unigram';
  const scoring =
    selectValue('scoring-mode') === 'occurrence' ? 'occurrence' : 'coverage';
  const limit = Number(limitInput.value);
  try {
    const corpus = await client.uploadCorpus(
      clusterInput.value || 'adhoc',
      documents,
    );
    const first = await client.createSession(corpus.corpus_id, {
      budget: { mode, limit },
      unit,
      scoring,
    });
    clearError();
    window.location.hash = `s=${first.session_id}`;
    uploadForm?.setAttribute('hidden', '');
    apply(first, true);
  } catch (err) {
    showError(err, startSession);
  }
}

/** Rebuild the view for a session named in the URL fragment. */
async function resumeFromHash(): Promise<void> {
  const match = /^#s=([0-9a-f]+)$/.exec(window.location.hash);
  if (!match || !match[1]) return;
  try {
    const snap = await client.getSnapshot(match[1]);
    clearError();
    uploadForm?.setAttribute('hidden', '');
    apply(snap, true);
  } catch (err) {
    showError(err, null);
  }
}

void resumeFromHash();
