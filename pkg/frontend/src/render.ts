/**
 * HTML rendering for session snapshots.
 *
 * Every function returns a string built purely from the server
 * snapshot plus local draft state. No scores or budgets are computed
 * here; the numbers shown are exactly what the service reported.
 */

import type { DraftStore } from './store.js';
import type { QueryItem, Snapshot } from './types.js';
import { WEIGHT_STEP } from './store.js';

export function escapeHtml(text: string): string {
  return text.replace(/[&<>"']/g, (ch) => {
    switch (ch) {
      case '&':
        return '&amp;';
      case '<':
        return '&lt;';
      case '>':
        return '&gt;';
      case '"':
        return '&quot;';
      default:
        return '&#39;';
    }
  });
}

export function renderHeader(snapshot: Snapshot): string {
  const status = snapshot.terminated
    ? `finished (${escapeHtml(snapshot.termination_reason ?? 'unknown')})`
    : 'in progress';
  return [
    '<header class="session-header">',
    `<span class="status">${status}</span>`,
    `<span class="iteration">iteration ${snapshot.iteration}</span>`,
    `<span class="score">score ${snapshot.score.toFixed(4)}</span>`,
    `<span class="budget">budget ${snapshot.used_budget} / ` +
      `${snapshot.budget.limit} ${escapeHtml(snapshot.budget.mode)}</span>`,
    '</header>',
  ].join('\n');
}

export function renderSummary(
  snapshot: Snapshot,
  store: DraftStore,
): string {
  const disabled = snapshot.terminated ? ' disabled' : '';
  const items = snapshot.summary.map((entry) => {
    const marked = store.rejects().includes(entry.sent_id);
    const label = marked ? 'keep' : 'reject';
    const groupSize = entry.group_sent_ids.length;
    const groupNote =
      groupSize > 1
        ? `<span class="group-note">stands for ${groupSize} similar ` +
          'sentences</span>'
        : '';
    return [
      `<li class="summary-sentence${marked ? ' rejected' : ''}" ` +
        `data-sent-id="${entry.sent_id}">`,
      `<span class="text">${escapeHtml(entry.text)}</span>`,
      `<span class="doc">${escapeHtml(entry.doc_id)}</span>`,
      groupNote,
      `<button type="button" data-action="toggle-reject" ` +
        `data-sent-id="${entry.sent_id}"${disabled}>${label}</button>`,
      '</li>',
    ].join('');
  });
  return [
    '<section class="summary">',
    '<h2>Current summary</h2>',
    '<ol class="summary-list">',
    ...items,
    '</ol>',
    '</section>',
  ].join('\n');
}

function renderSlider(
  concept: string,
  kind: 'weight' | 'confidence',
  value: number,
  disabled: boolean,
): string {
  const caption = kind === 'weight' ? 'importance' : 'confidence';
  const off = disabled ? ' disabled' : '';
  return (
    `<label class="${kind}">${caption}` +
    `<input type="range" min="0" max="1" step="${WEIGHT_STEP}" ` +
    `value="${value}" data-field="${kind}" ` +
    `data-concept="${escapeHtml(concept)}"${off}>` +
    `<span class="value">${value.toFixed(2)}</span>` +
    '</label>'
  );
}

function renderQuery(
  query: QueryItem,
  store: DraftStore,
  terminated: boolean,
): string {
  const draft = store.get(query.concept);
  const action = draft?.action ?? null;
  const weight = draft?.weight ?? 1.0;
  const confidence = draft?.confidence ?? 1.0;
  const off = terminated ? ' disabled' : '';
  const context = query.group
    .map(
      (member) =>
        `<li data-sent-id="${member.sent_id}">` +
        `${escapeHtml(member.text)}</li>`,
    )
    .join('');
  return [
    `<li class="query" data-concept="${escapeHtml(query.concept)}">`,
    `<span class="concept">${escapeHtml(query.concept)}</span>`,
    `<span class="count">seen ${query.occurrence_count}×</span>`,
    `<button type="button" data-action="accept" ` +
      `data-concept="${escapeHtml(query.concept)}"` +
      `${action === 'accept' ? ' class="selected"' : ''}${off}>accept</button>`,
    `<button type="button" data-action="reject" ` +
      `data-concept="${escapeHtml(query.concept)}"` +
      `${action === 'reject' ? ' class="selected"' : ''}${off}>reject</button>`,
    renderSlider(query.concept, 'weight', weight, terminated),
    renderSlider(query.concept, 'confidence', confidence, terminated),
    `<ul class="context">${context}</ul>`,
    '</li>',
  ].join('\n');
}

export function renderQueries(
  queries: QueryItem[],
  store: DraftStore,
  terminated: boolean,
): string {
  const off = terminated ? ' disabled' : '';
  const body = queries.length
    ? `<ol class="query-list">\n${queries
        .map((q) => renderQuery(q, store, terminated))
        .join('\n')}\n</ol>`
    : '<p class="empty">No pending queries.</p>';
  return [
    '<section class="queries">',
    '<h2>Concept queries</h2>',
    body,
    `<button type="button" data-action="submit"${off}>Submit batch</button>`,
    `<button type="button" data-action="satisfied"${off}>Done</button>`,
    '</section>',
  ].join('\n');
}

export function renderExport(snapshot: Snapshot): string {
  const off = snapshot.terminated ? '' : ' disabled';
  return [
    '<section class="export">',
    `<button type="button" data-action="export-text"${off}>` +
      'Export text</button>',
    `<button type="button" data-action="export-structured"${off}>` +
      'Export structured</button>',
    '</section>',
  ].join('\n');
}

export function renderApp(snapshot: Snapshot, store: DraftStore): string {
  return [
    renderHeader(snapshot),
    renderSummary(snapshot, store),
    renderQueries(snapshot.pending_queries, store, snapshot.terminated),
    renderExport(snapshot),
  ].join('\n');
}
