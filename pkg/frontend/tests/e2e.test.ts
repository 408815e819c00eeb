/**
 * Drives the real HTTP service end to end: spawn the server, create a
 * session on the bundled fixture corpus, answer one query batch through
 * the client-side store, and check that the rendered page shows exactly
 * the selection the service returned. Also exercises live weight
 * clamping and the terminated-state lockout.
 */

import { afterAll, beforeAll, describe, expect, it } from 'vitest';
import { spawn, type ChildProcess } from 'node:child_process';
import { readFileSync } from 'node:fs';
import { fileURLToPath } from 'node:url';

import { ApiError, Client } from '../src/api.js';
import { renderApp, renderQueries } from '../src/render.js';
import { DraftStore } from '../src/store.js';
import type { DocumentInput, Snapshot } from '../src/types.js';

const FIXTURE_DOCS = fileURLToPath(
  new URL(
    '../../src/loopsum/data/fixture/clusters/city_parks/docs.jsonl',
    import.meta.url,
  ),
);

const PORT = 20000 + Math.floor(Math.random() * 20000);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | undefined;
let spawnError: Error | undefined;
const client = new Client(BASE);

function loadFixtureDocuments(): DocumentInput[] {
  const raw = readFileSync(FIXTURE_DOCS, 'utf8');
  return raw
    .split('\n')
    .filter((line) => line.trim().length > 0)
    .map((line) => JSON.parse(line) as DocumentInput);
}

async function waitForServer(): Promise<void> {
  const deadline = Date.now() + 30000;
  for (;;) {
    try {
      await fetch(`${BASE}/sessions/warmup-probe`);
      return;
    } catch {
      if (spawnError) {
        throw new Error(`failed to spawn server: ${spawnError.message}`);
      }
      if (Date.now() > deadline) {
        throw new Error(`server did not come up on port ${PORT}`);
      }
      await new Promise((resolve) => setTimeout(resolve, 200));
    }
  }
}

/** Sent ids of the summary section, in rendered order. */
function renderedSummaryIds(html: string): number[] {
  const section = html.slice(
    html.indexOf('<section class="summary">'),
    html.indexOf('</section>'),
  );
  const ids: number[] = [];
  for (const match of section.matchAll(
    /<li class="summary-sentence[^"]*" data-sent-id="(\d+)"/g,
  )) {
    ids.push(Number(match[1]));
  }
  return ids;
}

beforeAll(async () => {
  server = spawn('loopsum', ['serve', '--port', String(PORT)], {
    stdio: ['ignore', 'pipe', 'pipe'],
  });
  server.on('error', (err) => {
    spawnError = err;
  });
  await waitForServer();
}, 40000);

afterAll(() => {
  server?.kill('SIGTERM');
});

describe('interactive loop against the live service', () => {
  const store = new DraftStore();
  let sessionId = '';
  let initial: Snapshot;
  let afterBatch: Snapshot;

  it('creates a session on the fixture corpus', async () => {
    const documents = loadFixtureDocuments();
    expect(documents.length).toBeGreaterThan(0);
    const corpus = await client.uploadCorpus('city_parks', documents);
    initial = await client.createSession(corpus.corpus_id, {
      budget: { mode: 'words', limit: 30 },
      query_batch_size: 10,
    });
    sessionId = initial.session_id;
    expect(initial.iteration).toBe(0);
    expect(initial.terminated).toBe(false);
    expect(initial.summary.length).toBeGreaterThan(0);
    expect(initial.pending_queries.length).toBeGreaterThan(0);
    expect(initial.used_budget).toBeLessThanOrEqual(30);
    store.reset(initial.pending_queries);
    const html = renderApp(initial, store);
    expect(renderedSummaryIds(html)).toEqual(
      initial.summary.map((entry) => entry.sent_id),
    );
  });

  it('answers one query batch and shows exactly the returned selection', async () => {
    for (const query of initial.pending_queries) {
      store.setAction(query.concept, 'accept');
    }
    const first = initial.pending_queries[0];
    expect(first).toBeDefined();
    store.setWeight(first!.concept, 1.3);
    const batch = store.batch();
    expect(batch).toHaveLength(initial.pending_queries.length);
    expect(batch[0]?.weight).toBe(1.0);

    const rejectedId = initial.summary[0]!.sent_id;
    store.toggleReject(rejectedId);

    afterBatch = await client.submitFeedback(
      sessionId,
      batch,
      store.rejects(),
    );
    expect(afterBatch.iteration).toBe(1);
    expect(afterBatch.terminated).toBe(false);
    expect(afterBatch.summary.map((e) => e.sent_id)).not.toContain(rejectedId);
    expect(afterBatch.summary.map((e) => e.sent_id)).not.toEqual(
      initial.summary.map((e) => e.sent_id),
    );

    store.reset(afterBatch.pending_queries);
    const html = renderApp(afterBatch, store);
    expect(renderedSummaryIds(html)).toEqual(
      afterBatch.summary.map((entry) => entry.sent_id),
    );
    for (const entry of afterBatch.summary) {
      expect(html).toContain(entry.text);
    }
  });

  it('re-offers none of the answered concepts', () => {
    const answered = new Set(initial.pending_queries.map((q) => q.concept));
    for (const query of afterBatch.pending_queries) {
      expect(answered.has(query.concept)).toBe(false);
    }
  });

  it('locks out further feedback once satisfied', async () => {
    const done = await client.markSatisfied(sessionId);
    expect(done.terminated).toBe(true);
    expect(done.termination_reason).toBe('user_satisfied');
    store.lock();

    const err = await client
      .submitFeedback(sessionId, [
        { concept: 'park', action: 'accept', weight: 1.0, confidence: 1.0 },
      ])
      .then(() => null)
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(409);
    expect((err as ApiError).code).toBe('terminated');

    const html = renderApp(done, store);
    const queriesHtml = renderQueries(done.pending_queries, store, true);
    for (const control of queriesHtml.match(/<(?:button|input)[^>]*>/g) ?? []) {
      expect(control).toContain('disabled');
    }
    expect(html).toMatch(/data-action="submit"[^>]*disabled/);
    expect(html).not.toMatch(/data-action="export-text"[^>]*disabled/);

    store.setAction('park', 'accept');
    expect(store.batch()).toEqual([]);
  });

  it('rebuilds the identical view from a re-fetched snapshot', async () => {
    const first = await client.getSnapshot(sessionId);
    const second = await client.getSnapshot(sessionId);
    const render = (snap: Snapshot) => {
      const fresh = new DraftStore();
      fresh.reset(snap.pending_queries);
      if (snap.terminated) fresh.lock();
      return renderApp(snap, fresh);
    };
    expect(render(second)).toBe(render(first));
  });

  it('exports the final summary text', async () => {
    const text = await client.exportText(sessionId);
    expect(text.trim().length).toBeGreaterThan(0);
    const final = await client.getSnapshot(sessionId);
    for (const entry of final.summary) {
      expect(text).toContain(entry.text);
    }
  });
});
