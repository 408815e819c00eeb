import { describe, expect, it } from 'vitest';

import { ApiError, Client } from '../src/api.js';
import type { Snapshot } from '../src/types.js';

const SNAPSHOT: Snapshot = {
  session_id: 'abc123',
  corpus_id: 'def456',
  cluster_id: 'flood',
  iteration: 0,
  terminated: false,
  termination_reason: null,
  unit: 'unigram',
  scoring: 'coverage',
  budget: { mode: 'words', limit: 14 },
  score: 0.5,
  raw_score: 3.0,
  used_budget: 12,
  num_sentences: 9,
  num_concepts: 40,
  summary: [
    { sent_id: 0, doc_id: 'd0', text: 'Rivers rose fast.', group_sent_ids: [0] },
  ],
  pending_queries: [],
};

interface Recorded {
  url: string;
  init: RequestInit | undefined;
}

function fakeFetch(
  responder: (url: string, init?: RequestInit) => Response,
): { fetch: typeof fetch; calls: Recorded[] } {
  const calls: Recorded[] = [];
  const impl = (async (input: unknown, init?: RequestInit) => {
    const url = String(input);
    calls.push({ url, init });
    return responder(url, init);
  }) as typeof fetch;
  return { fetch: impl, calls };
}

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'content-type': 'application/json' },
  });
}

describe('Client', () => {
  it('posts corpus documents and returns the created ids', async () => {
    const { fetch, calls } = fakeFetch(() =>
      jsonResponse({ corpus_id: 'def456', cluster_id: 'flood', num_documents: 2 }),
    );
    const client = new Client('http://host:1234/', fetch);
    const created = await client.uploadCorpus('flood', [
      { doc_id: 'd0', text: 'Rivers rose fast.' },
      { doc_id: 'd1', text: 'Levees held.' },
    ]);
    expect(created.corpus_id).toBe('def456');
    expect(calls).toHaveLength(1);
    expect(calls[0]?.url).toBe('http://host:1234/corpora');
    expect(calls[0]?.init?.method).toBe('POST');
    const body = JSON.parse(String(calls[0]?.init?.body));
    expect(body.cluster_id).toBe('flood');
    expect(body.documents).toHaveLength(2);
  });

  it('creates a session and parses the snapshot', async () => {
    const { fetch, calls } = fakeFetch(() => jsonResponse(SNAPSHOT));
    const client = new Client('http://host:1234', fetch);
    const snap = await client.createSession('def456', {
      budget: { mode: 'words', limit: 14 },
    });
    expect(snap.session_id).toBe('abc123');
    expect(snap.summary[0]?.text).toBe('Rivers rose fast.');
    const body = JSON.parse(String(calls[0]?.init?.body));
    expect(body.corpus_id).toBe('def456');
    expect(body.config.budget.limit).toBe(14);
  });

  it('requests queries with and without an explicit k', async () => {
    const { fetch, calls } = fakeFetch(() =>
      jsonResponse({ session_id: 'abc123', terminated: false, queries: [] }),
    );
    const client = new Client('http://host:1234', fetch);
    await client.getQueries('abc123');
    await client.getQueries('abc123', 3);
    expect(calls[0]?.url).toBe('http://host:1234/sessions/abc123/queries');
    expect(calls[1]?.url).toBe('http://host:1234/sessions/abc123/queries?k=3');
    expect(calls[0]?.init?.method).toBe('GET');
  });

  it('sends feedback batches with sentence rejections', async () => {
    const { fetch, calls } = fakeFetch(() => jsonResponse(SNAPSHOT));
    const client = new Client('http://host:1234', fetch);
    await client.submitFeedback(
      'abc123',
      [{ concept: 'river', action: 'accept', weight: 1.0, confidence: 1.0 }],
      [4],
    );
    const body = JSON.parse(String(calls[0]?.init?.body));
    expect(body.batch).toHaveLength(1);
    expect(body.reject_sentences).toEqual([4]);
  });

  it('returns export text verbatim', async () => {
    const { fetch } = fakeFetch(
      () => new Response('Rivers rose fast.', { status: 200 }),
    );
    const client = new Client('http://host:1234', fetch);
    expect(await client.exportText('abc123')).toBe('Rivers rose fast.');
  });

  it('surfaces server error bodies as ApiError', async () => {
    const { fetch } = fakeFetch(() =>
      jsonResponse(
        { code: 'invalid_field', message: 'weight out of range', field: 'weight' },
        422,
      ),
    );
    const client = new Client('http://host:1234', fetch);
    const err = await client
      .submitFeedback('abc123', [])
      .then(() => null)
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    const apiErr = err as ApiError;
    expect(apiErr.status).toBe(422);
    expect(apiErr.code).toBe('invalid_field');
    expect(apiErr.message).toBe('weight out of range');
    expect(apiErr.field).toBe('weight');
  });

  it('falls back to a status message on non-JSON error bodies', async () => {
    const { fetch } = fakeFetch(
      () => new Response('gateway exploded', { status: 502 }),
    );
    const client = new Client('http://host:1234', fetch);
    const err = await client
      .getSnapshot('abc123')
      .catch((e: unknown) => e as ApiError);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(502);
    expect((err as ApiError).code).toBe('unknown');
  });

  it('wraps transport failures as code network with status 0', async () => {
    const impl = (async () => {
      throw new TypeError('fetch failed');
    }) as typeof fetch;
    const client = new Client('http://host:1234', impl);
    const err = await client
      .getSnapshot('abc123')
      .catch((e: unknown) => e as ApiError);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(0);
    expect((err as ApiError).code).toBe('network');
    expect((err as ApiError).message).toContain('fetch failed');
  });

  it('strips trailing slashes from the base url', async () => {
    const { fetch, calls } = fakeFetch(() => jsonResponse(SNAPSHOT));
    const client = new Client('http://host:1234///', fetch);
    await client.getSnapshot('abc123');
    expect(calls[0]?.url).toBe('http://host:1234/sessions/abc123');
  });
});
