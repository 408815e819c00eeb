/**
 * Typed client for the session API.
 *
 * Every method resolves to the parsed JSON body or throws `ApiError`.
 * Server-side failures carry the server's `{code, message, field?}`
 * body; transport failures surface as code "network" with status 0 so
 * callers can offer a retry without losing draft state.
 */

import type {
  ApiErrorBody,
  CorpusCreated,
  DocumentInput,
  FeedbackRecord,
  QueriesResponse,
  SessionConfigBody,
  Snapshot,
} from './types.js';

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly field: string | undefined;

  constructor(status: number, code: string, message: string, field?: string) {
    super(message);
    this.name = 'ApiError';
    this.status = status;
    this.code = code;
    this.field = field;
  }
}

type FetchLike = typeof fetch;

export class Client {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl: FetchLike = fetch) {
    this.baseUrl = baseUrl.replace(/\/+$/, '');
    this.fetchImpl = fetchImpl;
  }

  async uploadCorpus(
    clusterId: string,
    documents: DocumentInput[],
  ): Promise<CorpusCreated> {
    return this.request<CorpusCreated>('POST', '/corpora', {
      cluster_id: clusterId,
      documents,
    });
  }

  async createSession(
    corpusId: string,
    config: SessionConfigBody,
  ): Promise<Snapshot> {
    return this.request<Snapshot>('POST', '/sessions', {
      corpus_id: corpusId,
      config,
    });
  }

  async getSnapshot(sessionId: string): Promise<Snapshot> {
    return this.request<Snapshot>('GET', `/sessions/${sessionId}`);
  }

  async getQueries(sessionId: string, k?: number): Promise<QueriesResponse> {
    const suffix = k === undefined ? '' : `?k=${k}`;
    return this.request<QueriesResponse>(
      'GET',
      `/sessions/${sessionId}/queries${suffix}`,
    );
  }

  async submitFeedback(
    sessionId: string,
    batch: FeedbackRecord[],
    rejectSentences: number[] = [],
  ): Promise<Snapshot> {
    return this.request<Snapshot>(
      'POST',
      `/sessions/${sessionId}/feedback`,
      { batch, reject_sentences: rejectSentences },
    );
  }

  async markSatisfied(sessionId: string): Promise<Snapshot> {
    return this.request<Snapshot>(
      'POST',
      `/sessions/${sessionId}/satisfied`,
    );
  }

  async exportText(sessionId: string): Promise<string> {
    const resp = await this.send(
      'GET',
      `/sessions/${sessionId}/export?format=text`,
    );
    if (!resp.ok) {
      throw await this.toError(resp);
    }
    return resp.text();
  }

  async exportStructured(sessionId: string): Promise<unknown> {
    return this.request<unknown>(
      'GET',
      `/sessions/${sessionId}/export?format=structured`,
    );
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const resp = await this.send(method, path, body);
    if (!resp.ok) {
      throw await this.toError(resp);
    }
    return (await resp.json()) as T;
  }

  private async send(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<Response> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { 'content-type': 'application/json' };
      init.body = JSON.stringify(body);
    }
    try {
      return await this.fetchImpl(this.baseUrl + path, init);
    } catch (err) {
      const reason = err instanceof Error ? err.message : String(err);
      throw new ApiError(0, 'network', `request failed: ${reason}`);
    }
  }

  private async toError(resp: Response): Promise<ApiError> {
    let code = 'unknown';
    let message = `request failed with status ${resp.status}`;
    let field: string | undefined;
    try {
      const body = (await resp.json()) as Partial<ApiErrorBody>;
      if (typeof body.code === 'string') code = body.code;
      if (typeof body.message === 'string') message = body.message;
      if (typeof body.field === 'string') field = body.field;
    } catch {
      // Non-JSON error body: keep the status-based message.
    }
    return new ApiError(resp.status, code, message, field);
  }
}
