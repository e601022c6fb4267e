/** Thin client for the query service with latest-wins request cancellation. */

import type { IndexStats, SearchResponse } from "./types.js";

export function buildSearchUrl(
  base: string,
  query: string,
  tau: number,
  limit = 100,
): string {
  const params = new URLSearchParams({
    q: query,
    tau: tau.toFixed(2),
    limit: String(limit),
  });
  return `${base}/api/search?${params}`;
}

export function buildSuggestUrl(base: string, prefix: string, limit = 10): string {
  const params = new URLSearchParams({ prefix, limit: String(limit) });
  return `${base}/api/suggest?${params}`;
}

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number | null = null,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function getJson<T>(url: string, signal?: AbortSignal): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, { signal });
  } catch (err) {
    if (err instanceof DOMException && err.name === "AbortError") {
      throw err;
    }
    throw new ApiError(`service unreachable: ${String(err)}`);
  }
  if (!response.ok) {
    throw new ApiError(`service returned ${response.status}`, response.status);
  }
  return (await response.json()) as T;
}

/**
 * At most one search request is in flight: starting a new one aborts the
 * previous, so a slow stale response can never overwrite a newer result.
 */
export class SearchClient {
  private controller: AbortController | null = null;

  constructor(readonly base: string) {}

  async search(query: string, tau: number, limit = 100): Promise<SearchResponse> {
    this.controller?.abort();
    this.controller = new AbortController();
    return getJson<SearchResponse>(
      buildSearchUrl(this.base, query, tau, limit),
      this.controller.signal,
    );
  }

  async suggest(prefix: string, limit = 10): Promise<string[]> {
    return getJson<string[]>(buildSuggestUrl(this.base, prefix, limit));
  }

  async stats(): Promise<IndexStats> {
    return getJson<IndexStats>(`${this.base}/api/stats`);
  }
}

export function isAbort(err: unknown): boolean {
  return err instanceof DOMException && err.name === "AbortError";
}
