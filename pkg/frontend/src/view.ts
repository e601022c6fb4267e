/** Pure response-to-view transforms, kept DOM-free for testing. */

import type { ResultRow, SearchResponse, SpanJson, IndexStats } from "./types.js";

export function formatSpan(span: SpanJson | null): string {
  return span === null ? "-" : `[${span.begin}, ${span.end})`;
}

export function toRows(response: SearchResponse): ResultRow[] {
  return response.results.map((hit) => ({
    rank: hit.rank,
    regionId: hit.region_id,
    score: hit.score,
    scoreText: hit.score.toFixed(3),
    // the bar is a visual cue only; scores above 1 (sum estimator) saturate
    scorePercent: Math.max(0, Math.min(100, Math.round(hit.score * 100))),
    spanText: formatSpan(hit.span),
  }));
}

export function hitCountText(response: SearchResponse): string {
  if (response.out_of_lexicon) {
    return `"${response.query}" is not in the lexicon`;
  }
  const shown = response.results.length;
  const total = response.detected_count;
  const suffix = total === 1 ? "region" : "regions";
  if (shown < total) {
    return `${total} ${suffix} above τ=${response.tau.toFixed(2)} (showing ${shown})`;
  }
  return `${total} ${suffix} above τ=${response.tau.toFixed(2)}`;
}

export function statsText(stats: IndexStats): string {
  return (
    `${stats.regions} lines · ${stats.vocabulary_size} words · ` +
    `${stats.total_spots} spots (${stats.spots_per_line.toFixed(1)}/line)`
  );
}
