/** Wire types mirroring the query service JSON responses. */

export interface SpanJson {
  begin: number;
  end: number;
}

export interface SearchHitJson {
  rank: number;
  region_id: string;
  score: number;
  span: SpanJson | null;
}

export interface SearchResponse {
  query: string;
  tau: number;
  out_of_lexicon: boolean;
  detected_count: number;
  results: SearchHitJson[];
}

export interface IndexStats {
  regions: number;
  vocabulary_size: number;
  total_spots: number;
  spots_per_line: number;
}

/** One rendered result row, ready for the DOM layer. */
export interface ResultRow {
  rank: number;
  regionId: string;
  score: number;
  scoreText: string;
  scorePercent: number;
  spanText: string;
}
