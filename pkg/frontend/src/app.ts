/** Search console: query box with autocomplete, a tau slider steering the
 * precision-recall operating point live, and the ranked result list.
 * All scoring happens server-side; this page only renders responses. */

import { ApiError, SearchClient, isAbort } from "./api.js";
import { debounce } from "./debounce.js";
import { hitCountText, statsText, toRows } from "./view.js";

const SERVICE_BASE =
  new URLSearchParams(window.location.search).get("service") ?? "http://127.0.0.1:7878";
const DEBOUNCE_MS = 200;

const client = new SearchClient(SERVICE_BASE);

const queryInput = document.getElementById("query") as HTMLInputElement;
const tauSlider = document.getElementById("tau") as HTMLInputElement;
const tauValue = document.getElementById("tau-value") as HTMLElement;
const hitCount = document.getElementById("hit-count") as HTMLElement;
const resultsBody = document.getElementById("results-body") as HTMLElement;
const statsBanner = document.getElementById("stats") as HTMLElement;
const errorBanner = document.getElementById("error") as HTMLElement;
const errorText = document.getElementById("error-text") as HTMLElement;
const retryButton = document.getElementById("retry") as HTMLButtonElement;
const suggestions = document.getElementById("suggestions") as HTMLDataListElement;

function showError(message: string): void {
  errorText.textContent = message;
  errorBanner.hidden = false;
}

function clearError(): void {
  errorBanner.hidden = true;
}

function renderResults(rows: ReturnType<typeof toRows>): void {
  resultsBody.replaceChildren(
    ...rows.map((row) => {
      const tr = document.createElement("tr");

      const rank = document.createElement("td");
      rank.textContent = String(row.rank);

      const region = document.createElement("td");
      region.textContent = row.regionId;
      region.className = "region";

      const score = document.createElement("td");
      score.className = "score";
      const bar = document.createElement("div");
      bar.className = "score-bar";
      bar.style.width = `${row.scorePercent}%`;
      const label = document.createElement("span");
      label.textContent = row.scoreText;
      score.append(bar, label);

      const span = document.createElement("td");
      span.textContent = row.spanText;
      span.className = "span";

      tr.append(rank, region, score, span);
      return tr;
    }),
  );
}

async function runSearch(): Promise<void> {
  const query = queryInput.value.trim();
  const tau = Number(tauSlider.value);
  if (query === "") {
    hitCount.textContent = "";
    renderResults([]);
    return;
  }
  try {
    const response = await client.search(query, tau);
    clearError();
    hitCount.textContent = hitCountText(response);
    renderResults(toRows(response));
  } catch (err) {
    if (isAbort(err)) {
      return; // a newer request superseded this one
    }
    showError(err instanceof ApiError ? err.message : String(err));
  }
}

async function refreshSuggestions(): Promise<void> {
  const prefix = queryInput.value.trim();
  if (prefix === "") {
    suggestions.replaceChildren();
    return;
  }
  try {
    const words = await client.suggest(prefix);
    suggestions.replaceChildren(
      ...words.map((word) => {
        const option = document.createElement("option");
        option.value = word;
        return option;
      }),
    );
  } catch {
    // autocomplete is best-effort; the search path surfaces real errors
  }
}

async function loadStats(): Promise<void> {
  try {
    statsBanner.textContent = statsText(await client.stats());
    clearError();
  } catch (err) {
    showError(err instanceof ApiError ? err.message : String(err));
  }
}

const debouncedSearch = debounce(() => void runSearch(), DEBOUNCE_MS);
const debouncedSuggest = debounce(() => void refreshSuggestions(), DEBOUNCE_MS);

queryInput.addEventListener("input", () => {
  debouncedSearch();
  debouncedSuggest();
});
tauSlider.addEventListener("input", () => {
  tauValue.textContent = Number(tauSlider.value).toFixed(2);
  debouncedSearch();
});
queryInput.addEventListener("keydown", (event) => {
  if (event.key === "Enter") {
    debouncedSearch.cancel();
    void runSearch();
  }
});
retryButton.addEventListener("click", () => {
  clearError();
  void loadStats();
  void runSearch();
});

tauValue.textContent = Number(tauSlider.value).toFixed(2);
void loadStats();
