/** Keyword search with a ranked hit list; selecting a hit focuses its node. */

import type { SearchHit } from "./types.js";

export interface SearchPanelHooks {
  onSubmit: (query: string) => void;
  onSelect: (hit: SearchHit) => void;
}

export function renderSearchPanel(
  container: HTMLElement,
  query: string,
  hits: SearchHit[],
  error: string | null,
  hooks: SearchPanelHooks,
): void {
  container.textContent = "";

  const form = document.createElement("form");
  form.className = "search-form";
  const input = document.createElement("input");
  input.type = "search";
  input.placeholder = "search topics by keywords";
  input.value = query;
  input.className = "search-input";
  const button = document.createElement("button");
  button.type = "submit";
  button.textContent = "Search";
  button.disabled = !query.trim();

  input.addEventListener("input", () => {
    button.disabled = !input.value.trim();
  });
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    if (input.value.trim()) hooks.onSubmit(input.value);
  });
  form.appendChild(input);
  form.appendChild(button);
  container.appendChild(form);

  if (error) {
    const msg = document.createElement("p");
    msg.className = "search-error";
    msg.textContent = error;
    container.appendChild(msg);
    return;
  }

  if (!hits.length) return;
  const list = document.createElement("ol");
  list.className = "search-hits";
  for (const hit of hits) {
    const item = document.createElement("li");
    const link = document.createElement("a");
    link.href = "#";
    link.className = "search-hit";
    link.dataset.node = `${hit.epoch}:${hit.topic_id}`;
    link.textContent =
      `topic ${hit.epoch}:${hit.topic_id} ` +
      `(score ${hit.score.toFixed(4)}, matched ${hit.matched_terms.join(", ")})`;
    link.addEventListener("click", (ev) => {
      ev.preventDefault();
      hooks.onSelect(hit);
    });
    item.appendChild(link);
    list.appendChild(item);
  }
  container.appendChild(list);
}
