/** Word cloud panel: font area proportional to term probability. */

import type { WordCloudResponse } from "./types.js";

const MAX_TERMS = 40;
const MIN_FONT = 11;
const MAX_FONT = 42;

export function renderWordCloud(container: HTMLElement, cloud: WordCloudResponse | null): void {
  container.textContent = "";
  if (!cloud) {
    const hint = document.createElement("p");
    hint.className = "hint";
    hint.textContent = "Click a topic node to see its word cloud.";
    container.appendChild(hint);
    return;
  }
  const heading = document.createElement("h3");
  heading.textContent = `Topic ${cloud.epoch}:${cloud.id}`;
  container.appendChild(heading);

  const terms = cloud.terms.slice(0, MAX_TERMS);
  if (!terms.length) return;
  const top = terms[0].weight;
  const list = document.createElement("div");
  list.className = "cloud";
  for (const { term, weight } of terms) {
    const span = document.createElement("span");
    span.className = "cloud-term";
    // area ~ probability, so the side scales with sqrt(weight)
    const scale = Math.sqrt(Math.max(weight, 0) / top);
    const px = MIN_FONT + (MAX_FONT - MIN_FONT) * scale;
    span.style.fontSize = `${px.toFixed(1)}px`;
    span.textContent = term;
    span.title = weight.toExponential(3);
    span.dataset.term = term;
    span.dataset.weight = String(weight);
    list.appendChild(span);
  }
  container.appendChild(list);
}
