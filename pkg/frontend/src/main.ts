/** Explorer bootstrap: wires the store to the DOM panels. */

import { ApiClient } from "./api.js";
import { ExplorerStore } from "./state.js";
import { renderGraph } from "./graphView.js";
import { renderWordCloud } from "./wordcloud.js";
import { renderSearchPanel } from "./searchPanel.js";
import type { Direction, Measure } from "./types.js";

export function mountExplorer(root: HTMLElement, api: ApiClient): ExplorerStore {
  root.innerHTML = `
    <header class="topbar">
      <h1>topicflow explorer</h1>
      <span id="revision" class="revision" title="revision hash"></span>
    </header>
    <div id="offline" class="offline hidden">
      connection lost — <a href="#" id="retry">retry</a>
    </div>
    <section class="controls">
      <label>measure
        <select id="measure">
          <option value="bhattacharyya">Bhattacharyya</option>
          <option value="kld_forward">KLD forward</option>
          <option value="kld_backward">KLD backward</option>
        </select>
      </label>
      <label>&zeta;
        <input id="zeta" type="range" min="0" max="1" step="0.01" value="0.5" />
        <span id="zeta-value">0.50</span>
      </label>
      <label>trace
        <select id="trace-direction">
          <option value="backward">backward</option>
          <option value="forward">forward</option>
        </select>
        depth <input id="trace-depth" type="number" min="0" value="1000" />
        <button id="trace-run" type="button">trace</button>
        <button id="trace-clear" type="button">clear</button>
      </label>
      <label>epochs
        <input id="window-lo" type="number" min="0" value="0" />
        &ndash;
        <input id="window-hi" type="number" min="0" value="0" />
      </label>
    </section>
    <main class="layout">
      <div id="graph" class="graph-panel"></div>
      <aside class="sidebar">
        <div id="search" class="panel"></div>
        <div id="wordcloud" class="panel"></div>
      </aside>
    </main>
  `;

  const store = new ExplorerStore(api);
  const graphEl = root.querySelector<HTMLElement>("#graph")!;
  const cloudEl = root.querySelector<HTMLElement>("#wordcloud")!;
  const searchEl = root.querySelector<HTMLElement>("#search")!;
  const revisionEl = root.querySelector<HTMLElement>("#revision")!;
  const offlineEl = root.querySelector<HTMLElement>("#offline")!;
  const zetaValue = root.querySelector<HTMLElement>("#zeta-value")!;
  const measureEl = root.querySelector<HTMLSelectElement>("#measure")!;
  const zetaEl = root.querySelector<HTMLInputElement>("#zeta")!;
  const directionEl = root.querySelector<HTMLSelectElement>("#trace-direction")!;
  const depthEl = root.querySelector<HTMLInputElement>("#trace-depth")!;

  measureEl.addEventListener("change", () => {
    void store.setMeasure(measureEl.value as Measure);
  });
  zetaEl.addEventListener("input", () => {
    store.setZeta(Number(zetaEl.value));
  });
  directionEl.addEventListener("change", () => {
    store.setTraceDirection(directionEl.value as Direction);
  });
  depthEl.addEventListener("change", () => {
    store.setTraceDepth(Number(depthEl.value));
  });
  root.querySelector("#trace-run")!.addEventListener("click", () => void store.showTrace());
  root.querySelector("#trace-clear")!.addEventListener("click", () => store.clearTrace());
  root.querySelector("#retry")!.addEventListener("click", (ev) => {
    ev.preventDefault();
    void store.retry();
  });
  const windowLo = root.querySelector<HTMLInputElement>("#window-lo")!;
  const windowHi = root.querySelector<HTMLInputElement>("#window-hi")!;
  const applyWindow = () => {
    store.setEpochWindow(Number(windowLo.value), Number(windowHi.value));
  };
  windowLo.addEventListener("change", applyWindow);
  windowHi.addEventListener("change", applyWindow);

  store.subscribe((state) => {
    revisionEl.textContent = state.revision ? `rev ${state.revision.slice(0, 12)}` : "";
    offlineEl.classList.toggle("hidden", !state.connectionLost);
    zetaValue.textContent = state.zeta.toFixed(2);
    if (state.epochWindow) {
      if (document.activeElement !== windowLo) windowLo.value = String(state.epochWindow[0]);
      if (document.activeElement !== windowHi) windowHi.value = String(state.epochWindow[1]);
    }

    if (state.graph) {
      renderGraph(graphEl, state.graph, state.events, state.focused, state.traceOverlay, {
        onNodeClick: (node) => void store.focusNode(node),
        epochWindow: state.epochWindow,
      });
    }
    renderWordCloud(cloudEl, state.wordcloud);
    renderSearchPanel(searchEl, state.searchQuery, state.searchHits, state.searchError, {
      onSubmit: (q) => void store.runSearch(q),
      onSelect: (hit) => void store.selectHit(hit),
    });
  });

  void store.init();
  return store;
}

declare global {
  interface Window {
    __explorerStore?: ExplorerStore;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const api = new ApiClient("");
  window.__explorerStore = mountExplorer(document.getElementById("app")!, api);
}
