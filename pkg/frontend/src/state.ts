/** Explorer state: one revision at a time, reads cancel-and-replace,
 *  at most one in-flight reprune with the latest slider value queued. */

import { ApiClient, ApiError } from "./api.js";
import type {
  Direction,
  EpochInfo,
  EventEntry,
  GraphResponse,
  Measure,
  NodeRef,
  SearchHit,
  TraceResponse,
  WordCloudResponse,
} from "./types.js";
import { sameNode } from "./types.js";

export interface ExplorerState {
  measure: Measure;
  zeta: number;
  focused: NodeRef | null;
  traceDirection: Direction;
  traceDepth: number;
  searchQuery: string;
  epochWindow: [number, number] | null;
  revision: string | null;
  bundleHash: string | null;
  connectionLost: boolean;
  searchError: string | null;
  repruneInFlight: boolean;
  epochs: EpochInfo[];
  graph: GraphResponse | null;
  events: EventEntry[];
  wordcloud: WordCloudResponse | null;
  traceOverlay: TraceResponse | null;
  searchHits: SearchHit[];
}

type Listener = (state: ExplorerState) => void;
type Schedule = (fn: () => void, ms: number) => unknown;
type Cancel = (handle: unknown) => void;

export interface StoreOptions {
  debounceMs?: number;
  schedule?: Schedule;
  cancel?: Cancel;
  wordcloudTerms?: number;
}

const WORDCLOUD_TERMS = 40;

export class ExplorerStore {
  private state: ExplorerState = {
    measure: "bhattacharyya",
    zeta: 0.5,
    focused: null,
    traceDirection: "backward",
    traceDepth: 1000,
    searchQuery: "",
    epochWindow: null,
    revision: null,
    bundleHash: null,
    connectionLost: false,
    searchError: null,
    repruneInFlight: false,
    epochs: [],
    graph: null,
    events: [],
    wordcloud: null,
    traceOverlay: null,
    searchHits: [],
  };

  private listeners: Listener[] = [];
  private readonly debounceMs: number;
  private readonly schedule: Schedule;
  private readonly cancel: Cancel;
  private readonly wordcloudTerms: number;
  private debounceHandle: unknown = null;
  private pendingZeta: number | null = null;
  private graphSeq = 0;
  private cloudSeq = 0;
  private searchSeq = 0;

  constructor(
    private readonly api: ApiClient,
    options: StoreOptions = {},
  ) {
    this.debounceMs = options.debounceMs ?? 250;
    this.schedule = options.schedule ?? ((fn, ms) => setTimeout(fn, ms));
    this.cancel = options.cancel ?? ((h) => clearTimeout(h as number));
    this.wordcloudTerms = options.wordcloudTerms ?? WORDCLOUD_TERMS;
  }

  getState(): ExplorerState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private update(patch: Partial<ExplorerState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  private offline(err: unknown): boolean {
    if (err instanceof ApiError && err.status === 0) {
      this.update({ connectionLost: true });
      return true;
    }
    return false;
  }

  private adoptRevision(revision: string | null): void {
    if (revision && revision !== this.state.revision) {
      this.update({ revision });
    }
  }

  async init(): Promise<void> {
    try {
      const health = await this.api.health();
      const epochs = await this.api.epochs();
      this.update({
        connectionLost: false,
        bundleHash: health.data.bundle_hash,
        epochs: epochs.data,
        epochWindow: epochs.data.length
          ? [epochs.data[0].index, epochs.data[epochs.data.length - 1].index]
          : null,
      });
      this.adoptRevision(health.revision);
      await this.reloadGraphAndEvents();
    } catch (err) {
      if (!this.offline(err)) throw err;
    }
  }

  async retry(): Promise<void> {
    await this.init();
  }

  private async reloadGraphAndEvents(): Promise<void> {
    const seq = ++this.graphSeq;
    try {
      const graph = await this.api.graph(this.state.measure);
      const events = await this.api.events();
      if (seq !== this.graphSeq) return; // superseded by a newer load
      // a lineage overlay from the previous revision may cite pruned edges
      this.update({ graph: graph.data, events: events.data, traceOverlay: null });
      this.adoptRevision(graph.revision);
      this.clearStaleFocus();
    } catch (err) {
      if (!this.offline(err)) throw err;
    }
  }

  /** Focused node must exist in the current revision's graph. */
  private clearStaleFocus(): void {
    const { focused, graph } = this.state;
    if (!focused || !graph) return;
    const exists = graph.nodes.some((n) => n.epoch === focused.epoch && n.id === focused.id);
    if (!exists) {
      this.update({ focused: null, wordcloud: null, traceOverlay: null });
    }
  }

  async setMeasure(measure: Measure): Promise<void> {
    if (measure === this.state.measure) return;
    this.update({ measure, traceOverlay: null });
    await this.reloadGraphAndEvents();
  }

  /** Slider input: clamp, then debounce a reprune; only the latest value fires. */
  setZeta(zeta: number): void {
    const clamped = Math.min(1, Math.max(0, zeta));
    this.update({ zeta: clamped });
    this.pendingZeta = clamped;
    if (this.debounceHandle !== null) this.cancel(this.debounceHandle);
    this.debounceHandle = this.schedule(() => {
      this.debounceHandle = null;
      void this.fireReprune();
    }, this.debounceMs);
  }

  private async fireReprune(): Promise<void> {
    if (this.state.repruneInFlight || this.pendingZeta === null) return;
    const zeta = this.pendingZeta;
    this.pendingZeta = null;
    this.update({ repruneInFlight: true });
    try {
      const result = await this.api.reprune(this.state.measure, zeta);
      this.update({ repruneInFlight: false, revision: result.data.revision_hash });
      await this.reloadGraphAndEvents();
    } catch (err) {
      this.update({ repruneInFlight: false });
      if (!this.offline(err) && !(err instanceof ApiError)) throw err;
    }
    if (this.pendingZeta !== null) {
      await this.fireReprune(); // a newer slider value arrived meanwhile
    }
  }

  async focusNode(node: NodeRef): Promise<void> {
    this.update({ focused: node, traceOverlay: null });
    const seq = ++this.cloudSeq;
    try {
      const cloud = await this.api.wordcloud(node, this.wordcloudTerms);
      if (seq !== this.cloudSeq || !sameNode(this.state.focused, node)) return;
      this.update({ wordcloud: cloud.data });
      this.adoptRevision(cloud.revision);
    } catch (err) {
      if (err instanceof ApiError && err.code === "unknown_topic") {
        this.update({ focused: null, wordcloud: null });
        return;
      }
      if (!this.offline(err)) throw err;
    }
  }

  setEpochWindow(lo: number, hi: number): void {
    const epochs = this.state.epochs;
    if (!epochs.length) return;
    const min = epochs[0].index;
    const max = epochs[epochs.length - 1].index;
    const a = Math.max(min, Math.min(max, Math.floor(lo)));
    const b = Math.max(min, Math.min(max, Math.floor(hi)));
    this.update({ epochWindow: a <= b ? [a, b] : [b, a] });
  }

  setTraceDirection(direction: Direction): void {
    this.update({ traceDirection: direction });
  }

  setTraceDepth(depth: number): void {
    this.update({ traceDepth: Math.max(0, Math.floor(depth)) });
  }

  async showTrace(): Promise<void> {
    const node = this.state.focused;
    if (!node) return;
    try {
      const dag = await this.api.trace(
        node,
        this.state.traceDirection,
        this.state.measure,
        this.state.traceDepth,
      );
      if (!sameNode(this.state.focused, node)) return;
      this.update({ traceOverlay: dag.data });
      this.adoptRevision(dag.revision);
    } catch (err) {
      if (err instanceof ApiError && err.code === "unknown_topic") {
        this.update({ focused: null, traceOverlay: null });
        return;
      }
      if (!this.offline(err)) throw err;
    }
  }

  clearTrace(): void {
    this.update({ traceOverlay: null });
  }

  async runSearch(query: string): Promise<void> {
    this.update({ searchQuery: query, searchError: null });
    if (!query.trim()) return; // submit stays disabled on empty input
    const seq = ++this.searchSeq;
    try {
      const hits = await this.api.search(query, 20);
      if (seq !== this.searchSeq) return;
      this.update({ searchHits: hits.data });
      this.adoptRevision(hits.revision);
    } catch (err) {
      if (seq !== this.searchSeq) return;
      if (err instanceof ApiError && err.status !== 0) {
        this.update({ searchHits: [], searchError: err.message });
        return;
      }
      if (!this.offline(err)) throw err;
    }
  }

  async selectHit(hit: SearchHit): Promise<void> {
    await this.focusNode({ epoch: hit.epoch, id: hit.topic_id });
  }
}
