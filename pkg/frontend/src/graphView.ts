/** Layered SVG rendering of the temporal relatedness graph.
 *
 * Epochs are vertical layers ordered left-to-right in time; surviving
 * edges are drawn with stroke width proportional to relatedness; nodes
 * carry event badges and click-to-focus. The trace overlay highlights a
 * lineage sub-DAG. Everything rendered comes straight from API payloads.
 */

import type {
  EventEntry,
  GraphResponse,
  NodeRef,
  TraceResponse,
} from "./types.js";
import { nodeKey, sameNode } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const BADGE_GLYPHS: Record<string, string> = {
  Emerged: "E",
  Vanished: "V",
  Evolved: "→",
  Speciated: "S",
  Converged: "C",
  Split: "X",
  Merged: "M",
};

export interface GraphViewOptions {
  width?: number;
  height?: number;
  onNodeClick?: (node: NodeRef) => void;
  /** Inclusive epoch range to display; everything outside is hidden. */
  epochWindow?: [number, number] | null;
}

function windowed(graph: GraphResponse, window: [number, number] | null | undefined): GraphResponse {
  if (!window) return graph;
  const [lo, hi] = window;
  const nodes = graph.nodes.filter((n) => n.epoch >= lo && n.epoch <= hi);
  const edges = graph.edges.filter(
    (e) => e.from.epoch >= lo && e.from.epoch <= hi && e.to.epoch >= lo && e.to.epoch <= hi,
  );
  return { ...graph, nodes, edges };
}

interface Layout {
  positions: Map<string, { x: number; y: number }>;
  epochs: number[];
}

function layout(graph: GraphResponse, width: number, height: number): Layout {
  const epochs = [...new Set(graph.nodes.map((n) => n.epoch))].sort((a, b) => a - b);
  const byEpoch = new Map<number, NodeRef[]>();
  for (const node of graph.nodes) {
    const bucket = byEpoch.get(node.epoch) ?? [];
    bucket.push(node);
    byEpoch.set(node.epoch, bucket);
  }
  const positions = new Map<string, { x: number; y: number }>();
  const marginX = 70;
  const marginY = 40;
  const columnGap = epochs.length > 1 ? (width - 2 * marginX) / (epochs.length - 1) : 0;
  for (const [column, epoch] of epochs.entries()) {
    const nodes = (byEpoch.get(epoch) ?? []).sort((a, b) => a.id - b.id);
    const rowGap = nodes.length > 1 ? (height - 2 * marginY) / (nodes.length - 1) : 0;
    for (const [row, node] of nodes.entries()) {
      positions.set(nodeKey(node), {
        x: marginX + column * columnGap,
        y: nodes.length === 1 ? height / 2 : marginY + row * rowGap,
      });
    }
  }
  return { positions, epochs };
}

export function renderGraph(
  container: HTMLElement,
  fullGraph: GraphResponse,
  events: EventEntry[],
  focused: NodeRef | null,
  traceOverlay: TraceResponse | null,
  options: GraphViewOptions = {},
): void {
  const width = options.width ?? 900;
  const height = options.height ?? 480;
  const graph = windowed(fullGraph, options.epochWindow);
  container.textContent = "";

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "graph-svg");
  svg.setAttribute("role", "img");

  const { positions, epochs } = layout(graph, width, height);
  const labelsByNode = new Map<string, string[]>();
  for (const entry of events) {
    labelsByNode.set(nodeKey({ epoch: entry.epoch, id: entry.topic_id }), entry.labels);
  }
  const traceNodes = new Set((traceOverlay?.nodes ?? []).map(nodeKey));
  const traceEdges = new Set(
    (traceOverlay?.edges ?? []).map((e) => `${nodeKey(e.from)}>${nodeKey(e.to)}`),
  );

  // epoch layer captions
  for (const [column, epoch] of epochs.entries()) {
    const text = document.createElementNS(SVG_NS, "text");
    const marginX = 70;
    const columnGap = epochs.length > 1 ? (width - 2 * marginX) / (epochs.length - 1) : 0;
    text.setAttribute("x", String(marginX + column * columnGap));
    text.setAttribute("y", "18");
    text.setAttribute("class", "epoch-label");
    text.setAttribute("text-anchor", "middle");
    text.textContent = `epoch ${epoch}`;
    svg.appendChild(text);
  }

  // surviving edges, width proportional to relatedness
  for (const edge of graph.edges) {
    if (!edge.surviving) continue;
    const a = positions.get(nodeKey(edge.from));
    const b = positions.get(nodeKey(edge.to));
    if (!a || !b) continue;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(a.x));
    line.setAttribute("y1", String(a.y));
    line.setAttribute("x2", String(b.x));
    line.setAttribute("y2", String(b.y));
    line.setAttribute("stroke-width", (0.6 + 4.4 * edge.relatedness).toFixed(3));
    const edgeId = `${nodeKey(edge.from)}>${nodeKey(edge.to)}`;
    const highlighted = traceEdges.has(edgeId);
    line.setAttribute("class", highlighted ? "edge trace-edge" : "edge");
    line.dataset.edge = edgeId;
    line.dataset.relatedness = String(edge.relatedness);
    svg.appendChild(line);
  }

  // nodes with badges
  for (const node of graph.nodes) {
    const pos = positions.get(nodeKey(node));
    if (!pos) continue;
    const group = document.createElementNS(SVG_NS, "g");
    const classes = ["node"];
    if (sameNode(node, focused)) classes.push("focused");
    if (traceNodes.has(nodeKey(node))) classes.push("trace-node");
    group.setAttribute("class", classes.join(" "));
    group.dataset.node = nodeKey(node);

    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(pos.x));
    circle.setAttribute("cy", String(pos.y));
    circle.setAttribute("r", "11");
    group.appendChild(circle);

    const idText = document.createElementNS(SVG_NS, "text");
    idText.setAttribute("x", String(pos.x));
    idText.setAttribute("y", String(pos.y + 4));
    idText.setAttribute("text-anchor", "middle");
    idText.setAttribute("class", "node-id");
    idText.textContent = String(node.id);
    group.appendChild(idText);

    const labels = labelsByNode.get(nodeKey(node)) ?? [];
    if (labels.length) {
      const badge = document.createElementNS(SVG_NS, "text");
      badge.setAttribute("x", String(pos.x));
      badge.setAttribute("y", String(pos.y - 16));
      badge.setAttribute("text-anchor", "middle");
      badge.setAttribute("class", "badges");
      badge.textContent = labels.map((l) => BADGE_GLYPHS[l] ?? "?").join("");
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = labels.join(", ");
      badge.appendChild(title);
      group.appendChild(badge);
    }

    group.addEventListener("click", () => options.onNodeClick?.(node));
    svg.appendChild(group);
  }

  container.appendChild(svg);
}
