import { describe, expect, it } from "vitest";

import { renderGraph } from "../src/graphView.js";
import type { EventEntry, GraphResponse, NodeRef, TraceResponse } from "../src/types.js";
import { fixtures } from "./helpers.js";

const graphZeta0 = fixtures.graphZeta0.body as GraphResponse;
const graphZeta09 = fixtures.graphZeta09.body as GraphResponse;
const events = fixtures.events.body as EventEntry[];
const traceBack = fixtures.traceBack.body as TraceResponse;

function mount(): HTMLElement {
  const el = document.createElement("div");
  document.body.appendChild(el);
  return el;
}

describe("renderGraph", () => {
  it("draws exactly the surviving edges: all of them at zeta 0", () => {
    const el = mount();
    renderGraph(el, graphZeta0, events, null, null);
    const drawn = el.querySelectorAll("line.edge");
    expect(drawn.length).toBe(graphZeta0.edges.length);
    expect(drawn.length).toBe(graphZeta0.edges.filter((e) => e.surviving).length);
  });

  it("omits pruned edges at a tight operating point", () => {
    const el = mount();
    renderGraph(el, graphZeta09, events, null, null);
    expect(el.querySelectorAll("line.edge").length).toBe(
      graphZeta09.edges.filter((e) => e.surviving).length,
    );
  });

  it("scales stroke width with relatedness", () => {
    const el = mount();
    renderGraph(el, graphZeta0, events, null, null);
    for (const line of el.querySelectorAll<SVGLineElement>("line.edge")) {
      const relatedness = Number(line.dataset.relatedness);
      const width = Number(line.getAttribute("stroke-width"));
      expect(width).toBeCloseTo(0.6 + 4.4 * relatedness, 2);
    }
  });

  it("lays epochs out as columns ordered left to right", () => {
    const el = mount();
    renderGraph(el, graphZeta0, events, null, null);
    const byEpoch = new Map<number, number>();
    for (const group of el.querySelectorAll<SVGGElement>("g.node")) {
      const [epoch] = group.dataset.node!.split(":").map(Number);
      const x = Number(group.querySelector("circle")!.getAttribute("cx"));
      byEpoch.set(epoch, x);
    }
    expect(byEpoch.get(0)!).toBeLessThan(byEpoch.get(1)!);
    expect(byEpoch.get(1)!).toBeLessThan(byEpoch.get(2)!);
  });

  it("shows event badges from the events payload", () => {
    const el = mount();
    renderGraph(el, graphZeta0, events, null, null);
    const badges = [...el.querySelectorAll("text.badges")];
    expect(badges.length).toBe(3); // every chain node is Evolved
    for (const badge of badges) {
      expect(badge.textContent).toContain("→");
    }
  });

  it("clicking a node reports its reference", () => {
    const el = mount();
    const clicks: NodeRef[] = [];
    renderGraph(el, graphZeta0, events, null, null, {
      onNodeClick: (node) => clicks.push(node),
    });
    const target = el.querySelector<SVGGElement>('g.node[data-node="1:0"]')!;
    target.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    expect(clicks).toEqual([{ epoch: 1, id: 0 }]);
  });

  it("marks the focused node", () => {
    const el = mount();
    renderGraph(el, graphZeta0, events, { epoch: 1, id: 0 }, null);
    expect(el.querySelector('g.node[data-node="1:0"]')!.classList.contains("focused")).toBe(true);
    expect(el.querySelector('g.node[data-node="0:0"]')!.classList.contains("focused")).toBe(false);
  });

  it("highlights exactly the trace overlay's nodes and edges", () => {
    const el = mount();
    renderGraph(el, graphZeta0, events, { epoch: 2, id: 0 }, traceBack);
    const highlighted = [...el.querySelectorAll("g.node.trace-node")].map(
      (g) => (g as SVGGElement).dataset.node,
    );
    expect(new Set(highlighted)).toEqual(
      new Set(traceBack.nodes.map((n) => `${n.epoch}:${n.id}`)),
    );
    const litEdges = [...el.querySelectorAll("line.trace-edge")].map(
      (l) => (l as SVGLineElement).dataset.edge,
    );
    expect(new Set(litEdges)).toEqual(
      new Set(traceBack.edges.map((e) => `${e.from.epoch}:${e.from.id}>${e.to.epoch}:${e.to.id}`)),
    );
  });

  it("restricts the view to the epoch window", () => {
    const el = mount();
    renderGraph(el, graphZeta0, events, null, null, { epochWindow: [1, 2] });
    const shown = [...el.querySelectorAll<SVGGElement>("g.node")].map((g) => g.dataset.node);
    expect(new Set(shown)).toEqual(new Set(["1:0", "2:0"]));
    // only the 1 -> 2 edge has both endpoints inside the window
    expect(el.querySelectorAll("line.edge").length).toBe(1);
  });

  it("a root-only trace highlights just the root", () => {
    const el = mount();
    const lonely: TraceResponse = {
      root: { epoch: 0, id: 0 },
      direction: "backward",
      measure: "bhattacharyya",
      nodes: [{ epoch: 0, id: 0 }],
      edges: [],
    };
    renderGraph(el, graphZeta0, events, { epoch: 0, id: 0 }, lonely);
    expect(el.querySelectorAll("g.node.trace-node").length).toBe(1);
    expect(el.querySelectorAll("line.trace-edge").length).toBe(0);
  });
});
