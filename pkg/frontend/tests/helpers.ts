/** Fake fetch backed by fixtures captured from the live query service. */

import healthFx from "./fixtures/health.json";
import epochsFx from "./fixtures/epochs.json";
import epoch0TopicsFx from "./fixtures/epoch0_topics.json";
import topic00Fx from "./fixtures/topic_0_0.json";
import wordcloudFx from "./fixtures/wordcloud_0_0.json";
import traceBackFx from "./fixtures/trace_2_0_backward.json";
import traceFwdFx from "./fixtures/trace_0_0_forward.json";
import graphDefaultFx from "./fixtures/graph_bhd_default.json";
import graphZeta0Fx from "./fixtures/graph_bhd_zeta0.json";
import graphZeta09Fx from "./fixtures/graph_bhd_zeta09.json";
import eventsFx from "./fixtures/events.json";
import statsFx from "./fixtures/stats.json";
import searchBaFx from "./fixtures/search_ba.json";
import searchOovFx from "./fixtures/search_oov.json";
import reprune0Fx from "./fixtures/reprune_zeta0.json";
import reprune09Fx from "./fixtures/reprune_zeta09.json";

export interface Fixture {
  status: number;
  revision: string | null;
  body: unknown;
}

export const fixtures = {
  health: healthFx as Fixture,
  epochs: epochsFx as Fixture,
  epoch0Topics: epoch0TopicsFx as Fixture,
  topic00: topic00Fx as Fixture,
  wordcloud: wordcloudFx as Fixture,
  traceBack: traceBackFx as Fixture,
  traceFwd: traceFwdFx as Fixture,
  graphDefault: graphDefaultFx as Fixture,
  graphZeta0: graphZeta0Fx as Fixture,
  graphZeta09: graphZeta09Fx as Fixture,
  events: eventsFx as Fixture,
  stats: statsFx as Fixture,
  searchBa: searchBaFx as Fixture,
  searchOov: searchOovFx as Fixture,
  reprune0: reprune0Fx as Fixture,
  reprune09: reprune09Fx as Fixture,
};

function respond(fx: Fixture, revisionOverride?: string | null): Response {
  const headers = new Headers({ "Content-Type": "application/json" });
  const revision = revisionOverride !== undefined ? revisionOverride : fx.revision;
  if (revision) headers.set("X-Revision", revision);
  return new Response(JSON.stringify(fx.body), { status: fx.status, headers });
}

/** Serves the captured responses and mimics the reprune revision swap. */
export class FakeService {
  calls: { method: string; url: string; body?: unknown }[] = [];
  private currentGraph: Fixture = fixtures.graphDefault;
  private revision: string | null = fixtures.health.revision;

  fetch = async (input: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    const url = new URL(input, "http://svc");
    const path = url.pathname;
    const record: { method: string; url: string; body?: unknown } = {
      method,
      url: input,
    };
    if (init?.body) record.body = JSON.parse(String(init.body));
    this.calls.push(record);

    if (method === "POST" && path === "/api/v1/reprune") {
      const { zeta } = record.body as { measure: string; zeta: number };
      const fx = zeta < 0.5 ? fixtures.reprune0 : fixtures.reprune09;
      this.currentGraph = zeta < 0.5 ? fixtures.graphZeta0 : fixtures.graphZeta09;
      this.revision = fx.revision;
      return respond(fx);
    }

    const topicRoute = path.match(/^\/api\/v1\/topics\/(\d+)\/(\d+)(?:\/(\w+))?$/);
    if (topicRoute) {
      const epoch = Number(topicRoute[1]);
      const id = Number(topicRoute[2]);
      const sub = topicRoute[3];
      // the chain fixture bundle has exactly one topic (id 0) per epoch 0..2
      if (epoch < 0 || epoch > 2 || id !== 0) {
        return new Response(
          JSON.stringify({ status: 404, code: "unknown_topic", message: "no such topic" }),
          { status: 404, headers: { "Content-Type": "application/json" } },
        );
      }
      if (sub === "wordcloud") return respond(fixtures.wordcloud, this.revision);
      if (sub === "trace") {
        const direction = url.searchParams.get("direction") ?? "backward";
        return respond(
          direction === "forward" ? fixtures.traceFwd : fixtures.traceBack,
          this.revision,
        );
      }
      return respond(fixtures.topic00, this.revision);
    }

    switch (true) {
      case path === "/api/v1/health":
        return respond(fixtures.health, this.revision);
      case path === "/api/v1/epochs":
        return respond(fixtures.epochs, this.revision);
      case path === "/api/v1/epochs/0/topics":
        return respond(fixtures.epoch0Topics, this.revision);
      case path === "/api/v1/graph":
        return respond(this.currentGraph, this.revision);
      case path === "/api/v1/events":
        return respond(fixtures.events, this.revision);
      case path === "/api/v1/stats":
        return respond(fixtures.stats, this.revision);
      case path === "/api/v1/search": {
        const q = url.searchParams.get("q") ?? "";
        if (q.startsWith("ba")) return respond(fixtures.searchBa, this.revision);
        return respond(fixtures.searchOov, this.revision);
      }
      default:
        return new Response(
          JSON.stringify({ status: 404, code: "unknown_topic", message: "not found" }),
          { status: 404, headers: { "Content-Type": "application/json" } },
        );
    }
  };

  repruneCalls(): { measure: string; zeta: number }[] {
    return this.calls
      .filter((c) => c.method === "POST" && c.url.includes("/reprune"))
      .map((c) => c.body as { measure: string; zeta: number });
  }
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

export async function flushAll(times = 6): Promise<void> {
  for (let i = 0; i < times; i += 1) await flush();
}
