// Store flows against a scripted service double. The double also records
// every graph it ever hands out, so the no-local-semantics invariant is
// checkable by object equality: whatever the store exposes must be a
// verbatim response payload.

import { describe, expect, it } from "vitest";

import { Client, DerivationNode, Graph } from "../src/api.js";
import { Store } from "../src/store.js";

interface Scripted {
  client: Client;
  served: Graph[];
  calls: string[];
  labelAttempts: Array<{ annotator: string; label: string; force: boolean }>;
}

function graphFor(derivation: DerivationNode): Graph {
  // the double's "composition" is an opaque stamp of the request; the store
  // must treat it as authoritative either way
  return {
    top: "n0",
    nodes: [{ id: "n0", label: `composed:${JSON.stringify(derivation)}`, anchor: null }],
    edges: [],
  };
}

function scripted(initialLabels: Record<string, string> = {}): Scripted {
  const labels: Record<string, string> = { ...initialLabels };
  let rebuilt: Graph | null = null;
  const served: Graph[] = [];
  const calls: string[] = [];
  const labelAttempts: Scripted["labelAttempts"] = [];

  const respond = (status: number, payload: unknown): Response =>
    new Response(JSON.stringify(payload), {
      status,
      headers: { "Content-Type": "application/json" },
    });

  const fetchImpl = async (input: string, init?: RequestInit): Promise<Response> => {
    const url = new URL(input);
    const path = url.pathname;
    const body = init?.body ? JSON.parse(init.body as string) : undefined;
    calls.push(`${init?.method ?? "GET"} ${path}`);

    if (path === "/items") {
      return respond(200, {
        items: [
          {
            id: "it-1",
            source: "esfl",
            sentence: "visit often Paris",
            status: Object.values(labels).includes("accept") ? "accepted" : "pending",
            rebuilt: rebuilt !== null,
            n_labels: Object.keys(labels).length,
            provenance: "unlabeled",
          },
        ],
        page: 0,
        pages: 1,
        total: 1,
      });
    }
    if (path === "/items/it-1" && (init?.method ?? "GET") === "GET") {
      if (rebuilt) served.push(rebuilt);
      return respond(200, {
        id: "it-1",
        sentence: "visit often Paris",
        tokens: ["visit", "often", "Paris"],
        source: "esfl",
        tree: null,
        graph: rebuilt,
        derivation: null,
        labels,
        provenance: rebuilt ? "composed" : "unlabeled",
        status: "pending",
        rebuilt: rebuilt !== null,
      });
    }
    if (path === "/items/it-1/label") {
      labelAttempts.push({
        annotator: body.annotator,
        label: body.label,
        force: Boolean(body.force),
      });
      if (labels[body.annotator] && !body.force) {
        return respond(409, { error: `${body.annotator} already labeled it-1` });
      }
      labels[body.annotator] = body.label;
      return respond(200, { ok: true, seq: labelAttempts.length, item: {} });
    }
    if (path === "/preview/compose") {
      if (JSON.stringify(body.derivation).includes("broken")) {
        return respond(422, { error: "unknown rule id 'broken'" });
      }
      const graph = graphFor(body.derivation);
      served.push(graph);
      return respond(200, { tree: "(X x)", graph });
    }
    if (path === "/items/it-1/rebuild") {
      const graph = graphFor(body.derivation);
      rebuilt = graph;
      served.push(graph);
      return respond(200, { ok: true, tree: "(X x)", graph });
    }
    if (path === "/rules") {
      return respond(200, {
        rules: [
          { signature: "V -> {visit}", rule: { id: "t1.r1", lhs: "V", syn_rhs: [], sem: {}, count: 0 } },
        ],
        total: 1,
      });
    }
    return respond(404, { error: `no route ${path}` });
  };

  return {
    client: new Client("http://service.test", fetchImpl),
    served,
    calls,
    labelAttempts,
  };
}

describe("label flow", () => {
  it("applies optimistically and settles on success", async () => {
    const double = scripted();
    const store = new Store(double.client);
    await store.refresh();
    await store.open("it-1");
    await store.labelFlow("anno1", "accept");
    expect(store.state.current?.labels).toEqual({ anno1: "accept" });
    expect(store.state.relabelPrompt).toBeNull();
    // the accepted item leaves a pending-only listing
    expect(store.state.items[0]!.status).toBe("accepted");
  });

  it("rolls back and prompts on a conflict, then forces once confirmed", async () => {
    const double = scripted({ anno1: "accept" });
    const store = new Store(double.client);
    await store.refresh();
    await store.open("it-1");
    await store.labelFlow("anno1", "reject");
    // rollback: the optimistic reject is gone, the prompt is visible
    expect(store.state.current?.labels).toEqual({ anno1: "accept" });
    expect(store.state.relabelPrompt?.message).toContain("already labeled");
    await store.confirmRelabel();
    expect(store.state.relabelPrompt).toBeNull();
    expect(store.state.current?.labels).toEqual({ anno1: "reject" });
    // exactly one non-forced attempt and one forced attempt reached the wire
    expect(double.labelAttempts).toEqual([
      { annotator: "anno1", label: "reject", force: false },
      { annotator: "anno1", label: "reject", force: true },
    ]);
  });
});

describe("rebuild flow", () => {
  it("marks previews stale on every edit until the service answers", async () => {
    const double = scripted();
    const store = new Store(double.client);
    await store.open("it-1");
    await store.startDraft("t1.r5");
    expect(store.state.previewStale).toBe(false);
    expect(store.state.preview).not.toBeNull();
    const before = store.state.preview;
    await store.addChild([], "t1.r3");
    expect(store.state.preview).not.toBe(before); // refreshed after the edit
    expect(store.state.previewStale).toBe(false);
  });

  it("keeps the stale flag and shows the message on a 422", async () => {
    const double = scripted();
    const store = new Store(double.client);
    await store.open("it-1");
    await store.startDraft("t1.r5");
    const good = store.state.preview;
    await store.addChild([], "broken");
    expect(store.state.previewError).toContain("broken");
    expect(store.state.previewStale).toBe(true); // old preview flagged, kept
    expect(store.state.preview).toBe(good);
  });

  it("round-trips drafts through export/import with identical previews", async () => {
    const double = scripted();
    const store = new Store(double.client);
    await store.open("it-1");
    await store.startDraft("t1.r5");
    await store.addChild([], "t1.r3");
    await store.addChild([0], "t1.r1");
    const exported = store.exportDraft();
    const preview = store.state.preview;
    await store.importDraft(exported);
    expect(store.exportDraft()).toBe(exported);
    expect(store.state.preview?.graph).toEqual(preview?.graph);
  });

  it("stores the rebuild and reloads the item", async () => {
    const double = scripted();
    const store = new Store(double.client);
    await store.refresh();
    await store.open("it-1");
    await store.startDraft("t1.r5");
    const stored = await store.submitRebuild("anno1");
    expect(store.state.current?.graph).toEqual(stored.graph);
    expect(store.state.items[0]!.rebuilt).toBe(true);
  });
});

describe("server-authoritative graphs", () => {
  it("only ever exposes graphs that came off the wire", async () => {
    const double = scripted();
    const store = new Store(double.client);
    await store.open("it-1");
    await store.startDraft("t1.r5");
    await store.addChild([], "t1.r3");
    await store.submitRebuild("anno1");
    const exposed = [store.state.preview?.graph, store.state.current?.graph].filter(
      (g): g is Graph => g != null,
    );
    expect(exposed.length).toBeGreaterThan(0);
    for (const graph of exposed) {
      expect(double.served).toContainEqual(graph);
    }
  });
});
