// DOM rendering. Everything drawn here is read straight off the store;
// the only computation is the presentational layout.

import { DerivationNode, Graph, ItemSummary } from "./api.js";
import { layoutGraph } from "./layout.js";
import { Store, ViewState } from "./store.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderGraph(graph: Graph): SVGSVGElement {
  const layout = layoutGraph(graph);
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${layout.width} ${layout.height}`);
  svg.setAttribute("class", "graph");
  for (const edge of layout.edges) {
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(edge.x1));
    line.setAttribute("y1", String(edge.y1));
    line.setAttribute("x2", String(edge.x2));
    line.setAttribute("y2", String(edge.y2));
    line.setAttribute("class", "edge");
    svg.appendChild(line);
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String((edge.x1 + edge.x2) / 2));
    label.setAttribute("y", String((edge.y1 + edge.y2) / 2 - 4));
    label.setAttribute("class", "edge-label");
    label.textContent = edge.role;
    svg.appendChild(label);
  }
  for (const node of layout.nodes) {
    const dot = document.createElementNS(SVG_NS, "circle");
    dot.setAttribute("cx", String(node.x));
    dot.setAttribute("cy", String(node.y));
    dot.setAttribute("r", node.isTop ? "7" : "5");
    dot.setAttribute("class", node.isTop ? "node top" : "node");
    svg.appendChild(dot);
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(node.x + 10));
    label.setAttribute("y", String(node.y + 4));
    label.setAttribute("class", "node-label");
    label.textContent = node.label || "·";
    svg.appendChild(label);
  }
  return svg;
}

function renderItemRow(store: Store, item: ItemSummary): HTMLElement {
  const row = el("li", { class: `item status-${item.status}`, "data-id": item.id });
  row.appendChild(el("span", { class: "id" }, item.id));
  row.appendChild(el("span", { class: "sentence" }, item.sentence));
  const badges = el("span", { class: "badges" });
  badges.appendChild(el("span", { class: "badge" }, item.status));
  if (item.rebuilt) badges.appendChild(el("span", { class: "badge rebuilt" }, "rebuilt"));
  badges.appendChild(el("span", { class: "badge" }, item.source));
  row.appendChild(badges);
  row.addEventListener("click", () => void store.open(item.id));
  return row;
}

function renderDerivation(
  store: Store,
  node: DerivationNode,
  path: number[],
): HTMLElement {
  const box = el("div", { class: "deriv-node", "data-path": path.join(".") });
  const head = el("div", { class: "deriv-head" });
  head.appendChild(el("code", {}, node.rule));
  const remove = el("button", { class: "mini", title: "remove this subtree" }, "✕");
  remove.addEventListener("click", () => {
    if (path.length === 0) return;
    void store.removeChild(path.slice(0, -1), path[path.length - 1]);
  });
  const add = el("button", { class: "mini", title: "add child from rule search" }, "+");
  add.addEventListener("click", () => {
    const picked = store.state.ruleHits[0];
    if (picked) void store.addChild(path, picked.rule.id);
  });
  head.appendChild(add);
  if (path.length > 0) head.appendChild(remove);
  box.appendChild(head);
  const children = el("div", { class: "deriv-children" });
  node.children.forEach((child, index) => {
    children.appendChild(renderDerivation(store, child, [...path, index]));
  });
  box.appendChild(children);
  return box;
}

export function renderApp(store: Store, root: HTMLElement): void {
  const draw = (state: ViewState) => {
    root.replaceChildren();

    const side = el("section", { class: "list-pane" });
    const filters = el("div", { class: "filters" });
    for (const status of ["", "pending", "accepted", "rejected", "abandoned", "rebuilt"]) {
      const button = el(
        "button",
        { class: state.filter.status === (status || undefined) ? "on" : "" },
        status || "all",
      );
      button.addEventListener("click", () =>
        void store.setFilter({ ...state.filter, status: status || undefined }),
      );
      filters.appendChild(button);
    }
    side.appendChild(filters);
    const list = el("ul", { class: "items" });
    for (const item of state.items) list.appendChild(renderItemRow(store, item));
    side.appendChild(list);
    side.appendChild(el("div", { class: "count" }, `${state.total} items`));
    root.appendChild(side);

    const main = el("section", { class: "detail-pane" });
    if (state.current) {
      const item = state.current;
      main.appendChild(el("h2", {}, item.id));
      main.appendChild(el("p", { class: "sentence" }, item.sentence));
      if (item.tree) main.appendChild(el("pre", { class: "tree" }, item.tree));

      const labelBar = el("div", { class: "label-bar" });
      const annotator = el("input", {
        id: "annotator",
        placeholder: "annotator id",
        value: localStorage.getItem("annotator") ?? "",
      });
      annotator.addEventListener("change", () =>
        localStorage.setItem("annotator", annotator.value),
      );
      labelBar.appendChild(annotator);
      for (const label of ["accept", "reject", "abandon"] as const) {
        const button = el("button", { class: `label-${label}` }, label);
        button.addEventListener("click", () => {
          if (annotator.value) void store.labelFlow(annotator.value, label);
        });
        labelBar.appendChild(button);
      }
      main.appendChild(labelBar);
      main.appendChild(
        el("p", { class: "labels" },
           Object.entries(item.labels).map(([a, l]) => `${a}: ${l}`).join("  ") || "unlabeled"),
      );

      if (state.relabelPrompt) {
        const dialog = el("div", { class: "dialog relabel" });
        dialog.appendChild(el("p", {}, state.relabelPrompt.message));
        const confirm = el("button", { class: "confirm" }, "relabel anyway");
        confirm.addEventListener("click", () => void store.confirmRelabel());
        const cancel = el("button", {}, "keep existing");
        cancel.addEventListener("click", () => store.dismissRelabel());
        dialog.appendChild(confirm);
        dialog.appendChild(cancel);
        main.appendChild(dialog);
      }

      const columns = el("div", { class: "columns" });
      const stored = el("div", { class: "column" });
      stored.appendChild(el("h3", {}, "stored graph"));
      if (item.graph) stored.appendChild(renderGraph(item.graph));
      else stored.appendChild(el("p", { class: "empty" }, "no graph yet"));
      columns.appendChild(stored);

      const previewPane = el("div", { class: "column" });
      const previewTitle = state.previewStale ? "preview (stale)" : "preview";
      previewPane.appendChild(el("h3", { class: state.previewStale ? "stale" : "" }, previewTitle));
      if (state.preview) previewPane.appendChild(renderGraph(state.preview.graph));
      if (state.previewError)
        previewPane.appendChild(el("p", { class: "error inline" }, state.previewError));
      columns.appendChild(previewPane);
      main.appendChild(columns);

      const rebuild = el("div", { class: "rebuild" });
      rebuild.appendChild(el("h3", {}, "derivation draft"));
      const search = el("input", { placeholder: "search rules by signature" });
      search.addEventListener("change", () => void store.searchRules({ q: search.value }));
      rebuild.appendChild(search);
      const hits = el("ul", { class: "rule-hits" });
      for (const hit of state.ruleHits.slice(0, 12)) {
        const row = el("li", {}, `${hit.rule.id}  ${hit.signature}`);
        row.addEventListener("click", () => {
          if (!state.draft) void store.startDraft(hit.rule.id);
        });
        hits.appendChild(row);
      }
      rebuild.appendChild(hits);
      if (state.draft) rebuild.appendChild(renderDerivation(store, state.draft, []));
      const submit = el("button", { class: "submit" }, "store rebuild");
      submit.addEventListener("click", () => {
        if (annotator.value) void store.submitRebuild(annotator.value);
      });
      rebuild.appendChild(submit);
      main.appendChild(rebuild);
    } else {
      main.appendChild(el("p", { class: "empty" }, "pick an item"));
    }
    if (state.error) main.appendChild(el("p", { class: "error" }, state.error));
    root.appendChild(main);
  };

  store.subscribe(draw);
  draw(store.state);
}
