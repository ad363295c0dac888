// Server-authoritative view state for the workbench. The store never
// derives a graph itself: previews and stored graphs are verbatim service
// responses, and edits only mark the current preview stale until the next
// successful round trip.

import {
  ApiError,
  Client,
  DerivationNode,
  ItemPage,
  ItemSummary,
  ItemView,
  Label,
  PreviewResponse,
  RuleHit,
} from "./api.js";

export interface Filter {
  status?: string;
  source?: string;
  page?: number;
}

export interface RelabelPrompt {
  annotator: string;
  label: Label;
  message: string;
}

export interface ViewState {
  filter: Filter;
  items: ItemSummary[];
  total: number;
  pages: number;
  currentId: string | null;
  current: ItemView | null;
  draft: DerivationNode | null;
  preview: PreviewResponse | null;
  previewStale: boolean;
  previewError: string | null;
  pendingLabel: Label | null;
  relabelPrompt: RelabelPrompt | null;
  ruleHits: RuleHit[];
  error: string | null;
}

type Listener = (state: ViewState) => void;

function cloneDerivation(node: DerivationNode): DerivationNode {
  return { rule: node.rule, children: node.children.map(cloneDerivation) };
}

function nodeAt(root: DerivationNode, path: number[]): DerivationNode {
  let node = root;
  for (const index of path) {
    const child = node.children[index];
    if (!child) throw new Error(`no derivation node at path ${path.join(".")}`);
    node = child;
  }
  return node;
}

export class Store {
  state: ViewState = {
    filter: {},
    items: [],
    total: 0,
    pages: 1,
    currentId: null,
    current: null,
    draft: null,
    preview: null,
    previewStale: false,
    previewError: null,
    pendingLabel: null,
    relabelPrompt: null,
    ruleHits: [],
    error: null,
  };

  private listeners: Listener[] = [];
  private previewToken = 0;

  constructor(private api: Client) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  private patch(update: Partial<ViewState>): void {
    this.state = { ...this.state, ...update };
    this.emit();
  }

  async refresh(): Promise<void> {
    const page: ItemPage = await this.api.listItems(this.state.filter);
    this.patch({ items: page.items, total: page.total, pages: page.pages });
  }

  async setFilter(filter: Filter): Promise<void> {
    this.patch({ filter });
    await this.refresh();
  }

  async open(id: string): Promise<void> {
    const item = await this.api.getItem(id);
    const draft = item.derivation ? cloneDerivation(item.derivation) : null;
    this.patch({
      currentId: id,
      current: item,
      draft,
      preview: null,
      previewStale: draft !== null,
      previewError: null,
      relabelPrompt: null,
    });
    if (draft) await this.requestPreview();
  }

  // --- labeling -------------------------------------------------------------

  async labelFlow(annotator: string, label: Label): Promise<void> {
    const current = this.state.current;
    if (!current) throw new Error("no item open");
    const before = { items: this.state.items, current };
    // optimistic: the list row and detail reflect the label immediately
    const optimistic: ItemView = {
      ...current,
      labels: { ...current.labels, [annotator]: label },
    };
    this.patch({
      current: optimistic,
      pendingLabel: label,
      items: this.state.items.map((i) =>
        i.id === current.id ? { ...i, n_labels: Object.keys(optimistic.labels).length } : i,
      ),
    });
    try {
      await this.api.label(current.id, annotator, label);
    } catch (err) {
      // roll back on any non-2xx; a conflict additionally opens the prompt
      this.patch({ current: before.current, items: before.items, pendingLabel: null });
      if (err instanceof ApiError && err.status === 409) {
        this.patch({
          relabelPrompt: { annotator, label, message: err.message },
        });
        return;
      }
      this.patch({ error: err instanceof Error ? err.message : String(err) });
      return;
    }
    this.patch({ pendingLabel: null });
    await this.reloadCurrent();
    await this.refresh();
  }

  async confirmRelabel(): Promise<void> {
    const prompt = this.state.relabelPrompt;
    const current = this.state.current;
    if (!prompt || !current) return;
    await this.api.label(current.id, prompt.annotator, prompt.label, true);
    this.patch({ relabelPrompt: null });
    await this.reloadCurrent();
    await this.refresh();
  }

  dismissRelabel(): void {
    this.patch({ relabelPrompt: null });
  }

  private async reloadCurrent(): Promise<void> {
    if (!this.state.currentId) return;
    const item = await this.api.getItem(this.state.currentId);
    this.patch({ current: item });
  }

  // --- rebuilding -----------------------------------------------------------

  async searchRules(query: { signature?: string; q?: string }): Promise<void> {
    const result = await this.api.searchRules(query);
    this.patch({ ruleHits: result.rules });
  }

  startDraft(ruleId: string): Promise<void> {
    this.patch({ draft: { rule: ruleId, children: [] } });
    return this.markEdited();
  }

  setDraftRule(path: number[], ruleId: string): Promise<void> {
    const draft = this.requireDraft();
    nodeAt(draft, path).rule = ruleId;
    this.patch({ draft });
    return this.markEdited();
  }

  addChild(path: number[], ruleId: string): Promise<void> {
    const draft = this.requireDraft();
    nodeAt(draft, path).children.push({ rule: ruleId, children: [] });
    this.patch({ draft });
    return this.markEdited();
  }

  removeChild(path: number[], index: number): Promise<void> {
    const draft = this.requireDraft();
    nodeAt(draft, path).children.splice(index, 1);
    this.patch({ draft });
    return this.markEdited();
  }

  exportDraft(): string {
    return JSON.stringify(this.requireDraft());
  }

  importDraft(text: string): Promise<void> {
    const parsed = JSON.parse(text) as DerivationNode;
    this.patch({ draft: cloneDerivation(parsed) });
    return this.markEdited();
  }

  private requireDraft(): DerivationNode {
    if (!this.state.draft) throw new Error("no derivation draft");
    return cloneDerivation(this.state.draft);
  }

  private markEdited(): Promise<void> {
    // the last good preview stays on screen but is flagged stale until the
    // service confirms the edited draft
    this.patch({ previewStale: true });
    return this.requestPreview();
  }

  async requestPreview(): Promise<void> {
    const draft = this.state.draft;
    if (!draft) return;
    const token = ++this.previewToken;
    try {
      const preview = await this.api.previewCompose(cloneDerivation(draft));
      if (token !== this.previewToken) return; // superseded by a newer edit
      this.patch({ preview, previewStale: false, previewError: null });
    } catch (err) {
      if (token !== this.previewToken) return;
      const message = err instanceof Error ? err.message : String(err);
      this.patch({ previewError: message });
    }
  }

  async submitRebuild(annotator: string): Promise<PreviewResponse> {
    const current = this.state.current;
    if (!current) throw new Error("no item open");
    const draft = this.requireDraft();
    try {
      const stored = await this.api.rebuild(current.id, draft, annotator);
      this.patch({ previewError: null });
      await this.reloadCurrent();
      await this.refresh();
      return stored;
    } catch (err) {
      const message = err instanceof Error ? err.message : String(err);
      this.patch({ previewError: message });
      throw err;
    }
  }
}
