// Typed client for the review service. Every semantic graph shown anywhere
// in the workbench comes out of these calls; nothing is computed locally.

export interface GraphNode {
  id: string;
  label: string;
  anchor: [number, number] | null;
}

export interface GraphEdge {
  src: string;
  role: string;
  tgt: string;
}

export interface Graph {
  top: string | null;
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface DerivationNode {
  rule: string;
  children: DerivationNode[];
}

export interface ItemSummary {
  id: string;
  source: string;
  sentence: string;
  status: string;
  rebuilt: boolean;
  n_labels: number;
  provenance: string;
}

export interface ItemView {
  id: string;
  sentence: string;
  tokens: string[];
  source: string;
  tree: string | null;
  graph: Graph | null;
  derivation: DerivationNode | null;
  labels: Record<string, string>;
  provenance: string;
  status: string;
  rebuilt: boolean;
}

export interface ItemPage {
  items: ItemSummary[];
  page: number;
  pages: number;
  total: number;
}

export interface RuleJson {
  id: string;
  lhs: string;
  syn_rhs: Array<{ nt: string } | { t: string }>;
  sem: Graph & { externals: string[]; nt_edges: { label: string; attachments: string[] }[] };
  count: number;
}

export interface RuleHit {
  signature: string;
  rule: RuleJson;
}

export interface PreviewResponse {
  tree: string;
  graph: Graph;
}

export type Label = "accept" | "reject" | "abandon";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class Client {
  constructor(
    private base: string,
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { "Content-Type": "application/json" };
    }
    const resp = await this.fetchImpl(this.base + path, init);
    const payload = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, (payload as { error?: string }).error ?? resp.statusText);
    }
    return payload as T;
  }

  listItems(filter: { status?: string; source?: string; page?: number } = {}): Promise<ItemPage> {
    const params = new URLSearchParams();
    if (filter.status) params.set("status", filter.status);
    if (filter.source) params.set("source", filter.source);
    if (filter.page !== undefined) params.set("page", String(filter.page));
    const qs = params.toString();
    return this.call<ItemPage>("GET", qs ? `/items?${qs}` : "/items");
  }

  getItem(id: string): Promise<ItemView> {
    return this.call<ItemView>("GET", `/items/${encodeURIComponent(id)}`);
  }

  label(id: string, annotator: string, label: Label, force = false): Promise<{ ok: boolean }> {
    return this.call("POST", `/items/${encodeURIComponent(id)}/label`, {
      annotator,
      label,
      ...(force ? { force: true } : {}),
    });
  }

  previewCompose(derivation: DerivationNode): Promise<PreviewResponse> {
    return this.call<PreviewResponse>("POST", "/preview/compose", { derivation });
  }

  rebuild(id: string, derivation: DerivationNode, annotator: string): Promise<PreviewResponse> {
    return this.call<PreviewResponse>("POST", `/items/${encodeURIComponent(id)}/rebuild`, {
      derivation,
      annotator,
    });
  }

  searchRules(query: { signature?: string; q?: string } = {}): Promise<{ rules: RuleHit[]; total: number }> {
    const params = new URLSearchParams();
    if (query.signature) params.set("signature", query.signature);
    if (query.q) params.set("q", query.q);
    const qs = params.toString();
    return this.call("GET", qs ? `/rules?${qs}` : "/rules");
  }

  corpusReport(): Promise<Record<string, unknown>> {
    return this.call("GET", "/reports/corpus");
  }

  iaaReport(): Promise<Record<string, Record<string, number | null>>> {
    return this.call("GET", "/reports/iaa");
  }
}
