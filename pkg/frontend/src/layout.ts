// Layered left-to-right DAG layout for semantic graphs. Purely
// presentational: tests only check element presence, never geometry.

import { Graph } from "./api.js";

export interface PlacedNode {
  id: string;
  label: string;
  x: number;
  y: number;
  isTop: boolean;
}

export interface PlacedEdge {
  src: string;
  role: string;
  tgt: string;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

export interface Layout {
  width: number;
  height: number;
  nodes: PlacedNode[];
  edges: PlacedEdge[];
}

const COLUMN = 170;
const ROW = 64;
const MARGIN = 40;

export function layoutGraph(graph: Graph): Layout {
  const depth = new Map<string, number>();
  const incoming = new Map<string, number>();
  for (const node of graph.nodes) incoming.set(node.id, 0);
  for (const edge of graph.edges) incoming.set(edge.tgt, (incoming.get(edge.tgt) ?? 0) + 1);

  // longest-path layering from the roots; cycles fall back to depth 0
  const order = [...graph.nodes].sort((a, b) => a.id.localeCompare(b.id));
  const queue = order.filter((n) => (incoming.get(n.id) ?? 0) === 0).map((n) => n.id);
  for (const id of queue) depth.set(id, 0);
  let guard = graph.nodes.length * graph.edges.length + graph.nodes.length;
  while (queue.length && guard-- > 0) {
    const id = queue.shift()!;
    const d = depth.get(id) ?? 0;
    for (const edge of graph.edges) {
      if (edge.src !== id) continue;
      const next = Math.max(depth.get(edge.tgt) ?? 0, d + 1);
      if (next !== depth.get(edge.tgt)) {
        depth.set(edge.tgt, next);
        queue.push(edge.tgt);
      }
    }
  }
  for (const node of graph.nodes) {
    if (!depth.has(node.id)) depth.set(node.id, 0);
  }

  const lanes = new Map<number, number>();
  const placed = new Map<string, PlacedNode>();
  const nodes: PlacedNode[] = [];
  for (const node of order) {
    const column = depth.get(node.id) ?? 0;
    const lane = lanes.get(column) ?? 0;
    lanes.set(column, lane + 1);
    const item: PlacedNode = {
      id: node.id,
      label: node.label,
      x: MARGIN + column * COLUMN,
      y: MARGIN + lane * ROW,
      isTop: graph.top === node.id,
    };
    placed.set(node.id, item);
    nodes.push(item);
  }

  const edges: PlacedEdge[] = graph.edges.map((edge) => {
    const a = placed.get(edge.src)!;
    const b = placed.get(edge.tgt)!;
    return { src: edge.src, role: edge.role, tgt: edge.tgt, x1: a.x, y1: a.y, x2: b.x, y2: b.y };
  });

  const width = MARGIN * 2 + (Math.max(0, ...[...lanes.keys()]) + 1) * COLUMN;
  const height = MARGIN * 2 + Math.max(1, ...[...lanes.values()]) * ROW;
  return { width, height, nodes, edges };
}
