import type { FrameworkDoc, Polarity } from "./types.js";

export interface NodePosition {
  id: string;
  x: number;
  y: number;
  depth: number;
}

export interface LayoutEdge {
  from: NodePosition;
  to: NodePosition;
  polarity: Polarity;
}

export interface TreeLayout {
  nodes: NodePosition[];
  edges: LayoutEdge[];
  width: number;
  height: number;
}

/** Children of each node in document order (relation source is the child). */
export function childrenMap(doc: FrameworkDoc): Map<string, string[]> {
  const children = new Map<string, string[]>();
  for (const arg of doc.arguments) children.set(arg.id, []);
  for (const relation of doc.relations) {
    children.get(relation.target)?.push(relation.source);
  }
  return children;
}

/**
 * Classic tidy-ish layout: each leaf takes one column, each internal node
 * sits centred over its children, depth maps to rows. Coordinates are in
 * abstract columns/rows; the renderer scales them to pixels.
 */
export function layoutTree(doc: FrameworkDoc): TreeLayout {
  const children = childrenMap(doc);
  const positions = new Map<string, NodePosition>();
  let nextColumn = 0;
  let maxDepth = 0;

  const place = (id: string, depth: number): number => {
    maxDepth = Math.max(maxDepth, depth);
    const kids = children.get(id) ?? [];
    let x: number;
    if (kids.length === 0) {
      x = nextColumn++;
    } else {
      const xs = kids.map((kid) => place(kid, depth + 1));
      x = (Math.min(...xs) + Math.max(...xs)) / 2;
    }
    positions.set(id, { id, x, y: depth, depth });
    return x;
  };
  place(doc.root, 0);

  const nodes = doc.arguments
    .map((arg) => positions.get(arg.id))
    .filter((p): p is NodePosition => p !== undefined);
  const edges: LayoutEdge[] = [];
  for (const relation of doc.relations) {
    const from = positions.get(relation.source);
    const to = positions.get(relation.target);
    if (from && to) edges.push({ from, to, polarity: relation.polarity });
  }
  return {
    nodes,
    edges,
    width: Math.max(nextColumn, 1),
    height: maxDepth + 1,
  };
}
