/** Layered layout for the strict-preference diagram.
 *
 * Nodes are ranked by longest path from the sources, so an arrow always
 * points strictly downwards; within a layer nodes are ordered by the mean
 * position of their predecessors to keep edge crossings low.
 */

export interface Point {
  x: number;
  y: number;
}

export interface HasseLayout {
  layers: string[][];
  /** Unit-square coordinates, x and y in [0, 1], y growing downwards. */
  positions: Record<string, Point>;
}

export function layoutHasse(
  nodes: string[],
  edges: [string, string][],
): HasseLayout {
  const incoming = new Map<string, string[]>();
  const outgoing = new Map<string, string[]>();
  for (const name of nodes) {
    incoming.set(name, []);
    outgoing.set(name, []);
  }
  for (const [from, to] of edges) {
    if (!incoming.has(from) || !incoming.has(to)) {
      throw new Error(`edge refers to unknown node: ${from} -> ${to}`);
    }
    incoming.get(to)!.push(from);
    outgoing.get(from)!.push(to);
  }

  // Kahn's algorithm gives a topological order and catches cycles.
  const pending = new Map<string, number>();
  for (const name of nodes) {
    pending.set(name, incoming.get(name)!.length);
  }
  const queue = nodes.filter((name) => pending.get(name) === 0);
  const order: string[] = [];
  while (queue.length > 0) {
    const name = queue.shift()!;
    order.push(name);
    for (const next of outgoing.get(name)!) {
      const count = pending.get(next)! - 1;
      pending.set(next, count);
      if (count === 0) {
        queue.push(next);
      }
    }
  }
  if (order.length !== nodes.length) {
    throw new Error("relation contains a cycle");
  }

  const layerOf = new Map<string, number>();
  for (const name of order) {
    const above = incoming.get(name)!;
    const layer =
      above.length === 0
        ? 0
        : 1 + Math.max(...above.map((parent) => layerOf.get(parent)!));
    layerOf.set(name, layer);
  }

  const layerCount = Math.max(...[...layerOf.values()], 0) + 1;
  const layers: string[][] = Array.from({ length: layerCount }, () => []);
  for (const name of nodes) {
    layers[layerOf.get(name)!]!.push(name);
  }

  const positions: Record<string, Point> = {};
  layers.forEach((layer, index) => {
    if (index === 0) {
      layer.sort((a, b) => a.localeCompare(b));
    } else {
      const barycenter = (name: string): number => {
        const parents = incoming
          .get(name)!
          .filter((parent) => parent in positions);
        if (parents.length === 0) {
          return 0.5;
        }
        const total = parents.reduce(
          (sum, parent) => sum + positions[parent]!.x,
          0,
        );
        return total / parents.length;
      };
      layer.sort((a, b) => {
        const delta = barycenter(a) - barycenter(b);
        return delta !== 0 ? delta : a.localeCompare(b);
      });
    }
    const y = layerCount === 1 ? 0.5 : index / (layerCount - 1);
    layer.forEach((name, column) => {
      positions[name] = { x: (column + 1) / (layer.length + 1), y };
    });
  });

  return { layers, positions };
}
