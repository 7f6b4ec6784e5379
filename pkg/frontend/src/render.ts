/** Rendering: document → scene → SVG.
 *
 * `buildScene` is a pure function of the document — identical documents
 * produce identical scenes (layout included), so views are reproducible
 * and testable.  Figure conventions: sinks are squares, sources circles,
 * untagged vertices diamonds; degree-0 arrows (and positive sequence
 * entries) are solid, degree-1 arrows (and negative entries) dashed.
 */

import type { QuiverDocument, Tag } from "./types.js";
import { isGraded, termText } from "./types.js";

export type Shape = "square" | "circle" | "diamond";

export interface VertexScene {
  id: number;
  x: number;
  y: number;
  shape: Shape;
  label: string;
  rank: number | null;
  tag: Tag | null;
  clickable: boolean;
  tooltip: string;
}

export interface ArrowScene {
  from: number;
  to: number;
  dashed: boolean;
  count: number;
  degree: 0 | 1 | null;
  /** Control point offset for a curved path; 0 draws a straight line. */
  bend: number;
}

export interface Scene {
  width: number;
  height: number;
  vertices: VertexScene[];
  arrows: ArrowScene[];
}

const X_GAP = 130;
const Y_GAP = 80;
const MARGIN = 70;
const NODE_RADIUS = 22;

export const UNKNOWN_TAG_TOOLTIP =
  "mutation needs a sink or source tag; run tag inference or solve ranks first";

function shapeFor(tag: Tag): Shape {
  if (tag === "sink") return "square";
  if (tag === "source") return "circle";
  return "diamond";
}

/** Longest-path layering over a set of directed edges; null on a cycle. */
function layers(n: number, edges: Array<[number, number]>): number[] | null {
  const depth = new Array<number>(n + 1).fill(0);
  const out = new Map<number, number[]>();
  const indegree = new Array<number>(n + 1).fill(0);
  for (const [a, b] of edges) {
    if (!out.has(a)) out.set(a, []);
    out.get(a)!.push(b);
    indegree[b] += 1;
  }
  const queue: number[] = [];
  for (let v = 1; v <= n; v++) if (indegree[v] === 0) queue.push(v);
  let seen = 0;
  while (queue.length > 0) {
    const v = queue.shift()!;
    seen += 1;
    for (const w of out.get(v) ?? []) {
      depth[w] = Math.max(depth[w], depth[v] + 1);
      indegree[w] -= 1;
      if (indegree[w] === 0) queue.push(w);
    }
  }
  return seen === n ? depth.slice(1) : null;
}

/** Deterministic relaxation from a circle seed, for non-layerable shapes. */
function relaxed(n: number, edges: Array<[number, number]>): Array<[number, number]> {
  const pos: Array<[number, number]> = [];
  const radius = Math.max(2, n / 2);
  for (let i = 0; i < n; i++) {
    const angle = (2 * Math.PI * i) / n;
    pos.push([radius * Math.cos(angle), radius * Math.sin(angle)]);
  }
  for (let round = 0; round < 40; round++) {
    const force: Array<[number, number]> = pos.map(() => [0, 0]);
    for (let i = 0; i < n; i++) {
      for (let j = 0; j < n; j++) {
        if (i === j) continue;
        const dx = pos[i][0] - pos[j][0];
        const dy = pos[i][1] - pos[j][1];
        const dist2 = Math.max(dx * dx + dy * dy, 0.01);
        force[i][0] += dx / dist2;
        force[i][1] += dy / dist2;
      }
    }
    for (const [a, b] of edges) {
      const dx = pos[b - 1][0] - pos[a - 1][0];
      const dy = pos[b - 1][1] - pos[a - 1][1];
      force[a - 1][0] += dx * 0.2;
      force[a - 1][1] += dy * 0.2;
      force[b - 1][0] -= dx * 0.2;
      force[b - 1][1] -= dy * 0.2;
    }
    for (let i = 0; i < n; i++) {
      pos[i][0] += Math.max(-0.5, Math.min(0.5, force[i][0]));
      pos[i][1] += Math.max(-0.5, Math.min(0.5, force[i][1]));
    }
  }
  return pos.map(([x, y]) => [Math.round(x * 100) / 100, Math.round(y * 100) / 100]);
}

function place(n: number, edges: Array<[number, number]>): Array<[number, number]> {
  const depth = layers(n, edges);
  if (depth === null) {
    const raw = relaxed(n, edges);
    const minX = Math.min(...raw.map((p) => p[0]));
    const minY = Math.min(...raw.map((p) => p[1]));
    return raw.map(([x, y]) => [
      MARGIN + (x - minX) * X_GAP * 0.6,
      MARGIN + (y - minY) * Y_GAP * 0.8,
    ]);
  }
  const perLayer = new Map<number, number[]>();
  for (let v = 1; v <= n; v++) {
    if (!perLayer.has(depth[v - 1])) perLayer.set(depth[v - 1], []);
    perLayer.get(depth[v - 1])!.push(v);
  }
  const tallest = Math.max(...[...perLayer.values()].map((vs) => vs.length));
  const out: Array<[number, number]> = new Array(n);
  for (const [layer, vs] of perLayer) {
    vs.sort((a, b) => a - b);
    const offset = ((tallest - vs.length) * Y_GAP) / 2;
    vs.forEach((v, row) => {
      out[v - 1] = [MARGIN + layer * X_GAP, MARGIN + offset + row * Y_GAP];
    });
  }
  return out;
}

export function buildScene(doc: QuiverDocument): Scene {
  if (isGraded(doc)) {
    const n = doc.vertices.length;
    const solid = doc.arrows.filter((a) => a.degree === 0);
    const pos = place(n, solid.map((a) => [a.from, a.to]));
    const vertices = doc.vertices.map((v): VertexScene => ({
      id: v.id,
      x: pos[v.id - 1][0],
      y: pos[v.id - 1][1],
      shape: shapeFor(v.tag),
      label: v.label,
      rank: v.rank,
      tag: v.tag,
      clickable: v.tag !== "unknown",
      tooltip: v.tag === "unknown" ? UNKNOWN_TAG_TOOLTIP : `mutate at ${v.id}`,
    }));
    const arrows = doc.arrows.map((a): ArrowScene => ({
      from: a.from,
      to: a.to,
      dashed: a.degree === 1,
      count: a.count,
      degree: a.degree,
      // Degree-1 arrows run against the layer flow; bow them outward.
      bend: a.degree === 1 ? 1 : pos[a.from - 1][0] > pos[a.to - 1][0] ? -1 : 0,
    }));
    return sized(vertices, arrows);
  }
  const vertices = doc.vertices.map((v, index): VertexScene => ({
    id: v.id,
    x: MARGIN + index * X_GAP,
    y: MARGIN + Y_GAP,
    shape: "circle",
    label: termText(v.label),
    rank: v.rank,
    tag: null,
    clickable: false,
    tooltip: `position ${v.id}, rank ${v.rank}`,
  }));
  const arrows = doc.entries.map((e): ArrowScene => ({
    from: e.i,
    to: e.j,
    dashed: e.a < 0,
    count: Math.abs(e.a),
    degree: null,
    // Bow long-range entries so neighbours stay readable.
    bend: e.j - e.i > 1 ? (e.a < 0 ? -1 : 1) : 0,
  }));
  return sized(vertices, arrows);
}

function sized(vertices: VertexScene[], arrows: ArrowScene[]): Scene {
  const width = Math.max(MARGIN, ...vertices.map((v) => v.x)) + MARGIN;
  const height = Math.max(MARGIN, ...vertices.map((v) => v.y)) + MARGIN;
  return { width, height, vertices, arrows };
}

// ---------------------------------------------------------------------------
// SVG

const SVG_NS = "http://www.w3.org/2000/svg";

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  return node;
}

function nodeShape(vertex: VertexScene): SVGElement {
  const common = { class: "vertex-shape", "data-shape": vertex.shape };
  if (vertex.shape === "square") {
    return svgElement("rect", {
      ...common,
      x: String(vertex.x - NODE_RADIUS),
      y: String(vertex.y - NODE_RADIUS),
      width: String(2 * NODE_RADIUS),
      height: String(2 * NODE_RADIUS),
    });
  }
  if (vertex.shape === "diamond") {
    const r = NODE_RADIUS;
    const points = [
      `${vertex.x},${vertex.y - r}`,
      `${vertex.x + r},${vertex.y}`,
      `${vertex.x},${vertex.y + r}`,
      `${vertex.x - r},${vertex.y}`,
    ].join(" ");
    return svgElement("polygon", { ...common, points });
  }
  return svgElement("circle", {
    ...common,
    cx: String(vertex.x),
    cy: String(vertex.y),
    r: String(NODE_RADIUS),
  });
}

function arrowPath(scene: Scene, arrow: ArrowScene): string {
  const a = scene.vertices.find((v) => v.id === arrow.from)!;
  const b = scene.vertices.find((v) => v.id === arrow.to)!;
  const dx = b.x - a.x;
  const dy = b.y - a.y;
  const length = Math.max(Math.hypot(dx, dy), 1);
  const ux = dx / length;
  const uy = dy / length;
  const pad = NODE_RADIUS + 6;
  const x1 = a.x + ux * pad;
  const y1 = a.y + uy * pad;
  const x2 = b.x - ux * pad;
  const y2 = b.y - uy * pad;
  if (arrow.bend === 0) {
    return `M ${x1} ${y1} L ${x2} ${y2}`;
  }
  const mx = (x1 + x2) / 2 - uy * 60 * arrow.bend;
  const my = (y1 + y2) / 2 + ux * 60 * arrow.bend;
  return `M ${x1} ${y1} Q ${mx} ${my} ${x2} ${y2}`;
}

export interface RenderHandlers {
  onVertexClick?: (id: number) => void;
}

/** Draw the scene into `host`, replacing whatever was there. */
export function renderScene(
  host: Element,
  scene: Scene,
  handlers: RenderHandlers = {},
): SVGSVGElement {
  host.replaceChildren();
  const svg = svgElement("svg", {
    viewBox: `0 0 ${scene.width} ${scene.height}`,
    width: String(scene.width),
    height: String(scene.height),
    class: "quiver-scene",
  });

  const defs = svgElement("defs", {});
  const marker = svgElement("marker", {
    id: "arrowhead",
    viewBox: "0 0 10 10",
    refX: "9",
    refY: "5",
    markerWidth: "7",
    markerHeight: "7",
    orient: "auto-start-reverse",
  });
  marker.appendChild(svgElement("path", { d: "M 0 0 L 10 5 L 0 10 z" }));
  defs.appendChild(marker);
  svg.appendChild(defs);

  for (const arrow of scene.arrows) {
    const group = svgElement("g", {
      class: "arrow",
      "data-arrow": `${arrow.from}->${arrow.to}`,
      "data-dashed": String(arrow.dashed),
      "data-count": String(arrow.count),
      ...(arrow.degree === null ? {} : { "data-degree": String(arrow.degree) }),
    });
    const path = svgElement("path", {
      d: arrowPath(scene, arrow),
      fill: "none",
      "marker-end": "url(#arrowhead)",
      class: arrow.dashed ? "edge dashed" : "edge solid",
      ...(arrow.dashed ? { "stroke-dasharray": "7 5" } : {}),
    });
    group.appendChild(path);
    if (arrow.count > 1) {
      const a = scene.vertices.find((v) => v.id === arrow.from)!;
      const b = scene.vertices.find((v) => v.id === arrow.to)!;
      const label = svgElement("text", {
        x: String((a.x + b.x) / 2 + 10),
        y: String((a.y + b.y) / 2 - 8),
        class: "edge-count",
      });
      label.textContent = `×${arrow.count}`;
      group.appendChild(label);
    }
    svg.appendChild(group);
  }

  for (const vertex of scene.vertices) {
    const group = svgElement("g", {
      class: "vertex",
      "data-vertex-id": String(vertex.id),
      "data-clickable": String(vertex.clickable),
      ...(vertex.tag === null ? {} : { "data-tag": vertex.tag }),
    });
    const title = svgElement("title", {});
    title.textContent = vertex.tooltip;
    group.appendChild(title);
    group.appendChild(nodeShape(vertex));

    const name = svgElement("text", {
      x: String(vertex.x),
      y: String(vertex.y + 4),
      "text-anchor": "middle",
      class: "vertex-label",
    });
    name.textContent = vertex.label;
    group.appendChild(name);

    const badge = svgElement("text", {
      x: String(vertex.x),
      y: String(vertex.y + NODE_RADIUS + 16),
      "text-anchor": "middle",
      class: "vertex-badge",
      "data-badge": "rank",
    });
    badge.textContent = vertex.rank === null ? "r = ?" : `r = ${vertex.rank}`;
    group.appendChild(badge);

    if (vertex.tag !== null) {
      const tagBadge = svgElement("text", {
        x: String(vertex.x),
        y: String(vertex.y - NODE_RADIUS - 8),
        "text-anchor": "middle",
        class: "vertex-badge",
        "data-badge": "tag",
      });
      tagBadge.textContent = vertex.tag;
      group.appendChild(tagBadge);
    }

    if (handlers.onVertexClick) {
      group.addEventListener("click", () => handlers.onVertexClick!(vertex.id));
    }
    svg.appendChild(group);
  }

  host.appendChild(svg);
  return svg;
}

/** The arrow set a rendered host currently shows, for comparisons. */
export function renderedArrowSet(host: Element): Set<string> {
  const out = new Set<string>();
  for (const node of host.querySelectorAll("[data-arrow]")) {
    const degree = node.getAttribute("data-degree");
    out.add(
      `${node.getAttribute("data-arrow")}` +
        `#deg=${degree ?? "-"}` +
        `#count=${node.getAttribute("data-count")}`,
    );
  }
  return out;
}
