"""Deterministic layout engines and a static SVG/HTML emitter.

Every figure is described as a ViewSpec (ordered drawing primitives with
optional metadata maps) and rendered to SVG 1.1; metadata becomes native
`<title>` hover text, so no scripting ships with the output. Text extents
come from an embedded character-width table, never from system fonts, so
layouts reproduce bit-for-bit across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

from .errors import UsageError
from .graphs import Graph

DEFAULT_PALETTE = [
    "#4c78a8",
    "#f58518",
    "#54a24b",
    "#e45756",
    "#72b7b2",
    "#eeca3b",
    "#b279a2",
    "#ff9da6",
    "#9d755d",
    "#bab0ac",
]
DOCUMENT_BLUE = "#3465c0"
REFERENCE_RED = "#d62728"


@dataclass
class Palette:
    colors: list[str] = field(default_factory=lambda: list(DEFAULT_PALETTE))
    document_blue: str = DOCUMENT_BLUE
    reference_red: str = REFERENCE_RED

    def color(self, index: int) -> str:
        return self.colors[index % len(self.colors)]


@dataclass
class ViewSpec:
    width: float
    height: float
    elements: list[dict] = field(default_factory=list)
    title: str = ""

    def add(self, element_type: str, **attrs) -> dict:
        element = {"type": element_type, **attrs}
        self.elements.append(element)
        return element


# -- text metrics ----------------------------------------------------------

# width of one character as a fraction of the font size
_CHAR_WIDTHS = {}
for ch in "iljtf!.,:;'|()[]":
    _CHAR_WIDTHS[ch] = 0.35
for ch in "mwMW@":
    _CHAR_WIDTHS[ch] = 0.9
for ch in "ABCDEFGHJKLNOPQRSTUVXYZ":
    _CHAR_WIDTHS[ch] = 0.72
for ch in "I":
    _CHAR_WIDTHS[ch] = 0.4
_CHAR_WIDTHS[" "] = 0.32
_DEFAULT_CHAR_WIDTH = 0.58


def text_width(text: str, size: float) -> float:
    return size * sum(_CHAR_WIDTHS.get(c, _DEFAULT_CHAR_WIDTH) for c in text)


def text_height(size: float) -> float:
    return size * 1.15


# -- treemap ----------------------------------------------------------------


def layout_treemap(values, rect) -> list[tuple[float, float, float, float]]:
    """Squarified treemap: greedy row packing, a value joins the current row
    only while it does not worsen the row's worst aspect ratio."""
    x, y, w, h = rect
    if any(v <= 0 for v in values):
        raise UsageError("treemap values must be positive")
    if not values:
        return []
    total = sum(values)
    areas = [v / total * w * h for v in values]
    out: list[tuple[float, float, float, float]] = [None] * len(areas)
    indices = list(range(len(areas)))
    pos = 0
    while pos < len(indices):
        side = min(w, h)
        row = [indices[pos]]
        pos += 1
        while pos < len(indices):
            current = _worst_ratio([areas[i] for i in row], side)
            with_next = _worst_ratio(
                [areas[i] for i in row] + [areas[indices[pos]]], side
            )
            if with_next <= current:
                row.append(indices[pos])
                pos += 1
            else:
                break
        row_area = sum(areas[i] for i in row)
        if w >= h:
            col_w = row_area / h if h > 0 else 0
            cy = y
            for i in row:
                cell_h = areas[i] / col_w if col_w > 0 else 0
                out[i] = (x, cy, col_w, cell_h)
                cy += cell_h
            x += col_w
            w -= col_w
        else:
            row_h = row_area / w if w > 0 else 0
            cx = x
            for i in row:
                cell_w = areas[i] / row_h if row_h > 0 else 0
                out[i] = (cx, y, cell_w, row_h)
                cx += cell_w
            y += row_h
            h -= row_h
    return out


def _worst_ratio(row_areas, side: float) -> float:
    total = sum(row_areas)
    if total <= 0 or side <= 0:
        return math.inf
    thickness = total / side
    worst = 0.0
    for area in row_areas:
        length = area / thickness
        ratio = max(length / thickness, thickness / length)
        worst = max(worst, ratio)
    return worst


# -- wordcloud ---------------------------------------------------------------


def layout_wordcloud(
    frequencies: dict[str, float],
    rect,
    seed: int = 42,
    min_size: float = 12.0,
    max_size: float = 46.0,
):
    """Spiral placement in frequency order; boxes never overlap.

    Returns (placements, dropped) where placements are
    (word, font size, x, y) with x/y the text anchor (middle/baseline).
    """
    x0, y0, w, h = rect
    if not frequencies:
        raise UsageError("wordcloud needs at least one word")
    items = sorted(frequencies.items(), key=lambda kv: (-kv[1], kv[0]))
    lo = min(v for _, v in items)
    hi = max(v for _, v in items)
    rng = np.random.default_rng(seed)
    cx, cy = x0 + w / 2, y0 + h / 2
    boxes: list[tuple[float, float, float, float]] = []
    placements = []
    dropped = []
    max_radius = math.hypot(w, h) / 2
    for word, freq in items:
        size = (
            min_size
            if hi == lo
            else min_size + (max_size - min_size) * (freq - lo) / (hi - lo)
        )
        bw = text_width(word, size)
        bh = text_height(size)
        angle0 = float(rng.uniform(0, 2 * math.pi))
        placed = False
        t = 0.0
        while True:
            radius = 2.2 * t
            if radius > max_radius:
                break
            angle = angle0 + t
            px = cx + radius * math.cos(angle)
            py = cy + radius * math.sin(angle)
            box = (px - bw / 2, py - bh / 2, bw, bh)
            if _inside(box, (x0, y0, w, h)) and not any(
                _intersects(box, other) for other in boxes
            ):
                boxes.append(box)
                # baseline sits 0.85*size below the box top
                placements.append((word, size, px, py - bh / 2 + 0.85 * size))
                placed = True
                break
            t += 0.35
        if not placed:
            dropped.append(word)
    return placements, dropped


def _inside(box, rect) -> bool:
    bx, by, bw, bh = box
    rx, ry, rw, rh = rect
    return bx >= rx and by >= ry and bx + bw <= rx + rw and by + bh <= ry + rh


def _intersects(a, b) -> bool:
    ax, ay, aw, ah = a
    bx, by, bw, bh = b
    return not (ax + aw <= bx or bx + bw <= ax or ay + ah <= by or by + bh <= ay)


# -- sankey -------------------------------------------------------------------


def layout_sankey(flows, rect, node_width: float = 14.0, gap: float = 6.0):
    """Two-column flow layout.

    Returns (left nodes, right nodes, ribbons); nodes are
    (label, x, y, width, height), ribbons are
    (flow, x_left, y_left, x_right, y_right, thickness).
    """
    if not flows:
        raise UsageError("sankey needs at least one flow")
    x0, y0, w, h = rect
    left_totals: dict[str, int] = {}
    right_totals: dict[str, int] = {}
    for f in flows:
        left_totals[f.left[1]] = left_totals.get(f.left[1], 0) + f.weight
        right_totals[f.right[1]] = right_totals.get(f.right[1], 0) + f.weight
    left_order = sorted(left_totals.items(), key=lambda kv: (-kv[1], kv[0]))
    right_order = sorted(right_totals.items(), key=lambda kv: (-kv[1], kv[0]))
    total = sum(f.weight for f in flows)
    n_gaps = max(len(left_order), len(right_order)) - 1
    scale = (h - gap * n_gaps) / total

    def stack(order, x):
        nodes = {}
        y = y0
        for label, weight in order:
            height = weight * scale
            nodes[label] = (label, x, y, node_width, height)
            y += height + gap
        return nodes

    left_nodes = stack(left_order, x0)
    right_nodes = stack(right_order, x0 + w - node_width)

    # stack ribbons on each node in deterministic flow order
    offsets_left = {label: 0.0 for label in left_nodes}
    offsets_right = {label: 0.0 for label in right_nodes}
    ribbons = []
    for f in sorted(flows, key=lambda f: (-f.weight, f.left[1], f.right[1])):
        thickness = f.weight * scale
        ln = left_nodes[f.left[1]]
        rn = right_nodes[f.right[1]]
        yl = ln[2] + offsets_left[f.left[1]]
        yr = rn[2] + offsets_right[f.right[1]]
        offsets_left[f.left[1]] += thickness
        offsets_right[f.right[1]] += thickness
        ribbons.append((f, ln[1] + node_width, yl, rn[1], yr, thickness))
    return list(left_nodes.values()), list(right_nodes.values()), ribbons


# -- force-directed ------------------------------------------------------------


def layout_force(
    graph: Graph, rect=(0, 0, 640, 480), iterations: int = 300, seed: int = 42
) -> list[tuple[float, float]]:
    """Fruchterman-Reingold layout; disconnected components get separate
    horizontal bands. Deterministic for a fixed seed."""
    n = len(graph.nodes)
    if n == 0:
        raise UsageError("layout_force needs at least one node")
    x0, y0, w, h = rect
    adjacency: dict[int, set[int]] = {i: set() for i in range(n)}
    for s, t, _w, _d in graph.edges:
        if s != t:
            adjacency[s].add(t)
            adjacency[t].add(s)
    components = _connected(adjacency)
    rng = np.random.default_rng(seed)
    positions = np.zeros((n, 2))
    band_h = h / len(components)
    for band, members in enumerate(components):
        band_rect = (x0, y0 + band * band_h, w, band_h)
        _fr_layout(members, adjacency, band_rect, iterations, rng, positions)
    return [(float(px), float(py)) for px, py in positions]


def _connected(adjacency) -> list[list[int]]:
    seen, components = set(), []
    for start in sorted(adjacency):
        if start in seen:
            continue
        stack, members = [start], []
        seen.add(start)
        while stack:
            node = stack.pop()
            members.append(node)
            for nxt in sorted(adjacency[node]):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        components.append(sorted(members))
    components.sort(key=lambda m: (-len(m), m[0]))
    return components


def _fr_layout(members, adjacency, rect, iterations, rng, positions):
    x0, y0, w, h = rect
    n = len(members)
    if n == 1:
        positions[members[0]] = (x0 + w / 2, y0 + h / 2)
        return
    idx = {node: i for i, node in enumerate(members)}
    pos = np.column_stack(
        (rng.uniform(x0 + w * 0.1, x0 + w * 0.9, n),
         rng.uniform(y0 + h * 0.1, y0 + h * 0.9, n))
    )
    k = math.sqrt(w * h / n)
    edges = [
        (idx[a], idx[b])
        for a in members
        for b in adjacency[a]
        if a < b and b in idx
    ]
    temperature = min(w, h) / 8
    cooling = temperature / (iterations + 1)
    for _ in range(iterations):
        disp = np.zeros_like(pos)
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.sqrt(np.sum(delta * delta, axis=2))
        np.fill_diagonal(dist, 1.0)
        dist = np.maximum(dist, 1e-6)
        repulse = (k * k) / dist
        disp += np.sum(delta / dist[:, :, None] * repulse[:, :, None], axis=1)
        for a, b in edges:
            d = pos[a] - pos[b]
            dd = max(float(np.hypot(*d)), 1e-6)
            force = dd * dd / k
            shift = d / dd * force
            disp[a] -= shift
            disp[b] += shift
        lengths = np.maximum(np.sqrt(np.sum(disp * disp, axis=1)), 1e-12)
        capped = np.minimum(lengths, temperature)
        pos += disp / lengths[:, None] * capped[:, None]
        pos[:, 0] = np.clip(pos[:, 0], x0 + 5, x0 + w - 5)
        pos[:, 1] = np.clip(pos[:, 1], y0 + 5, y0 + h - 5)
        temperature = max(temperature - cooling, 0.01)
    for node, i in idx.items():
        positions[node] = pos[i]


# -- SVG emission --------------------------------------------------------------


def _fmt(value: float) -> str:
    text = f"{value:.2f}".rstrip("0").rstrip(".")
    return text if text else "0"


def _title_tag(meta: dict) -> str:
    if not meta:
        return ""
    if "label" in meta and "value" in meta and len(meta) == 2:
        body = f"{meta['label']}: {meta['value']}"
    else:
        body = ", ".join(f"{k}: {v}" for k, v in meta.items())
    return f"<title>{escape(str(body))}</title>"


def _emit_element(el: dict) -> str:
    kind = el["type"]
    meta = el.get("meta") or {}
    title = _title_tag(meta)
    if kind == "rect":
        attrs = (
            f'x="{_fmt(el["x"])}" y="{_fmt(el["y"])}" '
            f'width="{_fmt(el["w"])}" height="{_fmt(el["h"])}" '
            f'fill="{el.get("fill", "#888888")}"'
        )
        if el.get("stroke"):
            attrs += f' stroke="{el["stroke"]}" stroke-width="{_fmt(el.get("stroke_width", 1))}"'
        if title:
            return f"<rect {attrs}>{title}</rect>"
        return f"<rect {attrs}/>"
    if kind == "circle":
        attrs = (
            f'cx="{_fmt(el["cx"])}" cy="{_fmt(el["cy"])}" r="{_fmt(el["r"])}" '
            f'fill="{el.get("fill", "#888888")}"'
        )
        if el.get("stroke"):
            attrs += f' stroke="{el["stroke"]}" stroke-width="{_fmt(el.get("stroke_width", 1))}"'
        if el.get("opacity") is not None:
            attrs += f' fill-opacity="{_fmt(el["opacity"])}"'
        if title:
            return f"<circle {attrs}>{title}</circle>"
        return f"<circle {attrs}/>"
    if kind == "line":
        attrs = (
            f'x1="{_fmt(el["x1"])}" y1="{_fmt(el["y1"])}" '
            f'x2="{_fmt(el["x2"])}" y2="{_fmt(el["y2"])}" '
            f'stroke="{el.get("stroke", "#555555")}" '
            f'stroke-width="{_fmt(el.get("stroke_width", 1))}"'
        )
        if el.get("opacity") is not None:
            attrs += f' stroke-opacity="{_fmt(el["opacity"])}"'
        if title:
            return f"<line {attrs}>{title}</line>"
        return f"<line {attrs}/>"
    if kind == "path":
        attrs = f'd="{el["d"]}" fill="{el.get("fill", "none")}"'
        if el.get("stroke"):
            attrs += f' stroke="{el["stroke"]}" stroke-width="{_fmt(el.get("stroke_width", 1))}"'
        if el.get("opacity") is not None:
            attrs += f' fill-opacity="{_fmt(el["opacity"])}" stroke-opacity="{_fmt(el["opacity"])}"'
        if title:
            return f"<path {attrs}>{title}</path>"
        return f"<path {attrs}/>"
    if kind == "text":
        attrs = (
            f'x="{_fmt(el["x"])}" y="{_fmt(el["y"])}" '
            f'font-size="{_fmt(el.get("size", 12))}" '
            f'font-family="Helvetica, Arial, sans-serif" '
            f'fill="{el.get("fill", "#222222")}"'
        )
        if el.get("anchor"):
            attrs += f' text-anchor="{el["anchor"]}"'
        return f"<text {attrs}>{title}{escape(str(el['content']))}</text>"
    if kind == "group":
        inner = "".join(_emit_element(child) for child in el.get("children", []))
        return f"<g>{title}{inner}</g>"
    raise UsageError(f"unknown element type: {kind}")


def emit_svg(view: ViewSpec) -> bytes:
    for el in view.elements:
        _check_bounds(el, view)
    body = "".join(_emit_element(el) for el in view.elements)
    title = f"<title>{escape(view.title)}</title>" if view.title else ""
    doc = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(view.width)}" height="{_fmt(view.height)}" '
        f'viewBox="0 0 {_fmt(view.width)} {_fmt(view.height)}">'
        f"{title}{body}</svg>\n"
    )
    return doc.encode("utf-8")


def _check_bounds(el: dict, view: ViewSpec) -> None:
    for key in ("x", "cx", "x1", "x2"):
        if key in el and not (-0.5 <= el[key] <= view.width + 0.5):
            raise UsageError(f"element coordinate {key}={el[key]} outside view")
    for key in ("y", "cy", "y1", "y2"):
        if key in el and not (-0.5 <= el[key] <= view.height + 0.5):
            raise UsageError(f"element coordinate {key}={el[key]} outside view")
    for key in ("x", "y", "w", "h", "cx", "cy", "r"):
        if key in el and not math.isfinite(el[key]):
            raise UsageError(f"non-finite coordinate {key} in element")


def emit_html(views: list[tuple[str, ViewSpec]]) -> bytes:
    """Static page wrapping one or more SVGs with headings."""
    parts = [
        "<!DOCTYPE html>",
        '<html><head><meta charset="utf-8"><title>bibx figures</title>',
        "<style>body{font-family:sans-serif;margin:2em}figure{margin:2em 0}</style>",
        "</head><body>",
    ]
    for heading, view in views:
        parts.append(f"<figure><h2>{escape(heading)}</h2>")
        parts.append(emit_svg(view).decode("utf-8").split("\n", 1)[1])
        parts.append("</figure>")
    parts.append("</body></html>")
    return "\n".join(parts).encode("utf-8")
