"""Figure builders: analysis results in, ViewSpec out.

Each builder is a pure function of its inputs (plus an explicit seed where
layout is randomized), so rendered SVG bytes are reproducible.
"""

from __future__ import annotations

import math

from .eda import Flow, ProductivityMatrix, Series
from .errors import UsageError
from .graphs import Graph
from .render import (
    Palette,
    ViewSpec,
    layout_force,
    layout_sankey,
    layout_treemap,
    layout_wordcloud,
    text_width,
)
from .vectorlab import Projection2D

MARGIN = 40.0
LABEL_SIZE = 11.0


def _frame(view: ViewSpec) -> tuple[float, float, float, float]:
    return (MARGIN, MARGIN, view.width - 2 * MARGIN, view.height - 2 * MARGIN)


def _truncate(label: str, max_px: float, size: float) -> str:
    if text_width(label, size) <= max_px:
        return label
    while label and text_width(label + "…", size) > max_px:
        label = label[:-1]
    return label + "…"


def bar_view(
    series: Series, width: float = 720, height: float = 480, palette: Palette | None = None
) -> ViewSpec:
    """Vertical bars with category labels and hover values."""
    palette = palette or Palette()
    view = ViewSpec(width, height, title=series.label)
    if not series.points:
        return view
    x0, y0, w, h = _frame(view)
    label_band = 60.0
    plot_h = h - label_band
    peak = max(v for _c, v in series.points) or 1.0
    n = len(series.points)
    slot = w / n
    bar_w = slot * 0.7
    view.add("line", x1=x0, y1=y0 + plot_h, x2=x0 + w, y2=y0 + plot_h,
             stroke="#888888")
    for i, (category, value) in enumerate(series.points):
        bar_h = plot_h * value / peak
        bx = x0 + i * slot + (slot - bar_w) / 2
        view.add(
            "rect",
            x=bx,
            y=y0 + plot_h - bar_h,
            w=bar_w,
            h=bar_h,
            fill=palette.color(0),
            meta={"label": str(category), "value": value},
        )
        label = _truncate(str(category), label_band * 1.6, LABEL_SIZE)
        view.add(
            "text",
            x=bx + bar_w / 2,
            y=y0 + plot_h + 14,
            content=label,
            size=LABEL_SIZE,
            anchor="middle" if len(label) <= 6 else "end",
        )
    return view


def evolution_view(
    series_list: list[Series],
    width: float = 720,
    height: float = 480,
    palette: Palette | None = None,
) -> ViewSpec:
    """One polyline per entity over a shared year axis, with a legend."""
    palette = palette or Palette()
    view = ViewSpec(width, height, title="evolution")
    if not series_list:
        return view
    x0, y0, w, h = _frame(view)
    legend_band = 140.0
    plot_w = w - legend_band
    years = sorted({y for s in series_list for y, _v in s.points})
    peak = max((v for s in series_list for _y, v in s.points), default=1) or 1
    span = max(years[-1] - years[0], 1)

    def px(year):
        return x0 + (year - years[0]) / span * plot_w

    def py(value):
        return y0 + h - value / peak * (h - 20)

    view.add("line", x1=x0, y1=y0 + h, x2=x0 + plot_w, y2=y0 + h, stroke="#888888")
    for year in years:
        view.add("text", x=px(year), y=y0 + h + 16, content=str(year),
                 size=LABEL_SIZE, anchor="middle")
    for idx, series in enumerate(series_list):
        color = palette.color(idx)
        points = sorted(series.points)
        d = " ".join(
            f"{'M' if i == 0 else 'L'} {px(y):.2f} {py(v):.2f}"
            for i, (y, v) in enumerate(points)
        )
        view.add("path", d=d, stroke=color, stroke_width=2,
                 meta={"label": series.label})
        for y, v in points:
            if v:
                view.add("circle", cx=px(y), cy=py(v), r=3, fill=color,
                         meta={"label": series.label, "value": v})
        ly = y0 + 10 + idx * 16
        view.add("rect", x=x0 + plot_w + 12, y=ly - 8, w=10, h=10, fill=color)
        view.add(
            "text",
            x=x0 + plot_w + 26,
            y=ly,
            content=_truncate(series.label, legend_band - 30, LABEL_SIZE),
            size=LABEL_SIZE,
        )
    return view


def treemap_view(
    series: Series, width: float = 720, height: float = 480, palette: Palette | None = None
) -> ViewSpec:
    palette = palette or Palette()
    view = ViewSpec(width, height, title=series.label)
    if not series.points:
        return view
    values = [v for _c, v in series.points]
    cells = layout_treemap(values, _frame(view))
    for i, ((category, value), (cx, cy, cw, ch)) in enumerate(
        zip(series.points, cells)
    ):
        view.add(
            "rect",
            x=cx,
            y=cy,
            w=cw,
            h=ch,
            fill=palette.color(i),
            stroke="#ffffff",
            meta={"label": str(category), "value": value},
        )
        size = min(13.0, ch * 0.5)
        if size >= 7 and cw > 20:
            view.add(
                "text",
                x=cx + 4,
                y=cy + size + 2,
                content=_truncate(str(category), cw - 8, size),
                size=size,
                fill="#ffffff",
            )
    return view


def wordcloud_view(
    frequencies: dict[str, float],
    width: float = 720,
    height: float = 480,
    seed: int = 42,
    palette: Palette | None = None,
) -> tuple[ViewSpec, list[str]]:
    """Returns (view, dropped words)."""
    palette = palette or Palette()
    view = ViewSpec(width, height, title="wordcloud")
    placements, dropped = layout_wordcloud(frequencies, _frame(view), seed=seed)
    for i, (word, size, x, y) in enumerate(placements):
        view.add(
            "text",
            x=x,
            y=y,
            content=word,
            size=size,
            fill=palette.color(i),
            anchor="middle",
            meta={"label": word, "value": frequencies[word]},
        )
    return view, dropped


def sankey_view(
    flows: list[Flow],
    width: float = 720,
    height: float = 480,
    palette: Palette | None = None,
) -> ViewSpec:
    palette = palette or Palette()
    view = ViewSpec(width, height, title="sankey")
    if not flows:
        return view
    x0, y0, w, h = _frame(view)
    label_band = 150.0
    left_nodes, right_nodes, ribbons = layout_sankey(
        flows, (x0 + label_band, y0, w - 2 * label_band, h)
    )
    color_of = {label: palette.color(i) for i, (label, *_r) in enumerate(left_nodes)}
    for flow, xl, yl, xr, yr, thickness in ribbons:
        mid = (xl + xr) / 2
        d = (
            f"M {xl:.2f} {yl:.2f} "
            f"C {mid:.2f} {yl:.2f} {mid:.2f} {yr:.2f} {xr:.2f} {yr:.2f} "
            f"L {xr:.2f} {yr + thickness:.2f} "
            f"C {mid:.2f} {yr + thickness:.2f} {mid:.2f} {yl + thickness:.2f} "
            f"{xl:.2f} {yl + thickness:.2f} Z"
        )
        view.add(
            "path",
            d=d,
            fill=color_of[flow.left[1]],
            opacity=0.45,
            meta={
                "label": f"{flow.left[1]} → {flow.right[1]}",
                "value": flow.weight,
            },
        )
    for label, nx, ny, nw, nh in left_nodes:
        view.add("rect", x=nx, y=ny, w=nw, h=nh, fill=color_of[label],
                 meta={"label": label, "value": round(nh, 2)})
        view.add("text", x=nx - 6, y=ny + nh / 2 + 4,
                 content=_truncate(label, label_band - 10, LABEL_SIZE),
                 size=LABEL_SIZE, anchor="end")
    for label, nx, ny, nw, nh in right_nodes:
        view.add("rect", x=nx, y=ny, w=nw, h=nh, fill="#666666",
                 meta={"label": label, "value": round(nh, 2)})
        view.add("text", x=nx + nw + 6, y=ny + nh / 2 + 4,
                 content=_truncate(label, label_band - 10, LABEL_SIZE),
                 size=LABEL_SIZE)
    return view


def productivity_view(
    matrix: ProductivityMatrix,
    width: float = 720,
    height: float = 480,
    palette: Palette | None = None,
) -> ViewSpec:
    """Author-by-year dot grid; dot radius scales with document count."""
    palette = palette or Palette()
    view = ViewSpec(width, height, title="productivity")
    if not matrix.authors or not matrix.years:
        return view
    x0, y0, w, h = _frame(view)
    label_band = 150.0
    plot_w = w - label_band
    col = plot_w / max(len(matrix.years), 1)
    row = h / max(len(matrix.authors), 1)
    peak = max((len(ids) for ids in matrix.cells.values()), default=1)
    for j, year in enumerate(matrix.years):
        view.add("text", x=x0 + label_band + (j + 0.5) * col, y=y0 + h + 16,
                 content=str(year), size=LABEL_SIZE, anchor="middle")
    for i, author in enumerate(matrix.authors):
        cy = y0 + (i + 0.5) * row
        view.add("text", x=x0 + label_band - 8, y=cy + 4,
                 content=_truncate(author, label_band - 12, LABEL_SIZE),
                 size=LABEL_SIZE, anchor="end")
        view.add("line", x1=x0 + label_band, y1=cy, x2=x0 + w, y2=cy,
                 stroke="#dddddd")
        for j, year in enumerate(matrix.years):
            ids = matrix.cells.get((author, year))
            if not ids:
                continue
            radius = 4 + 8 * math.sqrt(len(ids) / peak)
            view.add(
                "circle",
                cx=x0 + label_band + (j + 0.5) * col,
                cy=cy,
                r=radius,
                fill=palette.color(0),
                meta={
                    "label": f"{author}, {year}",
                    "value": ", ".join(str(d) for d in ids),
                },
            )
    return view


_NODE_FILLS = {"blue": "#3465c0", "red": "#d62728"}


def network_view(
    graph: Graph,
    width: float = 720,
    height: float = 480,
    seed: int = 42,
    iterations: int = 300,
    palette: Palette | None = None,
) -> ViewSpec:
    """Force-directed drawing; node color follows color_class/component."""
    palette = palette or Palette()
    view = ViewSpec(width, height, title="network")
    if not graph.nodes:
        return view
    positions = layout_force(graph, _frame(view), iterations=iterations, seed=seed)
    peak_w = max((w for _s, _t, w, _d in graph.edges), default=1.0) or 1.0
    for s, t, w, _directed in graph.edges:
        view.add(
            "line",
            x1=positions[s][0], y1=positions[s][1],
            x2=positions[t][0], y2=positions[t][1],
            stroke="#999999",
            stroke_width=0.8 + 2.2 * w / peak_w,
            opacity=0.6,
            meta={
                "label": f"{graph.nodes[s][0]} — {graph.nodes[t][0]}",
                "value": w,
            },
        )
    degree = [0] * len(graph.nodes)
    for s, t, _w, _d in graph.edges:
        degree[s] += 1
        degree[t] += 1
    peak_deg = max(degree, default=1) or 1
    for i, (label, kind, attrs) in enumerate(graph.nodes):
        if "color_class" in attrs:
            fill = _NODE_FILLS.get(attrs["color_class"], palette.color(0))
        elif "component" in attrs:
            fill = palette.color(int(attrs["component"]))
        else:
            fill = palette.color(0)
        meta = {"label": label}
        for key in ("citation", "documents", "citations", "hop", "text"):
            if key in attrs:
                meta[key] = attrs[key]
        view.add(
            "circle",
            cx=positions[i][0],
            cy=positions[i][1],
            r=4 + 6 * math.sqrt(degree[i] / peak_deg),
            fill=fill,
            stroke="#ffffff",
            meta=meta,
        )
    return view


# very coarse decorative landmass outlines (equirectangular, lon/lat degrees)
_COASTLINES = [
    # americas
    [(-168, 66), (-140, 60), (-122, 49), (-117, 32), (-97, 16), (-83, 9),
     (-77, -5), (-70, -33), (-72, -54), (-65, -40), (-48, -25), (-35, -8),
     (-50, 5), (-61, 10), (-81, 25), (-76, 35), (-66, 45), (-55, 52),
     (-68, 60), (-95, 70), (-130, 70)],
    # africa + eurasia
    [(-9, 36), (-17, 15), (-5, 5), (9, 4), (9, -16), (18, -34), (35, -25),
     (40, -11), (51, 12), (43, 12), (32, 30), (35, 36), (26, 40), (12, 38),
     (-6, 36)],
    [(-9, 43), (-2, 48), (8, 54), (25, 56), (30, 60), (40, 66), (70, 68),
     (110, 73), (140, 72), (160, 69), (179, 65), (160, 59), (135, 43),
     (122, 30), (108, 10), (98, 8), (80, 7), (72, 20), (57, 25), (48, 30),
     (35, 36), (26, 40), (12, 38), (-9, 36)],
    # australia
    [(114, -22), (122, -17), (137, -12), (146, -19), (153, -28), (146, -39),
     (130, -32), (115, -34)],
]


def _map_xy(lon: float, lat: float, x0: float, y0: float, w: float, h: float):
    return (x0 + (lon + 180) / 360 * w, y0 + (90 - lat) / 180 * h)


def worldmap_view(
    graph: Graph,
    width: float = 900,
    height: float = 480,
    palette: Palette | None = None,
) -> ViewSpec:
    """Country circles at centroids over a simplified coastline, with
    quadratic collaboration arcs."""
    palette = palette or Palette()
    view = ViewSpec(width, height, title="worldmap")
    x0, y0, w, h = _frame(view)
    for outline in _COASTLINES:
        d = " ".join(
            f"{'M' if i == 0 else 'L'} {px:.2f} {py:.2f}"
            for i, (px, py) in enumerate(
                _map_xy(lon, lat, x0, y0, w, h) for lon, lat in outline
            )
        ) + " Z"
        view.add("path", d=d, fill="#e8e4d8", stroke="#c8c4b8")
    located = {}
    for i, (label, _kind, attrs) in enumerate(graph.nodes):
        if "lat" in attrs and "lon" in attrs:
            located[i] = _map_xy(attrs["lon"], attrs["lat"], x0, y0, w, h)
    for s, t, weight, _d in graph.edges:
        if s not in located or t not in located:
            continue
        (xa, ya), (xb, yb) = located[s], located[t]
        mx, my = (xa + xb) / 2, min(ya, yb) - abs(xa - xb) * 0.15
        my = max(my, y0)
        view.add(
            "path",
            d=f"M {xa:.2f} {ya:.2f} Q {mx:.2f} {my:.2f} {xb:.2f} {yb:.2f}",
            stroke=palette.color(1),
            stroke_width=0.8 + weight * 0.5,
            opacity=0.55,
            meta={
                "label": f"{graph.nodes[s][0]} — {graph.nodes[t][0]}",
                "value": weight,
            },
        )
    peak_docs = max(
        (a.get("doc_count", 0) for _l, _k, a in graph.nodes), default=1
    ) or 1
    for i, (label, _kind, attrs) in enumerate(graph.nodes):
        if i not in located:
            continue
        cx, cy = located[i]
        docs = attrs.get("doc_count", 0)
        view.add(
            "circle",
            cx=cx,
            cy=cy,
            r=3 + 10 * math.sqrt(docs / peak_docs),
            fill=palette.color(0),
            opacity=0.8,
            meta={
                "label": attrs.get("name", label),
                "documents": docs,
                "domestic": attrs.get("domestic", 0),
            },
        )
    return view


def scatter_view(
    projection: Projection2D,
    width: float = 720,
    height: float = 480,
    palette: Palette | None = None,
) -> ViewSpec:
    """2-D document map colored by cluster."""
    palette = palette or Palette()
    view = ViewSpec(width, height, title="projection")
    coords = projection.coordinates
    if len(coords) == 0:
        return view
    x0, y0, w, h = _frame(view)
    xs = [float(p[0]) for p in coords]
    ys = [float(p[1]) for p in coords]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0
    for i, (px, py) in enumerate(zip(xs, ys)):
        cluster = (
            int(projection.cluster_labels[i])
            if projection.cluster_labels is not None
            else 0
        )
        meta = dict(projection.metadata[i]) if i < len(projection.metadata) else {}
        meta["cluster"] = cluster
        view.add(
            "circle",
            cx=x0 + (px - x_lo) / x_span * w,
            cy=y0 + h - (py - y_lo) / y_span * h,
            r=5,
            fill=palette.color(cluster),
            opacity=0.85,
            meta=meta,
        )
    return view


def build_view(kind: str, payload, **kwargs) -> ViewSpec:
    """Dispatch by figure kind (the CLI entry point)."""
    builders = {
        "bar": bar_view,
        "evolution": evolution_view,
        "treemap": treemap_view,
        "sankey": sankey_view,
        "productivity": productivity_view,
        "network": network_view,
        "worldmap": worldmap_view,
        "scatter": scatter_view,
    }
    if kind == "wordcloud":
        view, _dropped = wordcloud_view(payload, **kwargs)
        return view
    if kind not in builders:
        raise UsageError(f"unknown view kind: {kind}")
    return builders[kind](payload, **kwargs)
