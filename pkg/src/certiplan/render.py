"""SVG figure of one certification iteration.

Layers, bottom to top: the ``(s - delta)`` inflation (grey) and the band out
to ``s`` (red), both rasterised by evaluating the obstacle distance at cell
centres; obstacles (black); yellow halos behind pairs whose bounds leave
their allowable range; upper-bound paths (solid blue) and lower-bound paths
(dotted blue), thick for assigned pairs; robots (blue dots) and goals (green
stars). Output depends only on the inputs, so repeated renders are
byte-identical.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .geometry import obstacle_distances

__all__ = ["render_iteration_svg", "iteration_svg"]

UNIT = 1000.0  # svg user units per metre
RED = "#e8463c"
GREY = "#b4b4b4"
BLUE = "#1f5fbf"
GREEN = "#2a9d3a"
YELLOW = "#ffe14d"


def _fmt(v: float) -> str:
    s = f"{v:.1f}"
    return "0.0" if s == "-0.0" else s


class _Frame:
    def __init__(self, ws):
        self.x0, self.y0 = ws.bbox_min
        self.x1, self.y1 = ws.bbox_max

    def pt(self, p) -> tuple[str, str]:
        return _fmt((p[0] - self.x0) * UNIT), _fmt((self.y1 - p[1]) * UNIT)

    def points(self, pts) -> str:
        return " ".join(",".join(self.pt(p)) for p in pts)


def _raster(ws, delta, s, cell):
    """Row-wise runs of ``(row, col_start, col_end, colour)`` for the inflation bands."""
    if not ws.obstacles and not ws.boundary_is_obstacle:
        return []
    lo, hi = ws.bbox_min, ws.bbox_max
    nx = max(1, int(math.ceil((hi[0] - lo[0]) / cell)))
    ny = max(1, int(math.ceil((hi[1] - lo[1]) / cell)))
    cx = np.minimum(lo[0] + (np.arange(nx) + 0.5) * cell, hi[0])
    cy = np.minimum(lo[1] + (np.arange(ny) + 0.5) * cell, hi[1])
    inner = s if delta is None else s - delta
    runs = []
    for r in range(ny):
        pts = np.stack([cx, np.full(nx, cy[r])], axis=1)
        d = obstacle_distances(ws, pts)
        cls = np.zeros(nx, dtype=np.int8)
        cls[(d > 0) & (d < inner)] = 1
        if delta is not None:
            cls[(d >= inner) & (d < s)] = 2
        edges = np.flatnonzero(np.diff(cls)) + 1
        bounds = np.concatenate([[0], edges, [nx]])
        for a, b in zip(bounds[:-1], bounds[1:]):
            if cls[a]:
                runs.append((r, int(a), int(b), GREY if cls[a] == 1 else RED))
    return runs


def _star(frame, p, radius) -> str:
    pts = []
    for k in range(10):
        ang = math.pi / 2 + k * math.pi / 5
        rad = radius if k % 2 == 0 else 0.45 * radius
        pts.append((p[0] + rad * math.cos(ang), p[1] + rad * math.sin(ang)))
    return f'<polygon points="{frame.points(pts)}" fill="{GREEN}" stroke="#145a1f" stroke-width="4"/>'


def iteration_svg(scenario, record, cell: float = 0.005) -> str:
    """SVG document text for ``record`` (an :class:`~certiplan.certifier.IterationRecord`)."""
    ws = scenario.workspace
    s = scenario.safety_distance
    frame = _Frame(ws)
    w = (frame.x1 - frame.x0) * UNIT
    h = (frame.y1 - frame.y0) * UNIT
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(w / 5)}" height="{_fmt(h / 5)}" '
        f'viewBox="0 0 {_fmt(w)} {_fmt(h)}">',
        f'<rect x="0" y="0" width="{_fmt(w)}" height="{_fmt(h)}" fill="white" stroke="black" stroke-width="6"/>',
        '<g id="inflation" shape-rendering="crispEdges">',
    ]
    cu = cell * UNIT
    for r, a, b, colour in _raster(ws, record.delta, s, cell):
        y = h - (r + 1) * cu
        out.append(
            f'<rect x="{_fmt(a * cu)}" y="{_fmt(y)}" width="{_fmt((b - a) * cu)}" height="{_fmt(cu)}" fill="{colour}"/>'
        )
    out.append("</g>")
    out.append('<g id="obstacles">')
    for poly in ws.obstacles:
        out.append(f'<polygon points="{frame.points(poly.vertices)}" fill="black"/>')
    out.append("</g>")

    n_agents, n_tasks = record.upper.shape
    assigned = np.zeros((n_agents, n_tasks), dtype=bool)
    if record.assignment is not None:
        assigned = record.assignment.mask(n_agents)
    failing = record.failing_pairs()
    up = record.bounds.upper_paths
    lp = record.bounds.lower_paths

    def polyline(path, style):
        if not path.reachable or len(path.waypoints) < 2:
            return None
        return f'<polyline points="{frame.points(path.waypoints)}" fill="none" {style}/>'

    out.append('<g id="failing">')
    for i in range(n_agents):
        for j in range(n_tasks):
            if not failing[i, j]:
                continue
            path = up[i][j] if up[i][j].reachable else lp[i][j]
            line = polyline(path, f'stroke="{YELLOW}" stroke-width="60" stroke-opacity="0.8" stroke-linecap="round" stroke-linejoin="round"')
            if line:
                out.append(line)
    out.append("</g>")
    out.append('<g id="paths">')
    for i in range(n_agents):
        for j in range(n_tasks):
            width = 18 if assigned[i, j] else 6
            line = polyline(up[i][j], f'stroke="{BLUE}" stroke-width="{width}"')
            if line:
                out.append(line)
            line = polyline(lp[i][j], f'stroke="{BLUE}" stroke-width="{width}" stroke-dasharray="4,28" stroke-linecap="round"')
            if line:
                out.append(line)
    out.append("</g>")
    out.append('<g id="robots">')
    for p in scenario.robots:
        x, y = frame.pt(p)
        out.append(f'<circle cx="{x}" cy="{y}" r="45" fill="{BLUE}"/>')
    out.append("</g>")
    out.append('<g id="goals">')
    for p in scenario.targets:
        out.append(_star(frame, p, 0.07))
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_iteration_svg(scenario, record, path, cell: float = 0.005):
    Path(path).write_text(iteration_svg(scenario, record, cell))
