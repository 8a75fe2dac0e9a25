"""Slow, independent oracles for tests.

Nothing here reuses certiplan's own distance or matching code: clearance
comes from shapely, shortest paths from networkx and assignments from plain
enumeration.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import networkx as nx
import numpy as np
import shapely
from shapely.geometry import LineString, Point, Polygon as ShapelyPolygon

from .exceptions import DomainError
from .geometry import Workspace

__all__ = [
    "brute_force_bap",
    "GridOracleParams",
    "GridEstimate",
    "grid_shortest_path",
    "obstacle_union",
    "path_clearance",
    "OCTILE_DISTORTION",
]

# worst ratio of octile to Euclidean length, 2 / sqrt(2 + sqrt(2))
OCTILE_DISTORTION = 2.0 / math.sqrt(2.0 + math.sqrt(2.0))


def brute_force_bap(W) -> tuple[float, list[tuple[int, ...]]]:
    """Optimal bottleneck value and every optimal ``task_to_agent`` tuple.

    Enumerates all injections of tasks into agents; refuses more than 7 agents.
    The value is ``+inf`` when every assignment uses a missing edge.
    """
    W = np.array(W, dtype=float)
    m, k = W.shape
    if m > 7:
        raise DomainError("brute-force BAP is limited to 7 agents")
    if k > m:
        raise DomainError("more tasks than agents")
    best = math.inf
    optimal: list[tuple[int, ...]] = []
    for perm in itertools.permutations(range(m), k):
        v = max(W[a, t] for t, a in enumerate(perm))
        if v < best:
            best, optimal = v, [perm]
        elif v == best:
            optimal.append(perm)
    return float(best), optimal


def obstacle_union(ws: Workspace):
    """Obstacle set as one shapely geometry, with the box walls when they count."""
    geoms = [ShapelyPolygon(p.vertices) for p in ws.obstacles]
    if ws.boundary_is_obstacle:
        (x0, y0), (x1, y1) = ws.bbox_min, ws.bbox_max
        pad = max(x1 - x0, y1 - y0)
        outer = shapely.box(x0 - pad, y0 - pad, x1 + pad, y1 + pad)
        geoms.append(outer.difference(shapely.box(x0, y0, x1, y1)))
    if not geoms:
        return shapely.GeometryCollection()
    return shapely.union_all(geoms)


def path_clearance(ws: Workspace, waypoints) -> float:
    """Distance from a polyline to the obstacle set (``inf`` without obstacles)."""
    obs = obstacle_union(ws)
    if obs.is_empty:
        return math.inf
    pts = np.asarray(waypoints, dtype=float)
    geom = Point(pts[0]) if len(pts) == 1 else LineString(pts)
    return float(obs.distance(geom))


@dataclass(frozen=True)
class GridOracleParams:
    """Grid spacing, neighbourhood and the radius used to hook endpoints onto the grid.

    ``narrowest_corridor`` (optional) is checked to span at least three cells.
    ``shortcut`` string-pulls the grid path through ``s``-clear shortcuts; the
    result is still a feasible path but no longer monotone in the resolution.
    """

    resolution: float
    connectivity: int = 8
    endpoint_radius: float | None = None
    narrowest_corridor: float | None = None
    shortcut: bool = False

    def __post_init__(self):
        if not self.resolution > 0:
            raise DomainError("resolution must be positive")
        if self.connectivity not in (4, 8):
            raise DomainError("connectivity must be 4 or 8")
        if self.narrowest_corridor is not None and self.narrowest_corridor < 3 * self.resolution:
            raise DomainError("resolution too coarse: fewer than three cells span the narrowest corridor")

    @property
    def distortion(self) -> float:
        return math.sqrt(2.0) if self.connectivity == 4 else OCTILE_DISTORTION


@dataclass(frozen=True)
class GridEstimate:
    length: float
    distortion: float
    slack: float

    def __float__(self):
        return self.length


def grid_shortest_path(ws: Workspace, s: float, a, b, params: GridOracleParams) -> GridEstimate:
    """Dijkstra over grid cells of the ``s``-clear free space between ``a`` and ``b``.

    Grid nodes sit at ``bbox_min + resolution * (i, j)``; a node is kept when
    its obstacle distance is at least ``s`` and an edge when the segment's is.
    ``a`` and ``b`` join every kept node within ``endpoint_radius`` (default
    one grid diagonal) by an ``s``-clear segment. ``length`` is ``inf`` when
    unreachable. The straight-line segment between the endpoints counts as a
    path too, so obstacle-free estimates are exact.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    obs = obstacle_union(ws)
    h = params.resolution
    hook = params.endpoint_radius if params.endpoint_radius is not None else math.sqrt(2.0) * h * 1.0000001

    def clear(geom) -> bool:
        return obs.is_empty or obs.distance(geom) >= s

    for p in (a, b):
        if not clear(Point(p)):
            raise DomainError(f"endpoint {p.tolist()} is not {s:g}-clear")
    slack = 2.0 * hook
    if clear(LineString([a, b])) and not np.array_equal(a, b):
        return GridEstimate(float(np.hypot(*(b - a))), params.distortion, slack)
    if np.array_equal(a, b):
        return GridEstimate(0.0, params.distortion, slack)

    lo, hi = ws.bbox_min, ws.bbox_max
    nx_, ny_ = (np.floor((hi - lo) / h + 1e-9).astype(int) + 1).tolist()
    xs = lo[0] + h * np.arange(nx_)
    ys = lo[1] + h * np.arange(ny_)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    pts = shapely.points(gx.ravel(), gy.ravel())
    if obs.is_empty:
        keep = np.ones(gx.size, dtype=bool)
    else:
        keep = shapely.distance(obs, pts) >= s
    keep = keep.reshape(gx.shape)
    steps = [(1, 0), (0, 1)] if params.connectivity == 4 else [(1, 0), (0, 1), (1, 1), (1, -1)]
    G = nx.Graph()
    for dx, dy in steps:
        i0, i1 = max(0, -dx), nx_ - max(0, dx)
        j0, j1 = max(0, -dy), ny_ - max(0, dy)
        both = keep[i0:i1, j0:j1] & keep[i0 + dx : i1 + dx, j0 + dy : j1 + dy]
        ii, jj = np.nonzero(both)
        ii += i0
        jj += j0
        if not len(ii):
            continue
        if not obs.is_empty:
            segs = shapely.linestrings(
                np.stack(
                    [np.stack([xs[ii], ys[jj]], -1), np.stack([xs[ii + dx], ys[jj + dy]], -1)], axis=1
                )
            )
            ok = shapely.distance(obs, segs) >= s
            ii, jj = ii[ok], jj[ok]
        w = h * math.hypot(dx, dy)
        G.add_weighted_edges_from(((int(i), int(j)), (int(i + dx), int(j + dy)), w) for i, j in zip(ii, jj))
    for name, p in (("a", a), ("b", b)):
        G.add_node(name)
        c0 = np.clip(np.floor((p - hook - lo) / h).astype(int), 0, [nx_ - 1, ny_ - 1])
        c1 = np.clip(np.ceil((p + hook - lo) / h).astype(int), 0, [nx_ - 1, ny_ - 1])
        for i in range(c0[0], c1[0] + 1):
            for j in range(c0[1], c1[1] + 1):
                if not keep[i, j]:
                    continue
                q = np.array([xs[i], ys[j]])
                d = float(np.hypot(*(q - p)))
                if d <= hook and clear(LineString([p, q]) if d > 0 else Point(p)):
                    G.add_edge(name, (i, j), weight=d)
    try:
        length, route = nx.single_source_dijkstra(G, "a", "b")
    except nx.NetworkXNoPath:
        return GridEstimate(math.inf, params.distortion, slack)
    if params.shortcut:
        way = np.array([a] + [[xs[i], ys[j]] for i, j in route[1:-1]] + [b])
        length = _string_pull(obs, s, way)
    return GridEstimate(float(length), params.distortion, slack)


def _clear_chain(obs, s: float, pts: np.ndarray) -> np.ndarray:
    segs = shapely.linestrings(np.stack([pts[:-1], pts[1:]], axis=1))
    return np.ones(len(segs), dtype=bool) if obs.is_empty else shapely.distance(obs, segs) >= s


def _subdivide(pts: np.ndarray, step: float) -> np.ndarray:
    out = [pts[:1]]
    for p, q in zip(pts[:-1], pts[1:]):
        k = max(1, int(math.ceil(np.hypot(*(q - p)) / step)))
        out.append(p + (q - p) * (np.arange(1, k + 1)[:, None] / k))
    return np.concatenate(out)


def _string_pull(obs, s: float, way: np.ndarray, passes: int = 200) -> float:
    """Greedy shortcutting followed by clearance-preserving vertex relaxation."""
    keep = [0]
    while keep[-1] < len(way) - 1:
        i = keep[-1]
        segs = shapely.linestrings(np.stack([np.repeat(way[i : i + 1], len(way) - i - 1, 0), way[i + 1 :]], axis=1))
        ok = np.ones(len(segs), dtype=bool) if obs.is_empty else shapely.distance(obs, segs) >= s
        keep.append(i + 1 + int(np.flatnonzero(ok).max()))
    chords = np.diff(way[keep], axis=0)
    pts = _subdivide(way[keep], float(np.hypot(chords[:, 0], chords[:, 1]).sum()) / 64)
    # pull each interior vertex toward its neighbours' midpoint while both segments stay clear
    for _ in range(passes):
        moved = False
        for v in range(1, len(pts) - 1):
            target = 0.5 * (pts[v - 1] + pts[v + 1])
            t = 1.0
            while t > 1e-3:
                cand = pts[v] + t * (target - pts[v])
                if _clear_chain(obs, s, np.stack([pts[v - 1], cand, pts[v + 1]])).all():
                    moved |= bool(np.hypot(*(cand - pts[v])) > 1e-9)
                    pts[v] = cand
                    break
                t *= 0.5
        if not moved:
            break
    steps = np.diff(pts, axis=0)
    return float(np.hypot(steps[:, 0], steps[:, 1]).sum())
