"""Planar clearance predicates over a box workspace with polygonal obstacles.

Distances are exact double-precision evaluations of point-segment and
segment-segment distances; comparisons against a clearance margin use ``>=``
without tolerance inflation.

A margin of zero denotes the closed free space itself: a point is admissible
unless it lies strictly inside an obstacle, and a segment is admissible unless
it enters an obstacle's interior.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exceptions import DegeneratePolygonError, DomainError

__all__ = [
    "Polygon",
    "Workspace",
    "as_point",
    "point_obstacle_distance",
    "obstacle_distances",
    "in_delta_interior",
    "segment_clearance",
    "segment_clearances",
    "uninterrupted_edge",
    "interior_mask",
    "edges_clear",
    "rectangle",
    "make_workspace",
]


def as_point(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.shape != (2,) or not np.all(np.isfinite(arr)):
        raise DomainError(f"expected a finite 2-D point, got {p!r}")
    return arr


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _segments_intersect(p1, p2, q1, q2) -> bool:
    """Closed segment intersection test (touching counts)."""
    d1 = _cross(*(q2 - q1), *(p1 - q1))
    d2 = _cross(*(q2 - q1), *(p2 - q1))
    d3 = _cross(*(p2 - p1), *(q1 - p1))
    d4 = _cross(*(p2 - p1), *(q2 - p1))
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True

    def on_seg(a, b, c):
        return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])

    return (
        (d1 == 0 and on_seg(q1, q2, p1))
        or (d2 == 0 and on_seg(q1, q2, p2))
        or (d3 == 0 and on_seg(p1, p2, q1))
        or (d4 == 0 and on_seg(p1, p2, q2))
    )


@dataclass(frozen=True, eq=False)
class Polygon:
    """Closed simple polygon stored counter-clockwise.

    Clockwise input is reversed. Fewer than three vertices, repeated
    consecutive vertices, collinear consecutive triples and self-intersections
    raise :class:`DegeneratePolygonError`.
    """

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise DegeneratePolygonError("a polygon needs at least three 2-D vertices")
        if not np.all(np.isfinite(v)):
            raise DegeneratePolygonError("polygon vertices must be finite")
        k = len(v)
        nxt = np.roll(v, -1, axis=0)
        if np.any(np.all(v == nxt, axis=1)):
            raise DegeneratePolygonError("consecutive polygon vertices must be distinct")
        prv = np.roll(v, 1, axis=0)
        turn = _cross(v[:, 0] - prv[:, 0], v[:, 1] - prv[:, 1], nxt[:, 0] - v[:, 0], nxt[:, 1] - v[:, 1])
        if np.any(turn == 0):
            raise DegeneratePolygonError("polygon has collinear consecutive vertices")
        for i in range(k):
            for j in range(i + 1, k):
                if j == i + 1 or (i == 0 and j == k - 1):
                    continue
                if _segments_intersect(v[i], v[(i + 1) % k], v[j], v[(j + 1) % k]):
                    raise DegeneratePolygonError("polygon is not simple")
        area2 = float(np.sum(v[:, 0] * nxt[:, 1] - nxt[:, 0] * v[:, 1]))
        if area2 < 0:
            v = v[::-1].copy()
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices, np.roll(self.vertices, -1, axis=0)

    def __len__(self):
        return len(self.vertices)


@dataclass(frozen=True, eq=False)
class Workspace:
    """Axis-aligned box containing closed polygonal obstacles.

    When ``boundary_is_obstacle`` is set, the box walls also bound the
    clearance of every point; by default only the obstacles do.
    """

    bbox_min: np.ndarray
    bbox_max: np.ndarray
    obstacles: tuple = ()
    boundary_is_obstacle: bool = False
    _ea: np.ndarray = field(init=False, repr=False)
    _eb: np.ndarray = field(init=False, repr=False)
    _epoly: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        lo = as_point(self.bbox_min).copy()
        hi = as_point(self.bbox_max).copy()
        if not np.all(lo < hi):
            raise DomainError("bbox_min must be componentwise smaller than bbox_max")
        polys = tuple(o if isinstance(o, Polygon) else Polygon(o) for o in self.obstacles)
        for idx, poly in enumerate(polys):
            if np.any(poly.vertices < lo) or np.any(poly.vertices > hi):
                raise DomainError(f"obstacle {idx} has a vertex outside the workspace box")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "bbox_min", lo)
        object.__setattr__(self, "bbox_max", hi)
        object.__setattr__(self, "obstacles", polys)
        if polys:
            ea = np.concatenate([p.edges[0] for p in polys])
            eb = np.concatenate([p.edges[1] for p in polys])
            ep = np.concatenate([np.full(len(p), i) for i, p in enumerate(polys)])
        else:
            ea = np.zeros((0, 2))
            eb = np.zeros((0, 2))
            ep = np.zeros(0, dtype=int)
        for arr in (ea, eb, ep):
            arr.setflags(write=False)
        object.__setattr__(self, "_ea", ea)
        object.__setattr__(self, "_eb", eb)
        object.__setattr__(self, "_epoly", ep)

    @property
    def extent(self) -> np.ndarray:
        return self.bbox_max - self.bbox_min

    @property
    def area(self) -> float:
        lx, ly = self.extent
        return float(lx * ly)

    @property
    def n_edges(self) -> int:
        return len(self._ea)

    def contains(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.all((pts >= self.bbox_min) & (pts <= self.bbox_max), axis=1)


def _check_inside_box(ws: Workspace, pts: np.ndarray):
    if not np.all(ws.contains(pts)):
        raise DomainError("point outside the workspace box")


def _point_segment_dist(px, py, ax, ay, bx, by):
    """Broadcast distance from points (px, py) to segments [a, b]."""
    dx = bx - ax
    dy = by - ay
    len2 = dx * dx + dy * dy
    with np.errstate(invalid="ignore", divide="ignore"):
        t = ((px - ax) * dx + (py - ay) * dy) / len2
    t = np.where(len2 > 0, np.clip(t, 0.0, 1.0), 0.0)
    return np.hypot(px - (ax + t * dx), py - (ay + t * dy))


def _inside_any(ws: Workspace, pts: np.ndarray) -> np.ndarray:
    """Even-odd containment test against every obstacle (boundary ambiguous)."""
    inside = np.zeros(len(pts), dtype=bool)
    px = pts[:, 0:1]
    py = pts[:, 1:2]
    for poly in ws.obstacles:
        a, b = poly.edges
        x1, y1 = a[:, 0], a[:, 1]
        x2, y2 = b[:, 0], b[:, 1]
        straddle = (y1 > py) != (y2 > py)
        with np.errstate(invalid="ignore", divide="ignore"):
            xint = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
        crossings = np.count_nonzero(straddle & (px < xint), axis=1)
        inside |= (crossings % 2) == 1
    return inside


def _boundary_distances(ws: Workspace, pts: np.ndarray) -> np.ndarray:
    """Distance from each point to the union of obstacle boundaries."""
    out = np.full(len(pts), np.inf)
    if ws.n_edges == 0:
        return out
    chunk = max(1, 200_000 // ws.n_edges)
    ea, eb = ws._ea, ws._eb
    for s in range(0, len(pts), chunk):
        p = pts[s : s + chunk]
        d = _point_segment_dist(p[:, 0:1], p[:, 1:2], ea[:, 0], ea[:, 1], eb[:, 0], eb[:, 1])
        out[s : s + chunk] = d.min(axis=1)
    return out


def _wall_distances(ws: Workspace, pts: np.ndarray) -> np.ndarray:
    return np.minimum((pts - ws.bbox_min).min(axis=1), (ws.bbox_max - pts).min(axis=1))


def _signed_distances(ws: Workspace, pts: np.ndarray) -> np.ndarray:
    """Obstacle distance, negated for points strictly inside an obstacle."""
    d = _boundary_distances(ws, pts)
    inside = _inside_any(ws, pts) & (d > 0)
    d = np.where(inside, -d, d)
    if ws.boundary_is_obstacle:
        d = np.minimum(d, _wall_distances(ws, pts))
    return d


def obstacle_distances(ws: Workspace, points) -> np.ndarray:
    """Vectorised :func:`point_obstacle_distance` for an ``(N, 2)`` array."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    _check_inside_box(ws, pts)
    return np.maximum(_signed_distances(ws, pts), 0.0)


def point_obstacle_distance(ws: Workspace, p) -> float:
    """Euclidean distance from ``p`` to the obstacle set; zero inside an obstacle.

    With ``boundary_is_obstacle`` the distance to the box walls is included.

    >>> ws = Workspace([-1, -1], [3, 3], [Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])])
    >>> point_obstacle_distance(ws, (2, 0.5))
    1.0
    """
    return float(obstacle_distances(ws, as_point(p)[None, :])[0])


def interior_mask(ws: Workspace, points, delta: float) -> np.ndarray:
    """Boolean mask of points lying in the ``delta``-interior of the free space."""
    if delta < 0:
        raise DomainError("delta must be nonnegative")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    inbox = ws.contains(pts)
    out = np.zeros(len(pts), dtype=bool)
    if np.any(inbox):
        sd = _signed_distances(ws, pts[inbox])
        out[inbox] = sd >= delta
    return out


def in_delta_interior(ws: Workspace, p, delta: float) -> bool:
    """True iff ``p`` is inside the box and keeps clearance ``delta`` (inclusive)."""
    return bool(interior_mask(ws, as_point(p)[None, :], delta)[0])


def _segment_edge_dist(a, b, ea, eb):
    """Distance matrix between segments ``[a_i, b_i]`` and edges ``[ea_k, eb_k]``.

    ``a``/``b`` are ``(M, 2)``; ``ea``/``eb`` are ``(E, 2)``; result ``(M, E)``.
    Proper crossings yield zero; all touching cases are covered by the four
    endpoint-to-segment distances. Endpoints are put in lexicographic order
    first so the result does not depend on the segment's direction.
    """
    swap = (a[:, 0] > b[:, 0]) | ((a[:, 0] == b[:, 0]) & (a[:, 1] > b[:, 1]))
    a, b = np.where(swap[:, None], b, a), np.where(swap[:, None], a, b)
    ax, ay = a[:, 0:1], a[:, 1:2]
    bx, by = b[:, 0:1], b[:, 1:2]
    cx, cy = ea[:, 0], ea[:, 1]
    dx, dy = eb[:, 0], eb[:, 1]
    o1 = _cross(bx - ax, by - ay, cx - ax, cy - ay)
    o2 = _cross(bx - ax, by - ay, dx - ax, dy - ay)
    o3 = _cross(dx - cx, dy - cy, ax - cx, ay - cy)
    o4 = _cross(dx - cx, dy - cy, bx - cx, by - cy)
    proper = (np.sign(o1) * np.sign(o2) < 0) & (np.sign(o3) * np.sign(o4) < 0)
    dist = np.minimum(
        np.minimum(_point_segment_dist(ax, ay, cx, cy, dx, dy), _point_segment_dist(bx, by, cx, cy, dx, dy)),
        np.minimum(_point_segment_dist(cx, cy, ax, ay, bx, by), _point_segment_dist(dx, dy, ax, ay, bx, by)),
    )
    return np.where(proper, 0.0, dist)


def segment_clearances(ws: Workspace, a, b) -> np.ndarray:
    """Vectorised :func:`segment_clearance` for ``(M, 2)`` endpoint arrays."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    _check_inside_box(ws, a)
    _check_inside_box(ws, b)
    out = np.full(len(a), np.inf)
    if ws.n_edges:
        chunk = max(1, 100_000 // ws.n_edges)
        for s in range(0, len(a), chunk):
            out[s : s + chunk] = _segment_edge_dist(a[s : s + chunk], b[s : s + chunk], ws._ea, ws._eb).min(axis=1)
        # a segment lying wholly inside an obstacle meets no edge
        out[_inside_any(ws, a)] = 0.0
    if ws.boundary_is_obstacle:
        # distance to the boundary of a convex box is concave along a segment
        out = np.minimum(out, np.minimum(_wall_distances(ws, a), _wall_distances(ws, b)))
    return out


def segment_clearance(ws: Workspace, a, b) -> float:
    """Minimum obstacle distance along the closed segment ``[a, b]``.

    Zero if the segment touches or crosses an obstacle.
    """
    return float(segment_clearances(ws, as_point(a)[None, :], as_point(b)[None, :])[0])


def _enters_interior(ws: Workspace, a: np.ndarray, b: np.ndarray) -> bool:
    """Exact test whether ``[a, b]`` meets the open interior of an obstacle."""
    if ws.n_edges == 0:
        return False
    d = b - a
    taus = [0.0, 1.0]
    for c, e in zip(ws._ea, ws._eb):
        f = e - c
        denom = _cross(*d, *f)
        if denom != 0:
            t = _cross(*(c - a), *f) / denom
            u = _cross(*(c - a), *d) / denom
            if 0.0 <= t <= 1.0 and 0.0 <= u <= 1.0:
                taus.append(t)
        elif _cross(*(c - a), *d) == 0:
            len2 = float(d @ d)
            if len2 > 0:
                for q in (c, e):
                    t = float((q - a) @ d) / len2
                    if 0.0 <= t <= 1.0:
                        taus.append(t)
    taus = np.unique(np.clip(taus, 0.0, 1.0))
    probes = [a + t * d for t in taus]
    probes += [a + 0.5 * (t0 + t1) * d for t0, t1 in zip(taus[:-1], taus[1:])]
    sd = _signed_distances(ws, np.array(probes))
    return bool(np.any(sd < 0))


def uninterrupted_edge(ws: Workspace, a, b, delta: float) -> bool:
    """True iff every point of ``[a, b]`` keeps clearance ``delta`` (inclusive)."""
    if delta < 0:
        raise DomainError("delta must be nonnegative")
    a = as_point(a)
    b = as_point(b)
    if delta > 0:
        return segment_clearance(ws, a, b) >= delta
    _check_inside_box(ws, np.array([a, b]))
    return not _enters_interior(ws, a, b)


def edges_clear(ws: Workspace, a: np.ndarray, b: np.ndarray, margin: float, chunk: int = 4096) -> np.ndarray:
    """Clearance test for many segments whose endpoints already keep ``margin``.

    Segments are processed in chunks; obstacle edges whose bounding box is at
    least ``margin`` away from a chunk's bounding box are skipped, which is
    sound because their distance to every segment in the chunk is at least
    that separation. Walls need no check: with ``boundary_is_obstacle`` the
    endpoint precondition already bounds the (concave) wall distance.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    m = len(a)
    if margin <= 0:
        return np.array([uninterrupted_edge(ws, a[i], b[i], margin) for i in range(m)], dtype=bool)
    ok = np.ones(m, dtype=bool)
    if ws.n_edges == 0 or m == 0:
        return ok
    ea, eb = ws._ea, ws._eb
    emin = np.minimum(ea, eb)
    emax = np.maximum(ea, eb)
    for s in range(0, m, chunk):
        ca = a[s : s + chunk]
        cb = b[s : s + chunk]
        lo = np.minimum(ca.min(axis=0), cb.min(axis=0))
        hi = np.maximum(ca.max(axis=0), cb.max(axis=0))
        gap = np.maximum(0.0, np.maximum(emin - hi, lo - emax))
        near = np.hypot(gap[:, 0], gap[:, 1]) < margin
        if not np.any(near):
            continue
        dist = _segment_edge_dist(ca, cb, ea[near], eb[near]).min(axis=1)
        ok[s : s + chunk] = dist >= margin
    return ok


def rectangle(x0: float, y0: float, x1: float, y1: float) -> Polygon:
    """Axis-aligned rectangle obstacle."""
    return Polygon([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])


def make_workspace(bbox_min: Sequence[float], bbox_max: Sequence[float], obstacles=(), boundary_is_obstacle=False):
    return Workspace(np.asarray(bbox_min, float), np.asarray(bbox_max, float), tuple(obstacles), boundary_is_obstacle)
