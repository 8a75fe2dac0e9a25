"""Clearance-respecting roadmaps and shortest-path queries on them.

Node order is fixed: samples that keep the margin (in generation order), then
robot starts, then goals. Neighbours are nodes strictly closer than the
connection radius; an edge is added in both directions when the straight
segment keeps the margin everywhere.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .exceptions import DomainError, InfeasibleError
from .geometry import Workspace, edges_clear, interior_mask
from .sampling import SampleSet

__all__ = ["Roadmap", "PathResult", "build", "near_pairs", "shortest_path", "shortest_paths", "astar"]


@dataclass(frozen=True, eq=False)
class PathResult:
    waypoints: np.ndarray
    length: float
    reachable: bool

    @classmethod
    def unreachable(cls) -> "PathResult":
        return cls(np.zeros((0, 2)), math.inf, False)

    @classmethod
    def through(cls, waypoints: np.ndarray) -> "PathResult":
        steps = np.diff(waypoints, axis=0)
        return cls(waypoints, float(np.sum(np.hypot(steps[:, 0], steps[:, 1]))), True)


@dataclass(frozen=True, eq=False)
class Roadmap:
    """Undirected roadmap in compressed sparse row form."""

    nodes: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    lengths: np.ndarray
    margin: float
    radius: float
    n_samples: int
    n_starts: int
    n_goals: int

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.indices) // 2

    @property
    def start_indices(self) -> np.ndarray:
        return np.arange(self.n_samples, self.n_samples + self.n_starts)

    @property
    def goal_indices(self) -> np.ndarray:
        lo = self.n_samples + self.n_starts
        return np.arange(lo, lo + self.n_goals)

    def neighbors(self, i: int) -> list[tuple[int, float]]:
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return list(zip(self.indices[lo:hi].tolist(), self.lengths[lo:hi].tolist()))

    @property
    def adjacency(self) -> list[list[tuple[int, float]]]:
        return [self.neighbors(i) for i in range(self.n_nodes)]

    def as_csr(self) -> csr_matrix:
        return csr_matrix((self.lengths, self.indices, self.indptr), shape=(self.n_nodes, self.n_nodes))

    def _check_index(self, i):
        if not (0 <= int(i) < self.n_nodes) or int(i) != i:
            raise DomainError(f"node index {i!r} out of range")

    def shortest_path(self, start: int, goal: int) -> PathResult:
        return shortest_path(self, start, goal)


def near_pairs(points: np.ndarray, radius: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All pairs ``i < j`` with ``|p_i - p_j| < radius`` via a uniform spatial hash.

    Returns ``(i, j, dist)`` sorted lexicographically by ``(i, j)``.
    """
    if radius <= 0:
        raise DomainError("radius must be positive")
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    empty = (np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), np.zeros(0))
    if n < 2:
        return empty
    cells = np.floor((pts - pts.min(axis=0)) / radius).astype(np.int64)
    stride = int(cells[:, 1].max()) + 3
    key = cells[:, 0] * stride + cells[:, 1]
    order = np.argsort(key, kind="stable")
    skey = key[order]
    out_i, out_j = [], []
    for dx, dy in ((0, 0), (1, -1), (1, 0), (1, 1), (0, 1)):
        target = skey + dx * stride + dy
        lo = np.searchsorted(skey, target, side="left")
        hi = np.searchsorted(skey, target, side="right")
        if dx == 0 and dy == 0:
            lo = np.maximum(lo, np.arange(n) + 1)
        counts = np.maximum(hi - lo, 0)
        total = int(counts.sum())
        if total == 0:
            continue
        src = np.repeat(np.arange(n), counts)
        starts = np.repeat(lo - np.concatenate([[0], np.cumsum(counts)[:-1]]), counts)
        dst = np.arange(total) + starts
        gi = order[src]
        gj = order[dst]
        diff = pts[gi] - pts[gj]
        close = np.hypot(diff[:, 0], diff[:, 1]) < radius
        out_i.append(gi[close])
        out_j.append(gj[close])
    if not out_i:
        return empty
    i = np.concatenate(out_i)
    j = np.concatenate(out_j)
    a = np.minimum(i, j)
    b = np.maximum(i, j)
    srt = np.lexsort((b, a))
    a, b = a[srt], b[srt]
    diff = pts[a] - pts[b]
    return a, b, np.hypot(diff[:, 0], diff[:, 1])


def _check_endpoints(ws: Workspace, pts: np.ndarray, margin: float, role: str):
    ok = interior_mask(ws, pts, margin) if len(pts) else np.zeros(0, dtype=bool)
    for k in np.flatnonzero(~ok):
        raise InfeasibleError(f"{role} {k} does not keep clearance {margin:g}", node=f"{role} {k}")


MAX_EDGE_CANDIDATES = 20_000_000


def _check_edge_budget(nodes: np.ndarray, radius: float):
    """Refuse roadmaps whose expected number of candidate edges would exhaust memory."""
    if len(nodes) < 2:
        return
    span = np.maximum(np.ptp(nodes, axis=0), radius)
    expected = 0.5 * len(nodes) ** 2 * min(1.0, math.pi * radius**2 / float(span[0] * span[1]))
    if expected > MAX_EDGE_CANDIDATES:
        raise DomainError(
            f"roadmap of {len(nodes)} nodes at radius {radius:.3g} would have about {expected:.3g} "
            f"candidate edges (limit {MAX_EDGE_CANDIDATES}); use a lattice sampler or lower n_max"
        )


def build(ws: Workspace, starts, goals, margin: float, radius: float, samples: SampleSet | np.ndarray) -> Roadmap:
    """Build the roadmap over the ``margin``-interior of the free space."""
    if radius <= 0:
        raise DomainError("connection radius must be positive")
    if margin < 0:
        raise DomainError("margin must be nonnegative")
    starts = np.atleast_2d(np.asarray(starts, dtype=float)).reshape(-1, 2)
    goals = np.atleast_2d(np.asarray(goals, dtype=float)).reshape(-1, 2)
    _check_endpoints(ws, starts, margin, "agent")
    _check_endpoints(ws, goals, margin, "goal")
    raw = samples.points if isinstance(samples, SampleSet) else np.asarray(samples, dtype=float).reshape(-1, 2)
    kept = raw[interior_mask(ws, raw, margin)] if len(raw) else raw
    nodes = np.concatenate([kept, starts, goals])
    nodes.setflags(write=False)
    _check_edge_budget(nodes, radius)
    i, j, d = near_pairs(nodes, radius)
    if len(i):
        # check spatially coherent batches so obstacle pruning per batch is tight
        cells = np.floor((nodes[i] - nodes.min(axis=0)) / max(radius, 1e-12)).astype(np.int64)
        batch = np.lexsort((cells[:, 1], cells[:, 0]))
        ok = np.empty(len(i), dtype=bool)
        ok[batch] = edges_clear(ws, nodes[i[batch]], nodes[j[batch]], margin)
        i, j, d = i[ok], j[ok], d[ok]
    n = len(nodes)
    rows = np.concatenate([i, j])
    cols = np.concatenate([j, i])
    vals = np.concatenate([d, d])
    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, rows + 1, 1)
    indptr = np.cumsum(indptr)
    for arr in (indptr, cols, vals):
        arr.setflags(write=False)
    return Roadmap(nodes, indptr, cols, vals, float(margin), float(radius), len(kept), len(starts), len(goals))


def _trace(pred_row: np.ndarray, start: int, goal: int) -> list[int]:
    seq = [goal]
    while seq[-1] != start:
        seq.append(int(pred_row[seq[-1]]))
    return seq[::-1]


def shortest_paths(rm: Roadmap, sources, targets) -> list[list[PathResult]]:
    """Dijkstra from each source; returns ``result[s][t]`` for every target."""
    sources = [int(s) for s in sources]
    targets = [int(t) for t in targets]
    for k in sources + targets:
        rm._check_index(k)
    if not sources:
        return []
    _, pred = dijkstra(rm.as_csr(), directed=True, indices=sources, return_predecessors=True)
    out = []
    for row, s in enumerate(sources):
        res = []
        for t in targets:
            if t == s:
                res.append(PathResult.through(rm.nodes[[s]]))
            elif pred[row, t] < 0:
                res.append(PathResult.unreachable())
            else:
                res.append(PathResult.through(rm.nodes[_trace(pred[row], s, t)]))
        out.append(res)
    return out


def shortest_path(rm: Roadmap, start: int, goal: int) -> PathResult:
    return shortest_paths(rm, [start], [goal])[0][0]


def astar(rm: Roadmap, start: int, goal: int) -> PathResult:
    """A* with the Euclidean heuristic; ties broken by node index."""
    rm._check_index(start)
    rm._check_index(goal)
    nodes = rm.nodes
    target = nodes[goal]

    def h(k):
        return math.hypot(*(nodes[k] - target))

    best = {start: 0.0}
    parent = {start: start}
    heap = [(h(start), start)]
    closed = set()
    indptr, indices, lengths = rm.indptr, rm.indices.tolist(), rm.lengths.tolist()
    while heap:
        _, u = heapq.heappop(heap)
        if u in closed:
            continue
        if u == goal:
            seq = [u]
            while seq[-1] != start:
                seq.append(parent[seq[-1]])
            return PathResult.through(nodes[seq[::-1]])
        closed.add(u)
        gu = best[u]
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            g = gu + lengths[e]
            if v not in best or g < best[v]:
                best[v] = g
                parent[v] = u
                heapq.heappush(heap, (g + h(v), v))
    return PathResult.unreachable()
