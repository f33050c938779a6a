"""Symmetrized k-nearest-neighbor graphs and component-count calibration.

Graphs are built per layer from exact Euclidean distances. Edge filtering
follows the long-range convention: ``filter_short_edges`` drops edges whose
length is at most the radius, so growing the radius can only disconnect the
graph and the component count is monotone non-decreasing in the radius.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .errors import CalibrationError
from .validation import check_point_cloud, check_positive


@dataclass(frozen=True)
class NeighborGraph:
    """An undirected weighted graph on point indices.

    ``edges`` holds unordered pairs as rows (i, j) with i < j in
    lexicographic order; ``lengths`` holds the matching Euclidean lengths.
    """

    n_vertices: int
    edges: np.ndarray
    lengths: np.ndarray

    def __post_init__(self):
        e = np.ascontiguousarray(self.edges, dtype=np.int64).reshape(-1, 2)
        w = np.ascontiguousarray(self.lengths, dtype=np.float64).reshape(-1)
        if e.shape[0] != w.shape[0]:
            raise ValueError("edges and lengths must have matching length")
        if e.size and (e.min() < 0 or e.max() >= self.n_vertices):
            raise ValueError("edge endpoint out of range")
        if np.any(e[:, 0] >= e[:, 1]):
            raise ValueError("edges must satisfy i < j")
        order = np.lexsort((e[:, 1], e[:, 0]))
        e, w = e[order], w[order]
        e.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "lengths", w)

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]


def knn_graph(cloud, k: int) -> NeighborGraph:
    """Union-symmetrized k-nearest-neighbor graph of a point cloud.

    Each point proposes its k nearest other points by exact Euclidean
    distance, ties broken toward the smaller point index; an unordered edge
    exists when either endpoint proposed it. Requires 1 <= k < n_points.

    Parameters
    ----------
    cloud : (n_points, dim) array-like
    k : int
        Number of neighbors each point proposes.
    """
    x = check_point_cloud(cloud)
    n = x.shape[0]
    k = check_positive(k, name="k")
    if k >= n:
        raise ValueError(f"k must satisfy k < n_points, got k={k}, n_points={n}")
    d = cdist(x.astype(np.float64), x.astype(np.float64))
    idx = np.arange(n)
    pairs = set()
    for i in range(n):
        row = d[i]
        # primary key distance, secondary key index; self excluded
        order = np.lexsort((idx, row))
        order = order[order != i][:k]
        for j in order:
            pairs.add((i, int(j)) if i < j else (int(j), i))
    if pairs:
        e = np.array(sorted(pairs), dtype=np.int64)
        w = d[e[:, 0], e[:, 1]]
    else:
        e = np.empty((0, 2), dtype=np.int64)
        w = np.empty(0, dtype=np.float64)
    return NeighborGraph(n_vertices=n, edges=e, lengths=w)


def filter_short_edges(
    graph: NeighborGraph, radius: float, *, keep_short: bool = False
) -> NeighborGraph:
    """Drop edges of length <= radius (or keep only those, with ``keep_short``).

    The default keeps long-range connections; ``keep_short=True`` selects the
    conventional Vietoris-Rips direction instead. Vertices are never removed.
    """
    radius = float(radius)
    if radius < 0:
        raise ValueError(f"radius must be non-negative, got {radius}")
    mask = graph.lengths <= radius
    if not keep_short:
        mask = ~mask
    return NeighborGraph(
        n_vertices=graph.n_vertices,
        edges=graph.edges[mask],
        lengths=graph.lengths[mask],
    )


class _DisjointSet:
    """Union-find with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.n_sets = n

    def find(self, a: int) -> int:
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.n_sets -= 1


def connected_components(graph: NeighborGraph) -> int:
    """Number of connected components, isolated vertices included."""
    dsu = _DisjointSet(graph.n_vertices)
    for i, j in graph.edges:
        dsu.union(int(i), int(j))
    return dsu.n_sets


@dataclass
class VRCalibration:
    """Component-count target used to pick per-layer filter radii."""

    beta0_target: int
    beta0_tolerance: int = 0
    per_layer_radius: list[float] | None = None


def calibrate_radius(graph: NeighborGraph, target: int, tolerance: int = 0) -> float:
    """Smallest candidate radius whose filtered graph hits a component target.

    Candidate radii are 0 plus the distinct edge lengths of ``graph``. Because
    components after :func:`filter_short_edges` are monotone non-decreasing in
    the radius, the candidates are searched by bisection; the smallest one with
    component count inside [target - tolerance, target + tolerance] is
    returned. Raises :class:`CalibrationError` with the achievable bracketing
    counts when the window is skipped over.
    """
    target = int(target)
    tolerance = int(tolerance)
    if target < 1:
        raise ValueError(f"target must be positive, got {target}")
    if tolerance < 0:
        raise ValueError(f"tolerance must be non-negative, got {tolerance}")
    lo_bound, hi_bound = target - tolerance, target + tolerance

    candidates = np.unique(np.concatenate(([0.0], graph.lengths)))
    cache: dict[int, int] = {}

    def beta0(i: int) -> int:
        if i not in cache:
            cache[i] = connected_components(
                filter_short_edges(graph, float(candidates[i]))
            )
        return cache[i]

    # first candidate index whose count reaches the window floor
    lo, hi = 0, len(candidates) - 1
    if beta0(hi) < lo_bound:
        raise CalibrationError(
            f"component target {target}±{tolerance} unreachable: "
            f"at most {beta0(hi)} components",
            target,
            tolerance,
            (beta0(hi), None),
        )
    if beta0(0) >= lo_bound:
        first = 0
    else:
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if beta0(mid) >= lo_bound:
                hi = mid
            else:
                lo = mid
        first = hi
    if beta0(first) <= hi_bound:
        return float(candidates[first])
    below = beta0(first - 1) if first > 0 else None
    raise CalibrationError(
        f"component target {target}±{tolerance} infeasible: counts jump "
        f"from {below} to {beta0(first)} across the window",
        target,
        tolerance,
        (below, beta0(first)),
    )
