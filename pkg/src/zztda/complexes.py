"""Flag (clique) complexes over neighbor graphs, with GF(2) boundary matrices.

A complex stores its simplices per dimension as lexicographically sorted
vertex tuples. Expansion enumerates every clique of the graph with at most
``max_dim + 1`` vertices exactly once, by extending each clique only with
higher-indexed common neighbors.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.sparse as sp

from .errors import SimplexBudgetError
from .neighbors import NeighborGraph

Simplex = tuple[int, ...]

DEFAULT_SIMPLEX_BUDGET = 50_000_000


@dataclass(frozen=True, eq=False)
class FlagComplex:
    """A simplicial complex with simplices bucketed by dimension.

    ``by_dim[d]`` is the lexicographically sorted tuple of d-simplices; every
    vertex of the ambient index range [0, n_vertices) is present as a
    0-simplex. Instances are immutable.
    """

    n_vertices: int
    max_dim: int
    by_dim: tuple[tuple[Simplex, ...], ...]

    def __post_init__(self):
        if self.max_dim < 1:
            raise ValueError(f"max_dim must be >= 1, got {self.max_dim}")
        by_dim = tuple(tuple(map(tuple, bucket)) for bucket in self.by_dim)
        if len(by_dim) != self.max_dim + 1:
            raise ValueError("by_dim must hold max_dim + 1 buckets")
        object.__setattr__(self, "by_dim", by_dim)
        object.__setattr__(
            self, "_sets", tuple(frozenset(bucket) for bucket in by_dim)
        )

    @property
    def n_simplices(self) -> int:
        return sum(len(b) for b in self.by_dim)

    def simplices(self, dim: int) -> tuple[Simplex, ...]:
        return self.by_dim[dim] if 0 <= dim <= self.max_dim else ()

    def simplex_set(self, dim: int) -> frozenset:
        return self._sets[dim] if 0 <= dim <= self.max_dim else frozenset()

    def __contains__(self, simplex) -> bool:
        simplex = tuple(simplex)
        return simplex in self.simplex_set(len(simplex) - 1)

    def equals(self, other: "FlagComplex") -> bool:
        return (
            self.n_vertices == other.n_vertices
            and self.max_dim == other.max_dim
            and self.by_dim == other.by_dim
        )

    def edge_pairs(self) -> set[Simplex]:
        return set(self.by_dim[1]) if self.max_dim >= 1 else set()

    def validate(self) -> None:
        """Check face closure, vertex cover, and the clique property."""
        verts = self.simplex_set(0)
        if verts != {(v,) for v in range(self.n_vertices)}:
            raise ValueError("0-simplices must cover the vertex range exactly")
        edges = self.simplex_set(1)
        for dim in range(1, self.max_dim + 1):
            for s in self.by_dim[dim]:
                if list(s) != sorted(set(s)):
                    raise ValueError(f"simplex {s} is not strictly increasing")
                for f in combinations(s, dim):
                    if f not in self.simplex_set(dim - 1):
                        raise ValueError(f"face {f} of {s} is missing")
                if dim >= 2:
                    for pair in combinations(s, 2):
                        if pair not in edges:
                            raise ValueError(f"simplex {s} is not a clique")


def expand(
    graph: NeighborGraph, max_dim: int, budget: int = DEFAULT_SIMPLEX_BUDGET
) -> FlagComplex:
    """Clique-expand a graph into its flag complex up to ``max_dim``.

    Cliques are enumerated once each by recursive extension with common
    neighbors of index greater than the current maximum vertex, so the
    per-dimension output is deterministic and lexicographically sorted.
    Raises :class:`SimplexBudgetError` once the total simplex count would
    exceed ``budget``.
    """
    if max_dim < 1:
        raise ValueError(f"max_dim must be >= 1, got {max_dim}")
    n = graph.n_vertices
    adj: list[set[int]] = [set() for _ in range(n)]
    for i, j in graph.edges:
        adj[int(i)].add(int(j))
        adj[int(j)].add(int(i))

    buckets: list[list[Simplex]] = [[] for _ in range(max_dim + 1)]
    count = 0

    def emit(simplex: tuple[int, ...]) -> None:
        nonlocal count
        count += 1
        if count > budget:
            raise SimplexBudgetError(
                f"simplex budget {budget} exceeded during clique expansion"
            )
        buckets[len(simplex) - 1].append(simplex)

    def grow(clique: tuple[int, ...], candidates: list[int]) -> None:
        if len(clique) > max_dim:
            return
        for idx, v in enumerate(candidates):
            ext = clique + (v,)
            emit(ext)
            if len(ext) <= max_dim:
                rest = [w for w in candidates[idx + 1 :] if w in adj[v]]
                if rest:
                    grow(ext, rest)

    for v in range(n):
        emit((v,))
        higher = sorted(w for w in adj[v] if w > v)
        if higher:
            grow((v,), higher)

    return FlagComplex(
        n_vertices=n, max_dim=max_dim, by_dim=tuple(tuple(b) for b in buckets)
    )


def intersect(a: FlagComplex, b: FlagComplex) -> FlagComplex:
    """Simplex-wise intersection of two complexes on the same vertex universe."""
    if a.n_vertices != b.n_vertices:
        raise ValueError(
            f"vertex universes differ: {a.n_vertices} vs {b.n_vertices}"
        )
    if a.max_dim != b.max_dim:
        raise ValueError(f"max_dim differs: {a.max_dim} vs {b.max_dim}")
    by_dim = tuple(
        tuple(sorted(a.simplex_set(d) & b.simplex_set(d)))
        for d in range(a.max_dim + 1)
    )
    return FlagComplex(n_vertices=a.n_vertices, max_dim=a.max_dim, by_dim=by_dim)


def boundary_matrix(cx: FlagComplex, p: int) -> sp.csc_matrix:
    """GF(2) boundary matrix of the p-simplices of ``cx``.

    Rows are indexed by (p-1)-simplices and columns by p-simplices, both in
    lexicographic order; entries live in {0, 1} as uint8. Requires
    1 <= p <= max_dim.
    """
    if not 1 <= p <= cx.max_dim:
        raise ValueError(f"p must lie in [1, {cx.max_dim}], got {p}")
    rows_index = {s: i for i, s in enumerate(cx.simplices(p - 1))}
    cols = cx.simplices(p)
    indptr = [0]
    indices = []
    for s in cols:
        face_rows = sorted(rows_index[f] for f in combinations(s, p))
        indices.extend(face_rows)
        indptr.append(len(indices))
    data = np.ones(len(indices), dtype=np.uint8)
    return sp.csc_matrix(
        (data, np.asarray(indices, dtype=np.int64), np.asarray(indptr, dtype=np.int64)),
        shape=(len(rows_index), len(cols)),
        dtype=np.uint8,
    )
