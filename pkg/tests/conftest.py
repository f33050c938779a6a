import numpy as np
import pytest

import zztda as z


def manual_complex(edges, n_vertices, max_dim=2, triangles=()):
    """Build a complex directly from an edge list, bypassing expansion."""
    verts = tuple((v,) for v in range(n_vertices))
    es = tuple(sorted(tuple(sorted(e)) for e in edges))
    by_dim = [verts, es]
    if max_dim >= 2:
        by_dim.append(tuple(sorted(tuple(sorted(t)) for t in triangles)))
    while len(by_dim) < max_dim + 1:
        by_dim.append(())
    return z.FlagComplex(
        n_vertices=n_vertices, max_dim=max_dim, by_dim=tuple(by_dim)
    )


def graph_from_edges(edges, n_vertices):
    """NeighborGraph with unit lengths, for topology-only tests."""
    e = np.array(sorted(tuple(sorted(p)) for p in edges), dtype=np.int64)
    if e.size == 0:
        e = np.zeros((0, 2), dtype=np.int64)
    return z.NeighborGraph(
        n_vertices=n_vertices,
        edges=e,
        lengths=np.ones(len(e), dtype=np.float64),
    )


def circle_cloud(n=12, dim=2):
    theta = 2 * np.pi * np.arange(n) / n
    out = np.zeros((n, dim), dtype=np.float32)
    out[:, 0] = np.cos(theta)
    out[:, 1] = np.sin(theta)
    return out


def random_stack(rng, n_points, n_layers, dim=3):
    layers = tuple(
        rng.normal(size=(n_points, dim)).astype(np.float32)
        for _ in range(n_layers)
    )
    return z.LayerStack(layers=layers)


def stack_complexes(stack, k, m):
    return [
        z.expand(z.knn_graph(stack.layers[l], k), m)
        for l in range(stack.n_layers)
    ]


def diagram_for(stack, k, m, dims=None):
    filt = z.build_filtration(stack_complexes(stack, k, m))
    return z.compute_zigzag(filt, dims=dims), filt


@pytest.fixture
def rng():
    return np.random.default_rng(20240816)
