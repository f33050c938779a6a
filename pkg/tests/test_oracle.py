"""Brute-force homology reference values on hand-checkable complexes."""

import numpy as np
import pytest

import zztda as z
from zztda import oracle

from conftest import graph_from_edges, manual_complex


def cycle_graph(n):
    return graph_from_edges([(i, (i + 1) % n) for i in range(n)], n)


def test_cycle_betti():
    cx = z.expand(cycle_graph(12), 2)
    assert oracle.betti(cx, 0) == 1
    assert oracle.betti(cx, 1) == 1


def test_filled_triangle_betti():
    cx = z.expand(graph_from_edges([(0, 1), (1, 2), (0, 2)], 3), 2)
    assert len(cx.simplices(2)) == 1
    assert oracle.betti(cx, 0) == 1
    assert oracle.betti(cx, 1) == 0


def test_octahedron_boundary_sphere():
    # K6 minus a perfect matching is the octahedron skeleton; its flag
    # complex at m=3 is the hollow 2-sphere: betti (1, 0, 1)
    missing = {(0, 5), (1, 4), (2, 3)}
    edges = [
        (i, j)
        for i in range(6)
        for j in range(i + 1, 6)
        if (i, j) not in missing
    ]
    cx = z.expand(graph_from_edges(edges, 6), 3)
    counts = [len(cx.simplices(d)) for d in range(4)]
    assert counts == [6, 12, 8, 0]
    b = [oracle.betti(cx, p) for p in range(3)]
    assert b == [1, 0, 1]
    # Euler characteristic cross-check: V - E + F = 2 = sum of betti signs
    euler_simplices = counts[0] - counts[1] + counts[2] - counts[3]
    euler_betti = b[0] - b[1] + b[2]
    assert euler_simplices == euler_betti == 2


def test_euler_on_random_flag_complexes(rng):
    for _ in range(10):
        n = int(rng.integers(4, 9))
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        chosen = [p for p in pairs if rng.random() < 0.5]
        # m = n-1 captures every clique, so Euler's formula must hold
        cx = z.expand(graph_from_edges(chosen, n), n - 1)
        euler_s = sum(
            (-1) ** d * len(cx.simplices(d)) for d in range(n)
        )
        euler_b = sum(
            (-1) ** p * oracle.betti(cx, p) for p in range(n - 1)
        )
        assert euler_s == euler_b


def test_induced_rank_identity():
    cx = z.expand(cycle_graph(6), 2)
    assert oracle.induced_map_rank(cx, cx, 1) == 1
    assert oracle.induced_map_rank(cx, cx, 0) == 1


def test_induced_rank_loop_fills():
    sub = z.expand(graph_from_edges([(0, 1), (1, 2), (2, 3), (0, 3)], 4), 2)
    sup = z.expand(
        graph_from_edges(
            [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3)], 4
        ),
        2,
    )
    assert oracle.betti(sub, 1) == 1
    assert oracle.induced_map_rank(sub, sup, 1) == 0


def test_induced_rank_one_of_two_cycles():
    both = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
    sub = manual_complex([(0, 1), (1, 2), (0, 2)], 6)
    sup = manual_complex(both, 6)
    assert oracle.induced_map_rank(sub, sup, 1) == 1


def test_induced_rank_requires_subcomplex():
    a = manual_complex([(0, 1)], 3)
    b = manual_complex([(1, 2)], 3)
    with pytest.raises(ValueError):
        oracle.induced_map_rank(a, b, 0)


def test_rank_bounded_by_betti(rng):
    for _ in range(10):
        n = int(rng.integers(5, 10))
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        sup_edges = [p for p in pairs if rng.random() < 0.5]
        sub_edges = [p for p in sup_edges if rng.random() < 0.7]
        sub = z.expand(graph_from_edges(sub_edges, n), 2)
        sup = z.expand(graph_from_edges(sup_edges, n), 2)
        for p in (0, 1):
            r = oracle.induced_map_rank(sub, sup, p)
            assert r <= min(oracle.betti(sub, p), oracle.betti(sup, p))


def test_verify_diagram_flags_tampering():
    from zztda.zigzag import PersistenceDiagram

    cx = z.expand(cycle_graph(12), 3)
    filt = z.build_filtration([cx, cx])
    good = z.compute_zigzag(filt)
    states = z.snapshots(filt)
    assert oracle.verify_diagram(good, states).passed

    # extend the single loop interval into a second copy: betti violation
    tampered = PersistenceDiagram(
        n_layers=good.n_layers,
        max_dim=good.max_dim,
        intervals={
            0: dict(good.intervals[0]),
            1: {(0, 2): 2},
            2: dict(good.intervals[2]),
        },
    )
    report = oracle.verify_diagram(tampered, states)
    assert not report.passed
    assert any("betti" in v for v in report.violations)


def test_verify_diagram_flags_split_interval():
    # replace one [0,2] by [0,1] + [2,2]: betti counts still match at every
    # index, only the arrow-rank checks can catch daggered intervals
    cx = z.expand(cycle_graph(12), 3)
    filt = z.build_filtration([cx, cx])
    good = z.compute_zigzag(filt)
    states = z.snapshots(filt)
    from zztda.zigzag import PersistenceDiagram

    tampered = PersistenceDiagram(
        n_layers=good.n_layers,
        max_dim=good.max_dim,
        intervals={
            0: dict(good.intervals[0]),
            1: {(0, 1): 1, (2, 2): 1},
            2: dict(good.intervals[2]),
        },
    )
    report = oracle.verify_diagram(tampered, states)
    assert not report.passed
    assert any("rank" in v for v in report.violations)


def test_oracle_cap():
    cx = z.expand(cycle_graph(12), 2)
    with pytest.raises(ValueError):
        oracle.betti(cx, 1, cap=5)
