"""Brute-force homology checks used to verify the zigzag engine.

Everything here reduces dense uint8 matrices over GF(2) with textbook
row elimination. The code is deliberately simple, self-contained, and
disjoint from the engine's packed column reduction, so the two sides of
every comparison fail independently. Intended for small instances only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .complexes import FlagComplex, boundary_matrix

DEFAULT_SIMPLEX_CAP = 20_000


def _check_cap(cx: FlagComplex, cap: int) -> None:
    if cx.n_simplices > cap:
        raise ValueError(
            f"oracle limited to {cap} simplices, complex has {cx.n_simplices}"
        )


def _row_echelon(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Forward elimination over GF(2); returns (echelon matrix, pivot cols)."""
    m = m.copy()
    n_rows, n_cols = m.shape
    pivot_cols = []
    r = 0
    for c in range(n_cols):
        if r >= n_rows:
            break
        hits = np.nonzero(m[r:, c])[0]
        if hits.size == 0:
            continue
        lead = r + int(hits[0])
        if lead != r:
            m[[r, lead]] = m[[lead, r]]
        below = np.nonzero(m[r + 1 :, c])[0]
        for i in below:
            m[r + 1 + int(i)] ^= m[r]
        pivot_cols.append(c)
        r += 1
    return m, pivot_cols


def _rank(m: np.ndarray) -> int:
    if m.size == 0:
        return 0
    return len(_row_echelon(m)[1])


def _kernel_basis(m: np.ndarray) -> np.ndarray:
    """Basis of the null space of ``m`` over GF(2), one column per generator."""
    n_rows, n_cols = m.shape
    if n_cols == 0:
        return np.zeros((0, 0), dtype=np.uint8)
    if n_rows == 0:
        return np.eye(n_cols, dtype=np.uint8)
    ech, pivot_cols = _row_echelon(m)
    pivot_set = set(pivot_cols)
    free_cols = [c for c in range(n_cols) if c not in pivot_set]
    basis = np.zeros((n_cols, len(free_cols)), dtype=np.uint8)
    for k, fc in enumerate(free_cols):
        basis[fc, k] = 1
        # back-substitute pivot rows bottom-up
        for r in range(len(pivot_cols) - 1, -1, -1):
            pc = pivot_cols[r]
            val = int(np.bitwise_and(ech[r], basis[:, k]).sum()) & 1
            if val:
                basis[pc, k] ^= 1
    return basis


def _dense_boundary(cx: FlagComplex, p: int) -> np.ndarray:
    """Dense uint8 boundary matrix; zero map when p is 0 or out of range."""
    if p < 1 or p > cx.max_dim:
        n = len(cx.simplices(p)) if p >= 0 else 0
        return np.zeros((0, n), dtype=np.uint8)
    return boundary_matrix(cx, p).toarray().astype(np.uint8)


def betti(cx: FlagComplex, p: int, cap: int = DEFAULT_SIMPLEX_CAP) -> int:
    """p-th GF(2) Betti number: dim ker boundary_p - rank boundary_{p+1}."""
    if p < 0:
        raise ValueError(f"p must be non-negative, got {p}")
    _check_cap(cx, cap)
    n_p = len(cx.simplices(p))
    if n_p == 0:
        return 0
    rank_dp = _rank(_dense_boundary(cx, p))
    rank_dp1 = _rank(_dense_boundary(cx, p + 1))
    return n_p - rank_dp - rank_dp1


def _is_subcomplex(sub: FlagComplex, sup: FlagComplex) -> bool:
    return all(
        sub.simplex_set(d) <= sup.simplex_set(d) for d in range(sub.max_dim + 1)
    )


def induced_map_rank(
    sub: FlagComplex, sup: FlagComplex, p: int, cap: int = DEFAULT_SIMPLEX_CAP
) -> int:
    """Rank of the inclusion-induced map H_p(sub) -> H_p(sup).

    Computed as dim((Z_p(sub) + B_p(sup)) / B_p(sup)) by stacking cycle
    generators of the subcomplex with boundary generators of the host and
    comparing GF(2) ranks.
    """
    if p < 0:
        raise ValueError(f"p must be non-negative, got {p}")
    if sub.max_dim != sup.max_dim or sub.n_vertices != sup.n_vertices:
        raise ValueError("complexes must share vertex universe and max_dim")
    if not _is_subcomplex(sub, sup):
        raise ValueError("first complex is not a subcomplex of the second")
    _check_cap(sup, cap)
    sub_simplices = sub.simplices(p)
    if not sub_simplices:
        return 0
    cycles = _kernel_basis(_dense_boundary(sub, p))  # rows: sub p-simplices
    if cycles.shape[1] == 0:
        return 0
    sup_index = {s: i for i, s in enumerate(sup.simplices(p))}
    embedded = np.zeros((len(sup_index), cycles.shape[1]), dtype=np.uint8)
    for r, s in enumerate(sub_simplices):
        embedded[sup_index[s]] = cycles[r]
    boundaries = _dense_boundary(sup, p + 1)
    stacked = np.concatenate([boundaries, embedded], axis=1)
    return _rank(stacked) - _rank(boundaries)


@dataclass
class OracleReport:
    """Outcome of checking a diagram against state-by-state recomputation."""

    dims: list[int]
    betti_checked: int = 0
    rank_checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "dims": self.dims,
            "betti_checked": self.betti_checked,
            "rank_checked": self.rank_checked,
            "violations": self.violations,
            "passed": self.passed,
        }


def verify_diagram(
    diagram,
    states: list[FlagComplex],
    dims: list[int] | None = None,
    cap: int = DEFAULT_SIMPLEX_CAP,
) -> OracleReport:
    """Check a zigzag interval decomposition against brute-force homology.

    ``states`` must be the full snapshot sequence (layer complexes at even
    positions, adjacent intersections at odd positions). For every dimension
    and index, the intervals covering the index must count the state's Betti
    number; for every adjacent pair, intervals covering both indices must
    count the rank of the inclusion-induced map.
    """
    if dims is None:
        dims = sorted(diagram.intervals.keys())
    report = OracleReport(dims=list(dims))
    n = len(states)
    for p in dims:
        coverage = diagram.coverage_counts(p, n)
        pair_coverage = diagram.pair_coverage_counts(p, n)
        for t in range(n):
            expected = betti(states[t], p, cap=cap)
            report.betti_checked += 1
            if coverage[t] != expected:
                report.violations.append(
                    f"betti mismatch at index {t}, dim {p}: "
                    f"diagram {coverage[t]}, oracle {expected}"
                )
        for t in range(n - 1):
            if t % 2 == 0:
                sub, sup = states[t + 1], states[t]
            else:
                sub, sup = states[t], states[t + 1]
            expected = induced_map_rank(sub, sup, p, cap=cap)
            report.rank_checked += 1
            if pair_coverage[t] != expected:
                report.violations.append(
                    f"rank mismatch across indices {t}-{t + 1}, dim {p}: "
                    f"diagram {pair_coverage[t]}, oracle {expected}"
                )
    return report
