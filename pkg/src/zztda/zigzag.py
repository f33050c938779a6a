"""Zigzag interval decomposition of alternating complex sequences.

The input is a sequence of per-layer complexes on a shared vertex universe.
Snapshots alternate between layer complexes (even positions 2j) and adjacent
intersections (odd positions 2j + 1), connected by inclusions pointing from
each intersection into both neighbors. The engine computes, per homology
dimension, GF(2) homology bases for every snapshot, the inclusion-induced
maps out of each intersection, and finally the interval multiset of the
resulting alternating module.

Interval multiplicities are obtained from interval ranks: for indices
i <= j, r(i, j) counts the interval summands covering [i, j], computed by
composing the structure maps as linear relations; inclusion-exclusion over
(i - 1, j + 1) then yields the multiplicity of the exact interval [i, j].
Intervals are closed, and an interval whose death equals the final position
never died inside the sequence (exported as right-open).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, NamedTuple

import numpy as np

from . import _gf2
from .complexes import FlagComplex, Simplex, intersect
from .errors import FiltrationOrderError


class Event(NamedTuple):
    """A single simplex insertion or deletion at a snapshot position."""

    time: int
    kind: str  # "insert" | "delete"
    simplex: Simplex


@dataclass(frozen=True, eq=False)
class ZigzagFiltration:
    """Event-encoded alternating filtration over a fixed vertex universe."""

    n_layers: int
    n_vertices: int
    max_dim: int
    events: tuple[Event, ...]

    @property
    def n_indices(self) -> int:
        return 2 * (self.n_layers - 1) + 1


def build_filtration(complexes: list[FlagComplex]) -> ZigzagFiltration:
    """Encode per-layer complexes as insertion/deletion events.

    Position 0 inserts the first layer complex. Between layer j (position 2j)
    and the intersection with layer j+1 (position 2j+1) the simplices absent
    from the intersection are deleted, higher dimensions first; between the
    intersection and layer j+1 (position 2j+2) the new simplices are
    inserted, lower dimensions first. Within one dimension both orders are
    lexicographic, so the event list is deterministic.
    """
    if len(complexes) < 2:
        raise ValueError("need at least 2 layer complexes")
    n_vertices = complexes[0].n_vertices
    max_dim = complexes[0].max_dim
    for i, cx in enumerate(complexes):
        if cx.n_vertices != n_vertices or cx.max_dim != max_dim:
            raise ValueError(
                f"layer {i} disagrees on vertex universe or max_dim"
            )
    events: list[Event] = []

    def inserts(time: int, simplices: Iterable[Simplex]) -> None:
        for s in sorted(simplices, key=lambda s: (len(s), s)):
            events.append(Event(time, "insert", s))

    def deletes(time: int, simplices: Iterable[Simplex]) -> None:
        for s in sorted(simplices, key=lambda s: (-len(s), s)):
            events.append(Event(time, "delete", s))

    for d in range(max_dim + 1):
        inserts(0, complexes[0].simplices(d))
    for j in range(len(complexes) - 1):
        common = intersect(complexes[j], complexes[j + 1])
        gone = [
            s
            for d in range(max_dim + 1)
            for s in complexes[j].simplices(d)
            if s not in common.simplex_set(d)
        ]
        deletes(2 * j + 1, gone)
        new = [
            s
            for d in range(max_dim + 1)
            for s in complexes[j + 1].simplices(d)
            if s not in common.simplex_set(d)
        ]
        inserts(2 * j + 2, new)
    return ZigzagFiltration(
        n_layers=len(complexes),
        n_vertices=n_vertices,
        max_dim=max_dim,
        events=tuple(events),
    )


def snapshots(
    filtration: ZigzagFiltration, validate: bool = True
) -> list[FlagComplex]:
    """Replay events into the full snapshot sequence of complexes.

    With ``validate`` on, every insertion must find all proper faces present
    and every deletion must find the simplex present with no remaining
    cofacet; violations raise :class:`FiltrationOrderError`.
    """
    n_indices = filtration.n_indices
    current: list[set[Simplex]] = [set() for _ in range(filtration.max_dim + 1)]
    out: list[FlagComplex] = []
    vertices = range(filtration.n_vertices)

    def freeze() -> FlagComplex:
        return FlagComplex(
            n_vertices=filtration.n_vertices,
            max_dim=filtration.max_dim,
            by_dim=tuple(tuple(sorted(bucket)) for bucket in current),
        )

    def has_cofacet(s: Simplex) -> bool:
        dim = len(s) - 1
        if dim + 1 > filtration.max_dim:
            return False
        members = set(s)
        bucket = current[dim + 1]
        for w in vertices:
            if w in members:
                continue
            if tuple(sorted(s + (w,))) in bucket:
                return True
        return False

    pos = 0
    for t in range(n_indices):
        if t % 2 == 1:  # deletions produce the intersection snapshot
            while pos < len(filtration.events) and filtration.events[pos].time == t:
                ev = filtration.events[pos]
                if ev.kind != "delete":
                    raise FiltrationOrderError(
                        f"only deletions allowed at odd position {t}"
                    )
                dim = len(ev.simplex) - 1
                if ev.simplex not in current[dim]:
                    raise FiltrationOrderError(
                        f"deleting absent simplex {ev.simplex} at position {t}"
                    )
                if validate and has_cofacet(ev.simplex):
                    raise FiltrationOrderError(
                        f"deleting {ev.simplex} at position {t} "
                        "while a cofacet remains"
                    )
                current[dim].discard(ev.simplex)
                pos += 1
        else:
            while pos < len(filtration.events) and filtration.events[pos].time == t:
                ev = filtration.events[pos]
                if ev.kind != "insert":
                    raise FiltrationOrderError(
                        f"only insertions allowed at even position {t}"
                    )
                dim = len(ev.simplex) - 1
                if dim > filtration.max_dim:
                    raise FiltrationOrderError(
                        f"simplex {ev.simplex} exceeds max_dim {filtration.max_dim}"
                    )
                if ev.simplex in current[dim]:
                    raise FiltrationOrderError(
                        f"inserting duplicate simplex {ev.simplex} at position {t}"
                    )
                if validate and dim > 0:
                    for f in combinations(ev.simplex, dim):
                        if f not in current[dim - 1]:
                            raise FiltrationOrderError(
                                f"inserting {ev.simplex} at position {t} "
                                f"before its face {f}"
                            )
                current[dim].add(ev.simplex)
                pos += 1
        out.append(freeze())
    if pos != len(filtration.events):
        raise FiltrationOrderError(
            f"events found past the final position (time {filtration.events[pos].time})"
        )
    return out


# ---------------------------------------------------------------------------
# per-snapshot homology and induced maps


class _SnapshotHomology:
    """GF(2) cycle representatives and class coordinates for one snapshot."""

    __slots__ = ("p_simplices", "index", "betti", "reps", "_ech", "_rep_cols")

    def __init__(self, cx: FlagComplex, p: int):
        self.p_simplices = cx.simplices(p)
        n_p = len(self.p_simplices)
        self.index = {s: i for i, s in enumerate(self.p_simplices)}
        if n_p == 0:
            self.betti = 0
            self.reps = _gf2.BitColumns.zeros(0, 0)
            self._ech = None
            self._rep_cols = []
            return
        if p == 0:
            cycles = _gf2.BitColumns.identity(n_p)
        else:
            rows = {s: i for i, s in enumerate(cx.simplices(p - 1))}
            cols = [
                [rows[f] for f in combinations(s, p)] for s in self.p_simplices
            ]
            cycles = _gf2.kernel(
                _gf2.BitColumns.from_indices(len(rows), cols)
            )
        upper = cx.simplices(p + 1) if p + 1 <= cx.max_dim else ()
        bnd = _gf2.BitColumns.from_indices(
            n_p, [[self.index[f] for f in combinations(s, p + 1)] for s in upper]
        )
        n_bnd = bnd.n_cols
        self._ech = _gf2.Echelon(bnd.hstack(cycles))
        zero = set(self._ech.zero_cols)
        self._rep_cols = [
            j for j in range(n_bnd, n_bnd + cycles.n_cols) if j not in zero
        ]
        self.betti = len(self._rep_cols)
        take = [j - n_bnd for j in self._rep_cols]
        self.reps = cycles.take(take) if take else _gf2.BitColumns.zeros(n_p, 0)

    def class_coords(self, chain: np.ndarray) -> np.ndarray:
        """Coordinates of a cycle's class in the representative basis."""
        x = self._ech.solve(chain)
        if x is None:
            raise RuntimeError("chain is not a cycle of this snapshot")
        out = np.zeros(_gf2._n_words(self.betti), dtype=np.uint64)
        for r, c in enumerate(self._rep_cols):
            if (x[c >> 6] >> np.uint64(c & 63)) & np.uint64(1):
                out[r >> 6] |= np.uint64(1 << (r & 63))
        return out


def _induced_matrix(
    src: _SnapshotHomology, dst: _SnapshotHomology
) -> _gf2.BitColumns:
    """Matrix of the inclusion-induced map on homology, src into dst."""
    out = _gf2.BitColumns.zeros(dst.betti, src.betti)
    for j in range(src.betti):
        chain = np.zeros(_gf2._n_words(len(dst.p_simplices)), dtype=np.uint64)
        for bit in src.reps.column_rows(j):
            r = dst.index[src.p_simplices[bit]]
            chain[r >> 6] |= np.uint64(1 << (r & 63))
        out.data[j] = dst.class_coords(chain)
    return out


# ---------------------------------------------------------------------------
# interval ranks via composed relations


def _split_bits(
    cols: _gf2.BitColumns, cut: int, rows_a: int, rows_b: int
) -> tuple[_gf2.BitColumns, _gf2.BitColumns]:
    a = _gf2.BitColumns.zeros(rows_a, cols.n_cols)
    b = _gf2.BitColumns.zeros(rows_b, cols.n_cols)
    for j in range(cols.n_cols):
        for bit in cols.column_rows(j):
            if bit < cut:
                a.data[j, bit >> 6] |= np.uint64(1 << (bit & 63))
            else:
                r = bit - cut
                b.data[j, r >> 6] |= np.uint64(1 << (r & 63))
    return a, b


def _relation_rank(top: _gf2.BitColumns, bot: _gf2.BitColumns) -> int:
    # dim(domain) minus dim of domain vectors related to zero
    dom = _gf2.rank(top)
    k = _gf2.kernel(bot)
    if k.n_cols == 0:
        return dom
    return dom - _gf2.rank(_gf2.apply_columns(top, k))


def _relation_reduce(
    top: _gf2.BitColumns, bot: _gf2.BitColumns
) -> tuple[_gf2.BitColumns, _gf2.BitColumns]:
    keep = _gf2.independent_columns(_gf2.stack_rows([top, bot]))
    return top.take(keep), bot.take(keep)


def _relation_step(
    top: _gf2.BitColumns,
    bot: _gf2.BitColumns,
    direction: str,
    matrix: _gf2.BitColumns,
) -> tuple[_gf2.BitColumns, _gf2.BitColumns]:
    if direction == "fwd":
        new_top, new_bot = top, _gf2.apply_columns(matrix, bot)
    else:
        # crossing an arrow pointing back: keep pairs whose next coordinate
        # maps onto the current bottom coordinate
        stacked = matrix.hstack(bot)
        ker = _gf2.kernel(stacked)
        y, lam = _split_bits(ker, matrix.n_cols, matrix.n_cols, bot.n_cols)
        new_top = _gf2.apply_columns(top, lam)
        new_bot = _gf2.BitColumns(matrix.n_cols, y.data)
    return _relation_reduce(new_top, new_bot)


def _interval_multiplicities(
    dims_vec: list[int], steps: list[tuple[str, _gf2.BitColumns]]
) -> dict[tuple[int, int], int]:
    n = len(dims_vec)
    r = np.zeros((n, n + 1), dtype=np.int64)
    for i in range(n):
        top = _gf2.BitColumns.identity(dims_vec[i])
        bot = _gf2.BitColumns.identity(dims_vec[i])
        for j in range(i, n):
            rv = _relation_rank(top, bot)
            r[i, j] = rv
            if rv == 0:
                break
            if j + 1 < n:
                top, bot = _relation_step(top, bot, *steps[j])
    mult: dict[tuple[int, int], int] = {}
    for i in range(n):
        above = r[i - 1] if i > 0 else np.zeros(n + 1, dtype=np.int64)
        for j in range(i, n):
            m = int(r[i, j] - r[i, j + 1] - above[j] + above[j + 1])
            if m < 0:
                raise RuntimeError(
                    f"negative interval multiplicity at [{i}, {j}]"
                )
            if m:
                mult[(i, j)] = m
    return mult


# ---------------------------------------------------------------------------
# diagrams


@dataclass(frozen=True, eq=False)
class PersistenceDiagram:
    """Closed-interval multisets over snapshot positions, per dimension."""

    n_layers: int
    max_dim: int
    intervals: dict[int, dict[tuple[int, int], int]]

    @property
    def n_indices(self) -> int:
        return 2 * (self.n_layers - 1) + 1

    def total(self, p: int) -> int:
        return sum(self.intervals.get(p, {}).values())

    def coverage_counts(self, p: int, n: int | None = None) -> np.ndarray:
        """Number of intervals containing each position."""
        n = self.n_indices if n is None else n
        out = np.zeros(n, dtype=np.int64)
        for (b, d), m in self.intervals.get(p, {}).items():
            out[b : d + 1] += m
        return out

    def pair_coverage_counts(self, p: int, n: int | None = None) -> np.ndarray:
        """Number of intervals containing both t and t+1, for each t."""
        n = self.n_indices if n is None else n
        out = np.zeros(max(n - 1, 0), dtype=np.int64)
        for (b, d), m in self.intervals.get(p, {}).items():
            if d > b:
                out[b:d] += m
        return out

    def to_json_dict(self) -> dict:
        eff = to_effective(self)
        return {
            "format": "zzt-diagram",
            "version": 1,
            "n_layers": self.n_layers,
            "max_dim": self.max_dim,
            "raw": {
                str(p): [[b, d, m] for (b, d), m in sorted(bars.items())]
                for p, bars in sorted(self.intervals.items())
            },
            "effective": {
                str(p): [list(row) for row in eff.rows(p)]
                for p in sorted(self.intervals.keys())
            },
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "PersistenceDiagram":
        if doc.get("format") != "zzt-diagram":
            raise ValueError("not a diagram document")
        intervals = {
            int(p): {(int(b), int(d)): int(m) for b, d, m in bars}
            for p, bars in doc["raw"].items()
        }
        return cls(
            n_layers=int(doc["n_layers"]),
            max_dim=int(doc["max_dim"]),
            intervals=intervals,
        )


@dataclass(frozen=True, eq=False)
class EffectiveDiagram:
    """Model-layer intervals obtained from the raw diagram by the shift map.

    Keys are (birth_layer, death_layer, died_at_intersection); an entry died
    at an intersection when its raw death position was odd. An entry is
    right-open (never died inside the sequence) exactly when it did not die
    at an intersection and its death layer is the final one.
    """

    n_layers: int
    intervals: dict[int, dict[tuple[int, int, bool], int]]

    def right_open(self, key: tuple[int, int, bool]) -> bool:
        bl, dl, odd_death = key
        return not odd_death and dl == self.n_layers - 1

    def rows(self, p: int) -> list[tuple[int, int, int, bool]]:
        """Sorted (birth_layer, death_layer, multiplicity, right_open) rows."""
        rows: dict[tuple[int, int, bool], int] = {}
        for key, m in self.intervals.get(p, {}).items():
            bl, dl, _ = key
            k = (bl, dl, self.right_open(key))
            rows[k] = rows.get(k, 0) + m
        return [(bl, dl, m, ro) for (bl, dl, ro), m in sorted(rows.items())]


def to_effective(diagram: PersistenceDiagram) -> EffectiveDiagram:
    """Apply the index shift map: odd endpoints move up to the next layer."""
    out: dict[int, dict[tuple[int, int, bool], int]] = {}
    for p, bars in diagram.intervals.items():
        bucket: dict[tuple[int, int, bool], int] = {}
        for (b, d), m in bars.items():
            key = ((b + 1) // 2, (d + 1) // 2, d % 2 == 1)
            bucket[key] = bucket.get(key, 0) + m
        out[p] = bucket
    return EffectiveDiagram(n_layers=diagram.n_layers, intervals=out)


@dataclass(frozen=True, eq=False)
class EffectiveImage:
    """Integer grid of effective interval counts over (birth, death) layers.

    ``grid`` counts every interval; ``odd_death_grid`` counts the subset that
    died at an intersection rather than at its death layer. Both are upper
    triangular with shape (n_layers, n_layers).
    """

    n_layers: int
    dim: int
    grid: np.ndarray
    odd_death_grid: np.ndarray

    @property
    def total(self) -> int:
        return int(self.grid.sum())

    @property
    def right_open_births(self) -> np.ndarray:
        """Per-birth-layer counts of intervals alive at the final layer."""
        return self.grid[:, -1] - self.odd_death_grid[:, -1]

    def to_json_dict(self) -> dict:
        return {
            "format": "zzt-image",
            "version": 1,
            "n_layers": self.n_layers,
            "dim": self.dim,
            "grid": self.grid.tolist(),
            "odd_death_grid": self.odd_death_grid.tolist(),
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "EffectiveImage":
        if doc.get("format") != "zzt-image":
            raise ValueError("not an image document")
        n = int(doc["n_layers"])
        grid = np.asarray(doc["grid"], dtype=np.int64)
        odd = np.asarray(doc["odd_death_grid"], dtype=np.int64)
        if grid.shape != (n, n) or odd.shape != (n, n):
            raise ValueError("image grids must be (n_layers, n_layers)")
        return cls(n_layers=n, dim=int(doc["dim"]), grid=grid, odd_death_grid=odd)


def effective_image(eff: EffectiveDiagram, p: int) -> EffectiveImage:
    """Accumulate the effective intervals of dimension ``p`` onto a grid."""
    n = eff.n_layers
    grid = np.zeros((n, n), dtype=np.int64)
    odd = np.zeros((n, n), dtype=np.int64)
    for (bl, dl, odd_death), m in eff.intervals.get(p, {}).items():
        grid[bl, dl] += m
        if odd_death:
            odd[bl, dl] += m
    return EffectiveImage(n_layers=n, dim=p, grid=grid, odd_death_grid=odd)


def compute_zigzag(
    filtration: ZigzagFiltration,
    dims: list[int] | None = None,
    validate: bool = True,
) -> PersistenceDiagram:
    """Interval decomposition of the filtration's homology, per dimension.

    ``dims`` defaults to all of 0 .. max_dim - 1. Betti numbers at every
    position and ranks across every adjacent inclusion are reproduced
    exactly by the returned intervals.
    """
    if dims is None:
        dims = list(range(filtration.max_dim))
    else:
        dims = sorted(set(int(p) for p in dims))
        bad = [p for p in dims if p < 0 or p >= filtration.max_dim]
        if bad:
            raise ValueError(
                f"dims must lie in [0, {filtration.max_dim}), got {bad}"
            )
    states = snapshots(filtration, validate=validate)
    intervals: dict[int, dict[tuple[int, int], int]] = {}
    for p in dims:
        homs = [_SnapshotHomology(cx, p) for cx in states]
        steps: list[tuple[str, _gf2.BitColumns]] = []
        for t in range(len(states) - 1):
            if t % 2 == 0:
                steps.append(("bwd", _induced_matrix(homs[t + 1], homs[t])))
            else:
                steps.append(("fwd", _induced_matrix(homs[t], homs[t + 1])))
        intervals[p] = _interval_multiplicities(
            [h.betti for h in homs], steps
        )
    return PersistenceDiagram(
        n_layers=filtration.n_layers,
        max_dim=filtration.max_dim,
        intervals=intervals,
    )
