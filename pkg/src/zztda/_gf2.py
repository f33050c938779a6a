"""Bit-packed GF(2) column vectors and elimination, private to the engine.

Columns are packed into uint64 words (bit r of a column sits at word r >> 6,
bit r & 63). All routines are allocation-light and deterministic. This module
is intentionally separate from the verification oracle, which carries its own
unpacked elimination code.
"""

from __future__ import annotations

import numpy as np


def _n_words(n_rows: int) -> int:
    return (n_rows + 63) >> 6


class BitColumns:
    """A fixed-height list of GF(2) column vectors."""

    __slots__ = ("n_rows", "data")

    def __init__(self, n_rows: int, data: np.ndarray):
        self.n_rows = n_rows
        self.data = data  # (n_cols, n_words) uint64

    # -- construction -------------------------------------------------

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "BitColumns":
        return cls(n_rows, np.zeros((n_cols, _n_words(n_rows)), dtype=np.uint64))

    @classmethod
    def identity(cls, n: int) -> "BitColumns":
        out = cls.zeros(n, n)
        for i in range(n):
            out.data[i, i >> 6] |= np.uint64(1 << (i & 63))
        return out

    @classmethod
    def from_indices(cls, n_rows: int, cols: list[list[int]]) -> "BitColumns":
        out = cls.zeros(n_rows, len(cols))
        for c, rows in enumerate(cols):
            for r in rows:
                out.data[c, r >> 6] |= np.uint64(1 << (r & 63))
        return out

    # -- basic queries -------------------------------------------------

    @property
    def n_cols(self) -> int:
        return self.data.shape[0]

    def copy(self) -> "BitColumns":
        return BitColumns(self.n_rows, self.data.copy())

    def col(self, j: int) -> np.ndarray:
        return self.data[j]

    def is_zero(self, j: int) -> bool:
        return not self.data[j].any()

    def column_rows(self, j: int) -> list[int]:
        rows = []
        for w, word in enumerate(self.data[j]):
            word = int(word)
            base = w << 6
            while word:
                low = word & -word
                rows.append(base + low.bit_length() - 1)
                word ^= low
        return rows

    def take(self, cols: list[int]) -> "BitColumns":
        return BitColumns(self.n_rows, self.data[cols].copy())

    def hstack(self, other: "BitColumns") -> "BitColumns":
        if self.n_rows != other.n_rows:
            raise ValueError("hstack needs matching heights")
        return BitColumns(self.n_rows, np.concatenate([self.data, other.data]))


def top_bit(words: np.ndarray) -> int:
    """Index of the highest set bit, or -1 for the zero vector."""
    nz = np.nonzero(words)[0]
    if nz.size == 0:
        return -1
    w = int(nz[-1])
    return (w << 6) + int(words[w]).bit_length() - 1


def stack_rows(blocks: list[BitColumns]) -> BitColumns:
    """Concatenate blocks vertically, padding each to a word boundary.

    The padding inserts rows that are identically zero, which leaves ranks,
    kernels, and linear independence unchanged; callers must not interpret
    absolute row indices of the result.
    """
    n_cols = blocks[0].n_cols
    for b in blocks:
        if b.n_cols != n_cols:
            raise ValueError("stack_rows needs matching column counts")
    data = np.concatenate([b.data for b in blocks], axis=1)
    return BitColumns(data.shape[1] << 6, data)


class Echelon:
    """Column echelon form with tracked combinations of the original columns.

    After construction, ``pivots`` maps a pivot row to the reduced column
    occupying it; ``combos.col(j)`` expresses reduced column j in the original
    columns. Zero reduced columns yield kernel generators.
    """

    def __init__(self, cols: BitColumns):
        self.n_rows = cols.n_rows
        self.reduced = cols.copy()
        self.combos = BitColumns.identity(cols.n_cols)
        self.pivots: dict[int, int] = {}
        self.zero_cols: list[int] = []
        red, comb = self.reduced.data, self.combos.data
        for j in range(cols.n_cols):
            while True:
                t = top_bit(red[j])
                if t < 0:
                    self.zero_cols.append(j)
                    break
                owner = self.pivots.get(t)
                if owner is None:
                    self.pivots[t] = j
                    break
                red[j] ^= red[owner]
                comb[j] ^= comb[owner]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def kernel(self) -> BitColumns:
        """Generators of {x : cols @ x = 0}, as combinations of the columns."""
        return self.combos.take(self.zero_cols)

    def solve(self, b: np.ndarray) -> np.ndarray | None:
        """Coefficients x with cols @ x = b, or None when unsolvable."""
        r = b.copy()
        x = np.zeros(self.combos.data.shape[1], dtype=np.uint64)
        while True:
            t = top_bit(r)
            if t < 0:
                return x
            owner = self.pivots.get(t)
            if owner is None:
                return None
            r = r ^ self.reduced.data[owner]
            x = x ^ self.combos.data[owner]


def rank(cols: BitColumns) -> int:
    return Echelon(cols).rank


def kernel(cols: BitColumns) -> BitColumns:
    return Echelon(cols).kernel()


def independent_columns(cols: BitColumns) -> list[int]:
    """Indices of a maximal linearly independent prefix-greedy column subset."""
    ech = Echelon(cols)
    zero = set(ech.zero_cols)
    return [j for j in range(cols.n_cols) if j not in zero]


def apply_columns(matrix: BitColumns, coeffs: BitColumns) -> BitColumns:
    """Column-combine ``matrix`` by each coefficient vector in ``coeffs``.

    ``coeffs`` has one bit per column of ``matrix``; the result holds one
    combined column per coefficient vector.
    """
    out = BitColumns.zeros(matrix.n_rows, coeffs.n_cols)
    for j in range(coeffs.n_cols):
        sel = coeffs.column_rows(j)
        if sel:
            out.data[j] = np.bitwise_xor.reduce(matrix.data[sel], axis=0)
    return out
