"""Per-layer summary statistics computed from effective interval images.

All functions consume :class:`~zztda.zigzag.EffectiveImage` grids, where the
entry at (b, d) counts intervals born at layer b and dead at layer d. The
weight between two layers is |l1 - l2| ** alpha with the diagonal fixed to
zero, which keeps every weighted sum finite for negative alpha and makes the
descriptors continuous in alpha.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .validation import check_index
from .zigzag import EffectiveImage


@dataclass(frozen=True)
class DescriptorConfig:
    """Knobs shared by the interval descriptors.

    inclusive_death treats an interval as alive at its death layer;
    normalization selects the birth-frequency denominator: "global" divides
    by the total weighted mass so the series sums to 1, "paper_literal"
    divides per layer by (sum of weights) * (sum of counts).
    """

    alpha: float = 0.0
    homology_dim: int = 1
    inclusive_death: bool = True
    normalization: str = "global"

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        if self.normalization not in ("global", "paper_literal"):
            raise ValueError(
                f"unknown normalization {self.normalization!r}; "
                "expected 'global' or 'paper_literal'"
            )
        if self.homology_dim < 0:
            raise ValueError("homology_dim must be >= 0")


@dataclass(frozen=True, eq=False)
class DescriptorSeries:
    """One real value per model layer, with optional subset statistics.

    ``degenerate`` marks series whose defining mass was empty (all-zero
    image, or too few subsets for a standard deviation).
    """

    values: np.ndarray
    subset_mean: np.ndarray | None = None
    subset_std: np.ndarray | None = None
    degenerate: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", v)
        if v.ndim != 1:
            raise ValueError("series values must be one-dimensional")

    def __len__(self) -> int:
        return int(self.values.shape[0])


def _check_dim(img: EffectiveImage, cfg: DescriptorConfig) -> None:
    if img.dim != cfg.homology_dim:
        raise ValueError(
            f"image holds dimension {img.dim}, config expects "
            f"{cfg.homology_dim}"
        )


def _weights(center: int, targets: np.ndarray, alpha: float) -> np.ndarray:
    d = np.abs(targets - center).astype(np.float64)
    out = np.zeros_like(d)
    nz = d > 0
    out[nz] = d[nz] ** alpha
    return out


def births_relative_frequency(
    img: EffectiveImage, cfg: DescriptorConfig | None = None
) -> DescriptorSeries:
    """Weighted share of interval births attributed to each layer.

    The weight runs over death layers at or after the birth layer, with
    same-layer (zero-persistence) intervals excluded by the zero diagonal
    weight. An image with no weighted mass yields an all-zero series marked
    degenerate.
    """
    cfg = cfg or DescriptorConfig(homology_dim=img.dim)
    _check_dim(img, cfg)
    n = img.n_layers
    cols = np.arange(n)
    num = np.zeros(n, dtype=np.float64)
    for layer in range(n):
        w = _weights(layer, cols, cfg.alpha)
        num[layer] = float(w[layer:] @ img.grid[layer, layer:])
    if cfg.normalization == "global":
        total = num.sum()
        if total == 0:
            return DescriptorSeries(values=np.zeros(n), degenerate=True)
        return DescriptorSeries(values=num / total)
    values = np.zeros(n, dtype=np.float64)
    for layer in range(n):
        w = _weights(layer, cols, cfg.alpha)
        denom = float(w[layer:].sum()) * float(img.grid[layer, layer:].sum())
        if denom > 0:
            values[layer] = num[layer] / denom
    return DescriptorSeries(values=values, degenerate=bool(num.sum() == 0))


def _beta_from_image(img: EffectiveImage) -> np.ndarray:
    """Intervals alive at each layer, counting death layers as alive."""
    n = img.n_layers
    out = np.zeros(n, dtype=np.int64)
    for layer in range(n):
        out[layer] = int(img.grid[: layer + 1, layer:].sum())
    return out


def interlayer_persistence(
    img: EffectiveImage, l1: int, l2: int, cfg: DescriptorConfig | None = None
) -> float:
    """Fraction of intervals alive at l1 that span through to l2.

    The numerator counts intervals born at or before min(l1, l2) and dead at
    or after max(l1, l2) (strictly after when inclusive_death is off, with
    never-dying intervals still counted at the final layer); the denominator
    is the number of intervals alive at l1. Zero when nothing is alive at l1.
    """
    cfg = cfg or DescriptorConfig(homology_dim=img.dim)
    _check_dim(img, cfg)
    n = img.n_layers
    l1 = check_index(l1, n, name="l1")
    l2 = check_index(l2, n, name="l2")
    beta1 = int(img.grid[: l1 + 1, l1:].sum())
    if beta1 == 0:
        return 0.0
    m1, m2 = min(l1, l2), max(l1, l2)
    if cfg.inclusive_death:
        num = int(img.grid[: m1 + 1, m2:].sum())
    else:
        num = int(img.grid[: m1 + 1, m2 + 1 :].sum())
        if m2 == n - 1:
            num += int(img.right_open_births[: m1 + 1].sum())
    return num / beta1


def weighted_interlayer(
    img: EffectiveImage, layer: int, cfg: DescriptorConfig | None = None
) -> float:
    """Weighted average of interlayer persistence from one layer to all others."""
    cfg = cfg or DescriptorConfig(homology_dim=img.dim)
    _check_dim(img, cfg)
    n = img.n_layers
    layer = check_index(layer, n, name="layer")
    targets = np.arange(n)
    w = _weights(layer, targets, cfg.alpha)
    den = float(w.sum())
    if den == 0:
        return 0.0
    num = sum(
        w[t] * interlayer_persistence(img, layer, t, cfg)
        for t in range(n)
        if t != layer
    )
    return float(num) / den


def weighted_interlayer_series(
    img: EffectiveImage, cfg: DescriptorConfig | None = None
) -> DescriptorSeries:
    """weighted_interlayer evaluated at every layer."""
    cfg = cfg or DescriptorConfig(homology_dim=img.dim)
    values = np.array(
        [weighted_interlayer(img, layer, cfg) for layer in range(img.n_layers)]
    )
    return DescriptorSeries(values=values, degenerate=bool(img.total == 0))


def betti_curve(img: EffectiveImage, p: int | None = None) -> DescriptorSeries:
    """Number of holes alive at each layer, from the image alone.

    Intervals that ended strictly between two layers carry their death layer
    in the grid but are not alive at it; the odd-death grid removes exactly
    those, so the curve matches a direct per-layer homology computation.
    """
    if p is not None and p != img.dim:
        raise ValueError(f"image holds dimension {img.dim}, asked for {p}")
    n = img.n_layers
    values = np.zeros(n, dtype=np.float64)
    for layer in range(n):
        alive = int(img.grid[: layer + 1, layer + 1 :].sum())
        alive += int(img.grid[: layer + 1, layer].sum())
        alive -= int(img.odd_death_grid[: layer + 1, layer].sum())
        values[layer] = alive
    return DescriptorSeries(values=values)


def epi_difference(a: EffectiveImage, b: EffectiveImage) -> np.ndarray:
    """Element-wise difference of the two mass-normalized grids.

    Entries lie in [-1, 1]; swapping the arguments negates the result.
    """
    if a.grid.shape != b.grid.shape:
        raise ValueError("images must share shape")
    ta, tb = a.total, b.total
    if ta == 0 or tb == 0:
        raise ValueError("cannot normalize an image with zero total mass")
    return a.grid / float(ta) - b.grid / float(tb)


def subset_stats(series_list: list[DescriptorSeries]) -> DescriptorSeries:
    """Per-layer sample mean and standard deviation across subset series.

    The standard deviation uses the n-1 divisor and needs at least two
    series; with a single series the result carries its values and is
    marked degenerate.
    """
    if not series_list:
        raise ValueError("need at least one series")
    lengths = {len(s) for s in series_list}
    if len(lengths) != 1:
        raise ValueError("series lengths differ")
    stacked = np.vstack([s.values for s in series_list])
    mean = stacked.mean(axis=0)
    if stacked.shape[0] >= 2:
        std = stacked.std(axis=0, ddof=1)
        return DescriptorSeries(values=mean, subset_mean=mean, subset_std=std)
    return DescriptorSeries(
        values=mean, subset_mean=mean, subset_std=None, degenerate=True
    )


def variance_scaling_fit(
    sizes: list[float], variances: list[float]
) -> float:
    """Least-squares slope of log(variance) against log(size)."""
    s = np.asarray(sizes, dtype=np.float64)
    v = np.asarray(variances, dtype=np.float64)
    if s.shape != v.shape or s.ndim != 1:
        raise ValueError("sizes and variances must be equal-length vectors")
    if s.shape[0] < 3:
        raise ValueError("need at least 3 points for a scaling fit")
    if (s <= 0).any() or (v <= 0).any():
        raise ValueError("sizes and variances must be positive")
    slope, _ = np.polyfit(np.log(s), np.log(v), 1)
    return float(slope)


# ---------------------------------------------------------------------------
# plot-ready emission


def series_csv(series: DescriptorSeries) -> str:
    """Render a series as CSV text: layer, value, subset_mean, subset_std."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["layer", "value", "subset_mean", "subset_std"])
    for layer, value in enumerate(series.values):
        mean = (
            "" if series.subset_mean is None else repr(float(series.subset_mean[layer]))
        )
        std = (
            "" if series.subset_std is None else repr(float(series.subset_std[layer]))
        )
        w.writerow([layer, repr(float(value)), mean, std])
    return buf.getvalue()


def write_series_csv(series: DescriptorSeries, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(series_csv(series))


def read_series_csv(path) -> DescriptorSeries:
    """Parse a series written by :func:`write_series_csv`."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["layer", "value", "subset_mean", "subset_std"]:
        raise ValueError("not a descriptor series file")
    values, means, stds = [], [], []
    for row in rows[1:]:
        values.append(float(row[1]))
        means.append(float(row[2]) if row[2] else None)
        stds.append(float(row[3]) if row[3] else None)
    mean = None if any(m is None for m in means) else np.array(means)
    std = None if any(s is None for s in stds) else np.array(stds)
    return DescriptorSeries(
        values=np.array(values), subset_mean=mean, subset_std=std
    )


def grid_csv(grid: np.ndarray) -> str:
    """Render a dense grid as CSV rows of repr-exact floats."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in np.asarray(grid):
        w.writerow([repr(float(x)) for x in row])
    return buf.getvalue()


def write_grid_csv(grid: np.ndarray, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(grid_csv(grid))
