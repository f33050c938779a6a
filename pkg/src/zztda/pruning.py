"""Layer-removal recommendations from weighted interlayer persistence."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .descriptors import DescriptorSeries
from .validation import check_positive


@dataclass(frozen=True, eq=False)
class PruneReport:
    """Layers whose score exceeds the thresholded maximum."""

    layers_to_remove: tuple[int, ...]
    threshold: float
    alpha_used: float
    zbar: np.ndarray

    def to_json_dict(self) -> dict:
        return {
            "layers": list(self.layers_to_remove),
            "threshold": self.threshold,
            "alpha": self.alpha_used,
            "zbar": [float(v) for v in self.zbar],
        }


def prune_layers(
    zbar: DescriptorSeries | np.ndarray,
    threshold: float = 0.9,
    alpha: float = -1.0,
) -> PruneReport:
    """Select layers scoring strictly above threshold times the maximum.

    The comparison is strict, so threshold 1.0 selects nothing (the maximum
    itself is excluded); the result depends only on scores relative to the
    maximum, making it invariant under positive rescaling.
    """
    values = np.asarray(
        zbar.values if isinstance(zbar, DescriptorSeries) else zbar,
        dtype=np.float64,
    )
    if values.ndim != 1 or values.size == 0:
        raise ValueError("zbar must be a non-empty vector")
    if not 0 < threshold <= 1:
        raise ValueError("threshold must lie in (0, 1]")
    top = float(values.max())
    if top <= 0:
        raise ValueError("zbar has no positive mass to threshold against")
    layers = tuple(int(i) for i in np.nonzero(values > top * threshold)[0])
    return PruneReport(
        layers_to_remove=layers,
        threshold=float(threshold),
        alpha_used=float(alpha),
        zbar=values.copy(),
    )


def sliding_windows(
    n_layers: int, window: int, step: int
) -> list[list[int]]:
    """Consecutive layer blocks [s, s + window) advancing by step."""
    n_layers = check_positive(n_layers, name="n_layers")
    window = check_positive(window, name="window")
    step = check_positive(step, name="step")
    if window > n_layers:
        raise ValueError(f"window {window} exceeds n_layers {n_layers}")
    out = []
    start = 0
    while start + window <= n_layers:
        out.append(list(range(start, start + window)))
        start += step
    return out
