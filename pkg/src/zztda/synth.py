"""Synthetic layer stacks with known topological ground truth.

Randomness is drawn from counter-based Philox streams split per layer, so
layers can be generated in any order (or in parallel) with bit-identical
results for a given seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .layerstack import LayerStack

KINDS = ("persistent_circle", "vanishing_circle", "random_walk", "blob_merge")

_BLOB_SPREAD = 0.1
_BLOB_CENTER = 1.0
_COLLAPSE_EXTENT = 0.01


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for one synthetic stack."""

    kind: str
    n_points: int
    n_layers: int
    dim: int = 2
    noise_scale: float = 0.0
    seed: int = 0
    event_layer: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.n_points < 1:
            raise ValueError("n_points must be >= 1")
        if self.n_layers < 2:
            raise ValueError("n_layers must be >= 2")
        min_dim = 2 if self.kind in ("persistent_circle", "vanishing_circle") else 1
        if self.dim < min_dim:
            raise ValueError(f"kind {self.kind} needs dim >= {min_dim}")
        if not (math.isfinite(self.noise_scale) and self.noise_scale >= 0):
            raise ValueError("noise_scale must be a finite non-negative real")
        needs_event = self.kind in ("vanishing_circle", "blob_merge")
        if needs_event:
            if self.event_layer is None:
                raise ValueError(f"kind {self.kind} requires event_layer")
            if not 0 <= self.event_layer < self.n_layers:
                raise ValueError("event_layer must lie in [0, n_layers)")
        elif self.event_layer is not None:
            raise ValueError(f"kind {self.kind} does not take event_layer")

    def meta(self) -> dict:
        out = {
            "kind": self.kind,
            "n_points": self.n_points,
            "n_layers": self.n_layers,
            "dim": self.dim,
            "noise_scale": self.noise_scale,
            "seed": self.seed,
        }
        if self.event_layer is not None:
            out["event_layer"] = self.event_layer
        return out


def _layer_rng(seed: int, layer: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(0, layer))
    return np.random.Generator(np.random.Philox(ss))


def _shared_rng(seed: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(1, 0))
    return np.random.Generator(np.random.Philox(ss))


def _circle_points(n: int, dim: int) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(n) / n
    out = np.zeros((n, dim), dtype=np.float64)
    out[:, 0] = np.cos(theta)
    out[:, 1] = np.sin(theta)
    return out


def _segment_points(n: int, dim: int) -> np.ndarray:
    # a short centered segment: collapses loops while keeping the points
    # distinct and the index-neighbor structure connected
    out = np.zeros((n, dim), dtype=np.float64)
    if n > 1:
        out[:, 0] = (np.arange(n) / (n - 1) - 0.5) * _COLLAPSE_EXTENT
    return out


def generate(spec: SynthSpec) -> LayerStack:
    """Deterministically generate the stack described by ``spec``."""
    n, L, dim = spec.n_points, spec.n_layers, spec.dim
    layers: list[np.ndarray] = []
    if spec.kind == "blob_merge":
        half = n // 2
        side = np.where(np.arange(n) < half, -1.0, 1.0)
        offsets = _shared_rng(spec.seed).normal(0.0, _BLOB_SPREAD, (n, dim))

    walk = np.zeros((n, dim), dtype=np.float64)
    for layer in range(L):
        if spec.kind == "persistent_circle":
            base = _circle_points(n, dim)
        elif spec.kind == "vanishing_circle":
            if layer < spec.event_layer:
                base = _circle_points(n, dim)
            else:
                base = _segment_points(n, dim)
        elif spec.kind == "random_walk":
            if spec.noise_scale > 0:
                walk = walk + _layer_rng(spec.seed, layer).normal(
                    0.0, spec.noise_scale, (n, dim)
                )
            base = walk.copy()
        else:  # blob_merge
            base = offsets.copy()
            if layer < spec.event_layer:
                base[:, 0] += side * _BLOB_CENTER
        if spec.kind != "random_walk" and spec.noise_scale > 0:
            base = base + _layer_rng(spec.seed, layer).normal(
                0.0, spec.noise_scale, (n, dim)
            )
        layers.append(base.astype(np.float32))
    return LayerStack(layers=tuple(layers), meta=spec.meta())
