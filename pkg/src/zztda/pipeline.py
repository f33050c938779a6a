"""End-to-end orchestration: stack -> graphs -> complexes -> intervals -> descriptors.

Work is split per subset; subsets run in parallel and their interval
computations are content-hash cached, so descriptor re-runs with new weight
exponents skip the expensive stage entirely.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass, field, replace

import numpy as np
from joblib import Parallel, delayed
from sklearn.base import BaseEstimator, TransformerMixin

from .complexes import DEFAULT_SIMPLEX_BUDGET, expand
from .descriptors import (
    DescriptorConfig,
    DescriptorSeries,
    betti_curve,
    births_relative_frequency,
    subset_stats,
    weighted_interlayer_series,
)
from .layerstack import LayerStack, partition_subsets
from .neighbors import (
    VRCalibration,
    calibrate_radius,
    filter_short_edges,
    knn_graph,
)
from .validation import as_layerstack
from .zigzag import (
    PersistenceDiagram,
    build_filtration,
    compute_zigzag,
    effective_image,
    to_effective,
)

DEFAULT_ALPHAS = (-1.0, 0.0, 0.5, 1.0, 2.0)


@dataclass(frozen=True)
class PipelineConfig:
    """All knobs of a full run, serializable to a flat JSON object."""

    k_nn: int = 4
    m: int = 4
    subset_size: int = 500
    alphas: tuple[float, ...] = DEFAULT_ALPHAS
    homology_dims: tuple[int, ...] = (1,)
    vr: VRCalibration | None = None
    keep_short_edges: bool = False
    normalization: str = "global"
    inclusive_death: bool = True
    n_jobs: int = 1
    cache_dir: str | None = None
    validate_filtration: bool = True
    simplex_budget: int = DEFAULT_SIMPLEX_BUDGET

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(
            self, "homology_dims", tuple(int(p) for p in self.homology_dims)
        )
        if self.k_nn < 1:
            raise ValueError("k_nn must be >= 1")
        if self.m < 2:
            raise ValueError("m must be >= 2")
        if self.subset_size < 1:
            raise ValueError("subset_size must be >= 1")
        if not self.alphas or any(not math.isfinite(a) for a in self.alphas):
            raise ValueError("alphas must be a non-empty list of finite reals")
        if not self.homology_dims:
            raise ValueError("homology_dims must be non-empty")
        bad = [p for p in self.homology_dims if not 0 <= p <= self.m - 1]
        if bad:
            raise ValueError(
                f"homology_dims must lie in [0, m-1] = [0, {self.m - 1}], got {bad}"
            )
        if self.normalization not in ("global", "paper_literal"):
            raise ValueError("normalization must be 'global' or 'paper_literal'")

    def descriptor_config(self, p: int, alpha: float) -> DescriptorConfig:
        return DescriptorConfig(
            alpha=alpha,
            homology_dim=p,
            inclusive_death=self.inclusive_death,
            normalization=self.normalization,
        )

    def to_json_dict(self) -> dict:
        vr = None
        if self.vr is not None:
            vr = {
                "beta0_target": self.vr.beta0_target,
                "beta0_tolerance": self.vr.beta0_tolerance,
                "per_layer_radius": (
                    None
                    if self.vr.per_layer_radius is None
                    else [float(r) for r in self.vr.per_layer_radius]
                ),
            }
        return {
            "k_nn": self.k_nn,
            "m": self.m,
            "subset_size": self.subset_size,
            "alphas": list(self.alphas),
            "homology_dims": list(self.homology_dims),
            "vr": vr,
            "keep_short_edges": self.keep_short_edges,
            "normalization": self.normalization,
            "inclusive_death": self.inclusive_death,
            "n_jobs": self.n_jobs,
            "cache_dir": self.cache_dir,
            "validate_filtration": self.validate_filtration,
            "simplex_budget": self.simplex_budget,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "PipelineConfig":
        known = set(cls().to_json_dict())
        unknown = sorted(set(doc) - known)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        kwargs = dict(doc)
        vr = kwargs.pop("vr", None)
        if vr is not None:
            vr = VRCalibration(
                beta0_target=int(vr["beta0_target"]),
                beta0_tolerance=int(vr.get("beta0_tolerance", 0)),
                per_layer_radius=(
                    None
                    if vr.get("per_layer_radius") is None
                    else tuple(float(r) for r in vr["per_layer_radius"])
                ),
            )
        return cls(vr=vr, **kwargs)


@dataclass(frozen=True, eq=False)
class RunResult:
    """Diagrams, images, and per-layer descriptor series of one run."""

    config: PipelineConfig
    n_subsets: int
    subset_size_used: int
    diagrams: list[PersistenceDiagram]
    images: dict[int, list]
    births: dict[int, dict[float, list[DescriptorSeries]]]
    births_stats: dict[int, dict[float, DescriptorSeries]]
    zbar: dict[int, dict[float, list[DescriptorSeries]]]
    zbar_stats: dict[int, dict[float, DescriptorSeries]]
    betti: dict[int, list[DescriptorSeries]]
    betti_stats: dict[int, DescriptorSeries]

    @property
    def single_subset(self) -> bool:
        return self.n_subsets == 1


def _layer_complexes(subset: LayerStack, cfg: PipelineConfig) -> list:
    complexes = []
    for layer in range(subset.n_layers):
        g = knn_graph(subset.layers[layer], cfg.k_nn)
        if cfg.vr is not None:
            if cfg.vr.per_layer_radius is not None:
                radius = float(cfg.vr.per_layer_radius[layer])
            else:
                radius = calibrate_radius(
                    g, cfg.vr.beta0_target, cfg.vr.beta0_tolerance
                )
            g = filter_short_edges(g, radius, keep_short=cfg.keep_short_edges)
        complexes.append(expand(g, cfg.m, budget=cfg.simplex_budget))
    return complexes


def subset_diagram(subset: LayerStack, cfg: PipelineConfig) -> PersistenceDiagram:
    """Interval computation for one subset, no caching."""
    filt = build_filtration(_layer_complexes(subset, cfg))
    return compute_zigzag(
        filt,
        dims=list(cfg.homology_dims),
        validate=cfg.validate_filtration,
    )


def _cache_key(subset: LayerStack, cfg: PipelineConfig) -> str:
    h = hashlib.sha256()
    h.update(b"zzt-diagram-v1")
    vr = cfg.vr
    params = (
        cfg.k_nn,
        cfg.m,
        tuple(sorted(cfg.homology_dims)),
        cfg.keep_short_edges,
        None
        if vr is None
        else (vr.beta0_target, vr.beta0_tolerance, vr.per_layer_radius),
    )
    h.update(repr(params).encode())
    for layer in subset.layers:
        h.update(np.ascontiguousarray(layer, dtype=np.float32).tobytes())
    return h.hexdigest()


def _resolve_cache_dir(cfg: PipelineConfig) -> str | None:
    return cfg.cache_dir or os.environ.get("ZZT_CACHE_DIR") or None


def _cached_subset_diagram(
    subset: LayerStack, cfg: PipelineConfig
) -> PersistenceDiagram:
    cache_dir = _resolve_cache_dir(cfg)
    if cache_dir is None:
        return subset_diagram(subset, cfg)
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, f"zzt-{_cache_key(subset, cfg)}.json")
    if os.path.exists(path):
        with open(path, "r", encoding="utf-8") as fh:
            return PersistenceDiagram.from_json_dict(json.load(fh))
    diagram = subset_diagram(subset, cfg)
    tmp = path + f".tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(diagram.to_json_dict(), fh, sort_keys=True)
    os.replace(tmp, path)
    return diagram


def run(stack, cfg: PipelineConfig | None = None) -> RunResult:
    """Full computation over consecutive subsets of the stack.

    A subset_size of at least n_points collapses to a single subset holding
    the whole stack, whose standard deviations are marked degenerate.
    """
    cfg = cfg or PipelineConfig()
    stack = as_layerstack(stack)
    size = min(cfg.subset_size, stack.n_points)
    subsets = partition_subsets(stack, size)
    diagrams = Parallel(n_jobs=cfg.n_jobs)(
        delayed(_cached_subset_diagram)(s, cfg) for s in subsets
    )
    images: dict[int, list] = {}
    births: dict[int, dict[float, list[DescriptorSeries]]] = {}
    births_stats: dict[int, dict[float, DescriptorSeries]] = {}
    zbar: dict[int, dict[float, list[DescriptorSeries]]] = {}
    zbar_stats: dict[int, dict[float, DescriptorSeries]] = {}
    betti: dict[int, list[DescriptorSeries]] = {}
    betti_stats: dict[int, DescriptorSeries] = {}
    for p in cfg.homology_dims:
        imgs = [effective_image(to_effective(d), p) for d in diagrams]
        images[p] = imgs
        betti[p] = [betti_curve(img) for img in imgs]
        betti_stats[p] = subset_stats(betti[p])
        births[p], zbar[p] = {}, {}
        births_stats[p], zbar_stats[p] = {}, {}
        for alpha in cfg.alphas:
            dc = cfg.descriptor_config(p, alpha)
            births[p][alpha] = [births_relative_frequency(i, dc) for i in imgs]
            births_stats[p][alpha] = subset_stats(births[p][alpha])
            zbar[p][alpha] = [weighted_interlayer_series(i, dc) for i in imgs]
            zbar_stats[p][alpha] = subset_stats(zbar[p][alpha])
    return RunResult(
        config=cfg,
        n_subsets=len(subsets),
        subset_size_used=size,
        diagrams=list(diagrams),
        images=images,
        births=births,
        births_stats=births_stats,
        zbar=zbar,
        zbar_stats=zbar_stats,
        betti=betti,
        betti_stats=betti_stats,
    )


def scan_k(stack, k_values, cfg: PipelineConfig | None = None) -> list[dict]:
    """Total interval count per dimension for each neighbor count k."""
    cfg = cfg or PipelineConfig()
    stack = as_layerstack(stack)
    rows = []
    for k in sorted(set(int(k) for k in k_values)):
        cfg_k = replace(cfg, k_nn=k)
        size = min(cfg_k.subset_size, stack.n_points)
        subsets = partition_subsets(stack, size)
        diagrams = Parallel(n_jobs=cfg.n_jobs)(
            delayed(_cached_subset_diagram)(s, cfg_k) for s in subsets
        )
        counts = {
            p: int(sum(d.total(p) for d in diagrams))
            for p in cfg.homology_dims
        }
        rows.append({"k": k, "counts": counts})
    return rows


class ZigzagPersistence(BaseEstimator, TransformerMixin):
    """Transformer turning a layer stack into per-subset descriptor vectors.

    Input is a LayerStack or an (n_layers, n_points, dim) array; the output
    row for each subset concatenates, per homology dimension, the hole-count
    curve followed by the birth-frequency and weighted-persistence series
    for every weight exponent.
    """

    def __init__(
        self,
        k_nn: int = 4,
        m: int = 4,
        subset_size: int = 500,
        alphas: tuple = DEFAULT_ALPHAS,
        homology_dims: tuple = (1,),
        keep_short_edges: bool = False,
        normalization: str = "global",
        inclusive_death: bool = True,
        n_jobs: int = 1,
        cache_dir: str | None = None,
    ):
        self.k_nn = k_nn
        self.m = m
        self.subset_size = subset_size
        self.alphas = alphas
        self.homology_dims = homology_dims
        self.keep_short_edges = keep_short_edges
        self.normalization = normalization
        self.inclusive_death = inclusive_death
        self.n_jobs = n_jobs
        self.cache_dir = cache_dir

    def _config(self) -> PipelineConfig:
        return PipelineConfig(
            k_nn=self.k_nn,
            m=self.m,
            subset_size=self.subset_size,
            alphas=tuple(self.alphas),
            homology_dims=tuple(self.homology_dims),
            keep_short_edges=self.keep_short_edges,
            normalization=self.normalization,
            inclusive_death=self.inclusive_death,
            n_jobs=self.n_jobs,
            cache_dir=self.cache_dir,
        )

    def fit(self, X, y=None):
        self._config()
        stack = as_layerstack(X)
        self.n_layers_ = stack.n_layers
        return self

    def transform(self, X) -> np.ndarray:
        cfg = self._config()
        result = run(X, cfg)
        rows = []
        for s in range(result.n_subsets):
            parts = []
            for p in cfg.homology_dims:
                parts.append(result.betti[p][s].values)
                for alpha in cfg.alphas:
                    parts.append(result.births[p][alpha][s].values)
                    parts.append(result.zbar[p][alpha][s].values)
            rows.append(np.concatenate(parts))
        return np.vstack(rows)
