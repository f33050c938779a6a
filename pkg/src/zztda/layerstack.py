"""Layer-indexed point clouds and their on-disk container.

A layer stack is an ordered list of point clouds, one per model layer, with a
shared (n_points, dim) shape. On disk a stack is a directory holding
``manifest.json`` plus one headerless binary per layer with row-major
little-endian float32 coordinates. Reading back a written stack reproduces
the coordinates bit-exactly.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import StackFormatError, StackValidationError
from .validation import check_point_cloud

_FORMAT = "ZZLS"
_VERSION = 1


@dataclass(frozen=True, eq=False)
class LayerStack:
    """An immutable stack of per-layer point clouds.

    Parameters
    ----------
    layers : sequence of (n_points, dim) array-likes
        One cloud per layer; shapes must agree and every coordinate must be
        finite. Arrays are stored read-only as float32.
    meta : dict, optional
        Free-form JSON-serializable annotations carried through I/O.
    """

    layers: tuple[np.ndarray, ...]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        clouds = tuple(
            check_point_cloud(a, name=f"layer {i}") for i, a in enumerate(self.layers)
        )
        if len(clouds) < 2:
            raise StackValidationError("a layer stack needs at least 2 layers")
        shape = clouds[0].shape
        for i, c in enumerate(clouds):
            if c.shape != shape:
                raise StackValidationError(
                    f"layer {i} has shape {c.shape}, expected {shape}"
                )
        object.__setattr__(self, "layers", clouds)

    @property
    def n_layers(self) -> int:
        return len(self.layers)

    @property
    def n_points(self) -> int:
        return self.layers[0].shape[0]

    @property
    def dim(self) -> int:
        return self.layers[0].shape[1]

    def equals(self, other: "LayerStack") -> bool:
        """Bit-exact coordinate equality (meta is ignored)."""
        return self.n_layers == other.n_layers and all(
            np.array_equal(a, b) for a, b in zip(self.layers, other.layers)
        )


@dataclass(frozen=True)
class SubsetPartition:
    """Consecutive point-index blocks used to split a stack into subsets."""

    subset_size: int
    ranges: tuple[tuple[int, int], ...]

    @property
    def n_subsets(self) -> int:
        return len(self.ranges)


def make_partition(n_points: int, subset_size: int) -> SubsetPartition:
    """Split ``range(n_points)`` into floor(n_points / subset_size) blocks.

    Leftover trailing points are dropped. ``subset_size`` must lie in
    [1, n_points].
    """
    if subset_size < 1 or subset_size > n_points:
        raise ValueError(
            f"subset_size must lie in [1, {n_points}], got {subset_size}"
        )
    n_subsets = n_points // subset_size
    ranges = tuple(
        (i * subset_size, (i + 1) * subset_size) for i in range(n_subsets)
    )
    return SubsetPartition(subset_size=subset_size, ranges=ranges)


def partition_subsets(stack: LayerStack, subset_size: int) -> list[LayerStack]:
    """Split a stack into consecutive point subsets, all layers retained.

    Returns floor(n_points / subset_size) stacks of exactly ``subset_size``
    points each; trailing points that do not fill a block are dropped. The
    input stack is never mutated and the returned stacks share its memory.
    """
    part = make_partition(stack.n_points, subset_size)
    return [
        LayerStack(tuple(layer[s:e] for layer in stack.layers), meta=dict(stack.meta))
        for s, e in part.ranges
    ]


def _layer_filename(i: int) -> str:
    return f"layer_{i:03d}.f32"


def write_layerstack(stack: LayerStack, path: str | os.PathLike) -> None:
    """Write ``stack`` to directory ``path`` (created if missing)."""
    path = os.fspath(path)
    os.makedirs(path, exist_ok=True)
    names = [_layer_filename(i) for i in range(stack.n_layers)]
    for name, layer in zip(names, stack.layers):
        with open(os.path.join(path, name), "wb") as fh:
            fh.write(np.ascontiguousarray(layer, dtype="<f4").tobytes())
    manifest = {
        "format": _FORMAT,
        "version": _VERSION,
        "n_layers": stack.n_layers,
        "n_points": stack.n_points,
        "dim": stack.dim,
        "dtype": "f32le",
        "layers": names,
    }
    if stack.meta:
        manifest["meta"] = stack.meta
    with open(os.path.join(path, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _manifest_int(manifest: dict, key: str) -> int:
    value = manifest.get(key)
    if not isinstance(value, int) or value < 1:
        raise StackFormatError(f"manifest field {key!r} must be a positive integer")
    return value


def read_layerstack(path: str | os.PathLike) -> LayerStack:
    """Read a stack directory written by :func:`write_layerstack`.

    Raises :class:`StackFormatError` for a missing or malformed manifest,
    missing layer files, payload size mismatches, or non-finite values.
    """
    path = os.fspath(path)
    manifest_path = os.path.join(path, "manifest.json")
    try:
        with open(manifest_path, "r", encoding="utf-8") as fh:
            manifest = json.load(fh)
    except FileNotFoundError:
        raise StackFormatError(f"missing manifest: {manifest_path}") from None
    except json.JSONDecodeError as exc:
        raise StackFormatError(f"corrupt manifest: {manifest_path}: {exc}") from None
    if manifest.get("format") != _FORMAT:
        raise StackFormatError(f"unsupported container format: {manifest.get('format')!r}")
    if manifest.get("version") != _VERSION:
        raise StackFormatError(f"unsupported container version: {manifest.get('version')!r}")
    if manifest.get("dtype") != "f32le":
        raise StackFormatError(f"unsupported dtype: {manifest.get('dtype')!r}")
    n_layers = _manifest_int(manifest, "n_layers")
    n_points = _manifest_int(manifest, "n_points")
    dim = _manifest_int(manifest, "dim")
    names = manifest.get("layers")
    if not isinstance(names, list) or len(names) != n_layers:
        raise StackFormatError("manifest field 'layers' must list one file per layer")
    expected = n_points * dim * 4
    clouds = []
    for name in names:
        layer_path = os.path.join(path, str(name))
        try:
            with open(layer_path, "rb") as fh:
                raw = fh.read()
        except FileNotFoundError:
            raise StackFormatError(f"missing layer file: {layer_path}") from None
        if len(raw) != expected:
            raise StackFormatError(
                f"layer file {layer_path} holds {len(raw)} bytes, expected {expected}"
            )
        clouds.append(np.frombuffer(raw, dtype="<f4").reshape(n_points, dim))
    meta = manifest.get("meta", {})
    if not isinstance(meta, dict):
        raise StackFormatError("manifest field 'meta' must be an object")
    try:
        return LayerStack(tuple(clouds), meta=meta)
    except StackValidationError as exc:
        raise StackFormatError(str(exc)) from None
