"""Writer for the layer-stack directory container.

A stack directory holds ``manifest.json`` plus one headerless binary file per
layer with row-major little-endian float32 coordinates. This is the on-disk
interface consumed by the companion analysis CLI; this package only writes
it, and anything written here passes that CLI's ``validate`` subcommand.
"""

from __future__ import annotations

import json
import os

import numpy as np

_FORMAT = "ZZLS"
_VERSION = 1


def write_stack(layers, path: str | os.PathLike, meta: dict | None = None) -> str:
    """Write per-layer point clouds to directory ``path``.

    Parameters
    ----------
    layers : sequence of (n_points, dim) array-likes
        One cloud per layer, at least two layers. Shapes must agree, every
        value must be finite, and coordinates are cast to float32 on write.
    path : str or PathLike
        Output directory, created if missing; existing layer files are
        overwritten.
    meta : dict, optional
        JSON-serializable annotations stored under the manifest ``meta`` key.

    Returns
    -------
    str
        The output directory path.
    """
    clouds = [np.asarray(layer, dtype=np.float32) for layer in layers]
    if len(clouds) < 2:
        raise ValueError(f"a layer stack needs at least 2 layers, got {len(clouds)}")
    shape = clouds[0].shape
    for i, cloud in enumerate(clouds):
        if cloud.ndim != 2 or cloud.shape[0] < 1 or cloud.shape[1] < 1:
            raise ValueError(
                f"layer {i} must be a non-empty 2-D cloud, got shape {cloud.shape}"
            )
        if cloud.shape != shape:
            raise ValueError(f"layer {i} has shape {cloud.shape}, expected {shape}")
        if not np.all(np.isfinite(cloud)):
            raise ValueError(f"layer {i} holds non-finite values")
    path = os.fspath(path)
    os.makedirs(path, exist_ok=True)
    names = [f"layer_{i:03d}.f32" for i in range(len(clouds))]
    for name, cloud in zip(names, clouds):
        with open(os.path.join(path, name), "wb") as fh:
            fh.write(np.ascontiguousarray(cloud, dtype="<f4").tobytes())
    manifest = {
        "format": _FORMAT,
        "version": _VERSION,
        "n_layers": len(clouds),
        "n_points": int(shape[0]),
        "dim": int(shape[1]),
        "dtype": "f32le",
        "layers": names,
    }
    if meta:
        manifest["meta"] = meta
    with open(os.path.join(path, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
