"""Input validation helpers shared by the public API."""

from __future__ import annotations

import numpy as np

from .errors import StackValidationError


def check_point_cloud(arr, *, name: str = "cloud") -> np.ndarray:
    """Coerce ``arr`` to a read-only float32 (n_points, dim) array.

    Raises :class:`StackValidationError` on wrong rank, empty axes, or
    non-finite entries. The input is never mutated; a locked copy is
    returned when conversion or locking is needed.
    """
    a = np.asarray(arr)
    if a.ndim != 2:
        raise StackValidationError(f"{name}: expected a 2-D array, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise StackValidationError(f"{name}: empty axis in shape {a.shape}")
    a = np.ascontiguousarray(a, dtype=np.float32)
    if not np.isfinite(a).all():
        raise StackValidationError(f"{name}: non-finite coordinates")
    if a.flags.writeable:
        # never lock or alias caller-owned mutable memory
        if a is arr or a.base is not None:
            a = a.copy()
        a.flags.writeable = False
    return a


def check_index(value, n: int, *, name: str = "index") -> int:
    value = int(value)
    if not 0 <= value < n:
        raise ValueError(f"{name} must lie in [0, {n}), got {value}")
    return value


def check_positive(value, *, name: str) -> int:
    value = int(value)
    if value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value}")
    return value


def as_layerstack(obj):
    """Accept a LayerStack or an (n_layers, n_points, dim) array-like."""
    from .layerstack import LayerStack

    if isinstance(obj, LayerStack):
        return obj
    a = np.asarray(obj)
    if a.ndim != 3:
        raise StackValidationError(
            f"expected a LayerStack or 3-D array (n_layers, n_points, dim), got shape {a.shape}"
        )
    return LayerStack(tuple(a[i] for i in range(a.shape[0])))
