"""Input coercion and validation shared by estimators and the CLI."""

from __future__ import annotations

import numpy as np

from .data import Dataset


def as_dataset(X) -> Dataset:
    """Accept a Dataset or any iterable of integer description sets."""
    if isinstance(X, Dataset):
        return X
    from .estimators import dataset_from_sets

    try:
        return dataset_from_sets(X)
    except (TypeError, ValueError) as exc:
        raise ValueError(
            "X must be a Dataset or an iterable of integer description sets"
        ) from exc


def check_points(X) -> np.ndarray:
    """Validate a finite 2-D float array of embedding points."""
    pts = getattr(X, "points", X)
    pts = np.asarray(pts, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError(f"expected a non-empty 2-D array, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points contain NaN or infinity")
    return pts
