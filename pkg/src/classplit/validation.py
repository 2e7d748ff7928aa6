"""Input validation helpers shared by the estimator facades and the CLI."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch
from .facts import ClassFacts


def check_facts(obj: object) -> ClassFacts:
    """Ensure ``obj`` is a consistent :class:`ClassFacts` and return it."""
    if not isinstance(obj, ClassFacts):
        raise TypeError(
            f"expected ClassFacts, got {type(obj).__name__};"
            " parse a source file or load a facts JSON first"
        )
    obj.validate()
    return obj


def check_square_matrix(x: object, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"{name} must be square 2-d, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_similarity_matrix(x: object, tol: float = 1e-9) -> np.ndarray:
    """Square, finite, symmetric within ``tol``. Returns a float copy."""
    arr = check_square_matrix(x, "similarity")
    if not np.allclose(arr, arr.T, atol=tol, rtol=0.0):
        raise ValueError("similarity matrix must be symmetric")
    return arr


def check_labels(labels: object, n_methods: int) -> np.ndarray:
    arr = np.asarray(labels, dtype=int)
    if arr.ndim != 1 or arr.shape[0] != n_methods:
        raise DimensionMismatch(
            f"labels must be a flat array of length {n_methods}, got shape {arr.shape}"
        )
    return arr
