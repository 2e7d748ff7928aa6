"""Structural similarity between methods of one class.

Two signals: overlap of the instance variables each method touches (Jaccard),
and how strongly one method depends on another through internal calls (the
share of a callee's inbound calls contributed by the caller, symmetrized by
taking the larger direction). Both live in [0, 1] with zero diagonals.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, WeightError
from .facts import ClassFacts


def ssm_pair(facts: ClassFacts, i: int, j: int) -> float:
    """Jaccard overlap of the instance variables used by methods i and j."""
    a = facts.method(i).accessed_vars
    b = facts.method(j).accessed_vars
    union = a | b
    if not union:
        return 0.0
    return len(a & b) / len(union)


def _inbound_call_totals(facts: ClassFacts) -> np.ndarray:
    """Total internal call sites targeting each method, over all callers."""
    totals = np.zeros(facts.n_methods, dtype=np.int64)
    for m in facts.methods:
        for callee, count in m.internal_calls.items():
            totals[callee] += count
    return totals


def cdm_pair(facts: ClassFacts, i: int, j: int, _totals: np.ndarray | None = None) -> float:
    """Call-coupling between methods i and j, the max over both directions.

    The i->j direction is the number of call sites in i targeting j divided
    by the total inbound calls of j (0 when j is never called).
    """
    if i == j:
        return 0.0
    totals = _inbound_call_totals(facts) if _totals is None else _totals

    def directed(src: int, dst: int) -> float:
        calls = facts.method(src).internal_calls.get(dst, 0)
        inbound = int(totals[dst])
        return calls / inbound if inbound > 0 else 0.0

    return max(directed(i, j), directed(j, i))


def ssm_matrix(facts: ClassFacts) -> np.ndarray:
    n = facts.n_methods
    out = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = ssm_pair(facts, i, j)
    return out


def cdm_matrix(facts: ClassFacts) -> np.ndarray:
    n = facts.n_methods
    totals = _inbound_call_totals(facts)
    out = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = cdm_pair(facts, i, j, totals)
    return out


def combine(matrices: list[np.ndarray], weights: list[float]) -> np.ndarray:
    """Weighted average of same-shaped similarity matrices.

    Weights must be non-negative with a positive sum; they are normalized so
    the result stays in [0, 1] whenever the inputs do.
    """
    if len(matrices) != len(weights):
        raise WeightError(f"{len(matrices)} matrices but {len(weights)} weights")
    if not matrices:
        raise WeightError("nothing to combine")
    if any(w < 0 for w in weights):
        raise WeightError(f"negative weight in {weights}")
    total = float(sum(weights))
    if total <= 0:
        raise WeightError("weights sum to zero")
    shape = matrices[0].shape
    for m in matrices:
        if m.shape != shape:
            raise DimensionMismatch(f"matrix shapes differ: {m.shape} vs {shape}")
    out = np.zeros(shape, dtype=np.float64)
    for m, w in zip(matrices, weights):
        out += (w / total) * np.asarray(m, dtype=np.float64)
    return out


def build_adjacency(similarity: np.ndarray, threshold: float = 0.0) -> np.ndarray:
    """Binary, symmetric, zero-diagonal adjacency: edge iff similarity > threshold."""
    s = np.asarray(similarity, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise DimensionMismatch(f"similarity must be square, got {s.shape}")
    s = np.maximum(s, s.T)
    adj = (s > threshold).astype(np.int64)
    np.fill_diagonal(adj, 0)
    return adj


def to_csv(matrix: np.ndarray, labels: list[str] | None = None) -> str:
    """Comma-separated text with row and column headers.

    Header row is ``name`` followed by the column labels; each data row leads
    with its label. Floats use shortest round-trip formatting.
    """
    m = np.asarray(matrix, dtype=np.float64)
    n_rows, n_cols = m.shape
    if labels is None:
        labels = [str(i) for i in range(n_cols)]
    if len(labels) != n_cols:
        raise DimensionMismatch(f"{len(labels)} labels for {n_cols} columns")
    lines = [",".join(["name", *labels])]
    for r in range(n_rows):
        row = ",".join(format(float(v), ".17g") for v in m[r])
        lines.append(f"{labels[r] if r < len(labels) else r},{row}")
    return "\n".join(lines) + "\n"
