"""Density-based clustering of methods over a similarity matrix.

Implements the OPTICS ordering and xi-steep cluster extraction with fully
deterministic tie-breaking: the walk starts at method id 0, ties on smallest
reachability go to the smallest id, and final cluster numbers follow the
smallest member id. The xi extraction follows the modern formulation
(ratio-based steepness, maximum-in-between filtering of steep-down areas,
predecessor correction), so results agree with contemporary reference
implementations on the same ordering.

Noise points are reassigned to the cluster with the highest mean similarity,
which keeps partitions total as downstream metrics expect.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Any

import numpy as np

from .errors import DimensionMismatch, NoClusters, SchemaError, TooFewMethods


@dataclass(frozen=True)
class ClusterConfig:
    min_methods: int = 3
    xi: float = 0.05

    def __post_init__(self) -> None:
        if self.min_methods < 2:
            raise ValueError(f"min_methods must be >= 2, got {self.min_methods}")
        if not 0.0 < self.xi < 1.0:
            raise ValueError(f"xi must be in (0, 1), got {self.xi}")


@dataclass
class Partition:
    """A total assignment of method ids to clusters 0..k-1."""

    k: int
    labels: list[int]
    noise_assigned: list[int] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def members(self, cluster: int) -> list[int]:
        return [i for i, lab in enumerate(self.labels) if lab == cluster]

    def validate(self) -> None:
        if self.k < 1:
            raise SchemaError(f"k must be >= 1, got {self.k}", "k")
        seen = set(self.labels)
        for i, lab in enumerate(self.labels):
            if not isinstance(lab, int) or isinstance(lab, bool):
                raise SchemaError("labels must be integers", f"labels[{i}]")
            if not 0 <= lab < self.k:
                raise SchemaError(f"label {lab} outside 0..{self.k - 1}", f"labels[{i}]")
        if seen != set(range(self.k)):
            raise SchemaError(f"labels must cover 0..{self.k - 1} exactly", "labels")
        n = len(self.labels)
        for j, mid in enumerate(self.noise_assigned):
            if not isinstance(mid, int) or isinstance(mid, bool) or not 0 <= mid < n:
                raise SchemaError(f"id {mid} out of range", f"noise_assigned[{j}]")


def save_partition(partition: Partition, fp: IO[str] | None = None) -> str:
    partition.validate()
    text = json.dumps(
        {
            "k": partition.k,
            "labels": partition.labels,
            "noise_assigned": partition.noise_assigned,
            "warnings": partition.warnings,
        },
        indent=2,
    )
    if fp is not None:
        fp.write(text + "\n")
    return text


def load_partition(source: str | bytes | IO[str]) -> Partition:
    if hasattr(source, "read"):
        source = source.read()  # type: ignore[union-attr]
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}", "$") from exc
    if not isinstance(data, dict):
        raise SchemaError("partition must be a JSON object", "$")
    for name, kind in (("k", int), ("labels", list), ("noise_assigned", list), ("warnings", list)):
        if name not in data:
            raise SchemaError(f"missing required field '{name}'", "$")
        if not isinstance(data[name], kind) or isinstance(data[name], bool):
            raise SchemaError(f"expected {kind.__name__}", name)
    part = Partition(
        k=data["k"],
        labels=list(data["labels"]),
        noise_assigned=list(data["noise_assigned"]),
        warnings=[str(w) for w in data["warnings"]],
    )
    part.validate()
    return part


def similarity_to_distance(similarity: np.ndarray) -> np.ndarray:
    """1 - similarity, clipped at zero, with an exactly zero diagonal."""
    s = np.asarray(similarity, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise DimensionMismatch(f"similarity must be square, got {s.shape}")
    d = np.maximum(1.0 - s, 0.0)
    np.fill_diagonal(d, 0.0)
    return d


def compute_ordering(
    distance: np.ndarray, min_samples: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Reachability ordering of all points.

    Returns (ordering, core_distances, reachability, predecessor). The walk
    starts from the smallest id and always continues at the unprocessed point
    with minimum reachability, smallest id on ties.
    """
    d = np.asarray(distance, dtype=np.float64)
    n = d.shape[0]
    if min_samples > n:
        raise TooFewMethods(f"{n} points but min_samples={min_samples}")
    decimals = np.finfo(np.float64).precision

    # Core distance: k-th smallest entry of the row, self included (diag 0).
    core = np.sort(d, axis=1)[:, min_samples - 1]
    core = np.around(core, decimals=decimals)

    reachability = np.full(n, np.inf)
    predecessor = np.full(n, -1, dtype=np.int64)
    processed = np.zeros(n, dtype=bool)
    ordering = np.zeros(n, dtype=np.int64)
    for position in range(n):
        unprocessed = np.where(~processed)[0]
        point = unprocessed[np.argmin(reachability[unprocessed])]
        processed[point] = True
        ordering[position] = point
        remaining = np.where(~processed)[0]
        if remaining.size == 0:
            continue
        rdists = np.maximum(d[point, remaining], core[point])
        rdists = np.around(rdists, decimals=decimals)
        improved = rdists < reachability[remaining]
        reachability[remaining[improved]] = rdists[improved]
        predecessor[remaining[improved]] = point
    return ordering, core, reachability, predecessor


def _extend_region(
    steep: np.ndarray, opposite: np.ndarray, start: int, min_samples: int
) -> int:
    """Grow a steep region from ``start``; at most min_samples flat points in a row."""
    n = len(steep)
    non_steep_run = 0
    index = start
    end = start
    while index < n:
        if steep[index]:
            non_steep_run = 0
            end = index
        elif not opposite[index]:
            non_steep_run += 1
            if non_steep_run > min_samples:
                break
        else:
            return end
        index += 1
    return end


def _update_filter_sdas(
    sdas: list[dict], mib: float, xi_complement: float, plot: np.ndarray
) -> list[dict]:
    """Drop steep-down areas invalidated by the maximum-in-between value."""
    if np.isinf(mib):
        return []
    kept = [sda for sda in sdas if mib <= plot[sda["start"]] * xi_complement]
    for sda in kept:
        sda["mib"] = max(sda["mib"], mib)
    return kept


def _correct_predecessor(
    plot: np.ndarray, predecessor_plot: np.ndarray, ordering: np.ndarray, s: int, e: int
) -> tuple[int | None, int | None]:
    """Shrink the cluster end until its predecessor lies inside the cluster."""
    while s < e:
        if plot[s] > plot[e]:
            return s, e
        p_e = predecessor_plot[e]
        for i in range(s, e):
            if p_e == ordering[i]:
                return s, e
        e -= 1
    return None, None


def _xi_clusters(
    reachability: np.ndarray,
    predecessor: np.ndarray,
    ordering: np.ndarray,
    xi: float,
    min_samples: int,
    min_cluster_size: int,
) -> list[tuple[int, int]]:
    """Extract [start, end] position ranges (inclusive) of xi-steep clusters."""
    plot = np.hstack((reachability[ordering], np.inf))
    predecessor_plot = predecessor[ordering]
    xi_complement = 1.0 - xi
    sdas: list[dict] = []
    clusters: list[tuple[int, int]] = []
    index = 0
    mib = 0.0

    # zero reachability is legal here (identical methods), so silence x/0 too
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = plot[:-1] / plot[1:]
        steep_upward = ratio <= xi_complement
        steep_downward = ratio >= 1.0 / xi_complement
        downward = ratio > 1.0
        upward = ratio < 1.0

    for steep_index in np.flatnonzero(steep_upward | steep_downward):
        steep_index = int(steep_index)
        if steep_index < index:
            continue
        mib = max(mib, float(np.max(plot[index : steep_index + 1])))

        if steep_downward[steep_index]:
            sdas = _update_filter_sdas(sdas, mib, xi_complement, plot)
            d_start = steep_index
            d_end = _extend_region(steep_downward, upward, d_start, min_samples)
            sdas.append({"start": d_start, "end": d_end, "mib": 0.0})
            index = d_end + 1
            mib = float(plot[index])
        else:
            sdas = _update_filter_sdas(sdas, mib, xi_complement, plot)
            u_start = steep_index
            u_end = _extend_region(steep_upward, downward, u_start, min_samples)
            index = u_end + 1
            mib = float(plot[index])

            u_clusters: list[tuple[int, int]] = []
            for area in sdas:
                c_start = area["start"]
                c_end = u_end

                # Significance check: the end must rise clear of the area's
                # maximum-in-between.
                if plot[c_end + 1] * xi_complement < area["mib"]:
                    continue

                # Trim the higher side so both ends sit at comparable levels.
                d_max = plot[area["start"]]
                if d_max * xi_complement >= plot[c_end + 1]:
                    while plot[c_start + 1] > plot[c_end + 1] and c_start < area["end"]:
                        c_start += 1
                elif plot[c_end + 1] * xi_complement >= d_max:
                    while plot[c_end - 1] > d_max and c_end > u_start:
                        c_end -= 1

                c_start, c_end = _correct_predecessor(
                    plot, predecessor_plot, ordering, c_start, c_end
                )
                if c_start is None:
                    continue
                if c_end - c_start + 1 < min_cluster_size:
                    continue
                if c_start > area["end"]:
                    continue
                if c_end < u_start:
                    continue
                u_clusters.append((c_start, c_end))

            # Smaller (nested) clusters first so label assignment prefers them.
            u_clusters.reverse()
            clusters.extend(u_clusters)
    return clusters


def _labels_from_ranges(
    ordering: np.ndarray, clusters: list[tuple[int, int]]
) -> np.ndarray:
    """Assign labels by position ranges, first-come for non-overlapping ones."""
    labels = np.full(len(ordering), -1, dtype=np.int64)
    label = 0
    for start, end in clusters:
        if not np.any(labels[start : end + 1] != -1):
            labels[start : end + 1] = label
            label += 1
    labels[ordering] = labels.copy()
    return labels


def optics_labels(distance: np.ndarray, min_samples: int, xi: float = 0.05) -> np.ndarray:
    """Raw cluster labels over a distance matrix; -1 marks noise."""
    ordering, _, reachability, predecessor = compute_ordering(distance, min_samples)
    ranges = _xi_clusters(reachability, predecessor, ordering, xi, min_samples, min_samples)
    return _labels_from_ranges(ordering, ranges)


def assign_noise(labels: np.ndarray, similarity: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Give each noise point the cluster with highest mean similarity.

    Means are taken against the original (pre-assignment) members so the
    ascending-id processing order cannot change the outcome; ties go to the
    smaller cluster label. Raises :class:`NoClusters` if there is no cluster.
    """
    labels = np.asarray(labels, dtype=np.int64).copy()
    cluster_ids = sorted(int(c) for c in set(labels.tolist()) if c != -1)
    if not cluster_ids:
        raise NoClusters("every method was marked as noise")
    members = {c: np.where(labels == c)[0] for c in cluster_ids}
    moved = [int(i) for i in np.where(labels == -1)[0]]
    for i in moved:
        means = [float(np.mean(similarity[i, members[c]])) for c in cluster_ids]
        labels[i] = cluster_ids[int(np.argmax(means))]
    return labels, moved


def _canonical_labels(labels: np.ndarray) -> list[int]:
    """Renumber so clusters appear in order of their smallest member id."""
    mapping: dict[int, int] = {}
    out = []
    for lab in labels.tolist():
        if lab not in mapping:
            mapping[lab] = len(mapping)
        out.append(mapping[lab])
    return out


def cluster_methods(similarity: np.ndarray, config: ClusterConfig = ClusterConfig()) -> Partition:
    """Full clustering pipeline over a method similarity matrix.

    Raises :class:`TooFewMethods` if there are fewer than ``min_methods``
    rows and :class:`NoClusters` if extraction marks everything as noise.
    """
    s = np.asarray(similarity, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise DimensionMismatch(f"similarity must be square, got {s.shape}")
    n = s.shape[0]
    if n < config.min_methods:
        raise TooFewMethods(f"{n} methods, need at least {config.min_methods}")
    distance = similarity_to_distance(s)
    raw = optics_labels(distance, config.min_methods, config.xi)
    labels, moved = assign_noise(raw, s)
    final = _canonical_labels(labels)
    return Partition(k=max(final) + 1, labels=final, noise_assigned=moved)
