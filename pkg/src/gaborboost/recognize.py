"""Nearest-neighbor identification over selected features.

Gallery and probe images are represented by the feature components a trained
model selected, in round order.  A probe is assigned the identity of the
gallery entry with the smallest normalized-correlation distance (one minus
cosine similarity), optionally truncated to the first k selected features so
accuracy can be reported as a function of ensemble size.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

__all__ = [
    "GalleryIndex",
    "RecognitionReport",
    "ncc_distance",
    "nearest_neighbor",
    "evaluate",
]


@dataclass
class GalleryIndex:
    """Identity-labeled selected-feature vectors, in gallery order."""

    identities: list[str]
    vectors: np.ndarray
    selection: list[int]

    def __post_init__(self):
        if len(self.identities) < 1:
            raise ParameterError("gallery must contain at least one entry")
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.identities):
            raise ParameterError(
                f"vectors must be ({len(self.identities)} x k), got {self.vectors.shape}"
            )
        if self.vectors.shape[1] != len(self.selection):
            raise ParameterError("vector width disagrees with the selection length")


@dataclass
class RecognitionReport:
    """Accuracy by feature count, plus the per-probe decisions behind it."""

    accuracies: list[tuple[int, float]]
    decisions: dict[int, list[tuple[str, str, float]]] = field(default_factory=dict)
    """Per feature count: (predicted, actual, nearest distance) per probe."""


def ncc_distance(a: np.ndarray, b: np.ndarray) -> float:
    """One minus the cosine similarity of two vectors.

    Degenerate inputs: two zero vectors are at distance 0, a zero vector and a
    nonzero one at distance 1.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or a.shape != b.shape:
        raise ParameterError(f"vectors must be equal-length 1D, got {a.shape}, {b.shape}")
    if len(a) < 1:
        raise ParameterError("vectors must be non-empty")
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0 if norm_a == norm_b else 1.0
    cosine = float(np.dot(a, b)) / (norm_a * norm_b)
    # rounding can push |cosine| a hair past 1; keep the distance in [0, 2]
    return 1.0 - min(max(cosine, -1.0), 1.0)


def nearest_neighbor(index: GalleryIndex, probe: np.ndarray, k_features: int) -> str:
    """Identity of the closest gallery entry on the first ``k_features``
    selected components; ties go to the earliest gallery entry."""
    identity, _ = _nearest(index, probe, k_features)
    return identity


def _nearest(index: GalleryIndex, probe: np.ndarray, k: int) -> tuple[str, float]:
    probe = np.asarray(probe, dtype=np.float64)
    total = len(index.selection)
    if not 1 <= k <= total:
        raise ParameterError(f"k_features must be in [1, {total}], got {k}")
    if probe.ndim != 1 or len(probe) < k:
        raise ParameterError(
            f"probe must be a 1D vector of at least {k} components"
        )
    truncated = probe[:k]
    distances = [ncc_distance(truncated, row[:k]) for row in index.vectors]
    best = int(np.argmin(distances))
    return index.identities[best], float(distances[best])


def evaluate(
    index: GalleryIndex,
    probes: list[tuple[str, np.ndarray]],
    dims: list[int],
    workers: int = 1,
) -> RecognitionReport:
    """Rank-1 accuracy of the gallery index at each feature count in ``dims``.

    Accuracy is the percentage of probes whose nearest gallery entry carries
    their identity.  Probes are scored independently, so they may be spread
    over ``workers`` threads; results are order-stable either way.
    """
    if not dims:
        raise ParameterError("dims must be non-empty")
    if not probes:
        raise ParameterError("probes must be non-empty")
    if workers < 1:
        raise ParameterError(f"workers must be >= 1, got {workers}")
    for k in dims:
        if not 1 <= k <= len(index.selection):
            raise ParameterError(
                f"dimension {k} out of range [1, {len(index.selection)}]"
            )

    report = RecognitionReport(accuracies=[])
    for k in dims:
        def score(probe: tuple[str, np.ndarray]) -> tuple[str, str, float]:
            actual, values = probe
            predicted, distance = _nearest(index, values, k)
            return predicted, actual, distance

        if workers == 1:
            decisions = [score(p) for p in probes]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                decisions = list(pool.map(score, probes))
        correct = sum(1 for predicted, actual, _ in decisions if predicted == actual)
        report.accuracies.append((k, 100.0 * correct / len(probes)))
        report.decisions[k] = decisions
    return report
