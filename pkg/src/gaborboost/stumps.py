"""Threshold weak classifiers on single feature components.

A stump compares one component against a fixed threshold: the raw output is
-1 below the threshold and +1 at or above it, multiplied by a polarity bit.
Thresholds are the midpoint of the two class means of the component and stay
fixed across boosting rounds.  The polarity bit exists because small
differences indicate the positive (same-identity) class, so the raw rule
alone would misclassify the easy case; training picks whichever sign has the
lower weighted error, which also caps the best error at 0.5.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, SelectionExhaustedError
from .pairs import TrainingSet

__all__ = [
    "WeakClassifier",
    "threshold_from_means",
    "classify",
    "weighted_error",
    "best_weak",
    "StumpTable",
    "format_weak_line",
    "parse_weak_line",
]


@dataclass(frozen=True)
class WeakClassifier:
    feature_index: int
    threshold: float
    polarity: int

    def __post_init__(self):
        if self.polarity not in (-1, 1):
            raise ParameterError(f"polarity must be -1 or +1, got {self.polarity}")
        if self.feature_index < 0:
            raise ParameterError(f"feature index must be >= 0, got {self.feature_index}")


def check_weights(w: np.ndarray, n: int) -> np.ndarray:
    """Validate a weight vector: length ``n``, non-negative, sums to 1."""
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (n,):
        raise ParameterError(f"weight vector has shape {w.shape}, expected ({n},)")
    if np.any(w < 0):
        raise ParameterError("weights must be non-negative")
    if abs(float(w.sum()) - 1.0) > 1e-9:
        raise ParameterError(f"weights must sum to 1, got {w.sum()!r}")
    return w


def threshold_from_means(tset: TrainingSet, j: int) -> float:
    """Midpoint of the intra-class and extra-class means of component ``j``."""
    if not 0 <= j < tset.dim:
        raise ParameterError(f"feature index {j} out of range [0, {tset.dim})")
    if tset.num_intra < 1 or tset.num_extra < 1:
        raise ParameterError("both classes must be non-empty")
    column = tset.values[:, j]
    intra = column[tset.labels == 1]
    extra = column[tset.labels == -1]
    return 0.5 * (float(intra.mean()) + float(extra.mean()))


def classify(h: WeakClassifier, sample_values: np.ndarray) -> int:
    """Stump decision on one sample: +1 or -1."""
    values = np.asarray(sample_values)
    if not 0 <= h.feature_index < len(values):
        raise ParameterError(
            f"feature index {h.feature_index} out of range [0, {len(values)})"
        )
    raw = -1 if values[h.feature_index] < h.threshold else 1
    return h.polarity * raw


def weighted_error(h: WeakClassifier, tset: TrainingSet, w: np.ndarray) -> float:
    """Total weight of the samples the stump misclassifies."""
    w = check_weights(w, len(tset))
    if not 0 <= h.feature_index < tset.dim:
        raise ParameterError(
            f"feature index {h.feature_index} out of range [0, {tset.dim})"
        )
    column = tset.values[:, h.feature_index]
    raw = np.where(column >= h.threshold, 1, -1)
    mistakes = (h.polarity * raw) != tset.labels
    return float(w[mistakes].sum())


class StumpTable:
    """Precomputed stump machinery for one training set.

    Holds the per-feature thresholds, the raw +1-polarity predictions and the
    corresponding mistake indicators, so a boosting round reduces to one
    matrix-vector product.  Predictions never change across rounds because
    thresholds are fixed.
    """

    def __init__(self, tset: TrainingSet):
        if tset.num_intra < 1 or tset.num_extra < 1:
            raise ParameterError("training set needs at least one sample per class")
        self.tset = tset
        X, y = tset.values, tset.labels
        intra_mean = X[y == 1].mean(axis=0)
        extra_mean = X[y == -1].mean(axis=0)
        self.thresholds = 0.5 * (intra_mean + extra_mean)
        # raw[i, j]: +1-polarity prediction of stump j on sample i
        self.raw = np.where(X >= self.thresholds, 1, -1).astype(np.int8)
        self.mistakes = (self.raw != y[:, None]).astype(np.float64)

    @classmethod
    def for_set(cls, tset: TrainingSet) -> "StumpTable":
        """Memoized table; the sample matrix must not be mutated afterwards."""
        table = getattr(tset, "_stump_table", None)
        if table is None:
            table = cls(tset)
            tset._stump_table = table
        return table

    def __len__(self) -> int:
        return len(self.tset)

    @property
    def num_features(self) -> int:
        return self.tset.dim

    def error_plus(self, w: np.ndarray) -> np.ndarray:
        """Weighted error of every stump at polarity +1."""
        return w @ self.mistakes

    def split_errors(self, error_plus: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Per-feature (best error, best polarity); ties go to polarity +1."""
        error_minus = 1.0 - error_plus
        polarity = np.where(error_plus <= error_minus, 1, -1).astype(np.int8)
        return np.minimum(error_plus, error_minus), polarity

    def stump(self, j: int, polarity: int) -> WeakClassifier:
        return WeakClassifier(int(j), float(self.thresholds[j]), int(polarity))

    def responses(self, j: int, polarity: int) -> np.ndarray:
        """The stump's +/-1 outputs on every training sample."""
        return (self.raw[:, j] * polarity).astype(np.int8)

    def best(
        self, w: np.ndarray, exclude: set[int] | frozenset[int] = frozenset()
    ) -> tuple[WeakClassifier, float]:
        w = check_weights(w, len(self))
        best_err, polarity = self.split_errors(self.error_plus(w))
        masked = best_err.copy()
        if exclude:
            masked[list(exclude)] = np.inf
        j = int(np.argmin(masked))
        if not np.isfinite(masked[j]):
            raise SelectionExhaustedError("every feature index is excluded")
        return self.stump(j, polarity[j]), float(best_err[j])


def best_weak(
    tset: TrainingSet, w: np.ndarray, exclude: set[int] | frozenset[int] = frozenset()
) -> tuple[WeakClassifier, float]:
    """Exhaustive search for the lowest-weighted-error stump.

    Scans every non-excluded feature with its mean-midpoint threshold and both
    polarities; ties break toward the smaller feature index, then polarity +1.
    The returned error never exceeds 0.5.
    """
    return StumpTable.for_set(tset).best(w, exclude)


def format_weak_line(h: WeakClassifier, coefficient: float) -> str:
    return f"{h.feature_index}\t{h.threshold:.17g}\t{h.polarity}\t{coefficient:.17g}"


def parse_weak_line(line: str) -> tuple[WeakClassifier, float]:
    parts = line.rstrip("\n").split("\t")
    if len(parts) != 4:
        raise ParameterError(f"bad weak-classifier line: {line!r}")
    j, lam, pol, c = parts
    return WeakClassifier(int(j), float(lam), int(pol)), float(c)
