"""Intra/extra-person difference pairs: the two-class training set.

Recognition is reduced to a two-class problem on absolute feature differences:
pairs of images of the same identity are positive samples, pairs of different
identities negative.  Each sample is the component-wise ``|a - b|`` of two
feature vectors, so every component is non-negative.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CapacityError, ParameterError
from .gabor import FeatureLayout

__all__ = [
    "GallerySample",
    "DiffSample",
    "TrainingSet",
    "build_pairs",
    "component",
    "save_training_set",
    "load_training_set",
]


@dataclass(frozen=True)
class GallerySample:
    """One labeled gallery image with its extracted feature vector."""

    identity: str
    image_ref: str
    features: np.ndarray

    def __post_init__(self):
        if not self.identity:
            raise ParameterError("identity must be non-empty")


@dataclass(frozen=True)
class DiffSample:
    """One labeled difference vector; label +1 for intra, -1 for extra."""

    values: np.ndarray
    label: int
    source_pair: tuple[str, str]


@dataclass
class TrainingSet:
    """Difference samples as a dense matrix, intra rows first.

    ``values[i]`` is sample ``i``; ``labels[i]`` is +1 for the first
    ``num_intra`` rows and -1 for the remaining ``num_extra``.
    """

    values: np.ndarray
    labels: np.ndarray
    num_intra: int
    num_extra: int
    source_pairs: list[tuple[str, str]] | None = None
    layout: FeatureLayout | None = None
    seed: int | None = field(default=None)

    def __post_init__(self):
        if self.values.ndim != 2:
            raise ParameterError("values must be a 2D (samples x features) array")
        if len(self.labels) != len(self.values):
            raise ParameterError("labels and values disagree on sample count")
        if self.num_intra + self.num_extra != len(self.values):
            raise ParameterError("counts do not add up to the sample count")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def sample(self, i: int) -> DiffSample:
        pair = self.source_pairs[i] if self.source_pairs else ("", "")
        return DiffSample(self.values[i], int(self.labels[i]), pair)


def build_pairs(
    gallery: list[GallerySample], num_intra: int, num_extra: int, seed: int
) -> TrainingSet:
    """Sample difference pairs without replacement from a labeled gallery.

    Intra pairs join two images of one identity, extra pairs two images of
    different identities; both are drawn uniformly by a generator seeded with
    ``seed``.  Raises :class:`CapacityError` naming the limiting class when a
    requested count exceeds the number of distinct pairs available.
    """
    if not gallery:
        raise ParameterError("gallery is empty")
    if num_intra < 1 or num_extra < 1:
        raise ParameterError("pair counts must be >= 1")
    dims = {s.features.shape for s in gallery}
    if len(dims) != 1:
        raise ParameterError(f"gallery feature vectors disagree on shape: {dims}")

    identities = [s.identity for s in gallery]
    n = len(gallery)
    intra_pairs: list[tuple[int, int]] = []
    extra_pairs: list[tuple[int, int]] = []
    for i in range(n):
        for j in range(i + 1, n):
            (intra_pairs if identities[i] == identities[j] else extra_pairs).append(
                (i, j)
            )
    if num_intra > len(intra_pairs):
        raise CapacityError(
            f"intra: requested {num_intra} pairs but only {len(intra_pairs)} distinct"
            " same-identity pairs exist"
        )
    if num_extra > len(extra_pairs):
        raise CapacityError(
            f"extra: requested {num_extra} pairs but only {len(extra_pairs)} distinct"
            " cross-identity pairs exist"
        )

    rng = np.random.default_rng(seed)
    chosen_intra = [intra_pairs[k] for k in rng.choice(len(intra_pairs), num_intra, replace=False)]
    chosen_extra = [extra_pairs[k] for k in rng.choice(len(extra_pairs), num_extra, replace=False)]

    feats = [s.features for s in gallery]
    rows = [np.abs(feats[p] - feats[q]) for p, q in chosen_intra]
    rows += [np.abs(feats[p] - feats[q]) for p, q in chosen_extra]
    labels = np.concatenate(
        [np.ones(num_intra, dtype=np.int8), -np.ones(num_extra, dtype=np.int8)]
    )
    pairs = [
        (gallery[p].image_ref, gallery[q].image_ref)
        for p, q in chosen_intra + chosen_extra
    ]
    return TrainingSet(
        values=np.asarray(rows, dtype=np.float64),
        labels=labels,
        num_intra=num_intra,
        num_extra=num_extra,
        source_pairs=pairs,
        seed=seed,
    )


def component(sample: DiffSample, j: int) -> float:
    """Component ``j`` of a difference sample."""
    if not 0 <= j < len(sample.values):
        raise ParameterError(f"component {j} out of range [0, {len(sample.values)})")
    return float(sample.values[j])


_PAIRS_MAGIC = "gaborboost-pairs 1"


def save_training_set(tset: TrainingSet, path: str | Path) -> None:
    """Persist as a text header plus raw little-endian float64 sample rows."""
    header = [
        _PAIRS_MAGIC,
        f"dim\t{tset.dim}",
        f"num_intra\t{tset.num_intra}",
        f"num_extra\t{tset.num_extra}",
        f"seed\t{tset.seed if tset.seed is not None else '-'}",
        f"layout\t{tset.layout.descriptor() if tset.layout else '-'}",
        "data",
        "",
    ]
    payload = np.ascontiguousarray(tset.values, dtype="<f8").tobytes()
    Path(path).write_bytes("\n".join(header).encode("ascii") + payload)


def load_training_set(path: str | Path) -> TrainingSet:
    blob = Path(path).read_bytes()
    head, sep, _ = blob.partition(b"data\n")
    if not sep:
        raise ParameterError(f"{path}: not a pairs file (no data marker)")
    lines = head.decode("ascii").splitlines()
    if not lines or lines[0] != _PAIRS_MAGIC:
        raise ParameterError(f"{path}: bad magic line")
    fields = dict(line.split("\t", 1) for line in lines[1:] if line)
    dim = int(fields["dim"])
    num_intra = int(fields["num_intra"])
    num_extra = int(fields["num_extra"])
    seed = None if fields["seed"] == "-" else int(fields["seed"])
    layout = (
        None if fields["layout"] == "-" else FeatureLayout.from_descriptor(fields["layout"])
    )
    n = num_intra + num_extra
    payload = blob[len(head) + len(b"data\n") :]
    expected = n * dim * struct.calcsize("<d")
    if len(payload) != expected:
        raise ParameterError(
            f"{path}: payload holds {len(payload)} bytes, expected {expected}"
        )
    values = np.frombuffer(payload, dtype="<f8").reshape(n, dim).copy()
    labels = np.concatenate(
        [np.ones(num_intra, dtype=np.int8), -np.ones(num_extra, dtype=np.int8)]
    )
    return TrainingSet(
        values=values,
        labels=labels,
        num_intra=num_intra,
        num_extra=num_extra,
        layout=layout,
        seed=seed,
    )
