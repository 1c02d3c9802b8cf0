"""Shared test construction utilities."""

import numpy as np

from gaborboost import TrainingSet


def make_tset(values, labels, layout=None, seed=None) -> TrainingSet:
    """TrainingSet from arbitrary (values, labels); reorders intra-first."""
    values = np.asarray(values, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int8)
    order = np.concatenate([np.flatnonzero(labels == 1), np.flatnonzero(labels == -1)])
    values = values[order]
    labels = labels[order]
    return TrainingSet(
        values=values,
        labels=labels,
        num_intra=int(np.count_nonzero(labels == 1)),
        num_extra=int(np.count_nonzero(labels == -1)),
        layout=layout,
        seed=seed,
    )


def separable_tset(n_samples=100, n_features=2, seed=0) -> TrainingSet:
    """A set a single mean-midpoint stump solves: intra low, extra high."""
    rng = np.random.default_rng(seed)
    half = n_samples // 2
    intra = rng.uniform(0.0, 0.3, size=(half, n_features))
    extra = rng.uniform(0.7, 1.0, size=(n_samples - half, n_features))
    values = np.vstack([intra, extra])
    labels = np.array([1] * half + [-1] * (n_samples - half))
    return make_tset(values, labels)


def training_error(model, tset) -> float:
    from gaborboost import predict

    wrong = 0
    for i in range(len(tset)):
        _, decision = predict(model, tset.values[i])
        wrong += decision != tset.labels[i]
    return wrong / len(tset)
