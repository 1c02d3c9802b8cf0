"""Boosted stump selection: serial, parallel, and redundancy-filtered.

The serial trainer is classic discrete boosting: each round picks the stump
with the lowest weighted error, weights it by ``c = 0.5*ln((1-e)/e)``, and
re-weights samples multiplicatively toward the mistakes.

The parallel variant runs only the first ``serial_rounds`` rounds that way
while recording every sample's weight history, fits a Gamma distribution per
sample by matching moments, and replaces the remaining rounds' sequential
weight updates with independent draws from those fitted distributions.  Each
remaining round then depends only on (seed, round), so rounds can run on any
number of workers and still produce the identical model.

A mutual-information filter optionally rejects candidate stumps whose
responses are too predictable from an already-selected stump, trading a
slightly worse individual error for a less redundant ensemble.
"""

from __future__ import annotations

import contextlib
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import gammaincinv

try:
    from threadpoolctl import threadpool_limits
except ImportError:  # pragma: no cover - timing-only degradation
    threadpool_limits = None

from .errors import (
    DegenerateWeightsError,
    ParameterError,
    SelectionExhaustedError,
)
from .gabor import FeatureLayout
from .pairs import TrainingSet
from .stumps import (
    StumpTable,
    WeakClassifier,
    check_weights,
    classify,
    format_weak_line,
    parse_weak_line,
)


def _single_threaded_blas():
    if threadpool_limits is None:
        return contextlib.nullcontext()
    return threadpool_limits(limits=1, user_api="blas")

__all__ = [
    "BoostConfig",
    "EnsembleModel",
    "ResponseTable",
    "GammaParams",
    "PabStats",
    "adaboost_round",
    "fit_gamma",
    "sample_weights",
    "mutual_information_binary",
    "mi_filter_pick",
    "train_ab",
    "train_pab",
    "predict",
    "cost_estimate",
    "save_model",
    "load_model",
    "save_trajectory",
    "load_trajectory",
]

_DEGENERATE_EPS = 1e-18


@dataclass(frozen=True)
class BoostConfig:
    """Training schedule: ``serial_rounds`` of the ``total_rounds`` run
    sequentially; the rest may be distributed.  ``mi_threshold`` of ``inf``
    disables the redundancy filter.  ``epsilon_floor`` of ``None`` defaults to
    ``1/(2N)`` at training time."""

    total_rounds: int
    serial_rounds: int
    mi_threshold: float = 0.2
    epsilon_floor: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.total_rounds < 1:
            raise ParameterError(f"total_rounds must be >= 1, got {self.total_rounds}")
        if not 1 <= self.serial_rounds <= self.total_rounds:
            raise ParameterError(
                f"serial_rounds must be in [1, {self.total_rounds}],"
                f" got {self.serial_rounds}"
            )
        if math.isnan(self.mi_threshold) or self.mi_threshold < 0:
            raise ParameterError(f"mi_threshold must be >= 0, got {self.mi_threshold}")
        if self.epsilon_floor is not None and not 0 < self.epsilon_floor < 0.5:
            raise ParameterError(
                f"epsilon_floor must be in (0, 0.5), got {self.epsilon_floor}"
            )
        if self.seed < 0:
            raise ParameterError(f"seed must be >= 0, got {self.seed}")

    def floor_for(self, num_samples: int) -> float:
        return (
            self.epsilon_floor
            if self.epsilon_floor is not None
            else 1.0 / (2.0 * num_samples)
        )


@dataclass
class EnsembleModel:
    """Weighted combination of weak classifiers, in selection (round) order."""

    rounds: list[tuple[WeakClassifier, float]]
    config: BoostConfig
    layout: FeatureLayout | None = None

    def __post_init__(self):
        features = [h.feature_index for h, _ in self.rounds]
        if len(set(features)) != len(features):
            raise ParameterError("duplicate feature index across rounds")
        for _, c in self.rounds:
            if not math.isfinite(c):
                raise ParameterError(f"non-finite round coefficient {c}")

    def __len__(self) -> int:
        return len(self.rounds)

    @property
    def selection(self) -> list[int]:
        """Selected feature indices in round order."""
        return [h.feature_index for h, _ in self.rounds]


@dataclass(frozen=True)
class GammaParams:
    """Moment-matched Gamma parameters of one sample's weight history.

    A history with (numerically) zero mean or variance cannot be matched and
    is recorded as the constant ``degenerate_value`` instead.
    """

    alpha: float | None
    theta: float | None
    degenerate_value: float | None = None

    def __post_init__(self):
        if self.degenerate_value is None:
            if self.alpha is None or self.theta is None:
                raise ParameterError("non-degenerate params need alpha and theta")
            if self.alpha <= 0 or self.theta <= 0:
                raise ParameterError(
                    f"alpha and theta must be > 0, got ({self.alpha}, {self.theta})"
                )

    @property
    def is_degenerate(self) -> bool:
        return self.degenerate_value is not None


@dataclass(frozen=True)
class PabStats:
    serial_seconds: float
    parallel_seconds: float


class ResponseTable:
    """Training-sample responses (+/-1) of the already-selected classifiers."""

    def __init__(self):
        self.rows: list[np.ndarray] = []
        self.features: list[int] = []
        self._positives: list[np.ndarray] = []
        self._pos_counts: list[int] = []

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def used(self) -> set[int]:
        return set(self.features)

    def add(self, feature_index: int, responses: np.ndarray) -> None:
        row = np.asarray(responses, dtype=np.int8)
        self.rows.append(row)
        self.features.append(feature_index)
        self._positives.append(row > 0)
        self._pos_counts.append(int(np.count_nonzero(row > 0)))

    def max_mi(self, candidate: np.ndarray, stop_above: float | None = None) -> float:
        """Largest mutual information between the candidate row and any
        selected row; 0 when nothing is selected yet.

        With ``stop_above`` set, scanning stops at the first row exceeding it;
        the partial maximum returned is then only known to exceed the bound.
        """
        if not self.rows:
            return 0.0
        cand_pos = np.asarray(candidate) > 0
        n = len(cand_pos)
        cand_total = int(np.count_nonzero(cand_pos))
        best = 0.0
        for row_pos, row_total in zip(self._positives, self._pos_counts):
            n11 = int(np.count_nonzero(cand_pos & row_pos))
            n10 = cand_total - n11
            n01 = row_total - n11
            value = _mi_from_counts(n11, n10, n01, n - n11 - n10 - n01, n)
            if value > best:
                best = value
                if stop_above is not None and best > stop_above:
                    break
        return best

    @classmethod
    def from_model(cls, model: EnsembleModel, tset: TrainingSet) -> "ResponseTable":
        table = cls()
        for h, _ in model.rounds:
            column = tset.values[:, h.feature_index]
            raw = np.where(column >= h.threshold, 1, -1).astype(np.int8)
            table.add(h.feature_index, raw * h.polarity)
        return table


def _mi_from_counts(n11: int, n10: int, n01: int, n00: int, n: int) -> float:
    """Mutual information in bits from the four contingency counts."""
    pa1, pa0 = (n11 + n10) / n, (n01 + n00) / n
    pb1, pb0 = (n11 + n01) / n, (n10 + n00) / n

    def term(count: int, px: float, py: float) -> float:
        if not count:
            return 0.0
        p = count / n
        return p * (math.log2(p) - (math.log2(px) + math.log2(py)))

    # grouping keeps the value bit-identical under argument swap
    info = term(n11, pa1, pb1) + (term(n10, pa1, pb0) + term(n01, pa0, pb1))
    info += term(n00, pa0, pb0)
    return max(info, 0.0)


def mutual_information_binary(a: np.ndarray, b: np.ndarray) -> float:
    """Mutual information, in bits, of two +/-1 response rows.

    Probabilities are contingency counts over the rows; cells with zero count
    contribute nothing.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 1 or b.ndim != 1 or a.shape != b.shape:
        raise ParameterError(f"rows must be equal-length 1D, got {a.shape}, {b.shape}")
    n = len(a)
    if n < 1:
        raise ParameterError("rows must be non-empty")
    a_pos = a > 0
    b_pos = b > 0
    n11 = int(np.count_nonzero(a_pos & b_pos))
    n10 = int(np.count_nonzero(a_pos & ~b_pos))
    n01 = int(np.count_nonzero(~a_pos & b_pos))
    return _mi_from_counts(n11, n10, n01, n - n11 - n10 - n01, n)


def fit_gamma(trajectory: np.ndarray) -> GammaParams:
    """Match a Gamma distribution to a weight history by its two moments.

    With mean ``m`` and population variance ``v``, the scale is ``v / m`` and
    the shape ``m**2 / v``.  Histories with vanishing mean or variance return
    the degenerate branch carrying the mean as a constant.
    """
    traj = np.asarray(trajectory, dtype=np.float64)
    if traj.ndim != 1 or len(traj) < 2:
        raise ParameterError("trajectory must be 1D with at least 2 entries")
    if np.any(traj < 0):
        raise ParameterError("trajectory contains a negative weight")
    mean = float(traj.mean())
    var = float(traj.var())
    if var < _DEGENERATE_EPS or mean < _DEGENERATE_EPS:
        return GammaParams(alpha=None, theta=None, degenerate_value=mean)
    return GammaParams(alpha=mean * mean / var, theta=var / mean)


class _GammaArrays:
    """Column form of a GammaParams list, for repeated vectorized sampling."""

    def __init__(self, params: list[GammaParams]):
        if not params:
            raise ParameterError("params must be non-empty")
        self.alphas = np.array(
            [1.0 if p.is_degenerate else p.alpha for p in params], dtype=np.float64
        )
        self.thetas = np.array(
            [0.0 if p.is_degenerate else p.theta for p in params], dtype=np.float64
        )
        self.constants = np.array(
            [p.degenerate_value if p.is_degenerate else 0.0 for p in params],
            dtype=np.float64,
        )

    def draw_rounds(self, seed: int, rounds: list[int]) -> np.ndarray:
        """Normalized weight vectors for several rounds, one row per round."""
        n = len(self.alphas)
        uniforms = np.stack(
            [np.random.default_rng([seed, r]).random(n) for r in rounds]
        )
        values = gammaincinv(self.alphas, uniforms) * self.thetas + self.constants
        totals = values.sum(axis=1, keepdims=True)
        for r, total in zip(rounds, totals[:, 0]):
            if total <= 0:
                raise DegenerateWeightsError(
                    f"weights for round {r} sum to {total}; cannot normalize"
                )
        return values / totals


def sample_weights(
    params: list[GammaParams], seed: int, round_index: int
) -> np.ndarray:
    """One independent weight draw per sample, normalized to sum 1.

    Sample ``i`` inverts its Gamma CDF at the ``i``-th uniform of a stream
    seeded by ``(seed, round_index)``, so ``w[i]`` is a pure function of
    ``(seed, round_index, i)`` and the vector does not depend on how rounds
    are scheduled across workers.  Degenerate params contribute their constant.
    """
    if seed < 0 or round_index < 0:
        raise ParameterError("seed and round_index must be >= 0")
    return _GammaArrays(params).draw_rounds(seed, [round_index])[0]


@dataclass(frozen=True)
class _Ranked:
    """Per-feature best error/polarity plus the ascending-error visit order."""

    best_error: np.ndarray
    polarity: np.ndarray
    order: np.ndarray


def _rank_candidates(table: StumpTable, error_plus: np.ndarray) -> _Ranked:
    best_error, polarity = table.split_errors(error_plus)
    # stable sort keeps ascending feature index among equal errors
    order = np.argsort(best_error, kind="stable")
    return _Ranked(best_error, polarity, order)


def _pick_from_ranked(
    table: StumpTable,
    ranked: _Ranked,
    responses: ResponseTable,
    mi_threshold: float,
    used: set[int],
    round_index: int,
) -> tuple[WeakClassifier, float, float]:
    """First admissible candidate in ascending-error order.

    Admissible means: feature unused, and (when the filter is active and
    something is selected) maximum MI against the selected rows at most the
    threshold.  Returns (stump, weighted error, max MI seen for it).
    """
    check_mi = math.isfinite(mi_threshold) and len(responses) > 0
    for j in ranked.order:
        j = int(j)
        if j in used:
            continue
        max_mi = 0.0
        if check_mi:
            max_mi = responses.max_mi(
                table.responses(j, int(ranked.polarity[j])), stop_above=mi_threshold
            )
            if max_mi > mi_threshold:
                continue
        return table.stump(j, int(ranked.polarity[j])), float(ranked.best_error[j]), max_mi
    raise SelectionExhaustedError(
        f"round {round_index}: no admissible stump (threshold"
        f" {mi_threshold}, {len(used)} features used)",
        round_index=round_index,
    )


def mi_filter_pick(
    tset: TrainingSet,
    w: np.ndarray,
    responses: ResponseTable,
    cfg: BoostConfig,
) -> tuple[WeakClassifier, float]:
    """Lowest-weighted-error stump that passes the redundancy filter.

    Candidates are visited in ascending weighted-error order; the first one
    whose feature is unused and whose maximum MI against every selected row is
    at most ``cfg.mi_threshold`` wins.  With nothing selected yet (or an
    infinite threshold) this is exactly the global best stump.
    """
    table = StumpTable.for_set(tset)
    w = check_weights(w, len(table))
    ranked = _rank_candidates(table, table.error_plus(w))
    h, err, _ = _pick_from_ranked(
        table, ranked, responses, cfg.mi_threshold, responses.used, round_index=0
    )
    return h, err


def _round_core(
    table: StumpTable,
    error_plus: np.ndarray,
    responses: ResponseTable,
    cfg: BoostConfig,
    used: set[int],
    round_index: int,
) -> tuple[WeakClassifier, float, float, float]:
    """Shared pick-and-weigh step: returns (stump, c, clamped error, max MI)."""
    ranked = _rank_candidates(table, error_plus)
    h, err, max_mi = _pick_from_ranked(
        table, ranked, responses, cfg.mi_threshold, used, round_index
    )
    floor = cfg.floor_for(len(table))
    eps = min(max(err, floor), 1.0 - floor)
    c = 0.5 * math.log((1.0 - eps) / eps)
    return h, c, eps, max_mi


def adaboost_round(
    tset: TrainingSet,
    w: np.ndarray,
    selected: EnsembleModel,
    cfg: BoostConfig,
) -> tuple[WeakClassifier, float, np.ndarray]:
    """One sequential boosting round.

    Picks the best admissible stump under ``w``, computes its coefficient from
    the clamped weighted error, and returns the renormalized exponential
    reweighting of ``w`` (mistakes up, correct down).
    """
    table = StumpTable.for_set(tset)
    w = check_weights(w, len(table))
    responses = ResponseTable.from_model(selected, tset)
    h, c, _, _ = _round_core(
        table,
        table.error_plus(w),
        responses,
        cfg,
        responses.used,
        round_index=len(selected) + 1,
    )
    out = table.responses(h.feature_index, h.polarity)
    new_w = w * np.exp(-c * (tset.labels * out).astype(np.float64))
    return h, c, new_w / new_w.sum()


def _train_serial(
    table: StumpTable,
    cfg: BoostConfig,
    num_rounds: int,
    responses: ResponseTable,
    used: set[int],
    log=None,
):
    """Run ``num_rounds`` sequential rounds; returns (rounds, trajectory)."""
    n = len(table)
    labels = table.tset.labels.astype(np.float64)
    w = np.full(n, 1.0 / n)
    trajectory = np.empty((num_rounds, n), dtype=np.float64)
    rounds: list[tuple[WeakClassifier, float]] = []
    for r in range(1, num_rounds + 1):
        trajectory[r - 1] = w
        h, c, eps, max_mi = _round_core(
            table, table.error_plus(w), responses, cfg, used, r
        )
        out = table.responses(h.feature_index, h.polarity)
        rounds.append((h, c))
        responses.add(h.feature_index, out)
        used.add(h.feature_index)
        if log is not None:
            log(r, h, eps, c, max_mi)
        w = w * np.exp(-c * labels * out)
        w = w / w.sum()
    return rounds, trajectory


def train_ab(
    tset: TrainingSet,
    cfg: BoostConfig,
    layout: FeatureLayout | None = None,
    log=None,
    record_trajectory: bool = False,
):
    """Sequential boosting for ``cfg.total_rounds`` rounds from uniform weights.

    ``cfg.serial_rounds`` plays no role here.  With ``record_trajectory`` the
    per-round weight matrix (rounds x samples) is returned alongside the model.
    """
    table = StumpTable.for_set(tset)
    responses = ResponseTable()
    rounds, trajectory = _train_serial(
        table, cfg, cfg.total_rounds, responses, set(), log=log
    )
    model = EnsembleModel(rounds, cfg, layout if layout is not None else tset.layout)
    return (model, trajectory) if record_trajectory else model


_PARALLEL_BLOCK = 8


def _rank_block(
    table: StumpTable, gammas: _GammaArrays, seed: int, rounds: list[int]
) -> list[_Ranked]:
    """The schedulable part of a block of parallel rounds.

    Each round's weights depend only on (seed, round), and blocks are cut the
    same way for every worker count, so the arithmetic is identical no matter
    how blocks are scheduled.
    """
    weights = gammas.draw_rounds(seed, rounds)
    error_plus = weights @ table.mistakes
    best_error = np.minimum(error_plus, 1.0 - error_plus)
    polarity = np.where(error_plus <= 1.0 - error_plus, 1, -1).astype(np.int8)
    order = np.argsort(best_error, kind="stable", axis=1)
    return [
        _Ranked(best_error[i], polarity[i], order[i]) for i in range(len(rounds))
    ]


def train_pab(
    tset: TrainingSet,
    cfg: BoostConfig,
    layout: FeatureLayout | None = None,
    workers: int = 1,
    log=None,
    record_trajectory: bool = False,
    record_stats: bool = False,
):
    """Boosting with the post-serial rounds driven by sampled weights.

    Rounds ``1..serial_rounds`` run sequentially while recording the weight
    trajectory; a Gamma model is then fitted per sample, and rounds
    ``serial_rounds+1..total_rounds`` each draw an independent weight vector
    from those models.  The draws depend only on ``(seed, round)``, so the
    scored candidate rankings can be computed on any number of workers; a
    sequential merge in round order then applies the redundancy filter and the
    no-feature-reuse rule (a round whose best feature was already taken moves
    to its next admissible candidate).  The resulting model is identical for
    every worker count.
    """
    if workers < 1:
        raise ParameterError(f"workers must be >= 1, got {workers}")
    table = StumpTable.for_set(tset)
    responses = ResponseTable()
    used: set[int] = set()

    t0 = time.perf_counter()
    rounds, trajectory = _train_serial(
        table, cfg, cfg.serial_rounds, responses, used, log=log
    )
    gammas = _GammaArrays([fit_gamma(trajectory[:, i]) for i in range(len(table))])
    t1 = time.perf_counter()

    parallel_rounds = list(range(cfg.serial_rounds + 1, cfg.total_rounds + 1))
    blocks = [
        parallel_rounds[i : i + _PARALLEL_BLOCK]
        for i in range(0, len(parallel_rounds), _PARALLEL_BLOCK)
    ]
    floor = cfg.floor_for(len(table))

    def merge(r: int, ranked: _Ranked) -> None:
        h, err, max_mi = _pick_from_ranked(
            table, ranked, responses, cfg.mi_threshold, used, r
        )
        eps = min(max(err, floor), 1.0 - floor)
        c = 0.5 * math.log((1.0 - eps) / eps)
        rounds.append((h, c))
        responses.add(h.feature_index, table.responses(h.feature_index, h.polarity))
        used.add(h.feature_index)
        if log is not None:
            log(r, h, eps, c, max_mi)

    # Pin BLAS to one thread here so the worker count alone decides how many
    # cores the scoring uses, and 1-vs-N runs share the same kernels.
    with _single_threaded_blas():
        if workers == 1:
            for block in blocks:
                for r, ranked in zip(block, _rank_block(table, gammas, cfg.seed, block)):
                    merge(r, ranked)
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                ranks_by_block = list(
                    pool.map(
                        lambda block: _rank_block(table, gammas, cfg.seed, block),
                        blocks,
                    )
                )
            for block, ranks in zip(blocks, ranks_by_block):
                for r, ranked in zip(block, ranks):
                    merge(r, ranked)
    t2 = time.perf_counter()

    model = EnsembleModel(rounds, cfg, layout if layout is not None else tset.layout)
    extras = []
    if record_trajectory:
        extras.append(trajectory)
    if record_stats:
        extras.append(PabStats(serial_seconds=t1 - t0, parallel_seconds=t2 - t1))
    return (model, *extras) if extras else model


def predict(model: EnsembleModel, diff_values: np.ndarray) -> tuple[float, int]:
    """Ensemble score and sign decision on one difference vector.

    The score is the coefficient-weighted sum of stump outputs; a score of
    exactly 0 (including the empty model) decides +1.
    """
    values = np.asarray(diff_values, dtype=np.float64)
    if values.ndim != 1:
        raise ParameterError(f"diff vector must be 1D, got shape {values.shape}")
    if model.layout is not None and len(values) != model.layout.num_features:
        raise ParameterError(
            f"diff vector has {len(values)} components, layout expects"
            f" {model.layout.num_features}"
        )
    score = 0.0
    for h, c in model.rounds:
        score += c * classify(h, values)
    return score, (1 if score >= 0 else -1)


def cost_estimate(cfg: BoostConfig, workers: int) -> tuple[int, int]:
    """Idealized critical-path length in round-units: (serial, parallel)."""
    if workers < 1:
        raise ParameterError(f"workers must be >= 1, got {workers}")
    remaining = cfg.total_rounds - cfg.serial_rounds
    return cfg.serial_rounds, -(-remaining // workers)


_MODEL_MAGIC = "gaborboost-model 1"
_TRAJ_MAGIC = "gaborboost-traj 1"


def save_model(model: EnsembleModel, path: str | Path) -> None:
    """Text format: header fields, then one line per round in round order."""
    cfg = model.config
    lines = [
        _MODEL_MAGIC,
        f"total_rounds\t{cfg.total_rounds}",
        f"serial_rounds\t{cfg.serial_rounds}",
        f"mi_threshold\t{cfg.mi_threshold:.17g}",
        f"epsilon_floor\t{'-' if cfg.epsilon_floor is None else format(cfg.epsilon_floor, '.17g')}",
        f"seed\t{cfg.seed}",
        f"layout\t{model.layout.descriptor() if model.layout else '-'}",
        "rounds",
    ]
    lines += [format_weak_line(h, c) for h, c in model.rounds]
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def load_model(path: str | Path) -> EnsembleModel:
    lines = Path(path).read_text(encoding="ascii").splitlines()
    if not lines or lines[0] != _MODEL_MAGIC:
        raise ParameterError(f"{path}: not a model file")
    try:
        marker = lines.index("rounds")
    except ValueError:
        raise ParameterError(f"{path}: missing rounds marker") from None
    fields = dict(line.split("\t", 1) for line in lines[1:marker])
    cfg = BoostConfig(
        total_rounds=int(fields["total_rounds"]),
        serial_rounds=int(fields["serial_rounds"]),
        mi_threshold=float(fields["mi_threshold"]),
        epsilon_floor=(
            None if fields["epsilon_floor"] == "-" else float(fields["epsilon_floor"])
        ),
        seed=int(fields["seed"]),
    )
    layout = (
        None
        if fields["layout"] == "-"
        else FeatureLayout.from_descriptor(fields["layout"])
    )
    rounds = [parse_weak_line(line) for line in lines[marker + 1 :] if line]
    return EnsembleModel(rounds, cfg, layout)


def save_trajectory(trajectory: np.ndarray, seed: int, path: str | Path) -> None:
    """Binary weight-history dump with a small text header."""
    traj = np.ascontiguousarray(trajectory, dtype="<f8")
    if traj.ndim != 2:
        raise ParameterError("trajectory must be a 2D (rounds x samples) array")
    header = [
        _TRAJ_MAGIC,
        f"rounds\t{traj.shape[0]}",
        f"samples\t{traj.shape[1]}",
        f"seed\t{seed}",
        "data",
        "",
    ]
    Path(path).write_bytes("\n".join(header).encode("ascii") + traj.tobytes())


def load_trajectory(path: str | Path) -> tuple[np.ndarray, int]:
    blob = Path(path).read_bytes()
    head, sep, payload = blob.partition(b"data\n")
    if not sep:
        raise ParameterError(f"{path}: not a trajectory file")
    lines = head.decode("ascii").splitlines()
    if not lines or lines[0] != _TRAJ_MAGIC:
        raise ParameterError(f"{path}: bad magic line")
    fields = dict(line.split("\t", 1) for line in lines[1:] if line)
    rows, cols = int(fields["rounds"]), int(fields["samples"])
    expected = rows * cols * 8
    if len(payload) != expected:
        raise ParameterError(
            f"{path}: payload holds {len(payload)} bytes, expected {expected}"
        )
    return (
        np.frombuffer(payload, dtype="<f8").reshape(rows, cols).copy(),
        int(fields["seed"]),
    )
