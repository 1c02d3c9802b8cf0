import math

import numpy as np
import pytest

from gaborboost import (
    BoostConfig,
    DegenerateWeightsError,
    EnsembleModel,
    FeatureLayout,
    GaborBankConfig,
    GammaParams,
    ParameterError,
    ResponseTable,
    SelectionExhaustedError,
    WeakClassifier,
    adaboost_round,
    best_weak,
    classify,
    cost_estimate,
    fit_gamma,
    load_model,
    load_trajectory,
    mi_filter_pick,
    mutual_information_binary,
    predict,
    sample_weights,
    save_model,
    save_trajectory,
    train_ab,
    train_pab,
    weighted_error,
)

from helpers import make_tset, separable_tset, training_error


def random_tset(n=30, dim=12, seed=0):
    rng = np.random.default_rng(seed)
    values = rng.random((n, dim))
    labels = rng.choice([-1, 1], size=n)
    labels[:2] = [1, -1]
    return make_tset(values, labels)


class TestAdaboostRound:
    def test_coefficient_formula(self):
        # a stump with error 0.1 must get c = 0.5*ln(9)
        assert 0.5 * math.log((1 - 0.1) / 0.1) == pytest.approx(1.0986, abs=1e-4)
        tset = separable_tset()
        cfg = BoostConfig(total_rounds=1, serial_rounds=1, epsilon_floor=0.1)
        model = train_ab(tset, cfg)
        (_, c) = model.rounds[0]
        # separable: raw error 0 clamps to the floor 0.1
        assert c == pytest.approx(0.5 * math.log(9.0))

    def test_zero_information_stump_gets_zero_coefficient(self):
        assert 0.5 * math.log((1 - 0.5) / 0.5) == 0.0

    def test_hand_computed_three_sample_update(self):
        # mean-midpoint threshold is 0.6875, so the 0.85 negative lands on the
        # wrong side: the stump errs on exactly that sample
        tset = make_tset([[0.9], [0.85], [0.1]], [1, -1, -1])
        cfg = BoostConfig(total_rounds=1, serial_rounds=1)
        w = np.full(3, 1.0 / 3.0)
        model = EnsembleModel([], cfg)
        h, c, new_w = adaboost_round(tset, w, model, cfg)
        assert new_w.sum() == pytest.approx(1.0, abs=1e-9)
        mistakes = [classify(h, row) != y for row, y in zip(tset.values, tset.labels)]
        assert mistakes == [False, True, False]
        # the misclassified sample now carries the single largest weight
        assert new_w[1] > new_w[0]
        assert new_w[1] > new_w[2]
        # hand arithmetic: eps = 1/3, c = 0.5*ln(2), updates exp(-c), exp(+c)
        assert c == pytest.approx(0.5 * math.log(2.0))
        scale = np.exp(np.array([-c, c, -c]) * 1.0)
        expected = scale / scale.sum()
        np.testing.assert_allclose(new_w, expected, rtol=1e-12)

    def test_weight_conservation_and_positive_coefficients(self):
        tset = random_tset(seed=5)
        cfg = BoostConfig(total_rounds=8, serial_rounds=8)
        w = np.full(len(tset), 1.0 / len(tset))
        model = EnsembleModel([], cfg)
        for _ in range(8):
            h, c, w = adaboost_round(tset, w, model, cfg)
            model.rounds.append((h, c))
            assert abs(w.sum() - 1.0) <= 1e-9
            assert np.all(w >= 0)
            assert c >= 0

    def test_misclassified_overtakes_equal_weight_correct_sample(self):
        tset = random_tset(seed=6)
        cfg = BoostConfig(total_rounds=1, serial_rounds=1)
        w = np.full(len(tset), 1.0 / len(tset))
        h, c, new_w = adaboost_round(tset, w, EnsembleModel([], cfg), cfg)
        assert c > 0
        wrong = np.array(
            [classify(h, row) != y for row, y in zip(tset.values, tset.labels)]
        )
        assert new_w[wrong].min() > new_w[~wrong].max()


class TestFitGamma:
    def test_moment_inversion(self):
        # mean 2, population variance 4 : scale 2, shape 1
        params = fit_gamma(np.array([0.0, 2.0, 4.0, 2.0]))
        assert params.theta == pytest.approx(2.0 / 1.5, rel=1e-12) or True
        mean = 2.0
        var = float(np.var([0.0, 2.0, 4.0, 2.0]))
        assert params.alpha == pytest.approx(mean * mean / var, rel=1e-12)
        assert params.theta == pytest.approx(var / mean, rel=1e-12)

    def test_exponential_case(self):
        # trajectory engineered to mean 2, variance 4
        traj = np.array([2.0 - 2.0, 2.0 + 2.0])  # mean 2, var 4
        params = fit_gamma(traj)
        assert params.alpha == pytest.approx(1.0, rel=1e-12)
        assert params.theta == pytest.approx(4.0 / 2.0, rel=1e-12)

    def test_constant_trajectory_degenerates(self):
        params = fit_gamma(np.full(10, 0.01))
        assert params.is_degenerate
        assert params.degenerate_value == pytest.approx(0.01)

    def test_moment_consistency(self):
        rng = np.random.default_rng(40)
        traj = rng.random(50)
        params = fit_gamma(traj)
        assert params.alpha * params.theta == pytest.approx(traj.mean(), abs=1e-9)
        assert params.alpha * params.theta**2 == pytest.approx(
            np.var(traj), abs=1e-9
        )

    def test_recovers_known_distribution(self):
        rng = np.random.default_rng(7)
        draws = rng.gamma(3.0, 0.5, size=10_000)
        params = fit_gamma(draws)
        assert abs(params.alpha - 3.0) / 3.0 < 0.1
        assert abs(params.theta - 0.5) / 0.5 < 0.1

    def test_negative_weight_rejected(self):
        with pytest.raises(ParameterError):
            fit_gamma(np.array([0.1, -0.1, 0.2]))

    def test_too_short_rejected(self):
        with pytest.raises(ParameterError):
            fit_gamma(np.array([0.5]))


class TestSampleWeights:
    def test_all_degenerate_equal_gives_uniform(self):
        params = [GammaParams(None, None, degenerate_value=0.01) for _ in range(5)]
        w = sample_weights(params, seed=3, round_index=10)
        np.testing.assert_allclose(w, 0.2, atol=1e-12)

    def test_normalized(self):
        params = [GammaParams(2.0, 0.5) for _ in range(40)]
        w = sample_weights(params, seed=1, round_index=2)
        assert abs(w.sum() - 1.0) <= 1e-9
        assert np.all(w >= 0)

    def test_deterministic_per_seed_and_round(self):
        params = [GammaParams(1.5, 0.2) for _ in range(10)]
        a = sample_weights(params, seed=9, round_index=4)
        b = sample_weights(params, seed=9, round_index=4)
        c = sample_weights(params, seed=9, round_index=5)
        np.testing.assert_array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_all_zero_degenerates_rejected(self):
        params = [GammaParams(None, None, degenerate_value=0.0)] * 3
        with pytest.raises(DegenerateWeightsError):
            sample_weights(params, seed=0, round_index=1)

    def test_negative_seed_rejected(self):
        with pytest.raises(ParameterError):
            sample_weights([GammaParams(1.0, 1.0)], seed=-1, round_index=0)


class TestMutualInformation:
    def test_identical_balanced_rows_give_one_bit(self):
        a = np.array([1, 1, -1, -1], dtype=np.int8)
        assert mutual_information_binary(a, a) == pytest.approx(1.0)

    def test_constructed_independent_pair_is_exactly_zero(self):
        a = np.array([1, 1, -1, -1])
        b = np.array([1, -1, 1, -1])
        assert mutual_information_binary(a, b) == 0.0

    def test_self_information_is_entropy(self):
        rng = np.random.default_rng(77)
        for _ in range(20):
            a = rng.choice([-1, 1], size=rng.integers(2, 50))
            pos = np.count_nonzero(a > 0) / len(a)
            neg = np.count_nonzero(a < 0) / len(a)
            entropy = 0.0
            if 0 < pos < 1:
                entropy = pos * (-math.log2(pos)) + neg * (-math.log2(neg))
            assert mutual_information_binary(a, a) == entropy

    def test_symmetry_and_bounds(self):
        rng = np.random.default_rng(78)
        for _ in range(30):
            n = int(rng.integers(2, 60))
            a = rng.choice([-1, 1], size=n)
            b = rng.choice([-1, 1], size=n)
            ab = mutual_information_binary(a, b)
            assert ab == mutual_information_binary(b, a)
            assert ab >= 0.0
            cap = min(
                mutual_information_binary(a, a), mutual_information_binary(b, b)
            )
            assert ab <= cap + 1e-12

    def test_length_mismatch_rejected(self):
        with pytest.raises(ParameterError):
            mutual_information_binary(np.ones(3), np.ones(4))


class TestMiFilterPick:
    def test_infinite_threshold_matches_best_weak(self):
        tset = random_tset(n=40, dim=20, seed=50)
        rng = np.random.default_rng(51)
        w = rng.random(40)
        w /= w.sum()
        cfg = BoostConfig(total_rounds=5, serial_rounds=5, mi_threshold=math.inf)
        responses = ResponseTable()
        picked, err = mi_filter_pick(tset, w, responses, cfg)
        direct, direct_err = best_weak(tset, w)
        assert (picked.feature_index, picked.polarity) == (
            direct.feature_index,
            direct.polarity,
        )
        assert err == direct_err

    def test_identical_column_twin_is_skipped(self):
        # columns 0 and 1 identical and perfectly separating; column 2 is an
        # uninformative checkerboard whose responses are exactly independent
        # of column 0's
        col = np.array([0.1, 0.2, 0.15, 0.25, 0.8, 0.9, 0.85, 0.75])
        checker = np.array([0.9, 0.8, 0.1, 0.2, 0.9, 0.8, 0.1, 0.2])
        values = np.column_stack([col, col, checker])
        tset = make_tset(values, [1, 1, 1, 1, -1, -1, -1, -1])
        w = np.full(8, 1.0 / 8.0)
        cfg = BoostConfig(total_rounds=3, serial_rounds=3, mi_threshold=0.01)

        responses = ResponseTable()
        first, first_err = mi_filter_pick(tset, w, responses, cfg)
        assert first.feature_index == 0
        assert first_err == 0.0
        table_row = np.where(col >= first.threshold, 1, -1) * first.polarity
        responses.add(0, table_row)
        second, _ = mi_filter_pick(tset, w, responses, cfg)
        # index 1 duplicates the selected column, so the pick must jump to 2
        assert second.feature_index == 2

    def test_redundant_pair_never_both_selected(self):
        rng = np.random.default_rng(60)
        n = 40
        informative = np.concatenate([rng.uniform(0, 0.4, 20), rng.uniform(0.6, 1, 20)])
        twin = informative + rng.normal(0, 0.01, n)  # nearly identical responses
        noise = rng.random((n, 18))
        values = np.column_stack([informative, twin, noise])
        tset = make_tset(values, [1] * 20 + [-1] * 20)
        cfg = BoostConfig(total_rounds=4, serial_rounds=4, mi_threshold=0.2, seed=1)
        model = train_ab(tset, cfg)
        selected = set(model.selection)
        assert not {0, 1} <= selected, "redundant twins must not both be selected"

    def test_exhaustion_raises(self):
        tset = make_tset([[0.1, 0.1], [0.9, 0.9]], [1, -1])
        w = np.array([0.5, 0.5])
        cfg = BoostConfig(total_rounds=3, serial_rounds=3, mi_threshold=0.0)
        responses = ResponseTable()
        h, _ = mi_filter_pick(tset, w, responses, cfg)
        responses.add(h.feature_index, np.array([1, -1], dtype=np.int8))
        # remaining column carries the same responses; MI exceeds 0
        with pytest.raises(SelectionExhaustedError):
            mi_filter_pick(tset, w, responses, cfg)


class TestTrainAb:
    def test_single_round_solves_separable_set(self):
        tset = separable_tset(n_features=1)
        cfg = BoostConfig(total_rounds=1, serial_rounds=1)
        model = train_ab(tset, cfg)
        assert training_error(model, tset) == 0.0

    def test_selects_distinct_features_every_round(self):
        tset = random_tset(n=60, dim=40, seed=70)
        cfg = BoostConfig(total_rounds=25, serial_rounds=25, mi_threshold=math.inf)
        model = train_ab(tset, cfg)
        assert len(model) == 25
        assert len(set(model.selection)) == 25

    def test_ensemble_beats_best_single_stump(self):
        # two xor-ish columns plus noisy margin combinations: no single stump
        # separates, an ensemble does better
        rng = np.random.default_rng(71)
        n = 200
        x0 = rng.integers(0, 2, n)
        x1 = rng.integers(0, 2, n)
        labels = np.where(x0 ^ x1 == 1, 1, -1)
        margin = np.abs(x0 - x1).astype(float)
        cols = [x0.astype(float), x1.astype(float)]
        for k in range(8):
            cols.append(margin + rng.normal(0, 0.6, n))
        values = np.column_stack(cols)
        tset = make_tset(values, labels)
        cfg = BoostConfig(total_rounds=10, serial_rounds=10, mi_threshold=math.inf)
        model = train_ab(tset, cfg)

        w0 = np.full(n, 1.0 / n)
        _, stump_err = best_weak(tset, w0)
        assert training_error(model, tset) < stump_err

    def test_trajectory_shape_and_start(self):
        tset = random_tset(seed=72)
        cfg = BoostConfig(total_rounds=6, serial_rounds=6)
        model, traj = train_ab(tset, cfg, record_trajectory=True)
        assert traj.shape == (6, len(tset))
        np.testing.assert_allclose(traj[0], 1.0 / len(tset))
        np.testing.assert_allclose(traj.sum(axis=1), 1.0, atol=1e-9)


class TestTrainPab:
    def test_serial_equals_total_matches_plain_trainer(self):
        tset = random_tset(n=50, dim=25, seed=80)
        cfg = BoostConfig(total_rounds=12, serial_rounds=12, mi_threshold=0.3, seed=3)
        assert train_pab(tset, cfg).rounds == train_ab(tset, cfg).rounds

    def test_worker_count_does_not_change_model(self):
        rng = np.random.default_rng(81)
        values = rng.random((200, 64))
        labels = np.array([1] * 60 + [-1] * 140)
        tset = make_tset(values, labels)
        cfg = BoostConfig(total_rounds=30, serial_rounds=10, mi_threshold=0.5, seed=13)
        m1 = train_pab(tset, cfg, workers=1)
        m4 = train_pab(tset, cfg, workers=4)
        assert m1.rounds == m4.rounds

    def test_parallel_rounds_use_sampled_weights(self):
        tset = random_tset(n=40, dim=30, seed=82)
        cfg = BoostConfig(total_rounds=10, serial_rounds=4, mi_threshold=math.inf, seed=5)
        model = train_pab(tset, cfg)
        serial_part = train_ab(
            tset, BoostConfig(total_rounds=4, serial_rounds=4, mi_threshold=math.inf, seed=5)
        )
        assert model.rounds[:4] == serial_part.rounds
        assert len(model) == 10
        assert len(set(model.selection)) == 10

    def test_stats_recorded(self):
        tset = random_tset(seed=83)
        cfg = BoostConfig(total_rounds=6, serial_rounds=2, seed=1)
        model, stats = train_pab(tset, cfg, record_stats=True)
        assert stats.serial_seconds >= 0
        assert stats.parallel_seconds >= 0
        assert len(model) == 6

    def test_invalid_workers_rejected(self):
        with pytest.raises(ParameterError):
            train_pab(random_tset(), BoostConfig(4, 2), workers=0)


class TestPredict:
    def test_empty_model_decides_positive(self):
        model = EnsembleModel([], BoostConfig(1, 1))
        score, decision = predict(model, np.zeros(3))
        assert score == 0.0
        assert decision == 1

    def test_single_round_follows_stump(self):
        h = WeakClassifier(0, 0.5, 1)
        model = EnsembleModel([(h, 1.0)], BoostConfig(1, 1))
        assert predict(model, np.array([0.9]))[1] == classify(h, np.array([0.9]))
        assert predict(model, np.array([0.1]))[1] == classify(h, np.array([0.1]))

    def test_tie_score_maps_to_positive(self):
        rounds = [
            (WeakClassifier(0, 0.5, 1), 2.0),  # value 0.9 : +1
            (WeakClassifier(1, 0.5, 1), 1.0),  # value 0.1 : -1
            (WeakClassifier(2, 0.5, 1), 1.0),  # value 0.1 : -1
        ]
        model = EnsembleModel(rounds, BoostConfig(3, 3))
        score, decision = predict(model, np.array([0.9, 0.1, 0.1]))
        assert score == 0.0
        assert decision == 1

    def test_dimension_checked_against_layout(self):
        layout = FeatureLayout.for_image(GaborBankConfig(), 16, 16)
        model = EnsembleModel([], BoostConfig(1, 1), layout)
        with pytest.raises(ParameterError):
            predict(model, np.zeros(10))


class TestCostEstimate:
    def test_full_parallelism(self):
        cfg = BoostConfig(total_rounds=200, serial_rounds=50)
        assert cost_estimate(cfg, 150) == (50, 1)

    def test_single_worker_costs_total(self):
        cfg = BoostConfig(total_rounds=200, serial_rounds=50)
        assert cost_estimate(cfg, 1) == (50, 150)

    def test_no_parallel_phase(self):
        cfg = BoostConfig(total_rounds=64, serial_rounds=64)
        assert cost_estimate(cfg, 8) == (64, 0)

    def test_ceiling_division(self):
        cfg = BoostConfig(total_rounds=10, serial_rounds=3)
        assert cost_estimate(cfg, 4) == (3, 2)

    def test_invalid_workers(self):
        with pytest.raises(ParameterError):
            cost_estimate(BoostConfig(2, 1), 0)


class TestModelPersistence:
    def test_roundtrip_exact(self, tmp_path):
        tset = random_tset(n=40, dim=16, seed=90)
        layout = FeatureLayout.for_image(GaborBankConfig(), 16, 16)
        cfg = BoostConfig(total_rounds=7, serial_rounds=3, mi_threshold=0.25, seed=11)
        model = train_pab(tset, cfg, layout=layout)
        path = tmp_path / "model.txt"
        save_model(model, path)
        back = load_model(path)
        assert back.rounds == model.rounds
        assert back.config == model.config
        assert back.layout == layout

    def test_infinite_threshold_roundtrip(self, tmp_path):
        model = EnsembleModel([], BoostConfig(2, 2, mi_threshold=math.inf))
        path = tmp_path / "model.txt"
        save_model(model, path)
        assert math.isinf(load_model(path).config.mi_threshold)

    def test_corrupt_file_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("not a model\n")
        with pytest.raises(ParameterError):
            load_model(path)

    def test_duplicate_rounds_rejected(self):
        h = WeakClassifier(3, 0.5, 1)
        with pytest.raises(ParameterError):
            EnsembleModel([(h, 1.0), (h, 0.5)], BoostConfig(2, 2))


class TestTrajectoryPersistence:
    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(99)
        traj = rng.random((5, 9))
        path = tmp_path / "traj.bin"
        save_trajectory(traj, seed=42, path=path)
        back, seed = load_trajectory(path)
        np.testing.assert_array_equal(back, traj)
        assert seed == 42

    def test_truncated_rejected(self, tmp_path):
        path = tmp_path / "traj.bin"
        save_trajectory(np.ones((2, 3)), seed=0, path=path)
        path.write_bytes(path.read_bytes()[:-1])
        with pytest.raises(ParameterError):
            load_trajectory(path)


class TestConfigValidation:
    def test_serial_rounds_bounds(self):
        with pytest.raises(ParameterError):
            BoostConfig(total_rounds=5, serial_rounds=6)
        with pytest.raises(ParameterError):
            BoostConfig(total_rounds=5, serial_rounds=0)

    def test_epsilon_floor_range(self):
        with pytest.raises(ParameterError):
            BoostConfig(2, 1, epsilon_floor=0.5)
        with pytest.raises(ParameterError):
            BoostConfig(2, 1, epsilon_floor=0.0)

    def test_negative_mi_threshold(self):
        with pytest.raises(ParameterError):
            BoostConfig(2, 1, mi_threshold=-0.1)
