import json

import numpy as np
import pytest

from srmusic.harness import (
    AmplitudeModel,
    ExperimentConfig,
    concentration_summary,
    phase_transition_summary,
    run_experiment,
    save_records,
    summarize,
)
from srmusic.noise import wilson_interval
from srmusic.torus import ClumpSpec


def pair_spec(M=100, alpha=0.5, beta=1.0):
    return ClumpSpec(1, (2,), alpha=alpha, beta=beta, M=M)


class TestAmplitudeModel:
    def test_unit(self):
        x = AmplitudeModel("unit").sample(np.random.default_rng(0), 4)
        assert np.array_equal(x, np.ones(4, dtype=complex))

    def test_random_phase_unit_modulus(self):
        x = AmplitudeModel("random-phase-unit").sample(np.random.default_rng(1), 6)
        assert np.allclose(np.abs(x), 1.0)

    def test_random_modulus_range(self):
        model = AmplitudeModel("random-modulus", modulus_range=(0.5, 2.0))
        x = model.sample(np.random.default_rng(2), 100)
        assert np.all(np.abs(x) >= 0.5 - 1e-12)
        assert np.all(np.abs(x) <= 2.0 + 1e-12)
        assert model.nominal_x_min == 0.5

    def test_json_round_trip(self):
        for model in (
            AmplitudeModel("unit"),
            AmplitudeModel("random-modulus", modulus_range=(0.5, 2.0)),
        ):
            assert AmplitudeModel.from_dict(model.to_dict()) == model

    def test_validation(self):
        with pytest.raises(ValueError):
            AmplitudeModel("gaussian")
        with pytest.raises(ValueError):
            AmplitudeModel("random-modulus")


class TestExperimentConfig:
    def test_round_trip(self):
        config = ExperimentConfig(
            kind="phase-transition",
            clump_spec=pair_spec(),
            alphas=(0.5, 0.4),
            sigmas=(0.0, 0.1),
            trials_per_cell=2,
            base_seed=7,
        )
        again = ExperimentConfig.from_dict(config.to_dict())
        assert again == config
        assert again.config_hash() == config.config_hash()

    def test_missing_fields_reported(self):
        with pytest.raises(ValueError, match="alphas"):
            ExperimentConfig(kind="sigma-min-sweep", clump_spec=pair_spec())
        with pytest.raises(ValueError, match="clump_spec"):
            ExperimentConfig(kind="phase-transition", alphas=(0.5,), sigmas=(0.1,))
        with pytest.raises(ValueError, match="S"):
            ExperimentConfig(
                kind="upper-bound-sweep", clump_spec=pair_spec(), alphas=(0.04,)
            )

    def test_defaults_resolved(self):
        config = ExperimentConfig(
            kind="phase-transition",
            clump_spec=pair_spec(M=120),
            alphas=(0.5,),
            sigmas=(0.0,),
        )
        assert config.resolved_m == 120
        assert config.resolved_l == 60
        assert config.resolved_n == 1920

    def test_load_accepts_manifest(self, tmp_path):
        config = ExperimentConfig(
            kind="concentration", M=30, L=15, sigmas=(1.0,), trials_per_cell=3
        )
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps({"artifact": "x", "config": config.to_dict()}))
        assert ExperimentConfig.load(path) == config

    def test_schema_checked(self):
        with pytest.raises(ValueError, match="schema"):
            ExperimentConfig.from_dict({"schema": 99, "kind": "concentration"})


class TestRunExperimentCounts:
    def test_phase_transition_grid(self):
        config = ExperimentConfig(
            kind="phase-transition",
            clump_spec=pair_spec(M=50),
            alphas=(0.5, 0.4),
            sigmas=(0.0, 0.05, 0.2),
            trials_per_cell=2,
        )
        records = run_experiment(config)
        assert len(records) == 2 * 3 * 2

    def test_concentration_grid(self):
        config = ExperimentConfig(
            kind="concentration", M=30, L=15, sigmas=(0.5, 1.0), trials_per_cell=4
        )
        records = run_experiment(config)
        assert len(records) == 8
        assert all(r.hankel_norm > 0 for r in records)

    def test_sweep_count_and_bounds(self):
        config = ExperimentConfig(
            kind="sigma-min-sweep",
            clump_spec=pair_spec(M=200),
            alphas=(0.5, 0.35, 0.25, 0.18),
            trials_per_cell=2,
        )
        records = run_experiment(config)
        assert len(records) == 8
        for r in records:
            assert r.lower_bound <= r.sigma_min_exact * (1 + 1e-12)

    def test_upper_sweep_ceiling(self):
        config = ExperimentConfig(
            kind="upper-bound-sweep",
            clump_spec=pair_spec(M=400, alpha=0.04),
            alphas=(0.045, 0.03, 0.02, 0.012),
            S=3,
            trials_per_cell=2,
        )
        records = run_experiment(config)
        assert len(records) == 8
        for r in records:
            assert r.sigma_min_exact <= r.upper_bound * (1 + 1e-12)


class TestDeterminism:
    def test_records_reproducible(self):
        config = ExperimentConfig(
            kind="phase-transition",
            clump_spec=pair_spec(M=50),
            alphas=(0.5,),
            sigmas=(0.1,),
            trials_per_cell=3,
            base_seed=11,
        )
        a = run_experiment(config)
        b = run_experiment(config)
        for ra, rb in zip(a, b):
            assert ra.seed == rb.seed
            assert ra.matched_error == rb.matched_error
            assert ra.success == rb.success

    def test_jobs_do_not_change_results(self):
        config = ExperimentConfig(
            kind="perturbation-check",
            clump_spec=pair_spec(M=60),
            sigmas=(0.05, 0.2),
            trials_per_cell=3,
        )
        seq = run_experiment(config, jobs=1)
        par = run_experiment(config, jobs=4)
        for ra, rb in zip(seq, par):
            assert ra.seed == rb.seed
            assert ra.sup_diff == rb.sup_diff
            assert ra.wedin_bound == rb.wedin_bound

    def test_csv_byte_identical(self, tmp_path):
        config = ExperimentConfig(
            kind="concentration", M=40, L=20, sigmas=(1.0,), trials_per_cell=5
        )
        p1 = save_records(run_experiment(config), config, tmp_path / "a")
        p2 = save_records(run_experiment(config), config, tmp_path / "b")
        assert p1["csv"].read_bytes() == p2["csv"].read_bytes()
        assert p1["summary"].read_bytes() == p2["summary"].read_bytes()


class TestNoiselessPhaseTransition:
    def test_all_cells_succeed_up_to_srf_2p5(self):
        # SRF in {1.25, 2, 2.5} at M = 100 and sigma = 0: exact recovery.
        config = ExperimentConfig(
            kind="phase-transition",
            clump_spec=pair_spec(M=100),
            alphas=(0.8, 0.5, 0.4),
            sigmas=(0.0,),
            trials_per_cell=1,
        )
        records = run_experiment(config)
        assert all(r.success for r in records)


class TestPerturbationCampaign:
    def test_bound_never_violated_when_ok(self):
        config = ExperimentConfig(
            kind="perturbation-check",
            clump_spec=ClumpSpec(2, (1, 1), alpha=20.0, beta=30.0, M=100),
            sigmas=(0.1, 0.5),
            trials_per_cell=10,
        )
        records = run_experiment(config)
        ok = [r for r in records if r.precondition_ok]
        assert ok, "expected some precondition-ok trials at these noise levels"
        assert all(r.sup_diff <= r.wedin_bound for r in ok)
        assert all(r.success for r in ok)


class TestSummaries:
    def test_phase_transition_table(self):
        config = ExperimentConfig(
            kind="phase-transition",
            clump_spec=pair_spec(M=50),
            alphas=(0.5, 0.4),
            sigmas=(0.0, 5.0),
            trials_per_cell=4,
        )
        records = run_experiment(config)
        summary = phase_transition_summary(records)
        assert summary.srf == (2.0, 2.5)
        assert summary.sigma_over_xmin == (0.0, 5.0)
        assert summary.success_rate[0][0] == 1.0
        assert summary.level90[0] is not None
        assert summary.trials_per_cell == 4

    def test_all_success_gives_ones(self):
        config = ExperimentConfig(
            kind="phase-transition",
            clump_spec=pair_spec(M=50),
            alphas=(0.5,),
            sigmas=(0.0, 1e-9),
            trials_per_cell=2,
        )
        summary = phase_transition_summary(run_experiment(config))
        assert all(rate == 1.0 for row in summary.success_rate for rate in row)
        assert summary.level90 == (1e-9,)

    def test_monotone_in_sigma_up_to_wilson_noise(self):
        config = ExperimentConfig(
            kind="phase-transition",
            clump_spec=pair_spec(M=60),
            alphas=(0.5,),
            sigmas=(0.001, 0.05, 0.3, 1.5, 6.0),
            trials_per_cell=8,
        )
        summary = phase_transition_summary(run_experiment(config))
        n = summary.trials_per_cell
        for row in summary.success_rate:
            for a, b in zip(row, row[1:]):
                lo_next = wilson_interval(round(b * n), n)[0]
                hi_prev = wilson_interval(round(a * n), n)[1]
                assert lo_next <= hi_prev

    def test_concentration_summary_reports(self):
        config = ExperimentConfig(
            kind="concentration", M=30, L=15, sigmas=(0.5, 2.0), trials_per_cell=20,
            noise_kind="real",
        )
        records = run_experiment(config)
        reports = concentration_summary(records, config)
        assert len(reports) == 2
        assert reports[0].kind == "real"
        assert reports[0].trials == 20
        # Homogeneity: bounds scale linearly in sigma.
        assert reports[1].expectation_bound == pytest.approx(
            4.0 * reports[0].expectation_bound
        )

    def test_sweep_summary_slope(self):
        config = ExperimentConfig(
            kind="sigma-min-sweep",
            clump_spec=pair_spec(M=500),
            alphas=(0.5, 0.35, 0.25, 0.18, 0.12),
            trials_per_cell=1,
        )
        records = run_experiment(config)
        summary = summarize(records, config)
        assert summary["expected_slope"] == 1
        assert abs(summary["slope"] - 1.0) <= 0.3

    def test_empty_summary_rejected(self):
        with pytest.raises(ValueError):
            phase_transition_summary([])


class TestNoiseThresholdEndToEnd:
    def test_below_threshold_perturbation_and_recovery(self):
        # Calibrate the clump constant, evaluate the admissible noise level
        # for an epsilon-stable correlation function, and check that running
        # at that level keeps both the sup-norm perturbation within epsilon
        # and support recovery within alpha/(2M) in >= 90% of trials.
        from srmusic.bounds import fit_clump_constants
        from srmusic.noise import noise_threshold

        M, eps, nu = 100, 0.5, 2.0
        spec = pair_spec(M=M, alpha=0.5)
        terms = fit_clump_constants(spec, (0.5, 0.4, 0.3, 0.2, 0.1))
        sigma = noise_threshold(M, nu=nu, epsilon=eps, terms=terms)
        assert 0.001 < sigma < 1.0

        pert = ExperimentConfig(
            kind="perturbation-check",
            clump_spec=spec,
            sigmas=(sigma,),
            trials_per_cell=20,
            base_seed=2,
        )
        pert_records = run_experiment(pert)
        within_eps = [r for r in pert_records if r.sup_diff <= eps]
        assert len(within_eps) >= 18

        phase = ExperimentConfig(
            kind="phase-transition",
            clump_spec=spec,
            alphas=(0.5,),
            sigmas=(sigma,),
            trials_per_cell=20,
            base_seed=3,
        )
        phase_records = run_experiment(phase)
        assert sum(1 for r in phase_records if r.success) >= 18


class TestPerCellFailureIsolation:
    def test_error_recorded_not_raised(self, monkeypatch):
        import srmusic.harness as harness

        def boom(*args, **kwargs):
            raise np.linalg.LinAlgError("synthetic SVD failure")

        monkeypatch.setattr(harness, "music_estimate", boom)
        config = ExperimentConfig(
            kind="phase-transition",
            clump_spec=pair_spec(M=50),
            alphas=(0.5,),
            sigmas=(0.0,),
            trials_per_cell=2,
        )
        records = run_experiment(config)
        assert len(records) == 2
        assert all(not r.success for r in records)
        assert all("LinAlgError" in r.error for r in records)
