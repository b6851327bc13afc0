"""Smoke tests for the python bindings: a few exact oracles and one tiny
end-to-end run. The heavy statistical checks live in the C++ suites."""

import math

import pytest

import wigrec


def test_alternating_sum_matches_closed_form():
    for mu in (0.0, 0.25, 1.0, 4.0):
        hist = wigrec.poisson_histogram(mu)
        w = wigrec.wigner_from_hist(hist, wigrec.ComplexAmplitude(0.0, 0.0))
        assert w.value == pytest.approx(
            (2.0 / math.pi) * math.exp(-2.0 * mu), abs=1e-10
        )


def test_thinning_keeps_poisson():
    thinned = wigrec.bernoulli_convolve(wigrec.poisson_histogram(2.0), 0.5)
    direct = wigrec.poisson_histogram(1.0)
    for a, b in zip(thinned.probs, direct.probs):
        assert a == pytest.approx(b, abs=1e-10)


def test_overlap_from_visibility():
    est = wigrec.overlap_from_visibility(0.87)
    assert est.xi == pytest.approx(0.7699, abs=1e-4)
    with pytest.raises(Exception):
        wigrec.overlap_from_visibility(1.5)


def test_fringe_inversion_cosine_convention():
    # the darkest step is in phase with the signal
    fringe = wigrec.analyze_fringe([3.0, 2.0, 1.0, 2.0, 3.0])
    assert fringe.visibility == pytest.approx(0.5)
    assert fringe.cosines == pytest.approx([-1.0, 0.0, 1.0, 0.0, -1.0])
    assert fringe.phases[2] == pytest.approx(0.0)
    assert fringe.phases[0] == pytest.approx(math.pi)


def test_rebin_exact_multiples():
    hist = wigrec.rebin([0.0, 0.1, 0.1, 0.2], 0.1)
    assert hist.probs == pytest.approx([0.25, 0.5, 0.25])
    assert hist.mean == pytest.approx(1.0)


def test_errors_are_typed():
    with pytest.raises(wigrec.InsufficientDataError):
        wigrec.analyze_fringe([1.0])
    with pytest.raises(wigrec.NoFringeError):
        wigrec.analyze_fringe([1.0, 1.0, 1.0])


def test_end_to_end_roundtrip(tmp_path):
    cfg = wigrec.ExperimentConfig()
    cfg.signal_amplitude = wigrec.ComplexAmplitude(0.5, 0.0)
    cfg.probe_intensities = [0.25]
    cfg.phase_steps = 8
    cfg.eta_values = [0.31 * (12 - j) / 12 for j in range(12)]
    cfg.shots_per_point = 2000
    cfg.rng_seed = 5
    cfg.validate()

    run = tmp_path / "run"
    wigrec.simulate_run(cfg, run, workers=2)
    assert (run / "manifest.json").is_file()

    result = wigrec.analyze_run(run)
    assert result.report.cells_total == 8
    assert not result.report.calibration_dominated
    assert result.report.gamma_mean == pytest.approx(0.1, rel=0.1)
    assert 0.0 < result.report.v_max <= 1.0
    assert math.isfinite(result.report.beta0_fit)

    files = wigrec.write_analysis(result, run)
    assert "analysis/report.json" in files
    written = wigrec.write_report_files(run)
    assert "report/summary.txt" in written
    assert (run / "report" / "summary.txt").is_file()


def test_dataset_io_roundtrip(tmp_path):
    cfg = wigrec.ExperimentConfig()
    cfg.signal_amplitude = wigrec.ComplexAmplitude(0.3, 0.1)
    cfg.probe_intensities = [0.2]
    cfg.phase_steps = 3
    cfg.eta_values = [0.31, 0.1]
    cfg.shots_per_point = 4
    data = wigrec.generate_dataset(cfg)
    wigrec.write_dataset(data, tmp_path / "ds")
    back = wigrec.read_dataset(tmp_path / "ds")
    assert back.cell(0, 2, 1) == data.cell(0, 2, 1)
    # the ground-truth sidecar is not loaded by the analysis-facing reader
    assert back.true_phases == []
    assert wigrec.read_true_phases(tmp_path / "ds") == pytest.approx(
        data.true_phases
    )
