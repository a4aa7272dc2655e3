import math

import numpy as np
import pytest

from fcsim.acceptance import reference_device
from fcsim.device import CouplingGraph, DeviceModel, DriveSpec, QubitSpec
from fcsim.dynamics import IntegratorConfig, evolve_unitary
from fcsim.experiments import (
    ConfusionModel,
    ExperimentError,
    PulseSequence,
    TimeSeries,
    apply_readout,
    calibrate,
    chiral_experiment,
    circulation_metrics,
    correct_readout,
    extract_geff,
    run_sequence,
    scan_delta_single,
    scan_dphi,
    write_csv,
)
from fcsim.floquet import pairwise_geff, single_mod_geff
from fcsim.hambuild import interaction_hamiltonian
from fcsim.qcore import basis_state

TWO_PI = 2.0 * math.pi


def _qubit(i, f0=0.98, f1=0.94):
    return QubitSpec(id=i, omega_idle=4990.0, anharmonicity_eta=-234.0,
                     t1=1e6, t_phi=1e6, f0=f0, f1=f1, levels=2)


def _pair_device(g=12.7):
    return DeviceModel((_qubit(0), _qubit(1)), CouplingGraph({(0, 1): g}))


# ---------------------------------------------------------------------------
# readout model
# ---------------------------------------------------------------------------

def test_confusion_from_device():
    model = ConfusionModel.from_device(reference_device())
    m0 = model.matrices[0]
    assert m0[0, 0] == pytest.approx(0.984)
    assert m0[1, 1] == pytest.approx(0.939)
    assert np.allclose(m0.sum(axis=0), 1.0)


def test_apply_readout_single_qubit():
    device = reference_device().subdevice((0,))
    model = ConfusionModel.from_device(device)
    measured = apply_readout([0.0, 1.0], model)
    assert measured[1] == pytest.approx(0.939)
    assert measured[0] == pytest.approx(0.061)


def test_apply_readout_matches_explicit_kron():
    model = ConfusionModel.from_device(reference_device())
    rng = np.random.default_rng(5)
    p = rng.dirichlet(np.ones(8))
    expected = np.kron(np.kron(model.matrices[0], model.matrices[1]),
                       model.matrices[2]) @ p
    assert np.allclose(apply_readout(p, model), expected, atol=1e-12)


def test_readout_roundtrip_and_fixed_point():
    model = ConfusionModel.from_device(reference_device())
    rng = np.random.default_rng(7)
    p = rng.dirichlet(np.ones(8))
    assert np.abs(correct_readout(apply_readout(p, model), model) - p).max() < 1e-10
    # symmetric confusion leaves the uniform distribution invariant
    sym = ConfusionModel(tuple(np.array([[0.9, 0.1], [0.1, 0.9]])
                               for _ in range(2)))
    uniform = np.full(4, 0.25)
    assert np.allclose(apply_readout(uniform, sym), uniform)


def test_correct_readout_clipping_paths():
    model = ConfusionModel(
        (np.array([[0.9, 0.1], [0.1, 0.9]]),))
    # slightly negative after inversion -> clipped and renormalized
    out = correct_readout([0.08, 0.92], model)
    assert out.min() >= 0.0
    assert out.sum() == pytest.approx(1.0)
    # strongly inconsistent data raises
    with pytest.raises(ExperimentError, match="clipping"):
        correct_readout([-0.2, 1.2], model)


def test_confusion_validation():
    with pytest.raises(ExperimentError, match="sum to 1"):
        ConfusionModel((np.array([[0.9, 0.2], [0.2, 0.9]]),))
    with pytest.raises(ExperimentError, match="invertible"):
        ConfusionModel((np.full((2, 2), 0.5),))


# ---------------------------------------------------------------------------
# Fourier extraction
# ---------------------------------------------------------------------------

def _synthetic_series(freq, n=256, dt=0.004, amp=0.5, offset=0.5):
    ts = np.arange(n) * dt
    vals = offset + amp * np.cos(TWO_PI * freq * ts)
    return TimeSeries(ts, ("01",), vals[:, None])


def test_extract_geff_synthetic_tone():
    # population oscillates at 2 g_eff
    g = extract_geff(_synthetic_series(20.0))
    assert g == pytest.approx(10.0, abs=0.2)


def test_extract_geff_invariances_and_zero():
    base = extract_geff(_synthetic_series(20.0))
    shifted = extract_geff(_synthetic_series(20.0, amp=0.2, offset=0.7))
    assert shifted == pytest.approx(base, abs=1e-6)
    assert extract_geff(_synthetic_series(0.0)) == 0.0


def test_extract_geff_needs_enough_points():
    with pytest.raises(ExperimentError, match="64"):
        extract_geff(_synthetic_series(20.0, n=40))


# ---------------------------------------------------------------------------
# sequences
# ---------------------------------------------------------------------------

def test_run_sequence_prep_only():
    device = _pair_device()
    seq = PulseSequence(prep=((1, 1),),
                        drives=tuple(DriveSpec(i, 4990.0, 0.0, 100.0, 0.0)
                                     for i in range(2)),
                        duration=0.0)
    series = run_sequence(device, seq)
    assert series.column("01")[0] == pytest.approx(1.0)


def test_run_sequence_matches_direct_evolution():
    device = _pair_device()
    drives = tuple(DriveSpec(i, 4990.0, 138.0, 100.0, 0.5 * i) for i in range(2))
    seq = PulseSequence(prep=((1, 1),), drives=drives, duration=0.1)
    series = run_sequence(device, seq)
    hfn = interaction_hamiltonian(device, drives, 4990.0)
    direct = evolve_unitary(hfn, basis_state(hfn.space, "01"), series.times,
                            IntegratorConfig())
    assert np.abs(series.values - direct.values).max() < 1e-12


def test_run_sequence_validation():
    device = _pair_device()
    drives = tuple(DriveSpec(i, 4990.0, 0.0, 100.0, 0.0) for i in range(2))
    with pytest.raises(ExperimentError, match="unknown qubit"):
        run_sequence(device, PulseSequence(prep=((7, 1),), drives=drives,
                                           duration=0.0))
    with pytest.raises(ExperimentError, match="shots"):
        run_sequence(device, PulseSequence(prep=(), drives=drives,
                                           duration=0.0), shots=0)
    with pytest.raises(ExperimentError, match="noise"):
        run_sequence(device, PulseSequence(prep=(), drives=drives,
                                           duration=0.0), noise="thermal")


def test_shot_sampling_statistics():
    device = _pair_device(g=5.0)
    drives = tuple(DriveSpec(i, 4990.0, 0.0, 100.0, 0.0) for i in range(2))
    # quarter swap leaves P01 = 0.5
    seq = PulseSequence(prep=((1, 1),), drives=drives, duration=1.0 / (8.0 * 5.0))
    exact = run_sequence(device, seq, t_step=1.0 / (8.0 * 5.0))
    p = exact.column("01")[-1]
    assert p == pytest.approx(0.5, abs=1e-6)
    shots = 3000
    samples = [run_sequence(device, seq, shots=shots, seed=s,
                            t_step=1.0 / (8.0 * 5.0)).column("01")[-1]
               for s in range(5)]
    sigma = math.sqrt(p * (1 - p) / shots)
    spread = np.std(samples)
    assert spread < 4.0 * sigma
    assert abs(np.mean(samples) - p) < 4.0 * sigma
    # deterministic for a fixed seed
    again = run_sequence(device, seq, shots=shots, seed=0,
                         t_step=1.0 / (8.0 * 5.0)).column("01")[-1]
    assert again == samples[0]


# ---------------------------------------------------------------------------
# scans
# ---------------------------------------------------------------------------

def test_scan_dphi_matches_bessel_envelope():
    device = _pair_device()
    delta, nu = 138.0, 100.0
    grid = np.array([0.0, TWO_PI / 3.0, math.pi, 2.0 * TWO_PI / 3.0])
    scan = scan_dphi(device, delta, nu, grid, t_max=1.0)
    analytic = np.abs([pairwise_geff(12.7, delta, nu, d) for d in grid])
    # decoupled at 2pi/3 and 4pi/3
    assert scan.geff[1] == 0.0
    assert scan.geff[3] == 0.0
    assert scan.geff[0] == pytest.approx(analytic[0], rel=0.03)
    # symmetric about pi
    assert scan.geff[1] == pytest.approx(scan.geff[3], abs=0.05)


def test_scan_delta_single_small_amplitude():
    device = _pair_device()
    scan = scan_delta_single(device, 100.0, np.array([20.0, 60.0]), t_max=1.0)
    for d, g in zip(scan.axis, scan.geff):
        assert g == pytest.approx(abs(single_mod_geff(12.7, d, 100.0)), rel=0.03)


def test_scan_axis_must_be_monotone():
    device = _pair_device()
    with pytest.raises(ExperimentError, match="monotone"):
        scan_dphi(device, 138.0, 100.0, np.array([1.0, 0.5]))


# ---------------------------------------------------------------------------
# chiral circulation
# ---------------------------------------------------------------------------

def test_chiral_single_circulates():
    device = reference_device()
    series = chiral_experiment(device, "single", t_max=0.8)
    m = circulation_metrics(series, ("001", "100", "010"))
    t = m["first_max_time"]
    assert t["100"] < t["010"] < t["001"]
    assert min(m["first_max_height"].values()) > 0.6


def test_chiral_double_warns_at_two_levels():
    device = reference_device()
    with pytest.warns(UserWarning, match="two-level"):
        chiral_experiment(device, "double", levels=2, t_max=0.02)


def test_chiral_rejects_bad_args():
    device = reference_device()
    with pytest.raises(ExperimentError, match="excitation"):
        chiral_experiment(device, "triple")
    with pytest.raises(ExperimentError, match="three"):
        chiral_experiment(device.subdevice((0, 1)), "single")


# ---------------------------------------------------------------------------
# calibration
# ---------------------------------------------------------------------------

def test_calibrate_steps_ab():
    result = calibrate(reference_device(), steps="AB")
    # decoupling amplitude near 2.4048 nu (the exact dynamics zero sits a
    # couple of MHz below the first-order estimate)
    assert abs(result["delta"] - 240.5) < 3.0
    assert abs(result["dphi"] - TWO_PI / 3.0) < 0.02
    assert result["delta_pair"] == pytest.approx(result["delta"] / math.sqrt(3.0))


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def test_write_csv_format_and_determinism(tmp_path):
    cols = {"x": np.array([1.0, 2.0]), "y": np.array([0.123456789123, 4.0])}
    meta = {"experiment": "demo", "nu_mhz": 100}
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(p1, meta, cols)
    write_csv(p2, meta, cols)
    text = p1.read_text()
    assert text.splitlines()[0] == "# experiment=demo"
    assert "x,y" in text
    assert "0.123456789" in text
    assert p1.read_bytes() == p2.read_bytes()
    with pytest.raises(ExperimentError, match="equal length"):
        write_csv(p1, {}, {"x": [1.0], "y": [1.0, 2.0]})
