import math

import numpy as np
import pytest

from fcsim.device import DriveSpec
from fcsim.floquet import (
    SYMMETRIC_PHASES,
    BranchCutWarning,
    ResonanceError,
    bessel_j,
    beta_series,
    chirality_strength_exact,
    effective_hamiltonian,
    effective_hamiltonian_anharmonic,
    harmonic_components,
    kappa_prime,
    pairwise_geff,
    pairwise_geff_exact,
    period_propagator_log,
    single_mod_geff,
    _uniform_drive_device,
)
from fcsim.hambuild import (
    HamiltonianFn,
    chirality_operator,
    interaction_hamiltonian,
    symmetric_exchange,
    total_sz,
)
from fcsim.qcore import HilbertSpace

TWO_PI = 2.0 * math.pi


def _bessel_power_series(n, x):
    # direct defining series, adequate for small orders/arguments
    total = 0.0
    for m in range(60):
        total += (-1.0) ** m * (x / 2.0) ** (n + 2 * m) / (
            math.factorial(m) * math.factorial(n + m))
    return total


@pytest.mark.parametrize("n", [0, 1, 2, 3, 5, 8, 12])
@pytest.mark.parametrize("x", [0.0, 0.3, 1.0, 2.4048255577, 5.5, 12.0])
def test_bessel_against_power_series(n, x):
    assert bessel_j(n, x) == pytest.approx(_bessel_power_series(n, x), abs=1e-10)


def test_bessel_symmetries_and_zero():
    assert abs(bessel_j(0, 2.4048255577)) < 1e-9
    # J_{-n}(x) = (-1)^n J_n(x); J_n(-x) = (-1)^n J_n(x)
    assert bessel_j(-3, 1.7) == pytest.approx(-bessel_j(3, 1.7), abs=1e-12)
    assert bessel_j(2, -1.7) == pytest.approx(bessel_j(2, 1.7), abs=1e-12)
    assert bessel_j(3, -1.7) == pytest.approx(-bessel_j(3, 1.7), abs=1e-12)


def test_bessel_domain_guards():
    with pytest.raises(ValueError):
        bessel_j(65, 1.0)
    with pytest.raises(ValueError):
        bessel_j(0, 51.0)


def test_geff_formulas():
    g, delta, nu = 12.7, 138.0, 100.0
    assert single_mod_geff(g, delta, nu) == pytest.approx(g * bessel_j(0, 1.38))
    dphi = TWO_PI / 3.0
    a = 2.0 * math.sin(dphi / 2.0) * delta / nu
    assert pairwise_geff(g, delta, nu, dphi) == pytest.approx(g * bessel_j(0, a))
    # decoupling when sqrt(3) f hits the first J0 zero
    delta_star = 2.4048255577 * nu / math.sqrt(3.0)
    assert abs(pairwise_geff(g, delta_star, nu, dphi)) < 1e-8


def test_beta_series_value_and_convergence():
    f = 138.85 / 100.0
    assert beta_series(f) == pytest.approx(0.31315343355427866, abs=1e-12)
    assert abs(beta_series(f, n_max=12) - beta_series(f, n_max=40)) < 1e-10


def test_harmonics_pair_up():
    series = harmonic_components(12.7, 138.85, 100.0)
    assert series.pairing_deviation() < 1e-12


def test_harmonics_match_fourier_integral():
    g, delta, nu = 12.7, 138.85, 100.0
    device = _uniform_drive_device(3, g)
    omega0 = device.qubits[0].omega_idle
    drives = [DriveSpec(j, omega0, delta, nu, SYMMETRIC_PHASES[j])
              for j in range(3)]
    hfn = interaction_hamiltonian(device, drives, omega0, zero_phase_at_t0=False)
    series = harmonic_components(g, delta, nu)
    period = 1.0 / nu
    ts = np.linspace(0.0, period, 4096, endpoint=False)
    hs = hfn.batch(ts)
    for n in (0, 1, 2):
        phase = np.exp(-1j * n * TWO_PI * nu * ts)
        hn = np.tensordot(phase, hs, axes=(0, 0)) / len(ts)
        assert np.abs(hn - series.components[n].data).max() < 1e-8


def test_effective_hamiltonian_kappa():
    series = harmonic_components(12.7, 138.85, 100.0)
    report = effective_hamiltonian(series)
    assert report.kappa == pytest.approx(0.5050851729796959, abs=1e-6)
    assert report.beta == pytest.approx(0.31315343355427866, abs=1e-8)
    assert report.chi_projection_residual < 1e-12
    # near the pairwise decoupling point H_0 is strongly suppressed
    assert np.abs(report.h0.data).max() < 0.05
    exact = harmonic_components(12.7, 2.4048255577 * 100.0 / math.sqrt(3.0), 100.0)
    assert np.abs(effective_hamiltonian(exact).h0.data).max() < 1e-6


def test_kappa_prime_value_and_resonance():
    kp = kappa_prime(12.7, 1.38, 100.0, -234.0)
    assert kp == pytest.approx(-0.31521418851249816 + 1.7457080202997588j,
                               abs=1e-10)
    with pytest.raises(ResonanceError, match="n=2"):
        kappa_prime(12.7, 1.38, 100.0, -200.0)


def test_anharmonic_effective_structure():
    report = effective_hamiltonian_anharmonic(12.7, 1.38, 100.0, -234.0)
    lam = report.kappa_prime.imag
    assert report.kappa_double == pytest.approx(report.kappa + lam / 2.0)
    h = report.h_eff.data
    space = HilbertSpace((2, 2, 2))
    sz = total_sz(space).data
    assert np.abs(h @ sz - sz @ h).max() < 1e-10
    # sector chirality strengths: kappa in single excitation, kappa_double in double
    chi = chirality_operator(space).data
    for proj_val, expect in ((-0.5, report.kappa), (0.5, report.kappa_double)):
        mask = np.isclose(np.diag(sz), proj_val)
        hp = h[np.ix_(mask, mask)]
        cp = chi[np.ix_(mask, mask)]
        coeff = np.real(np.vdot(cp, hp) / np.vdot(cp, cp)) / TWO_PI
        assert coeff == pytest.approx(expect, abs=1e-10)


def _constant_hfn(h):
    space = HilbertSpace((2,))
    return HamiltonianFn(space=space, eval=lambda t: h, period=None)


def test_period_propagator_log_constant_roundtrip():
    h = np.array([[1.0, 0.4], [0.4, -1.0]]) * TWO_PI * 3.0
    hf = period_propagator_log(_constant_hfn(h), nu=100.0, n_steps=400)
    assert np.abs(hf.data - h).max() < 1e-6


def test_period_propagator_branch_cut_warning():
    # eigenphases +/- pi over one period
    nu = 100.0
    h = np.diag([math.pi * nu, -math.pi * nu])
    with pytest.warns(BranchCutWarning):
        period_propagator_log(_constant_hfn(h), nu=nu, n_steps=1000)


def test_exact_chirality_close_to_second_order():
    kappa, residual = chirality_strength_exact(12.7, 138.85, 100.0, n_steps=2000)
    assert kappa == pytest.approx(0.5050851729796959, rel=0.10)
    assert residual < 0.3


def test_exact_pairwise_matches_bessel():
    # small g keeps higher-order Floquet corrections (~ g^3 / nu^2) negligible
    g, delta, nu = 5.0, 100.0, 100.0
    exact = pairwise_geff_exact(g, delta, nu, math.pi, n_steps=2000)
    analytic = abs(pairwise_geff(g, delta, nu, math.pi))
    assert exact == pytest.approx(analytic, rel=0.05)
