import math

import numpy as np
import pytest

from fcsim.device import CouplingGraph, DeviceModel, DriveSpec, QubitSpec
from fcsim.dynamics import (
    CollapseSet,
    IntegratorConfig,
    IntegratorError,
    collapse_set,
    effective_evolution,
    evolve_lindblad,
    evolve_unitary,
)
from fcsim.floquet import SYMMETRIC_PHASES, effective_hamiltonian, harmonic_components
from fcsim.hambuild import HamiltonianFn, interaction_hamiltonian
from fcsim.qcore import (
    DensityMatrix,
    HilbertSpace,
    Operator,
    StateVector,
    basis_state,
    expm_hermitian,
)

TWO_PI = 2.0 * math.pi


def _qubit(i, t1=1e6, t_phi=1e6, levels=2):
    return QubitSpec(id=i, omega_idle=4990.0, anharmonicity_eta=-234.0,
                     t1=t1, t_phi=t_phi, f0=1.0, f1=1.0, levels=levels)


def _pair_device(g=10.0, **kw):
    return DeviceModel((_qubit(0, **kw), _qubit(1, **kw)),
                       CouplingGraph({(0, 1): g}))


def _static_pair(g=10.0, **kw):
    device = _pair_device(g, **kw)
    drives = [DriveSpec(i, 4990.0, 0.0, 100.0, 0.0) for i in range(2)]
    return device, interaction_hamiltonian(device, drives, 4990.0)


def test_constant_hamiltonian_matches_expm():
    _, hfn = _static_pair()
    h_op = Operator(hfn.space, hfn.eval(0.0))
    psi0 = basis_state(hfn.space, "01")
    t = 0.037
    exact = expm_hermitian(h_op, t).data @ psi0.amplitudes
    for method in ("rk4", "expm"):
        series = evolve_unitary(hfn, psi0, [0.0, t],
                                IntegratorConfig(method=method, dt=1e-5),
                                keep_states=True)
        assert np.abs(series.states[-1] - exact).max() < 1e-8


def test_flip_flop_rabi():
    g = 10.0
    _, hfn = _static_pair(g)
    psi0 = basis_state(hfn.space, "01")
    ts = np.linspace(0.0, 1.0 / (4.0 * g), 11)
    series = evolve_unitary(hfn, psi0, ts, IntegratorConfig(dt=1e-5))
    assert np.allclose(series.column("01"), np.cos(TWO_PI * g * ts) ** 2, atol=1e-7)
    # full swap at t = 1/(4g)
    assert series.column("10")[-1] == pytest.approx(1.0, abs=1e-7)
    assert np.abs(series.totals - 1.0).max() < 1e-8


def test_step_guard_names_suggested_dt():
    device = _pair_device()
    drives = [DriveSpec(i, 4990.0, 138.0, 100.0, 0.0) for i in range(2)]
    hfn = interaction_hamiltonian(device, drives, 4990.0)
    with pytest.raises(IntegratorError, match="0.0005"):
        evolve_unitary(hfn, basis_state(hfn.space, "01"), [0.0, 0.1],
                       IntegratorConfig(dt=0.002))


def test_expm_agrees_with_rk4_for_driven_pair():
    device = _pair_device()
    drives = [DriveSpec(0, 4990.0, 138.0, 100.0, 0.0),
              DriveSpec(1, 4990.0, 138.0, 100.0, 2.0)]
    hfn = interaction_hamiltonian(device, drives, 4990.0)
    psi0 = basis_state(hfn.space, "01")
    ts = [0.0, 0.05, 0.1]
    a = evolve_unitary(hfn, psi0, ts, IntegratorConfig(method="rk4", dt=2e-5))
    b = evolve_unitary(hfn, psi0, ts, IntegratorConfig(method="expm", dt=2e-5))
    assert np.abs(a.values - b.values).max() < 1e-6


def test_rk4_convergence_order():
    g = 10.0
    _, hfn = _static_pair(g)
    psi0 = basis_state(hfn.space, "01")
    tf = 0.093
    exact = math.cos(TWO_PI * g * tf) ** 2
    dts = (2e-3, 1e-3, 5e-4, 2.5e-4)
    errs = [abs(evolve_unitary(hfn, psi0, [0.0, tf],
                               IntegratorConfig(dt=dt)).values[-1][1] - exact)
            for dt in dts]
    slope = float(np.polyfit(np.log(dts), np.log(errs), 1)[0])
    assert 3.7 < slope < 4.3


def test_collapse_set_operators():
    device = _pair_device(t1=20.0, t_phi=5.0)
    space = HilbertSpace((2, 2))
    cs = collapse_set(device, space)
    assert cs.labels == ("relax[0]", "dephase[0]", "relax[1]", "dephase[1]")
    relax0 = cs.ops[0]
    # sqrt(1/T1) |0><1| on site 0
    assert relax0[0, 2] == pytest.approx(math.sqrt(1.0 / 20.0))
    assert relax0[1, 3] == pytest.approx(math.sqrt(1.0 / 20.0))
    deph0 = cs.ops[1]
    assert deph0[0, 0] == pytest.approx(-math.sqrt(1.0 / 10.0))
    assert deph0[2, 2] == pytest.approx(math.sqrt(1.0 / 10.0))


def test_lindblad_pure_relaxation():
    t1 = 7.0
    device = DeviceModel((_qubit(0, t1=t1, t_phi=1e9),), CouplingGraph({}))
    drives = [DriveSpec(0, 4990.0, 0.0, 100.0, 0.0)]
    hfn = interaction_hamiltonian(device, drives, 4990.0)
    cs = collapse_set(device, hfn.space)
    rho0 = DensityMatrix(hfn.space, np.diag([0.0, 1.0]).astype(complex))
    ts = np.linspace(0.0, 5.0, 9)
    for method in ("rk4", "expm"):
        series = evolve_lindblad(hfn, rho0, cs, ts,
                                 IntegratorConfig(method=method, dt=1e-3))
        assert np.abs(series.column("1") - np.exp(-ts / t1)).max() < 1e-4


def test_lindblad_coherence_decay_rate():
    t1, t_phi = 11.0, 4.0
    device = DeviceModel((_qubit(0, t1=t1, t_phi=t_phi),), CouplingGraph({}))
    drives = [DriveSpec(0, 4990.0, 0.0, 100.0, 0.0)]
    hfn = interaction_hamiltonian(device, drives, 4990.0)
    cs = collapse_set(device, hfn.space)
    plus = np.full((2, 2), 0.5, dtype=complex)
    ts = np.linspace(0.0, 2.0, 5)
    series = evolve_lindblad(hfn, DensityMatrix(hfn.space, plus), cs, ts,
                             IntegratorConfig(dt=1e-3), keep_states=True)
    rate = 1.0 / (2.0 * t1) + 1.0 / t_phi
    coh = np.abs(series.states[:, 0, 1])
    assert np.abs(coh - 0.5 * np.exp(-rate * ts)).max() < 1e-5


def test_lindblad_zero_rate_matches_unitary():
    device = _pair_device()
    drives = [DriveSpec(0, 4990.0, 138.0, 100.0, 0.0),
              DriveSpec(1, 4990.0, 138.0, 100.0, 1.0)]
    hfn = interaction_hamiltonian(device, drives, 4990.0)
    cs = collapse_set(device, hfn.space)
    psi0 = basis_state(hfn.space, "01")
    rho0 = DensityMatrix(hfn.space, np.outer(psi0.amplitudes,
                                             psi0.amplitudes.conj()))
    ts = [0.0, 0.05, 0.1]
    u = evolve_unitary(hfn, psi0, ts, IntegratorConfig(dt=2e-5))
    l = evolve_lindblad(hfn, rho0, cs, ts, IntegratorConfig(dt=2e-5),
                        keep_states=True)
    assert np.abs(u.values - l.values).max() < 1e-6
    # trace preserved and state stays positive
    traces = np.einsum("tii->t", l.states).real
    assert np.abs(traces - 1.0).max() < 1e-6
    assert min(np.linalg.eigvalsh(l.states[-1])) > -1e-9


def test_effective_evolution_permutes_basis_states():
    series_h = harmonic_components(12.7, 138.85, 100.0)
    report = effective_hamiltonian(series_h)
    kappa = report.kappa
    t_step = 1.0 / (6.0 * math.sqrt(3.0) * kappa)
    space = report.h_eff.space
    psi0 = basis_state(space, "001")
    ts = [0.0, t_step, 2.0 * t_step, 3.0 * t_step]
    out = effective_evolution(report.h_eff, psi0, ts, keep_states=True)
    # cyclic permutation |001> -> |100> -> |010> -> |001>
    for k, label in enumerate(("001", "100", "010", "001")):
        target = basis_state(space, label).amplitudes
        fid = abs(np.vdot(target, out.states[k])) ** 2
        # small non-chirality remainder in h_eff bounds the fidelity
        assert fid > 1.0 - 1e-4
    # single vacancy circulates in the same direction
    psi0 = basis_state(space, "011")
    out = effective_evolution(report.h_eff, psi0, ts)
    for k, label in enumerate(("011", "101", "110", "011")):
        assert out.column(label)[k] == pytest.approx(1.0, abs=1e-4)


def test_effective_evolution_rejects_nonhermitian():
    space = HilbertSpace((2,))
    bad = Operator(space, np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))
    with pytest.raises(Exception):
        effective_evolution(bad, basis_state(space, "0"), [0.0, 1.0])
