"""Time evolution: unitary propagation under time-dependent Hamiltonians and
Lindblad open-system propagation with T1/T_phi channels.

Both integrators work on an output grid (default 2 ns sampling), subdividing
each output interval into fixed steps of at most cfg.dt.  The fixed-step
method is classical 4th order ('rk4'); 'expm' steps with the exact
exponential of the midpoint Hamiltonian, which preserves the norm exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .device import DeviceModel
from .hambuild import HamiltonianFn
from .qcore import DensityMatrix, HilbertSpace, Operator, QcoreError, StateVector, embed

__all__ = [
    "IntegratorConfig",
    "IntegratorError",
    "CollapseSet",
    "TimeSeries",
    "collapse_set",
    "evolve_unitary",
    "evolve_lindblad",
    "effective_evolution",
]


class IntegratorError(ValueError):
    pass


@dataclass(frozen=True)
class IntegratorConfig:
    """method 'rk4' (fixed-step 4th order) or 'expm' (piecewise exponential);
    dt in us; tolerance is the target local population error."""

    method: str = "rk4"
    dt: float = 5e-5
    tolerance: float = 1e-6

    def __post_init__(self):
        if self.method not in ("rk4", "expm"):
            raise IntegratorError(f"unknown integrator method {self.method!r}")
        if self.dt <= 0:
            raise IntegratorError("dt must be positive")


def _check_step(cfg: IntegratorConfig, hfn: HamiltonianFn):
    """Enforce at least 20 steps per modulation period."""
    if hfn.period is not None and cfg.dt > hfn.period / 20.0 + 1e-15:
        raise IntegratorError(
            f"dt = {cfg.dt:g} us undersamples the drive period "
            f"{hfn.period:g} us; use dt <= {hfn.period / 20.0:g}"
        )


@dataclass(frozen=True)
class TimeSeries:
    """Populations (and optionally state snapshots) on a time grid."""

    times: np.ndarray          # us
    labels: tuple              # basis-state strings
    values: np.ndarray         # (n_times, n_labels) populations
    states: np.ndarray = None  # (n_times, dim) or (n_times, dim, dim)

    def column(self, label: str) -> np.ndarray:
        return self.values[:, self.labels.index(label)]

    @property
    def totals(self) -> np.ndarray:
        return self.values.sum(axis=1)


@dataclass(frozen=True)
class CollapseSet:
    """Embedded full-space collapse operators (rad-free; rates in 1/us)."""

    space: HilbertSpace
    ops: tuple       # of np.ndarray
    labels: tuple    # e.g. 'relax10[1]', 'dephase[2]'

    def rate_sum(self) -> np.ndarray:
        """sum_c c^dag c, used in the anticommutator term."""
        total = np.zeros((self.space.total_dim,) * 2, dtype=complex)
        for c in self.ops:
            total += c.conj().T @ c
        return total


def collapse_set(device: DeviceModel, space: HilbertSpace) -> CollapseSet:
    """T1 relaxation and pure dephasing channels for every qubit.

    Relaxation: sqrt(1/T1)|0><1| (plus sqrt(2/T1)|1><2| on 3-level sites).
    Dephasing: sqrt(1/(2 T_phi)) d, with d = 2n - 1 in the excitation-number
    operator n, so the 0-1 coherence decays at exactly 1/T_phi (identity
    shifts of a Hermitian collapse operator leave the dissipator unchanged).
    """
    if space.n_sites != device.n_qubits:
        raise QcoreError("space does not match the device qubit count")
    ops, labels = [], []
    for i, q in enumerate(device.qubits):
        dim = space.site_dims[i]
        relax = np.zeros((dim, dim), dtype=complex)
        relax[0, 1] = math.sqrt(1.0 / q.t1)
        if dim == 3:
            relax[1, 2] = math.sqrt(2.0 / q.t1)
        ops.append(embed(relax, i, space).data)
        labels.append(f"relax[{q.id}]")
        n_op = np.diag(np.arange(dim, dtype=float))
        deph = math.sqrt(1.0 / (2.0 * q.t_phi)) * (2.0 * n_op - np.eye(dim))
        ops.append(embed(deph.astype(complex), i, space).data)
        labels.append(f"dephase[{q.id}]")
    return CollapseSet(space, tuple(ops), tuple(labels))


# ---------------------------------------------------------------------------
# propagation
# ---------------------------------------------------------------------------

def _interval_nodes(t0: float, t1: float, dt: float):
    """Substep count n and the 2n+1 RK4 node times covering [t0, t1]."""
    span = t1 - t0
    n = max(1, int(math.ceil(span / dt - 1e-12)))
    nodes = t0 + np.arange(2 * n + 1) * (span / n / 2.0)
    return n, span / n, nodes


def _expm_step(h: np.ndarray, dt: float) -> np.ndarray:
    evals, vecs = np.linalg.eigh((h + h.conj().T) / 2.0)
    return (vecs * np.exp(-1j * evals * dt)) @ vecs.conj().T


def evolve_unitary(hfn: HamiltonianFn, psi0: StateVector, t_grid,
                   cfg: IntegratorConfig = IntegratorConfig(),
                   keep_states: bool = False) -> TimeSeries:
    """Propagate a pure state on the output grid t_grid (us)."""
    _check_step(cfg, hfn)
    t_grid = np.asarray(t_grid, dtype=float)
    psi = psi0.amplitudes.astype(complex).copy()
    values = np.empty((len(t_grid), hfn.space.total_dim))
    states = np.empty((len(t_grid), hfn.space.total_dim), dtype=complex) if keep_states else None
    values[0] = np.abs(psi) ** 2
    if keep_states:
        states[0] = psi
    for k in range(len(t_grid) - 1):
        n, h, nodes = _interval_nodes(t_grid[k], t_grid[k + 1], cfg.dt)
        hs = hfn.batch(nodes)
        if cfg.method == "rk4":
            for s in range(n):
                h1, h2, h3 = hs[2 * s], hs[2 * s + 1], hs[2 * s + 2]
                k1 = -1j * (h1 @ psi)
                k2 = -1j * (h2 @ (psi + 0.5 * h * k1))
                k3 = -1j * (h2 @ (psi + 0.5 * h * k2))
                k4 = -1j * (h3 @ (psi + h * k3))
                psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        else:
            for s in range(n):
                psi = _expm_step(hs[2 * s + 1], h) @ psi
        values[k + 1] = np.abs(psi) ** 2
        if keep_states:
            states[k + 1] = psi
    return TimeSeries(t_grid, hfn.space.labels(), values, states=states)


def _lindblad_rhs(h, rho, cops, rate_sum):
    out = -1j * (h @ rho - rho @ h)
    out -= rate_sum @ rho + rho @ rate_sum
    for c in cops:
        out += c @ rho @ c.conj().T
    return out


def evolve_lindblad(hfn: HamiltonianFn, rho0: DensityMatrix, collapse: CollapseSet,
                    t_grid, cfg: IntegratorConfig = IntegratorConfig(),
                    keep_states: bool = False) -> TimeSeries:
    """Propagate drho/dt = -i[H, rho] + sum_c (c rho c+ - 1/2 {c+c, rho})."""
    _check_step(cfg, hfn)
    if collapse.space.site_dims != hfn.space.site_dims:
        raise QcoreError("collapse operators live on a different space")
    t_grid = np.asarray(t_grid, dtype=float)
    rho = rho0.data.astype(complex).copy()
    cops = collapse.ops
    rate_sum = collapse.rate_sum() / 2.0
    dim = hfn.space.total_dim
    values = np.empty((len(t_grid), dim))
    states = np.empty((len(t_grid), dim, dim), dtype=complex) if keep_states else None
    values[0] = np.real(np.diag(rho))
    if keep_states:
        states[0] = rho
    for k in range(len(t_grid) - 1):
        n, h, nodes = _interval_nodes(t_grid[k], t_grid[k + 1], cfg.dt)
        hs = hfn.batch(nodes)
        if cfg.method == "rk4":
            for s in range(n):
                h1, h2, h3 = hs[2 * s], hs[2 * s + 1], hs[2 * s + 2]
                k1 = _lindblad_rhs(h1, rho, cops, rate_sum)
                k2 = _lindblad_rhs(h2, rho + 0.5 * h * k1, cops, rate_sum)
                k3 = _lindblad_rhs(h2, rho + 0.5 * h * k2, cops, rate_sum)
                k4 = _lindblad_rhs(h3, rho + h * k3, cops, rate_sum)
                rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        else:
            # exact unitary midpoint step followed by a first-order
            # dissipative half-step on each side (Strang splitting)
            for s in range(n):
                rho = _dissipate(rho, cops, rate_sum, h / 2.0)
                u = _expm_step(hs[2 * s + 1], h)
                rho = u @ rho @ u.conj().T
                rho = _dissipate(rho, cops, rate_sum, h / 2.0)
        values[k + 1] = np.real(np.diag(rho))
        if keep_states:
            states[k + 1] = rho
    return TimeSeries(t_grid, hfn.space.labels(), values, states=states)


def _dissipate(rho, cops, rate_sum, dt):
    d = np.zeros_like(rho)
    for c in cops:
        d += c @ rho @ c.conj().T
    d -= rate_sum @ rho + rho @ rate_sum
    return rho + dt * d


def effective_evolution(h_eff: Operator, psi0: StateVector, t_grid,
                        keep_states: bool = False) -> TimeSeries:
    """Exact evolution under a time-independent Hermitian Hamiltonian."""
    dev = h_eff.herm_deviation()
    if dev > 1e-9:
        raise QcoreError(f"h_eff is not Hermitian (deviation {dev:.3g})")
    t_grid = np.asarray(t_grid, dtype=float)
    evals, vecs = np.linalg.eigh(h_eff.data)
    coeffs = vecs.conj().T @ psi0.amplitudes
    phases = np.exp(-1j * np.outer(t_grid, evals))
    states = np.einsum("dk,tk,k->td", vecs, phases, coeffs)
    values = np.abs(states) ** 2
    return TimeSeries(t_grid, h_eff.space.labels(), values,
                      states=states if keep_states else None)
