"""Hamiltonian builders: lab frame, rotating frame, interaction picture,
and the three-spin chirality operator.

All returned Hamiltonians are in angular units (rad/us); device frequencies
are linear MHz and get their 2*pi here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .device import DeviceModel, DriveSpec, frequency_at
from .qcore import (
    SIGMA_M,
    SIGMA_P,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    HilbertSpace,
    Operator,
    QcoreError,
    embed,
)

__all__ = [
    "HamiltonianFn",
    "lab_hamiltonian_2level",
    "lab_hamiltonian_3level",
    "rotating_hamiltonian_3level",
    "interaction_hamiltonian",
    "drive_phase_integral",
    "frame_gauge_phases",
    "chirality_operator",
    "symmetric_exchange",
    "total_sz",
]

TWO_PI = 2.0 * math.pi

# three-level lowering operators |0><1| and |1><2|
LOWER_10 = np.zeros((3, 3), dtype=complex)
LOWER_10[0, 1] = 1.0
LOWER_21 = np.zeros((3, 3), dtype=complex)
LOWER_21[1, 2] = 1.0


@dataclass(frozen=True)
class HamiltonianFn:
    """Time-dependent Hamiltonian H(t) in rad/us; eval is pure and reentrant.

    eval_batch(ts) -> (len(ts), dim, dim), when provided, lets integrators
    precompute H on a chunk of grid times with vectorized numpy instead of a
    python loop per step."""

    space: HilbertSpace
    eval: callable
    period: float = None   # us; set when H(t + period) == H(t)
    eval_batch: callable = None

    def batch(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        if self.eval_batch is not None:
            return self.eval_batch(ts)
        return np.stack([self.eval(t) for t in ts])

    def __call__(self, t: float) -> np.ndarray:
        return self.eval(t)

    def as_operator(self, t: float) -> Operator:
        return Operator(self.space, self.eval(t))


def _sorted_drives(device: DeviceModel, drives) -> list:
    by_qubit = {}
    for d in drives:
        if d.qubit in by_qubit:
            raise QcoreError(f"duplicate drive for qubit {d.qubit}")
        device.qubit(d.qubit)  # raises on unknown id
        by_qubit[d.qubit] = d
    missing = [q.id for q in device.qubits if q.id not in by_qubit]
    if missing:
        raise QcoreError(f"missing DriveSpec for qubits {missing}")
    return [by_qubit[q.id] for q in device.qubits]


def _common_period(drives) -> float:
    nus = {d.nu for d in drives if d.delta != 0.0}  # delta=0 drives are constant
    return 1.0 / nus.pop() if len(nus) == 1 else None


def lab_hamiltonian_2level(device: DeviceModel, drives) -> HamiltonianFn:
    """H(t) = sum_j 2pi w_j(t) n_j + sum_(jk) 2pi g_jk (s+_j s-_k + h.c.)."""
    drv = _sorted_drives(device, drives)
    space = HilbertSpace(tuple(2 for _ in device.qubits))
    number_diags = [np.diag(embed(np.diag([0.0, 1.0]), i, space).data).real
                    for i in range(space.n_sites)]
    idx = {q.id: i for i, q in enumerate(device.qubits)}
    coupling = np.zeros((space.total_dim,) * 2, dtype=complex)
    for (a, b), g in device.couplings.pairs():
        hop = (embed(SIGMA_P, idx[a], space) @ embed(SIGMA_M, idx[b], space)).data
        coupling += TWO_PI * g * (hop + hop.conj().T)

    def evaluate(t):
        diag = np.zeros(space.total_dim)
        for i, d in enumerate(drv):
            diag += TWO_PI * frequency_at(d, t) * number_diags[i]
        return coupling + np.diag(diag)

    return HamiltonianFn(space, evaluate, period=_common_period(drv))


def _three_level_coupling(device: DeviceModel, space: HilbertSpace) -> np.ndarray:
    """Static hopping with the g, sqrt(2) g, 2 g channel matrix elements."""
    idx = {q.id: i for i, q in enumerate(device.qubits)}
    total = np.zeros((space.total_dim,) * 2, dtype=complex)
    for (a, b), g in device.couplings.pairs():
        ja, jb = idx[a], idx[b]
        raise10_a = embed(LOWER_10.conj().T, ja, space)
        raise21_a = embed(LOWER_21.conj().T, ja, space)
        lower10_b = embed(LOWER_10, jb, space)
        lower21_b = embed(LOWER_21, jb, space)
        hop = (raise10_a @ lower10_b).data.copy()
        hop += math.sqrt(2.0) * (raise21_a @ lower10_b).data
        hop += math.sqrt(2.0) * (raise10_a @ lower21_b).data
        hop += 2.0 * (raise21_a @ lower21_b).data
        total += TWO_PI * g * (hop + hop.conj().T)
    return total


def lab_hamiltonian_3level(device: DeviceModel, drives) -> HamiltonianFn:
    """Full transmon Hamiltonian with on-site w(t)|1><1| + (2w(t)+eta)|2><2|."""
    drv = _sorted_drives(device, drives)
    space = HilbertSpace(tuple(3 for _ in device.qubits))
    coupling = _three_level_coupling(device, space)
    n1_diags = [np.diag(embed(np.diag([0.0, 1.0, 0.0]), i, space).data).real
                for i in range(space.n_sites)]
    n2_diags = [np.diag(embed(np.diag([0.0, 0.0, 1.0]), i, space).data).real
                for i in range(space.n_sites)]
    etas = [q.anharmonicity_eta for q in device.qubits]

    def evaluate(t):
        diag = np.zeros(space.total_dim)
        for i, d in enumerate(drv):
            w = frequency_at(d, t)
            diag += TWO_PI * (w * n1_diags[i] + (2.0 * w + etas[i]) * n2_diags[i])
        return coupling + np.diag(diag)

    return HamiltonianFn(space, evaluate, period=_common_period(drv))


def rotating_hamiltonian_3level(device: DeviceModel, drives, frame_omega0: float) -> HamiltonianFn:
    """Three-level Hamiltonian in the frame rotating at frame_omega0 per
    excitation (|2> rotates at twice that), which removes the ~GHz scale and
    leaves detunings, anharmonicity and the static hopping."""
    drv = _sorted_drives(device, drives)
    space = HilbertSpace(tuple(3 for _ in device.qubits))
    coupling = _three_level_coupling(device, space)
    w_diags = [np.diag(embed(np.diag([0.0, 1.0, 2.0]), i, space).data).real
               for i in range(space.n_sites)]
    n2_diags = [np.diag(embed(np.diag([0.0, 0.0, 1.0]), i, space).data).real
                for i in range(space.n_sites)]
    static = sum(TWO_PI * q.anharmonicity_eta * n2_diags[i]
                 for i, q in enumerate(device.qubits))

    def evaluate(t):
        diag = static.copy()
        for i, d in enumerate(drv):
            diag += TWO_PI * (frequency_at(d, t) - frame_omega0) * w_diags[i]
        return coupling + np.diag(diag)

    def evaluate_batch(ts):
        ts = np.asarray(ts, dtype=float)
        diag = np.broadcast_to(static, (len(ts), space.total_dim)).copy()
        for i, d in enumerate(drv):
            w = d.omega0 + d.delta * np.cos(TWO_PI * d.nu * ts + d.phi)
            diag += TWO_PI * np.outer(w - frame_omega0, w_diags[i])
        h = np.broadcast_to(coupling, (len(ts),) + coupling.shape).copy()
        ii = np.arange(space.total_dim)
        h[:, ii, ii] += diag
        return h

    return HamiltonianFn(space, evaluate, period=_common_period(drv),
                         eval_batch=evaluate_batch)


def drive_phase_integral(drive: DriveSpec, frame_omega0: float, t, zero_at_t0: bool = True):
    """Accumulated detuning phase theta(t) in rad:
    2pi (omega0 - frame) t + (delta/nu) [sin(2pi nu t + phi) - sin(phi)].

    With zero_at_t0 the sin(phi) offset is subtracted so theta(0) = 0 and the
    lab and interaction frames coincide at t = 0.  Dropping it reproduces the
    bare Jacobi-Anger phase convention used by the harmonic closed forms."""
    f = drive.delta / drive.nu
    phase = TWO_PI * (drive.omega0 - frame_omega0) * t
    phase = phase + f * np.sin(TWO_PI * drive.nu * t + drive.phi)
    if zero_at_t0:
        phase = phase - f * math.sin(drive.phi)
    return phase


def frame_gauge_phases(drives, zero_at_t0: bool = True):
    """Per-qubit static gauge angle distinguishing the theta(0)=0 convention
    from the bare one: c_j = (delta_j/nu_j) sin(phi_j) (0 if zero_at_t0 is
    False).  H_zero(t) = G H_bare(t) G^dag with G = exp(-i sum_j c_j n_j)."""
    if not zero_at_t0:
        return [0.0 for _ in drives]
    return [(d.delta / d.nu) * math.sin(d.phi) for d in drives]


def interaction_hamiltonian(device: DeviceModel, drives, frame_omega0: float,
                            zero_phase_at_t0: bool = True) -> HamiltonianFn:
    """Co-rotating-frame flip-flop Hamiltonian of the driven qubit network:
    H_I(t) = sum_(jk) 2pi g_jk s+_j s-_k exp(i theta_j - i theta_k) + h.c.

    Two-level only.  Periodic with 1/nu when all drives share nu and sit at
    the frame frequency (no residual linear detuning phase)."""
    drv = _sorted_drives(device, drives)
    for q in device.qubits:
        if q.levels != 2:
            raise QcoreError("interaction_hamiltonian is two-level only")
    space = HilbertSpace(tuple(2 for _ in device.qubits))
    idx = {q.id: i for i, q in enumerate(device.qubits)}
    hops = [
        (idx[a], idx[b], TWO_PI * g,
         (embed(SIGMA_P, idx[a], space) @ embed(SIGMA_M, idx[b], space)).data)
        for (a, b), g in device.couplings.pairs()
    ]

    def evaluate(t):
        theta = [drive_phase_integral(d, frame_omega0, t, zero_phase_at_t0) for d in drv]
        h = np.zeros((space.total_dim,) * 2, dtype=complex)
        for (ja, jb, g_ang, hop) in hops:
            h += g_ang * np.exp(1j * (theta[ja] - theta[jb])) * hop
        return h + h.conj().T

    def evaluate_batch(ts):
        theta = [drive_phase_integral(d, frame_omega0, ts, zero_phase_at_t0) for d in drv]
        h = np.zeros((len(ts), space.total_dim, space.total_dim), dtype=complex)
        for (ja, jb, g_ang, hop) in hops:
            phase = g_ang * np.exp(1j * (theta[ja] - theta[jb]))
            h += phase[:, None, None] * hop
        return h + h.conj().transpose(0, 2, 1)

    period = _common_period(drv)
    if period is not None and any(d.omega0 != frame_omega0 for d in drv):
        period = None  # residual linear phases break strict periodicity
    return HamiltonianFn(space, evaluate, period=period, eval_batch=evaluate_batch)


def chirality_operator(space: HilbertSpace) -> Operator:
    """chi = sigma_1 . (sigma_2 x sigma_3), the three-spin chirality."""
    if space.site_dims != (2, 2, 2):
        raise QcoreError("chirality operator needs exactly three two-level sites")
    paulis = [SIGMA_X, SIGMA_Y, SIGMA_Z]
    levi = {
        (0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
        (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1,
    }
    total = np.zeros((8, 8), dtype=complex)
    for (a, b, c), sign in levi.items():
        total += sign * (
            embed(paulis[a], 0, space).data
            @ embed(paulis[b], 1, space).data
            @ embed(paulis[c], 2, space).data
        )
    return Operator(space, total)


def symmetric_exchange(space: HilbertSpace) -> Operator:
    """E_s = sum_(jk) (s+_j s-_k + s-_j s+_k) over all pairs."""
    n = space.n_sites
    total = np.zeros((space.total_dim,) * 2, dtype=complex)
    for j in range(n):
        for k in range(j + 1, n):
            hop = (embed(SIGMA_P, j, space) @ embed(SIGMA_M, k, space)).data
            total += hop + hop.conj().T
    return Operator(space, total)


def total_sz(space: HilbertSpace) -> Operator:
    """S_z = sum_j sigma_z_j / 2."""
    total = sum(embed(SIGMA_Z, j, space).data for j in range(space.n_sites))
    return Operator(space, total / 2.0)
