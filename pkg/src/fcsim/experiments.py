"""Experiment presets: decoupling scans, chiral-dynamics runs, the readout
confusion model, Fourier extraction of |g_eff|, and the tune-up search.

Conventions: the |01> <-> |10> population of a resonant pair oscillates at
2 g_eff (linear frequency), so extract_geff returns half the spectral peak.
All scans are embarrassingly parallel; set FCS_THREADS > 1 to enable a
thread pool (one seeded generator per point keeps results order-independent).
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import find_peaks

from .device import DeviceModel, DriveSpec
from .dynamics import (
    CollapseSet,
    IntegratorConfig,
    TimeSeries,
    collapse_set,
    evolve_lindblad,
    evolve_unitary,
)
from .hambuild import interaction_hamiltonian, rotating_hamiltonian_3level
from .qcore import HilbertSpace, basis_state

__all__ = [
    "ExperimentError",
    "PulseSequence",
    "ConfusionModel",
    "ScanResult",
    "run_sequence",
    "apply_readout",
    "correct_readout",
    "extract_geff",
    "scan_dphi",
    "scan_delta_single",
    "chiral_experiment",
    "circulation_metrics",
    "calibrate",
    "write_csv",
]

DEFAULT_OMEGA0 = 4990.0   # MHz, common operating frequency of the triple
CHIRAL_SINGLE_DELTAS = (138.0, 140.0, 136.0)
CHIRAL_PHIS = (-0.1, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0 + 0.1)
CHIRAL_OFFSETS = (0.0, 0.7, 0.0)
CHIRAL_DOUBLE_DELTAS = (135.0, 137.0, 133.0)


class ExperimentError(ValueError):
    pass


def _max_workers() -> int:
    try:
        return max(1, int(os.environ.get("FCS_THREADS", "1")))
    except ValueError:
        return 1


def _map_points(fn, items):
    workers = _max_workers()
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# sequences and the measurement model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PulseSequence:
    """Ideal prep flips, a modulation window, and the readout qubit set."""

    prep: tuple            # of (qubit_id, level)
    drives: tuple          # of DriveSpec, the modulation window
    duration: float        # us
    readout: tuple = None  # qubit ids; None = all

    def __post_init__(self):
        if self.duration < 0:
            raise ExperimentError("duration must be >= 0")
        object.__setattr__(self, "prep", tuple(self.prep))
        object.__setattr__(self, "drives", tuple(self.drives))


@dataclass(frozen=True)
class ConfusionModel:
    """Per-qubit 2x2 column-stochastic maps [[F0, 1-F1], [1-F0, F1]]."""

    matrices: tuple   # of 2x2 np.ndarray, one per qubit in device order

    def __post_init__(self):
        mats = []
        for i, m in enumerate(self.matrices):
            m = np.asarray(m, dtype=float)
            if m.shape != (2, 2) or np.any(m < 0) or np.any(m > 1):
                raise ExperimentError(f"confusion matrix {i}: entries must be in [0,1]")
            if not np.allclose(m.sum(axis=0), 1.0, atol=1e-9):
                raise ExperimentError(f"confusion matrix {i}: columns must sum to 1")
            if abs(np.linalg.det(m)) < 1e-6:
                raise ExperimentError(f"confusion matrix {i}: not invertible")
            mats.append(m)
        object.__setattr__(self, "matrices", tuple(mats))

    @classmethod
    def from_device(cls, device: DeviceModel) -> "ConfusionModel":
        return cls(tuple(
            np.array([[q.f0, 1.0 - q.f1], [1.0 - q.f0, q.f1]])
            for q in device.qubits
        ))

    def tensor(self) -> np.ndarray:
        total = np.array([[1.0]])
        for m in self.matrices:
            total = np.kron(total, m)
        return total

    def tensor_inverse(self) -> np.ndarray:
        total = np.array([[1.0]])
        for m in self.matrices:
            total = np.kron(total, np.linalg.inv(m))
        return total


def apply_readout(probs, model: ConfusionModel) -> np.ndarray:
    """Forward confusion map: true -> measured multiqubit distribution."""
    probs = np.asarray(probs, dtype=float)
    if np.any(probs < -1e-12):
        raise ExperimentError("negative input probabilities")
    if abs(probs.sum() - 1.0) > 1e-6:
        raise ExperimentError("input probabilities must sum to 1")
    return model.tensor() @ probs


def correct_readout(measured, model: ConfusionModel,
                    clip_threshold: float = -0.05) -> np.ndarray:
    """Inverse confusion map with small-negative clipping and renormalization.

    Negatives below clip_threshold mean the data is inconsistent with the
    confusion model and raise instead of being silently normalized away."""
    measured = np.asarray(measured, dtype=float)
    corrected = model.tensor_inverse() @ measured
    low = corrected.min()
    if low < clip_threshold:
        raise ExperimentError(
            f"corrected probability {low:.4f} below the {clip_threshold} "
            "clipping threshold; data inconsistent with the confusion model"
        )
    corrected = np.clip(corrected, 0.0, None)
    return corrected / corrected.sum()


def _qubit_projector(space: HilbertSpace) -> np.ndarray:
    """(2^n, dim) map lumping level |2> with |1> for readout purposes."""
    n = space.n_sites
    proj = np.zeros((2 ** n, space.total_dim))
    for idx, label in enumerate(space.labels()):
        bits = "".join("1" if c != "0" else "0" for c in label)
        proj[int(bits, 2), idx] = 1.0
    return proj


def run_sequence(device: DeviceModel, seq: PulseSequence, noise: str = "none",
                 shots: int = None, seed: int = 0,
                 cfg: IntegratorConfig = None, t_step: float = 0.002,
                 frame_omega0: float = None, keep_states: bool = False) -> TimeSeries:
    """Simulate prep -> modulation window -> simultaneous readout.

    Exact mode (shots=None) returns true populations.  With shots=n, each
    time point is sampled multinomially, pushed through the device confusion
    model, and then readout-corrected, emulating the experimental pipeline."""
    if noise not in ("none", "lindblad"):
        raise ExperimentError(f"unknown noise model {noise!r}")
    if shots is not None and shots <= 0:
        raise ExperimentError("shots must be positive")
    levels = max(q.levels for q in device.qubits)
    space = HilbertSpace(tuple(q.levels for q in device.qubits))
    label = ["0"] * device.n_qubits
    order = [q.id for q in device.qubits]
    for qid, lvl in seq.prep:
        if qid not in order:
            raise ExperimentError(f"prep targets unknown qubit {qid}")
        if not 0 <= lvl < device.qubit(qid).levels:
            raise ExperimentError(f"prep level {lvl} invalid for qubit {qid}")
        label[order.index(qid)] = str(lvl)
    psi0 = basis_state(space, "".join(label))

    if frame_omega0 is None:
        omega0s = sorted(d.omega0 for d in seq.drives)
        frame_omega0 = omega0s[len(omega0s) // 2]
    if levels == 2:
        hfn = interaction_hamiltonian(device, seq.drives, frame_omega0)
        if cfg is None:
            cfg = IntegratorConfig(method="rk4")
    else:
        hfn = rotating_hamiltonian_3level(device, seq.drives, frame_omega0)
        if cfg is None:
            cfg = IntegratorConfig(method="expm")

    n_pts = max(1, int(round(seq.duration / t_step)) + 1) if seq.duration > 0 else 1
    t_grid = np.linspace(0.0, seq.duration, n_pts)
    if noise == "lindblad":
        series = evolve_lindblad(hfn, psi0.to_density_matrix(),
                                 collapse_set(device, space), t_grid, cfg,
                                 keep_states=keep_states)
    else:
        series = evolve_unitary(hfn, psi0, t_grid, cfg, keep_states=keep_states)
    if shots is None:
        return series

    proj = _qubit_projector(space)
    model = ConfusionModel.from_device(device)
    rng = np.random.default_rng(seed)
    bit_labels = tuple(format(i, f"0{device.n_qubits}b") for i in range(2 ** device.n_qubits))
    sampled = np.empty((len(t_grid), len(bit_labels)))
    for k in range(len(t_grid)):
        p = proj @ series.values[k]
        p = np.clip(p, 0.0, None)
        p /= p.sum()
        counts = rng.multinomial(shots, p) / shots
        measured = apply_readout(counts, model)
        sampled[k] = correct_readout(measured, model)
    return TimeSeries(t_grid, bit_labels, sampled)


# ---------------------------------------------------------------------------
# Fourier extraction
# ---------------------------------------------------------------------------

def extract_geff(series: TimeSeries, label: str = None,
                 f_max: float = None) -> float:
    """|g_eff| in MHz from the Fourier peak of a population trace P(T).

    The trace oscillates at 2 g_eff; the discrete peak is refined by 3-point
    quadratic interpolation of the log spectrum.  Returns 0 when no peak
    clears 3x the spectral noise floor (decoupled).  f_max restricts the
    peak search (pass nu/2 to keep micromotion at the modulation frequency
    out of the band)."""
    times = np.asarray(series.times, dtype=float)
    if label is None:
        label = "01" if "01" in series.labels else series.labels[0]
    trace = series.column(label)
    if len(times) < 64:
        dt = times[1] - times[0] if len(times) > 1 else 0.004
        raise ExperimentError(
            f"grid too short for spectral extraction: {len(times)} < 64 points"
            f" (extend the scan to at least {64 * dt:.3g} us)"
        )
    steps = np.diff(times)
    if not np.allclose(steps, steps[0], rtol=1e-6, atol=1e-12):
        raise ExperimentError("extract_geff needs a uniform time grid")
    dt = float(steps[0])
    # a quadratic detrend removes the slow drift of sub-resolution
    # oscillations, whose DC leakage skirt would otherwise mimic a peak
    detrended = trace - np.polynomial.polynomial.polyval(
        times, np.polynomial.polynomial.polyfit(times, trace, 2))
    window = np.hanning(len(trace))
    spectrum = np.abs(np.fft.rfft(detrended * window))
    if len(spectrum) < 3:
        return 0.0
    df = 1.0 / (len(trace) * dt)
    k_hi = len(spectrum)
    if f_max is not None:
        k_hi = min(k_hi, int(f_max / df) + 1)
    if k_hi < 3:
        raise ExperimentError("f_max leaves fewer than two spectral bins")
    floor = np.median(spectrum[1:k_hi])
    k = int(np.argmax(spectrum[1:k_hi])) + 1
    if spectrum[k] < max(3.0 * floor, 1e-9 * len(trace)):
        return 0.0
    if k + 1 < len(spectrum) and k + 1 == k_hi and spectrum[k + 1] > spectrum[k]:
        return 0.0   # rising into out-of-band micromotion, not a real peak
    if 0 < k < len(spectrum) - 1 and spectrum[k - 1] > 0 and spectrum[k + 1] > 0:
        lm, lc, lp = np.log(spectrum[k - 1 : k + 2])
        denom = lm - 2.0 * lc + lp
        shift = 0.5 * (lm - lp) / denom if denom != 0 else 0.0
        shift = float(np.clip(shift, -0.5, 0.5))
    else:
        shift = 0.0
    if k + shift < 1.5:
        return 0.0   # fewer than 1.5 oscillations in the window: unresolved
    return (k + shift) * df / 2.0


# ---------------------------------------------------------------------------
# decoupling scans (Figs. 2 and S1)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScanResult:
    axis_name: str
    axis: np.ndarray
    geff: np.ndarray         # MHz per point
    metadata: dict
    series: tuple = None     # per-point TimeSeries when kept

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float)
        if np.any(np.diff(axis) <= 0):
            raise ExperimentError("scan axis must be strictly monotone")
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "geff", np.asarray(self.geff, dtype=float))


def _pair_point(device, drives, t_max, t_step, noise, shots, seed, cfg):
    seq = PulseSequence(prep=((device.qubits[1].id, 1),), drives=drives,
                        duration=t_max)
    series = run_sequence(device, seq, noise=noise, shots=shots, seed=seed,
                          cfg=cfg, t_step=t_step)
    # 0.4 nu keeps the micromotion harmonics (which alias down to nu/2 at
    # the default 4 ns sampling) out of the searched band
    return series, extract_geff(series, "01", f_max=0.4 * drives[1].nu)


def scan_dphi(device: DeviceModel, delta: float, nu: float, dphi_grid,
              pair=(0, 1), omega0: float = DEFAULT_OMEGA0, t_max: float = 1.0,
              t_step: float = 0.004, noise: str = "none", shots: int = None,
              seed: int = 0, cfg: IntegratorConfig = None,
              keep_traces: bool = False) -> ScanResult:
    """Pair decoupling scan: both qubits modulated, relative phase swept."""
    sub = device.subdevice(pair)
    dphi_grid = np.asarray(dphi_grid, dtype=float)

    def point(item):
        i, dphi = item
        drives = (DriveSpec(sub.qubits[0].id, omega0, delta, nu, 0.0),
                  DriveSpec(sub.qubits[1].id, omega0, delta, nu, dphi))
        return _pair_point(sub, drives, t_max, t_step, noise, shots,
                           seed + i, cfg)

    results = _map_points(point, list(enumerate(dphi_grid)))
    meta = {"experiment": "scan_dphi", "delta_mhz": delta, "nu_mhz": nu,
            "g_mhz": sub.couplings.g(sub.qubits[0].id, sub.qubits[1].id),
            "omega0_mhz": omega0, "noise": noise,
            "shots": shots or 0, "seed": seed}
    return ScanResult("dphi_rad", dphi_grid, [g for _, g in results], meta,
                      series=tuple(s for s, _ in results) if keep_traces else None)


def scan_delta_single(device: DeviceModel, nu: float, delta_grid,
                      pair=(0, 1), omega0: float = DEFAULT_OMEGA0,
                      t_max: float = 1.0, t_step: float = 0.004,
                      noise: str = "none", shots: int = None, seed: int = 0,
                      cfg: IntegratorConfig = None,
                      keep_traces: bool = False) -> ScanResult:
    """Amplitude scan: one qubit modulated, the other static at omega0."""
    sub = device.subdevice(pair)
    delta_grid = np.asarray(delta_grid, dtype=float)

    def point(item):
        i, delta = item
        drives = (DriveSpec(sub.qubits[0].id, omega0, 0.0, nu, 0.0),
                  DriveSpec(sub.qubits[1].id, omega0, delta, nu, 0.0))
        return _pair_point(sub, drives, t_max, t_step, noise, shots,
                           seed + i, cfg)

    results = _map_points(point, list(enumerate(delta_grid)))
    meta = {"experiment": "scan_delta_single", "nu_mhz": nu,
            "g_mhz": sub.couplings.g(sub.qubits[0].id, sub.qubits[1].id),
            "omega0_mhz": omega0, "noise": noise,
            "shots": shots or 0, "seed": seed}
    return ScanResult("delta_mhz", delta_grid, [g for _, g in results], meta,
                      series=tuple(s for s, _ in results) if keep_traces else None)


# ---------------------------------------------------------------------------
# chiral dynamics (Figs. 3 and 4)
# ---------------------------------------------------------------------------

def chiral_experiment(device: DeviceModel, excitations: str = "single",
                      levels: int = None, nu: float = 100.0,
                      omega0: float = DEFAULT_OMEGA0, t_max: float = 0.8,
                      t_step: float = 0.002, noise: str = "none",
                      shots: int = None, seed: int = 0,
                      cfg: IntegratorConfig = None, deltas=None, phis=None,
                      offsets=None, keep_states: bool = False) -> TimeSeries:
    """Three-qubit chiral circulation with the symmetric 2pi/3 drive pattern.

    single: prep |001> with the fine-tuned single-excitation drive parameters.
    double: prep |011> with the reduced amplitudes and three-level transmons,
    where the vacancy circulates instead of the excitation."""
    if device.n_qubits != 3:
        raise ExperimentError("chiral_experiment needs exactly three qubits")
    if excitations not in ("single", "double"):
        raise ExperimentError(f"unknown excitation pattern {excitations!r}")
    if levels is None:
        levels = 2 if excitations == "single" else 3
    if excitations == "double" and levels == 2:
        warnings.warn(
            "double-excitation run with two-level qubits omits the "
            "|2>-mediated correction that speeds up the real circulation",
            UserWarning,
        )
    if deltas is None:
        deltas = CHIRAL_SINGLE_DELTAS if excitations == "single" else CHIRAL_DOUBLE_DELTAS
    if phis is None:
        phis = CHIRAL_PHIS
    if offsets is None:
        offsets = CHIRAL_OFFSETS
    dev = DeviceModel(tuple(replace(q, levels=levels) for q in device.qubits),
                      device.couplings)
    drives = tuple(
        DriveSpec(q.id, omega0 + offsets[i], deltas[i], nu, phis[i])
        for i, q in enumerate(dev.qubits)
    )
    prep_qubits = (dev.qubits[2].id,) if excitations == "single" else (
        dev.qubits[1].id, dev.qubits[2].id)
    seq = PulseSequence(prep=tuple((qid, 1) for qid in prep_qubits),
                        drives=drives, duration=t_max)
    return run_sequence(dev, seq, noise=noise, shots=shots, seed=seed, cfg=cfg,
                        t_step=t_step, frame_omega0=omega0,
                        keep_states=keep_states)


def _smooth(trace: np.ndarray, width: int) -> np.ndarray:
    """Centered moving average with proper edge normalization."""
    if width <= 1:
        return trace
    kernel = np.ones(width)
    return np.convolve(trace, kernel, "same") / np.convolve(
        np.ones_like(trace), kernel, "same")


def circulation_metrics(series: TimeSeries, cycle_labels,
                        smooth_period: float = 0.01,
                        prominence: float = 0.15,
                        min_height: float = 0.3) -> dict:
    """First-maximum time and height of each population trace after smoothing
    away the micromotion ripple (one modulation period moving average).

    cycle_labels[0] is the initial state; its first interior peak marks the
    completion of a full cycle ('cycle_time')."""
    dt = float(series.times[1] - series.times[0])
    width = max(1, int(round(smooth_period / dt)))
    peaks = {}
    for label in cycle_labels:
        smoothed = _smooth(series.column(label), width)
        idx, _ = find_peaks(smoothed, prominence=prominence, height=min_height)
        if len(idx) == 0:
            peaks[label] = (math.nan, math.nan)
        else:
            k = idx[0]
            peaks[label] = (float(series.times[k]), float(smoothed[k]))
    out = {"first_max_time": {l: peaks[l][0] for l in cycle_labels},
           "first_max_height": {l: peaks[l][1] for l in cycle_labels},
           "cycle_time": peaks[cycle_labels[0]][0]}
    return out


# ---------------------------------------------------------------------------
# tune-up
# ---------------------------------------------------------------------------

def _golden_min(fn, lo: float, hi: float, tol: float):
    """Golden-section minimum of a unimodal function on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
    return (a + b) / 2.0


class CalibrationError(RuntimeError):
    pass


def calibrate(device: DeviceModel, pair=(0, 1), nu: float = 100.0,
              omega0: float = DEFAULT_OMEGA0, steps: str = "AB",
              cfg: IntegratorConfig = None, seed: int = 0) -> dict:
    """Tune-up mirroring the experimental procedure.

    A: sweep the single-modulation amplitude for the decoupling zero
       (expected near 2.404 nu).
    B: with the amplitude set to the three-qubit operating point (step-A
       value / sqrt(3)), sweep the relative phase for the pairwise
       decoupling zero (expected near 2pi/3).
    C (optional): coordinate fine-tune of the per-qubit frequency offsets
       maximizing the chiral circulation amplitude.

    Near a decoupling zero the oscillation is too slow for the Fourier
    extraction to resolve, so both searches finish with a V-fit: |g_eff| is
    linear in the detuning from the zero, and two bracketing points give the
    crossing by interpolation."""
    steps = steps.upper()
    sub = device.subdevice(pair)

    def geff_delta(delta, t_max):
        drives = (DriveSpec(sub.qubits[0].id, omega0, 0.0, nu, 0.0),
                  DriveSpec(sub.qubits[1].id, omega0, delta, nu, 0.0))
        _, g = _pair_point(sub, drives, t_max, 0.004, "none", None, seed, cfg)
        return g

    def geff_dphi(dphi, delta, t_max):
        drives = (DriveSpec(sub.qubits[0].id, omega0, delta, nu, 0.0),
                  DriveSpec(sub.qubits[1].id, omega0, delta, nu, dphi))
        _, g = _pair_point(sub, drives, t_max, 0.004, "none", None, seed, cfg)
        return g

    result = {}
    if "A" in steps:
        lo, hi = 1.8 * nu, 3.0 * nu
        edge = min(geff_delta(lo, 1.0), geff_delta(hi, 1.0))
        coarse = _golden_min(lambda d: geff_delta(d, 1.0), lo, hi, tol=8.0)
        if geff_delta(coarse, 1.0) >= edge:
            raise CalibrationError("no decoupling minimum inside the delta bracket")
        off = 0.12 * nu
        g_lo = geff_delta(coarse - off, 3.0)
        g_hi = geff_delta(coarse + off, 3.0)
        result["delta"] = ((coarse - off) * g_hi + (coarse + off) * g_lo) / (g_lo + g_hi)
    if "B" in steps:
        delta3 = result.get("delta", 2.4048 * nu) / math.sqrt(3.0)
        lo, hi = 0.4 * math.pi, 0.9 * math.pi
        edge = min(geff_dphi(lo, delta3, 1.0), geff_dphi(hi, delta3, 1.0))
        coarse = _golden_min(lambda p: geff_dphi(p, delta3, 1.0), lo, hi, tol=0.1)
        if geff_dphi(coarse, delta3, 1.0) >= edge:
            raise CalibrationError("no decoupling minimum inside the dphi bracket")
        off = 0.1
        g_lo = geff_dphi(coarse - off, delta3, 3.0)
        g_hi = geff_dphi(coarse + off, delta3, 3.0)
        result["dphi"] = ((coarse - off) * g_hi + (coarse + off) * g_lo) / (g_lo + g_hi)
        result["delta_pair"] = delta3
    if "C" in steps:
        if device.n_qubits != 3:
            raise CalibrationError("step C needs the full three-qubit device")
        base = result.get("delta", 2.4048 * nu) / math.sqrt(3.0)
        offsets = [0.0, 0.0, 0.0]
        grid = (-1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0)
        fast = IntegratorConfig(method="rk4", dt=2.5e-4)

        def objective(offs):
            series = chiral_experiment(
                device, "single", levels=2, nu=nu, omega0=omega0,
                t_max=0.45, t_step=0.005, cfg=fast,
                deltas=(base, base, base),
                phis=(0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0),
                offsets=tuple(offs))
            m = circulation_metrics(series, ("001", "100", "010"),
                                    prominence=0.05, min_height=0.2)
            heights = m["first_max_height"]
            return sum(0.0 if math.isnan(h) else h for h in heights.values())

        for j in range(3):
            scores = []
            for val in grid:
                trial = list(offsets)
                trial[j] = val
                scores.append(objective(trial))
            offsets[j] = grid[int(np.argmax(scores))]
        result["offsets"] = tuple(offsets)
    return result


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------

def write_csv(path, metadata: dict, columns: dict):
    """Deterministic CSV: '# key=value' metadata lines, header, then rows
    formatted with 9 significant digits."""
    names = list(columns)
    arrays = [np.asarray(columns[n]) for n in names]
    n_rows = len(arrays[0])
    if any(len(a) != n_rows for a in arrays):
        raise ExperimentError("CSV columns must have equal length")
    lines = [f"# {k}={v}" for k, v in metadata.items()]
    lines.append(",".join(names))
    for r in range(n_rows):
        lines.append(",".join(f"{a[r]:.9g}" for a in arrays))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def series_to_csv(path, series: TimeSeries, metadata: dict):
    cols = {"t_us": series.times}
    for i, label in enumerate(series.labels):
        cols[f"p_{label}"] = series.values[:, i]
    write_csv(path, metadata, cols)


def scan_to_csv(path, scan: ScanResult):
    write_csv(path, scan.metadata, {scan.axis_name: scan.axis,
                                    "geff_mhz": scan.geff})
