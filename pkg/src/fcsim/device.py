"""Device model: qubit parameters, coupling graph, drives, JSON ingestion.

Unit system: all frequencies are linear frequencies in MHz (the omega/2pi
values one reads off a device datasheet), times in microseconds, phases in
radians.  Factors of 2*pi enter only inside the Hamiltonian builders.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

__all__ = [
    "QubitSpec",
    "CouplingGraph",
    "DriveSpec",
    "DeviceModel",
    "DeviceError",
    "load_device",
    "serialize_device",
    "frequency_at",
    "uniform_g",
]

TWO_PI = 2.0 * math.pi


class DeviceError(ValueError):
    """Structured parse/validation error; message names the offending key."""


@dataclass(frozen=True)
class QubitSpec:
    id: int
    omega_idle: float      # MHz
    anharmonicity_eta: float  # MHz, negative for transmons; unused if levels == 2
    t1: float              # us
    t_phi: float           # us
    f0: float              # P(measure 0 | prepared 0)
    f1: float              # P(measure 1 | prepared 1)
    levels: int = 2
    omega_max: float = None   # MHz, ingested for completeness, never used

    def __post_init__(self):
        if self.levels not in (2, 3):
            raise DeviceError(f"qubit {self.id}: levels must be 2 or 3")
        if self.t1 <= 0:
            raise DeviceError(f"qubit {self.id}: t1_us must be positive")
        if self.t_phi <= 0:
            raise DeviceError(f"qubit {self.id}: tphi_us must be positive")
        for name, val in (("f0", self.f0), ("f1", self.f1)):
            if not 0 < val <= 1:
                raise DeviceError(f"qubit {self.id}: {name} must be in (0, 1]")


@dataclass(frozen=True)
class CouplingGraph:
    """Symmetric coupling strengths g_jk > 0 in MHz, keyed by sorted pairs."""

    edges: dict

    def __post_init__(self):
        norm = {}
        for (a, b), g in self.edges.items():
            if a == b:
                raise DeviceError(f"coupling ({a},{b}): self-edges not allowed")
            if g <= 0:
                raise DeviceError(f"coupling ({a},{b}): g_mhz must be positive")
            key = (min(a, b), max(a, b))
            if key in norm and norm[key] != g:
                raise DeviceError(f"coupling ({a},{b}): asymmetric duplicate entry")
            norm[key] = float(g)
        object.__setattr__(self, "edges", norm)

    def g(self, a: int, b: int) -> float:
        return self.edges[(min(a, b), max(a, b))]

    def pairs(self):
        return sorted(self.edges.items())


@dataclass(frozen=True)
class DriveSpec:
    """Sinusoidal frequency modulation omega0 + delta*cos(2 pi nu t + phi)."""

    qubit: int
    omega0: float   # MHz
    delta: float    # MHz
    nu: float       # MHz
    phi: float      # rad, normalized into [0, 2 pi)

    def __post_init__(self):
        if self.nu <= 0:
            raise DeviceError(f"drive on qubit {self.qubit}: nu must be positive")
        if self.delta < 0:
            raise DeviceError(f"drive on qubit {self.qubit}: delta must be >= 0")
        object.__setattr__(self, "phi", self.phi % TWO_PI)


@dataclass(frozen=True)
class DeviceModel:
    qubits: tuple
    couplings: CouplingGraph

    def __post_init__(self):
        ids = [q.id for q in self.qubits]
        if ids != sorted(set(ids)):
            raise DeviceError("qubits: ids must be unique and sorted")
        for (a, b) in self.couplings.edges:
            if a not in ids or b not in ids:
                raise DeviceError(f"coupling ({a},{b}): unknown qubit id")

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    def qubit(self, qid: int) -> QubitSpec:
        for q in self.qubits:
            if q.id == qid:
                return q
        raise DeviceError(f"unknown qubit id {qid}")

    def subdevice(self, ids) -> "DeviceModel":
        """Restrict to the given qubit ids (re-indexed 0..n-1, order kept)."""
        ids = list(ids)
        remap = {old: new for new, old in enumerate(ids)}
        qubits = tuple(replace(self.qubit(i), id=remap[i]) for i in ids)
        edges = {
            (remap[a], remap[b]): g
            for (a, b), g in self.couplings.edges.items()
            if a in remap and b in remap
        }
        return DeviceModel(qubits, CouplingGraph(edges))


def frequency_at(drive: DriveSpec, t: float) -> float:
    """Instantaneous qubit frequency in MHz at time t (us)."""
    return drive.omega0 + drive.delta * math.cos(TWO_PI * drive.nu * t + drive.phi)


def uniform_g(device: DeviceModel, g: float) -> DeviceModel:
    """Copy of the device with every coupling set to a common g (MHz)."""
    edges = {pair: float(g) for pair in device.couplings.edges}
    return DeviceModel(device.qubits, CouplingGraph(edges))


_QUBIT_KEYS = ("id", "omega_idle_mhz", "eta_mhz", "t1_us", "tphi_us", "f0", "f1", "levels")


def load_device(document) -> DeviceModel:
    """Parse a device description (JSON text, dict, or file path).

    Schema: {"qubits": [{id, omega_idle_mhz, eta_mhz, t1_us, tphi_us, f0, f1,
    levels, [omega_max_mhz]}], "couplings": [{a, b, g_mhz}]}.
    """
    if isinstance(document, dict):
        doc = document
    else:
        text = str(document)
        if "{" not in text:  # treat as a path
            with open(text, "r", encoding="utf-8") as fh:
                text = fh.read()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DeviceError(f"invalid JSON: {exc}") from exc

    for key in ("qubits", "couplings"):
        if key not in doc:
            raise DeviceError(f"missing top-level key '{key}'")

    qubits = []
    for i, q in enumerate(doc["qubits"]):
        for key in _QUBIT_KEYS:
            if key not in q:
                raise DeviceError(f"qubits[{i}]: missing key '{key}'")
        qubits.append(
            QubitSpec(
                id=int(q["id"]),
                omega_idle=float(q["omega_idle_mhz"]),
                anharmonicity_eta=float(q["eta_mhz"]),
                t1=float(q["t1_us"]),
                t_phi=float(q["tphi_us"]),
                f0=float(q["f0"]),
                f1=float(q["f1"]),
                levels=int(q["levels"]),
                omega_max=float(q["omega_max_mhz"]) if "omega_max_mhz" in q else None,
            )
        )

    edges = {}
    for i, c in enumerate(doc["couplings"]):
        for key in ("a", "b", "g_mhz"):
            if key not in c:
                raise DeviceError(f"couplings[{i}]: missing key '{key}'")
        edges[(int(c["a"]), int(c["b"]))] = float(c["g_mhz"])

    return DeviceModel(tuple(sorted(qubits, key=lambda q: q.id)), CouplingGraph(edges))


def serialize_device(device: DeviceModel) -> str:
    """Serialize back to the JSON schema; numeric values round-trip exactly."""
    doc = {
        "qubits": [
            {
                "id": q.id,
                "omega_idle_mhz": q.omega_idle,
                "eta_mhz": q.anharmonicity_eta,
                "t1_us": q.t1,
                "tphi_us": q.t_phi,
                "f0": q.f0,
                "f1": q.f1,
                "levels": q.levels,
                **({"omega_max_mhz": q.omega_max} if q.omega_max is not None else {}),
            }
            for q in device.qubits
        ],
        "couplings": [
            {"a": a, "b": b, "g_mhz": g} for (a, b), g in device.couplings.pairs()
        ],
    }
    return json.dumps(doc, indent=2)
