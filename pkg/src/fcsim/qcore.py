"""Dense complex linear algebra on small composite Hilbert spaces.

Conventions used throughout the package:

* Each site is a 2- or 3-level system; |0> is the ground state.
* Basis ordering: site 0 is the leftmost / most significant digit, so the
  label "s1 s2 s3" maps to the mixed-radix index with site 0's digit first.
* sigma_z |1> = +|1>, sigma_z |0> = -|0>, so sigma^+ sigma^- counts
  excitations.
* Operators carry angular-frequency units (rad/us) wherever they appear as
  Hamiltonians; the 2*pi lives in the Hamiltonian builders, not here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

__all__ = [
    "HilbertSpace",
    "Operator",
    "StateVector",
    "DensityMatrix",
    "QcoreError",
    "embed",
    "two_site",
    "expm_hermitian",
    "commutator",
    "basis_index",
    "basis_state",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SIGMA_P",
    "SIGMA_M",
    "QUBIT_NUMBER",
]


class QcoreError(ValueError):
    """Raised on dimension mismatches and invalid operator inputs."""


# Pauli matrices in the (|0>, |1>) = (ground, excited) basis.
SIGMA_P = np.array([[0, 0], [1, 0]], dtype=complex)  # |1><0|
SIGMA_M = SIGMA_P.conj().T
SIGMA_X = SIGMA_P + SIGMA_M
SIGMA_Y = -1j * (SIGMA_P - SIGMA_M)
SIGMA_Z = np.diag([-1.0, 1.0]).astype(complex)
QUBIT_NUMBER = np.diag([0.0, 1.0]).astype(complex)


@dataclass(frozen=True)
class HilbertSpace:
    """Composite space of 2- and 3-level sites, site 0 most significant."""

    site_dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.site_dims)
        if not dims:
            raise QcoreError("need at least one site")
        if any(d not in (2, 3) for d in dims):
            raise QcoreError(f"site dimensions must be 2 or 3, got {dims}")
        object.__setattr__(self, "site_dims", dims)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.site_dims))

    @property
    def n_sites(self) -> int:
        return len(self.site_dims)

    def labels(self):
        """All basis labels, e.g. '010', in index order."""
        out = [""]
        for d in self.site_dims:
            out = [s + str(l) for s in out for l in range(d)]
        return out


def basis_index(space: HilbertSpace, label: str) -> int:
    """Mixed-radix index of a basis label such as '011' (site 0 leftmost)."""
    if len(label) != space.n_sites:
        raise QcoreError(f"label {label!r} does not match {space.n_sites} sites")
    idx = 0
    for ch, d in zip(label, space.site_dims):
        lvl = int(ch)
        if lvl >= d:
            raise QcoreError(f"level {lvl} out of range for site dim {d}")
        idx = idx * d + lvl
    return idx


@dataclass(frozen=True)
class Operator:
    """Dense complex square matrix living on a HilbertSpace."""

    space: HilbertSpace
    data: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.data, dtype=complex)
        n = self.space.total_dim
        if mat.shape != (n, n):
            raise QcoreError(f"matrix shape {mat.shape} does not match dim {n}")
        object.__setattr__(self, "data", mat)
        self.data.setflags(write=False)

    def herm_deviation(self) -> float:
        """max |O - O^dagger|, the hermiticity check used by callers."""
        return float(np.abs(self.data - self.data.conj().T).max())

    def dag(self) -> "Operator":
        return Operator(self.space, self.data.conj().T)

    def __matmul__(self, other: "Operator") -> "Operator":
        _check_same_space(self, other)
        return Operator(self.space, self.data @ other.data)

    def __add__(self, other: "Operator") -> "Operator":
        _check_same_space(self, other)
        return Operator(self.space, self.data + other.data)

    def __sub__(self, other: "Operator") -> "Operator":
        _check_same_space(self, other)
        return Operator(self.space, self.data - other.data)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.space, self.data * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True)
class StateVector:
    space: HilbertSpace
    amplitudes: np.ndarray

    def __post_init__(self):
        vec = np.asarray(self.amplitudes, dtype=complex)
        if vec.shape != (self.space.total_dim,):
            raise QcoreError("amplitude vector length does not match space")
        object.__setattr__(self, "amplitudes", vec)
        self.amplitudes.setflags(write=False)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def to_density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(self.space, np.outer(self.amplitudes, self.amplitudes.conj()))


def basis_state(space: HilbertSpace, label: str) -> StateVector:
    vec = np.zeros(space.total_dim, dtype=complex)
    vec[basis_index(space, label)] = 1.0
    return StateVector(space, vec)


@dataclass(frozen=True)
class DensityMatrix:
    space: HilbertSpace
    data: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.data, dtype=complex)
        n = self.space.total_dim
        if mat.shape != (n, n):
            raise QcoreError("density matrix shape does not match space")
        object.__setattr__(self, "data", mat)
        self.data.setflags(write=False)

    def herm_deviation(self) -> float:
        return float(np.abs(self.data - self.data.conj().T).max())

    def trace(self) -> float:
        return float(np.real(np.trace(self.data)))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh((self.data + self.data.conj().T) / 2).min())

    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.data))


def _check_same_space(a, b):
    if a.space.site_dims != b.space.site_dims:
        raise QcoreError("operators live on different spaces")


def embed(local_op: np.ndarray, site: int, space: HilbertSpace) -> Operator:
    """I x ... x local_op x ... x I with local_op at `site` (site 0 leftmost)."""
    local_op = np.asarray(local_op, dtype=complex)
    if not 0 <= site < space.n_sites:
        raise QcoreError(f"site {site} out of range")
    d = space.site_dims[site]
    if local_op.shape != (d, d):
        raise QcoreError(
            f"local operator shape {local_op.shape} does not match site dim {d}"
        )
    mats = [np.eye(dd, dtype=complex) for dd in space.site_dims]
    mats[site] = local_op
    return Operator(space, reduce(np.kron, mats))


def two_site(op_a, site_a: int, op_b, site_b: int, space: HilbertSpace) -> Operator:
    """Embedded product op_a(site_a) . op_b(site_b), identities elsewhere."""
    if site_a == site_b:
        raise QcoreError("two_site requires distinct sites")
    return embed(op_a, site_a, space) @ embed(op_b, site_b, space)


def commutator(a: Operator, b: Operator) -> Operator:
    """AB - BA."""
    _check_same_space(a, b)
    return Operator(a.space, a.data @ b.data - b.data @ a.data)


def expm_hermitian(h: Operator, t: float, herm_tol: float = 1e-9) -> Operator:
    """U = exp(-i H t) for Hermitian H, via full eigendecomposition."""
    dev = h.herm_deviation()
    if dev >= herm_tol:
        raise QcoreError(f"operator is not Hermitian (max |H - H^dag| = {dev:.3g})")
    w, v = np.linalg.eigh(h.data)
    u = (v * np.exp(-1j * w * t)) @ v.conj().T
    return Operator(h.space, u)
