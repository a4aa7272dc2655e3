"""Floquet-engineered spin-chirality simulator for coupled superconducting
qubits: quantum operator core, device/drive models, time-dependent
Hamiltonian builders, analytic Floquet theory, unitary/Lindblad propagation,
experiment presets, and a CLI.
"""

from .device import (
    CouplingGraph,
    DeviceError,
    DeviceModel,
    DriveSpec,
    QubitSpec,
    load_device,
    serialize_device,
)
from .dynamics import (
    CollapseSet,
    IntegratorConfig,
    IntegratorError,
    TimeSeries,
    collapse_set,
    effective_evolution,
    evolve_lindblad,
    evolve_unitary,
)
from .experiments import (
    ConfusionModel,
    ExperimentError,
    PulseSequence,
    ScanResult,
    calibrate,
    chiral_experiment,
    extract_geff,
    run_sequence,
    scan_delta_single,
    scan_dphi,
)
from .floquet import (
    EffectiveReport,
    FloquetSeries,
    ResonanceError,
    bessel_j,
    beta_series,
    effective_hamiltonian,
    effective_hamiltonian_anharmonic,
    harmonic_components,
    kappa_prime,
    pairwise_geff,
    period_propagator_log,
    single_mod_geff,
)
from .hambuild import (
    HamiltonianFn,
    chirality_operator,
    interaction_hamiltonian,
    lab_hamiltonian_2level,
    lab_hamiltonian_3level,
    rotating_hamiltonian_3level,
)
from .qcore import (
    DensityMatrix,
    HilbertSpace,
    Operator,
    QcoreError,
    StateVector,
    basis_index,
    basis_state,
    expm_hermitian,
)

__version__ = "0.1.0"
