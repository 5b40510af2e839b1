"""Deuteron VQE workbench: oscillator-basis Hamiltonian, one-hot ansatz,
trapped-ion compilation, noisy shot simulation and zero-noise extrapolation."""

__version__ = "0.1.0"

from .ansatz import (
    AngleConvention,
    HypersphericalParams,
    RESOLVED_CONVENTION,
    amplitudes,
    build_ansatz_circuit,
    energy_expectation_exact,
    optimal_parameters,
    resolve_convention,
)
from .circuits import Gate, LogicalCircuit, NativeCircuit
from .compiler import optimize_native, transpile, unitary_equivalent, unitary_of
from .driver import (
    RunConfig,
    ScanSpec,
    convergence_report,
    fit_quadratic_minimum,
    landscape_scan,
    vqe_run,
    zne_energy,
)
from .estimator import (
    ZnePoint,
    ZneResult,
    ZneSeries,
    energy_estimate,
    measurement_settings,
    richardson_extrapolate,
    spam_correct,
    term_expectation,
)
from .hamiltonian import (
    EftConfig,
    OscillatorHamiltonian,
    PauliHamiltonian,
    build_oscillator_hamiltonian,
    exact_ground_energy,
    jordan_wigner,
    kinetic_element,
    potential_element,
)
from .simulator import (
    FoldSpec,
    NoiseModel,
    Statevector,
    fold_circuit,
    run_ideal,
    run_trajectory,
    sample_counts,
    zero_state,
)

__all__ = [name for name in dir() if not name.startswith("_")]
