"""Analytic simulator of the quantum linear-system solver with resource meters.

Builds the exact state after every stage of the algorithm for Hermitian
positive-definite systems, quantifies the entanglement and coherence each
stage carries, and studies their degradation under Gaussian-disordered
conditioned rotations.  Ships as a library, a FastAPI compute service and a
thin CLI client.
"""

__version__ = "0.1.0"

from .disorder import (
    DisorderConfig,
    DisorderRun,
    error_metric,
    noisy_psi2,
    noisy_solution,
    quenched_average,
    sample_epsilons,
    standard_quenched_averages,
)
from .engine import (
    LinearSystem,
    Solution,
    SpectralData,
    TripartiteState,
    build_state,
    condition_number,
    hermitize,
    kappa_family,
    solution,
    spectral_decompose,
    trivial_instance,
)
from .errors import (
    CircuitConstantError,
    DegeneracyWarning,
    DegenerateReference,
    EigenvalueScalingError,
    HermiticityViolation,
    HHLLabError,
    InvalidCut,
    RangeError,
    ShapeError,
    SizeError,
    SpectrumError,
    StageError,
    ZeroPostselection,
)
from .measures import (
    ResourceReport,
    coherence_r_closed_form,
    ggm,
    l1_coherence,
    log_negativity,
    log_negativity_closed_form,
    micro_ggm,
    negativity,
    negativity_closed_form,
    report,
    rho_r_closed_form,
    shared_eigenvalue_bits,
)
from .tensor import (
    hermitian_eig,
    partial_trace,
    partial_transpose,
    purity,
    schmidt_squared,
)

__all__ = [
    "__version__",
    "CircuitConstantError",
    "DegeneracyWarning",
    "DegenerateReference",
    "DisorderConfig",
    "DisorderRun",
    "EigenvalueScalingError",
    "HHLLabError",
    "HermiticityViolation",
    "InvalidCut",
    "LinearSystem",
    "RangeError",
    "ResourceReport",
    "ShapeError",
    "SizeError",
    "Solution",
    "SpectralData",
    "SpectrumError",
    "StageError",
    "TripartiteState",
    "ZeroPostselection",
    "build_state",
    "coherence_r_closed_form",
    "condition_number",
    "error_metric",
    "ggm",
    "hermitian_eig",
    "hermitize",
    "kappa_family",
    "l1_coherence",
    "log_negativity",
    "log_negativity_closed_form",
    "micro_ggm",
    "negativity",
    "negativity_closed_form",
    "noisy_psi2",
    "noisy_solution",
    "partial_trace",
    "partial_transpose",
    "purity",
    "quenched_average",
    "report",
    "rho_r_closed_form",
    "sample_epsilons",
    "schmidt_squared",
    "shared_eigenvalue_bits",
    "solution",
    "spectral_decompose",
    "standard_quenched_averages",
    "trivial_instance",
]
