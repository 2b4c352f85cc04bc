"""gaussmeter: how well do Gaussian measurement schemes estimate Gaussian states?

Exact covariance-matrix calculations and a seeded Monte Carlo oracle for
the mean- and variance-estimation accuracy of homodyne, heterodyne,
sequential and Arthurs-Kelly-type measurements on single-mode Gaussian
state ensembles.
"""

from .metrics import (
    CONVENTIONS,
    EXACT_SMALL_SAMPLE,
    PAPER_ASYMPTOTIC,
    AverageSpec,
    DistanceReport,
    EnsembleSpec,
    OptimalWidths,
    averaged_distances,
    critical_squeezing,
    critical_squeezing_bisection,
    distance_mean,
    distance_variance,
    distances,
    optimal_d1_cor,
    optimal_widths,
)
from .montecarlo import (
    EmpiricalReport,
    TrialConfig,
    compiled_available,
    empirical_distances,
    point_estimates,
    sample_outcomes,
)
from .schemes import (
    ArthursKelly,
    Heterodyne,
    Homodyne,
    MeterConfig,
    ModifiedAK,
    ReadoutChannels,
    SeparabilityReport,
    Sequential,
    post_interaction_state,
    readout_distributions,
    simon_separability,
)
from .states import (
    GaussianState,
    Marginal1D,
    apply_symplectic,
    is_physical,
    make_state,
    marginal_distribution,
    reduce_modes,
    squeezed_coherent_thermal,
    symplectic_eigenvalues,
    symplectic_form,
    thermal_state,
    vacuum_state,
    wigner_density,
)
from .symplectic import (
    SymplecticCheck,
    canonical_interaction,
    generator_from_quadratic,
    is_symplectic,
    matrix_exponential,
)

__version__ = "0.1.0"

__all__ = [
    "ArthursKelly",
    "AverageSpec",
    "CONVENTIONS",
    "DistanceReport",
    "EXACT_SMALL_SAMPLE",
    "EmpiricalReport",
    "EnsembleSpec",
    "GaussianState",
    "Heterodyne",
    "Homodyne",
    "Marginal1D",
    "MeterConfig",
    "ModifiedAK",
    "OptimalWidths",
    "PAPER_ASYMPTOTIC",
    "ReadoutChannels",
    "SeparabilityReport",
    "Sequential",
    "SymplecticCheck",
    "TrialConfig",
    "apply_symplectic",
    "averaged_distances",
    "canonical_interaction",
    "compiled_available",
    "critical_squeezing",
    "critical_squeezing_bisection",
    "distance_mean",
    "distance_variance",
    "distances",
    "empirical_distances",
    "generator_from_quadratic",
    "is_physical",
    "is_symplectic",
    "make_state",
    "marginal_distribution",
    "matrix_exponential",
    "optimal_d1_cor",
    "optimal_widths",
    "point_estimates",
    "post_interaction_state",
    "readout_distributions",
    "reduce_modes",
    "sample_outcomes",
    "simon_separability",
    "squeezed_coherent_thermal",
    "symplectic_eigenvalues",
    "symplectic_form",
    "thermal_state",
    "vacuum_state",
    "wigner_density",
]
