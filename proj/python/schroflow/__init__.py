"""Inverse-square Schroedinger flows: spectral tables, closed-form evolution, kernels and decay fits."""

from ._core import (
    BoundsError,
    ConfigError,
    DomainError,
    NumericError,
    SpectralRow,
    SpectralTable,
    __version__,
    bessel_j,
    circle_eigenvalues,
    compare_routes,
    constant_a_table,
    decay_fit,
    dyadic_times,
    evolve_closed_form,
    free_gaussian,
    free_kernel,
    run_cli,
    table_from_eigenvalues,
)

__all__ = [
    "BoundsError",
    "ConfigError",
    "DomainError",
    "NumericError",
    "SpectralRow",
    "SpectralTable",
    "__version__",
    "bessel_j",
    "circle_eigenvalues",
    "compare_routes",
    "constant_a_table",
    "decay_fit",
    "dyadic_times",
    "evolve_closed_form",
    "free_gaussian",
    "free_kernel",
    "run_cli",
    "table_from_eigenvalues",
]
