"""Discretisation, spectra, observables and Fourier analysis."""

from .analytic import AnalyticSpectrum, analytic_spectrum, well_decomposition
from .decomposition import (
    MomentEstimate,
    NonSymmetricOperator,
    SpectralDecomposition,
    SpectralFunction,
    eigendecompose,
    moment_via_spectrum,
    operator_function,
)
from .discretize import DiscretizedOperator, UnsupportedBoundary, discretize
from .fourier import fourier_transform, weyl_check
from .grid import Grid, WaveFunction
from .observables import (
    DomainError,
    Expectation,
    UncertaintyReport,
    approximate_eigenfunction,
    expectation,
    lphi_bound,
    squared_norm,
    uncertainty_product,
)

__all__ = [
    "AnalyticSpectrum",
    "DiscretizedOperator",
    "DomainError",
    "Expectation",
    "Grid",
    "MomentEstimate",
    "NonSymmetricOperator",
    "SpectralDecomposition",
    "SpectralFunction",
    "UncertaintyReport",
    "UnsupportedBoundary",
    "WaveFunction",
    "analytic_spectrum",
    "approximate_eigenfunction",
    "discretize",
    "eigendecompose",
    "expectation",
    "fourier_transform",
    "lphi_bound",
    "moment_via_spectrum",
    "operator_function",
    "squared_norm",
    "uncertainty_product",
    "weyl_check",
    "well_decomposition",
]
