"""Erdelyi-Kober fractional operators and a Hermite-Galerkin solver for
Erdelyi-Kober diffusion on the real line."""

from .analytic import convolve_oracle, exact_gaussian_beta1, green
from .errors import (
    ConvergenceError,
    EKError,
    NumericalError,
    ParameterError,
    PoleError,
    PrecisionLossError,
    SingularSystemError,
)
from .hermite import (
    HermiteBasis,
    QuadratureRule,
    eval_expansion,
    gauss_hermite,
    hermite_functions,
    l2_error,
    l2_norm,
    project,
    stiffness,
)
from .operators import (
    OperatorParams,
    SampleSeries,
    WeightTable,
    apply_G,
    apply_K,
    apply_L,
    derivative_weights,
    exact_derivative_powerlaw,
    exact_derivative_quadrature,
    exact_integral_powerlaw,
    exact_integral_quadrature,
    integral_weights,
)
from .solver import SolveReport, SolverConfig, march, run
from .specfun import SeriesControl, gamma_real, hyp2f1, mainardi_m
from .studies import StudySpec, aitken_order

__version__ = "0.1.0"
