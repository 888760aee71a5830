"""Green's function of the bounded-solutions problem and computable bounds."""

from .bounds import (
    BoundParams,
    QtdsParams,
    bessel_k_half,
    conv_power_closed,
    conv_power_poly,
    entrywise_bound,
    h_eval,
    qtds18_bound,
    triangular_bound,
    van_loan_bound,
)
from .errors import (
    ConvergenceFailure,
    DomainError,
    GreenboundError,
    Inapplicable,
    NotStrictlyTriangular,
    NotTriangular,
    SingularIteration,
    SingularResolvent,
    SpectrumOnAxis,
    UndefinedAtZero,
)
from .green import (
    GreenKernel,
    QuadSpec,
    SpectralSplit,
    bounded_solution,
    green_function,
    matrix_exp,
    matrix_sign,
    spectral_gaps,
    spectral_projectors,
)
from .matcore import (
    abs_power,
    as_matrix,
    entrywise_abs,
    induced_norm,
    split_triangular,
)
from .oracles import (
    ContourSpec,
    conv_power_numeric,
    green_contour,
    perturbation_residual,
)
from .schur import SchurForm, hessenberg, schur_decompose

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
