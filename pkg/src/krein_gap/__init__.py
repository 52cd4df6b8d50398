"""Non-negative self-adjoint extensions of finite-dimensional models, their
gap operators, perturbed resolvents and point-interaction spectra."""

from ._backend import BACKEND, HAVE_NUMBA
from .cayley import PsdContraction, resolvent_at_minus_one, to_contraction, to_operator
from .criterion import (
    A_IS_MAXIMAL,
    A_IS_MINIMAL,
    UNIQUE,
    CriterionReport,
    CriterionSpec,
    TwoPointSpec,
    classify_exponents,
    delta_restriction_gaps,
    improper_quadrature,
    polyharmonic_classify,
    trichotomy_table,
    two_point_report,
)
from .errors import (
    ConsistencyError,
    DivergenceError,
    DomainError,
    IndeterminateLimitError,
    InvalidModelError,
    InvertibilityError,
    KreinGapError,
    NotAnOperatorError,
    NumericError,
    PoleError,
    QuadratureError,
    ShapeError,
    SpectralPointError,
    ValidationError,
)
from .green import (
    GreenQuery,
    PointPerturbation,
    free_green,
    negative_eigenvalue,
    perturbed_green,
)
from .interval import (
    BlockForm,
    GapPair,
    IntervalReport,
    admissible_interval,
    decompose,
    gap_operators,
    in_interval,
    is_admissible,
)
from .linalg import (
    EpsSchedule,
    OrthoSplit,
    SymOperator,
    block_inverse_identity_check,
    limit_extrapolate,
    psd_check,
    schur_complement,
)
from .quadrature import IntegralVerdict, adaptive_integrate, improper_integral
from .resolvent import (
    PerturbationParam,
    build_perturbation,
    extreme_perturbations,
    krein_resolvent,
    resolvent_direct,
)
from .special import bessel_k0, digamma, euler_gamma

__version__ = "0.1.0"
