"""Dirichlet-series zeta distributions: exact convolution algebra, series
evaluation with tail bounds, certified zero scanning, moments and sampling,
and classification of the law's divisibility regime."""

from .arith import (
    ArithmeticFunction,
    GrowthBound,
    LogLinear,
    MangoldtSequence,
    Rational,
    dirichlet_convolve,
    dirichlet_inverse,
    identity_function,
    log_twist,
    sign_of,
    von_mangoldt,
)
from .dist import (
    ZetaDistribution,
    build_distribution,
    moments_analytic,
    moments_direct,
    sample,
)
from .errors import (
    ContourError,
    DomainError,
    HypothesisViolationError,
    InvalidLengthError,
    NonInvertibleError,
    NotDistributionError,
    OutOfDomainError,
    ResourceLimitError,
    UnsupportedExactnessError,
    ZetadistError,
)
from .generators import GeneratorSpec, generate, parse_spec
from .levy import (
    CharacteristicCheck,
    Classification,
    QuasiLevyMeasure,
    classify,
    compound_poisson_cf,
    observed_decay_abscissa,
    quasi_levy_measure,
    validate_characteristic,
)
from .series import (
    EvalPoint,
    EvalResult,
    NotCharacteristicWarning,
    evaluate_cf,
    evaluate_log_series,
    evaluate_series,
    tail_bound,
)
from .zeroscan import (
    Rectangle,
    Sigma0Estimate,
    ZeroScanReport,
    count_zeros,
    estimate_sigma0,
    localize_zeros,
)

__version__ = "0.1.0"

__all__ = [
    "ArithmeticFunction",
    "CharacteristicCheck",
    "Classification",
    "ContourError",
    "DomainError",
    "EvalPoint",
    "EvalResult",
    "GeneratorSpec",
    "GrowthBound",
    "HypothesisViolationError",
    "InvalidLengthError",
    "LogLinear",
    "MangoldtSequence",
    "NonInvertibleError",
    "NotCharacteristicWarning",
    "NotDistributionError",
    "OutOfDomainError",
    "QuasiLevyMeasure",
    "Rational",
    "Rectangle",
    "ResourceLimitError",
    "Sigma0Estimate",
    "UnsupportedExactnessError",
    "ZeroScanReport",
    "ZetaDistribution",
    "ZetadistError",
    "build_distribution",
    "classify",
    "compound_poisson_cf",
    "count_zeros",
    "dirichlet_convolve",
    "dirichlet_inverse",
    "estimate_sigma0",
    "evaluate_cf",
    "evaluate_log_series",
    "evaluate_series",
    "generate",
    "identity_function",
    "localize_zeros",
    "log_twist",
    "moments_analytic",
    "moments_direct",
    "observed_decay_abscissa",
    "parse_spec",
    "quasi_levy_measure",
    "sample",
    "sign_of",
    "tail_bound",
    "validate_characteristic",
    "von_mangoldt",
]
