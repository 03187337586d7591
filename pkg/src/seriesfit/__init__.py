"""Weighted least-squares regression by a greedily grown series of basis terms.

The response is modeled as a base predictor plus terms alpha * f(beta, x)
added one at a time: each iteration picks the frequency beta whose
closed-form optimal amplitude yields the largest drop in the weighted sum
of squared residuals.  Sinusoidal families make this a Fourier-flavored fit
for irregularly sampled data; validation-based early stopping guards
against chasing noise.
"""

from .basis import (
    BasisFamily,
    FrequencyBand,
    IDENTITY_TRANSFORM,
    InputTransform,
    affine_transform,
    basis_energy,
    evaluate_basis,
    register_basis_kind,
    span2pi_transform,
)
from .dataset import (
    Dataset,
    DatasetError,
    EmptyDatasetError,
    LengthMismatchError,
    NonFiniteValueError,
    NonPositiveWeightError,
    Observation,
    collapse_duplicates,
    residuals,
    validate_dataset,
    weighted_ss,
)
from .fitter import (
    STOP_MAX_ITERATIONS,
    STOP_NO_CANDIDATE,
    STOP_SS_TARGET,
    STOP_VALIDATION,
    BetaSearchResult,
    DegenerateBasisError,
    EarlyStopDecision,
    FitConfig,
    FitReport,
    IterationRecord,
    MissingValidationSSError,
    NoViableCandidateError,
    TooFewPointsError,
    early_stopping_check,
    fit,
    make_base_model,
    optimal_coefficient,
    search_beta,
    split_dataset,
)
from .model import (
    FORMAT_VERSION,
    BaseModel,
    ModelMetadata,
    ParseError,
    SeriesModel,
    Term,
    UnsupportedVersionError,
    deserialize,
    predict,
    predict_many,
    serialize,
    serialize_report,
)

__version__ = "0.1.0"

__all__ = [
    "BasisFamily",
    "FrequencyBand",
    "IDENTITY_TRANSFORM",
    "InputTransform",
    "affine_transform",
    "basis_energy",
    "evaluate_basis",
    "register_basis_kind",
    "span2pi_transform",
    "Dataset",
    "DatasetError",
    "EmptyDatasetError",
    "LengthMismatchError",
    "NonFiniteValueError",
    "NonPositiveWeightError",
    "Observation",
    "collapse_duplicates",
    "residuals",
    "validate_dataset",
    "weighted_ss",
    "STOP_MAX_ITERATIONS",
    "STOP_NO_CANDIDATE",
    "STOP_SS_TARGET",
    "STOP_VALIDATION",
    "BetaSearchResult",
    "DegenerateBasisError",
    "EarlyStopDecision",
    "FitConfig",
    "FitReport",
    "IterationRecord",
    "MissingValidationSSError",
    "NoViableCandidateError",
    "TooFewPointsError",
    "early_stopping_check",
    "fit",
    "make_base_model",
    "optimal_coefficient",
    "search_beta",
    "split_dataset",
    "FORMAT_VERSION",
    "BaseModel",
    "ModelMetadata",
    "ParseError",
    "SeriesModel",
    "Term",
    "UnsupportedVersionError",
    "deserialize",
    "predict",
    "predict_many",
    "serialize",
    "serialize_report",
    "__version__",
]
