"""Domain-aware analysis of one-dimensional quantum-mechanical operators."""

from .operator_core import (
    BoundaryForm,
    BoundaryFunctional,
    ClassificationReport,
    DifferentialExpression,
    ExtendedInterval,
    OperatorSpec,
    adjoint_domain,
    apply_exact,
    classify,
    formal_adjoint,
    is_in_domain,
    surface_form,
)
from .algebra import Polynomial, QI
from .functions import AnalyticFunction
from .deficiency import (
    ExtensionFamily,
    NoSelfAdjointExtension,
    deficiency_indices,
    point_spectrum_first_order,
    self_adjoint_extensions,
    spectrum_region,
)
from .paradoxes import ClaimRecord, ParadoxConfig, ParadoxVerdict, run_all, run_paradox
from .specfile import SpecFileError, emit_spec, parse_spec, parse_spec_file

__version__ = "0.1.0"

__all__ = [
    "AnalyticFunction",
    "BoundaryForm",
    "BoundaryFunctional",
    "ClassificationReport",
    "ClaimRecord",
    "DifferentialExpression",
    "ExtensionFamily",
    "ExtendedInterval",
    "NoSelfAdjointExtension",
    "OperatorSpec",
    "ParadoxConfig",
    "ParadoxVerdict",
    "Polynomial",
    "QI",
    "SpecFileError",
    "adjoint_domain",
    "apply_exact",
    "classify",
    "deficiency_indices",
    "emit_spec",
    "formal_adjoint",
    "is_in_domain",
    "parse_spec",
    "parse_spec_file",
    "point_spectrum_first_order",
    "run_all",
    "run_paradox",
    "self_adjoint_extensions",
    "spectrum_region",
    "surface_form",
]
