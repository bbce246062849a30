"""Free product *-algebras, bilinear generalized states, and a numerical
GNS-style Hilbert-space pipeline for processes without a fixed causal order."""

from .algebra import (
    AlgebraError,
    AlgebraMismatchError,
    DimensionMismatchError,
    FactorSpec,
    FactorSpecError,
    FreeAlgebra,
    FreeElement,
    Letter,
    UnknownFactorError,
    WordLengthError,
    element_from_json,
    element_from_obj,
    element_to_json,
    element_to_obj,
    gell_mann_basis,
    induced_hom,
    word_sort_key,
)
from .expr import ExprError, UnboundSymbolError, eval_expr, parse, pretty
from .gns import (
    GnsResult,
    GramPropertyError,
    LeftIdealReport,
    RepresentationError,
    WordBasis,
    build_gns,
    check_left_ideal,
    gram,
    null_space,
    reconstruct_check,
    represent,
    represent_word,
)
from .models import LoadedModel, ModelFormatError, load_model, load_model_obj
from .oracle import chain_amplitude, heisenberg_correlator, state_kernel_bruteforce
from .states import (
    FuzzBranch,
    FuzzModel,
    GeneralizedState,
    ModelValidationError,
    SequentialModel,
    StateError,
    SuperspacetimeBranch,
    SuperspacetimeModel,
    SwitchModel,
    from_superspacetime,
    group_by_factor,
)
from .verify import verify_state

__version__ = "0.1.0"

__all__ = [
    "AlgebraError",
    "AlgebraMismatchError",
    "DimensionMismatchError",
    "ExprError",
    "FactorSpec",
    "FactorSpecError",
    "FreeAlgebra",
    "FreeElement",
    "FuzzBranch",
    "FuzzModel",
    "GeneralizedState",
    "GnsResult",
    "GramPropertyError",
    "LeftIdealReport",
    "Letter",
    "LoadedModel",
    "ModelFormatError",
    "ModelValidationError",
    "RepresentationError",
    "SequentialModel",
    "StateError",
    "SuperspacetimeBranch",
    "SuperspacetimeModel",
    "SwitchModel",
    "UnboundSymbolError",
    "UnknownFactorError",
    "WordBasis",
    "WordLengthError",
    "build_gns",
    "chain_amplitude",
    "check_left_ideal",
    "element_from_json",
    "element_from_obj",
    "element_to_json",
    "element_to_obj",
    "eval_expr",
    "from_superspacetime",
    "gell_mann_basis",
    "gram",
    "group_by_factor",
    "heisenberg_correlator",
    "induced_hom",
    "load_model",
    "load_model_obj",
    "null_space",
    "parse",
    "pretty",
    "reconstruct_check",
    "represent",
    "represent_word",
    "state_kernel_bruteforce",
    "verify_state",
    "word_sort_key",
]
