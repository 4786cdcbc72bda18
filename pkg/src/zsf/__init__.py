"""Invariant zeros of linear state-space systems via the zero-subspace form."""
from .exceptions import (
    DegeneratePencil,
    DegenerateStack,
    IllConditionedWarning,
    NonzeroFeedthrough,
    NoRelativeDegree,
    SingularMatrixError,
    TallSystemUnsupported,
    ZSFError,
)
from .matcore import CMultiset, Tolerances
from .sysmodel import (
    RelativeDegree,
    StateSpace,
    SystemShape,
    classify,
    controllable_canonical,
    dynamic_extension,
    relative_degree,
)
from .zsform import ZeroSubspaceForm, transform
from .zerosolver import RosenbrockPencil, ZeroSet, invariant_zeros, rank_drop_test, verify_zero_set
from .normalform import NormalForm, normal_form, zero_dynamics
from .estimator import InvariantZeros, ZeroSubspaceTransformer

__version__ = "0.1.0"
