"""Sumsets, approximate groups and covering numbers of finite integer sets."""

__version__ = "0.1.0"

from ._accel import BACKEND
from .asymptotic import (AsymptoticReport, NormalForm, StabilizationReport, StructureConstants,
                         asymptotic_covering_number, covering_sequence, endpoint_gap_condition,
                         eventual_constants, is_asymptotic_ap, is_normal_form, normalize,
                         stabilization_check, structure_constants)
from .covering import (CoverInstance, CoverResult, ap_covering_number, build_instance,
                       covering_number, is_approximate_group, lower_bound)
from .errors import (ApproxCoverError, BudgetExceeded, EmptySetError, IntegerOverflow,
                     InvalidFold, InvalidSize, NoStabilization, SetParseError)
from .intset import IntSet, dilate, format_set, pairwise_sumset, parse_set, translate, union
from .sumsets import APShape, affine_reduce, detect_ap, eventual_structure, hfold, hfold_size_bound

__all__ = [
    "BACKEND", "IntSet", "APShape", "NormalForm", "CoverInstance", "CoverResult",
    "AsymptoticReport", "StabilizationReport", "StructureConstants",
    "translate", "dilate", "union", "pairwise_sumset", "parse_set", "format_set",
    "hfold", "hfold_size_bound", "detect_ap", "affine_reduce", "eventual_structure",
    "covering_number", "lower_bound", "ap_covering_number", "is_approximate_group",
    "build_instance", "normalize", "is_normal_form", "endpoint_gap_condition",
    "is_asymptotic_ap", "asymptotic_covering_number", "covering_sequence",
    "stabilization_check", "structure_constants", "eventual_constants",
    "ApproxCoverError", "BudgetExceeded", "EmptySetError", "IntegerOverflow", "InvalidFold",
    "InvalidSize", "NoStabilization", "SetParseError",
]
