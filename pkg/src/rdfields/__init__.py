"""Exact class groups and zeta values at -1 for the fields Q(sqrt(n^2 + r)), r in {1, 4}."""

from .dedekind import dedekind_sum
from .errors import DomainError, NotSquarefreeError
from .forms import BinaryForm, all_classes
from .quadfield import make_field
from .theorems import classify, scan, verify_instance
from .zeta import lang_partial_zeta, zagier_zeta_minus1, zeta_minus1_by_classes

__all__ = [
    "BinaryForm",
    "DomainError",
    "NotSquarefreeError",
    "all_classes",
    "classify",
    "dedekind_sum",
    "lang_partial_zeta",
    "make_field",
    "scan",
    "verify_instance",
    "zagier_zeta_minus1",
    "zeta_minus1_by_classes",
]
