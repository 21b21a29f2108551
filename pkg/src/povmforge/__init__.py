"""Approximately symmetric informationally complete POVMs over finite fields."""

__version__ = "0.1.0"

from .construction_q import build_ensemble_q, build_frame_operator_q, build_vectors_q, epsilon_ledger_q
from .construction_q1 import (
    build_ensemble_q1,
    build_s_set,
    epsilon_ledger_q1,
    verify_difference_structure,
    verify_li_bound,
)
from .errors import PovmForgeError
from .finite_field import FieldSpec, TowerSpec, make_field, make_tower
from .functions import (
    PolyFunction,
    build_f_permutation,
    catalogue_2to1_pn,
    count_two_to_one_bruteforce,
    count_two_to_one_formula,
    is_pn,
    is_two_to_one,
)
from .kernels import BACKEND
from .verify import codebook_metrics, frame_angles, frame_span_check, verify_povm_axioms, welch_bound

__all__ = [
    "BACKEND",
    "FieldSpec",
    "PolyFunction",
    "PovmForgeError",
    "TowerSpec",
    "build_ensemble_q",
    "build_ensemble_q1",
    "build_f_permutation",
    "build_frame_operator_q",
    "build_s_set",
    "build_vectors_q",
    "catalogue_2to1_pn",
    "codebook_metrics",
    "count_two_to_one_bruteforce",
    "count_two_to_one_formula",
    "epsilon_ledger_q",
    "epsilon_ledger_q1",
    "frame_angles",
    "frame_span_check",
    "is_pn",
    "is_two_to_one",
    "make_field",
    "make_tower",
    "verify_difference_structure",
    "verify_li_bound",
    "verify_povm_axioms",
    "welch_bound",
]
