"""Approximately symmetric POVM in dimension q from a 2-to-1 PN function.

Character vectors ``v_(a,b)[i] = chi(a f(a_i) + b a_i) / sqrt(q)`` for
``a`` in GF(q), ``b != 0``, ordered by the f-permutation ``a_1..a_q``, are
joined by the standard basis and renormalised by ``E^(-1/2)``.
"""

from __future__ import annotations

import math

import numpy as np

from .characters import AdditiveCharacter, roots_table
from .ensemble import (
    BOUND_TOL,
    CaseRecord,
    EpsilonLedger,
    PovmEnsemble,
    case_extrema,
    inner_extrema,
)
from .errors import (
    BoundViolated,
    ClosedFormMismatch,
    EvenQ,
    InvalidPermutation,
    NotTwoToOnePN,
    TrivialCharacter,
)
from .finite_field import FieldSpec
from .functions import FPermutation, PolyFunction, build_f_permutation, is_two_to_one_pn
from .linalg import (
    frame_operator_q_closed_form,
    inverse_sqrt,
    max_abs,
    structured_inverse_sqrt_q,
)

CONSTRUCTION = "pn_q"
CLOSED_FORM_TOL = 1e-9
CASES = ("1.1", "1.2", "2", "3")


def _check_inputs(spec: FieldSpec, f: PolyFunction, perm: FPermutation, chi_index) -> int:
    q = spec.q
    if q % 2 == 0 or q < 3:
        raise EvenQ(f"odd q required (got q={q})")
    if f.spec != spec:
        raise ValueError("f is defined over a different field")
    if not is_two_to_one_pn(f):
        raise NotTwoToOnePN(f"{f} is not a 2-to-1 PN function over GF({q})")
    if perm.f != f or not perm.is_valid():
        raise InvalidPermutation(f"{perm.order} is not an f-permutation for {f}")
    chi = int(chi_index)
    if not 0 <= chi < q:
        raise ValueError(f"character index {chi} outside GF({q})")
    if chi == 0:
        raise TrivialCharacter("the trivial additive character gives a degenerate family")
    return chi


def character_labels(spec: FieldSpec) -> list[tuple]:
    return [("char", a, b) for a in spec.elements() for b in spec.nonzero()]


def character_exponents(spec: FieldSpec, f: PolyFunction, perm: FPermutation, chi_index) -> np.ndarray:
    """Integer exponents ``tr(r (a f(a_i) + b a_i))`` mod ``p``, one row per ``(a, b)``."""
    chi = AdditiveCharacter(spec, int(chi_index))
    order = np.asarray(perm.order, dtype=np.int_)
    fvals = np.asarray(f.table(), dtype=np.int_)[order]
    rows = []
    for a in spec.elements():
        af = spec.mul_array(a, fvals)
        for b in spec.nonzero():
            rows.append(chi.exponents(spec.add_array(af, spec.mul_array(b, order))))
    return np.array(rows, dtype=np.int_)


def build_vectors_q(spec: FieldSpec, f: PolyFunction, perm: FPermutation | None = None, chi_index=1) -> np.ndarray:
    """``q^2`` unit vectors: the ``q(q-1)`` character vectors, then ``e_1..e_q``.

    Raises
    ------
    EvenQ
        ``q`` is even.
    NotTwoToOnePN
        ``f`` fails the 2-to-1 or the PN test.
    InvalidPermutation
        ``perm`` does not pair equal f-values.
    TrivialCharacter
        ``chi_index`` is zero.
    """
    if spec.q % 2 == 0:
        raise EvenQ(f"odd q required (got q={spec.q})")
    if perm is None:
        if not is_two_to_one_pn(f):
            raise NotTwoToOnePN(f"{f} is not a 2-to-1 PN function over GF({spec.q})")
        perm = build_f_permutation(f)
    chi = _check_inputs(spec, f, perm, chi_index)
    q = spec.q
    chars = roots_table(spec.p)[character_exponents(spec, f, perm, chi)] / math.sqrt(q)
    return np.vstack([chars, np.eye(q, dtype=np.complex128)])


def build_frame_operator_q(vectors: np.ndarray) -> np.ndarray:
    """``E = sum (1/q) |v><v|``, checked entrywise against its closed form.

    Raises
    ------
    ClosedFormMismatch
        Some entry is off by more than ``1e-9``.
    """
    V = np.asarray(vectors, dtype=np.complex128)
    q = V.shape[1]
    if V.shape[0] != q * q:
        raise ValueError(f"expected {q * q} vectors, got {V.shape[0]}")
    E = (V.T @ V.conj()) / q
    dev = max_abs(E - frame_operator_q_closed_form(q))
    if dev > CLOSED_FORM_TOL:
        raise ClosedFormMismatch(f"frame operator deviates from its closed form by {dev:.3e}")
    return E


def _members(vectors: np.ndarray, B: np.ndarray, weight: float):
    raw = weight * np.einsum("ni,nj->nij", vectors, vectors.conj())
    W = vectors @ B.T
    members = weight * np.einsum("ni,nj->nij", W, W.conj())
    return raw, members


def renormalize(E: np.ndarray, structured: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return the structured ``E^(-1/2)`` and the generic one after comparing them."""
    generic = inverse_sqrt(E)
    dev = max_abs(structured - generic)
    if dev > CLOSED_FORM_TOL:
        raise ClosedFormMismatch(f"structured and generic inverse square roots differ by {dev:.3e}")
    return structured, generic


def build_ensemble_q(spec: FieldSpec, f: PolyFunction, perm: FPermutation | None = None, chi_index=1) -> PovmEnsemble:
    """Members ``M_i = E^(-1/2) E_i E^(-1/2)`` in the order of ``build_vectors_q``."""
    if perm is None and spec.q % 2 == 1 and is_two_to_one_pn(f):
        perm = build_f_permutation(f)
    vectors = build_vectors_q(spec, f, perm, chi_index)
    q = spec.q
    E = build_frame_operator_q(vectors)
    B, B_gen = renormalize(E, structured_inverse_sqrt_q(q))
    raw, members = _members(vectors, B, 1.0 / q)
    labels = character_labels(spec) + [("basis", i) for i in range(q)]
    params = {
        "q": q,
        "field": spec.to_json(),
        "f": f.to_json(),
        "chi": int(chi_index),
        "permutation": perm.to_json(),
    }
    return PovmEnsemble(q, CONSTRUCTION, members, raw, vectors, B, B_gen, E, labels, params)


def case_formulas_q(q: int) -> dict[str, dict[str, float]]:
    """Tight bounds, epsilon forms and claimed gap orders for each pair class."""
    s = math.sqrt(q)
    d2 = q * q - 1
    et = {
        "1.1": (q * q - q + s + 1) / (s * d2),
        "1.2": (q * q - q + 1) / (s * d2),
        "2": (q + 2) / d2,
        "3": q * s / d2,
    }
    eps = {
        "1.1": (q * q - q + s + 1) * (2 * q * q * s + q * q - q - s + 1) / (q * d2 * d2),
        "1.2": (q * q - q + 1) * (2 * q * q * s + q * q - q - 2 * s + 1) / (q * d2 * d2),
        "2": q * (q + 2) * (2 * q + 1) / (d2 * d2),
        "3": q * s * (2 * q * q + q * s - 2) / (d2 * d2),
    }
    bound = {
        "1.1": ((q * q * s + q * q - q + 1) / (d2 * q)) ** 2,
        "1.2": ((q * q - q + 1) / (d2 * q)) ** 2,
        "2": ((q * q + q + 1) / (d2 * s)) ** 2,
        "3": (q / d2) ** 2,
    }
    order = {"1.1": 1.5, "1.2": 1.0, "2": 2.0, "3": 1.0}
    return {
        c: {"bound": bound[c], "epsilon": eps[c], "epsilon_tilde": et[c], "order": order[c]}
        for c in CASES
    }


def pair_cases_q(ens: PovmEnsemble) -> np.ndarray:
    """Case index per ordered pair: 0 for a != c, 1 for a = c, 2 mixed, 3 basis."""
    kinds = ens.kinds()
    a = np.array([lab[1] if lab[0] == "char" else -1 - lab[1] for lab in ens.labels])
    both_char = (kinds[:, None] == 0) & (kinds[None, :] == 0)
    both_basis = (kinds[:, None] == 1) & (kinds[None, :] == 1)
    cases = np.full((len(kinds), len(kinds)), 2, dtype=np.int_)
    cases[both_char & (a[:, None] != a[None, :])] = 0
    cases[both_char & (a[:, None] == a[None, :])] = 1
    cases[both_basis] = 3
    return cases


def build_ledger(ens, names, formulas, cases, sic, equality=(), workers=None, values=None) -> EpsilonLedger:
    q, d = ens.q, ens.dim
    values = ens.pair_values() if values is None else values
    ext = case_extrema(values, cases, len(names), workers)
    inner = inner_extrema(ens.inner_products(), cases, len(names))
    records = []
    for k, name in enumerate(names):
        fm = formulas[name]
        mx, arg, mn, cnt = ext[k]
        gap = abs(sic - fm["bound"])
        records.append(
            CaseRecord(
                case=name,
                pair_count=cnt,
                bound=fm["bound"],
                eps_form=(1 + fm["epsilon"]) / d,
                epsilon=fm["epsilon"],
                epsilon_tilde=fm["epsilon_tilde"],
                measured_max=mx,
                measured_min=mn,
                witness=arg,
                sic_value=sic,
                gap=gap,
                order=fm["order"],
                scaled_gap=gap * q ** fm["order"],
                equality=name in equality,
                inner_max=inner[k][0],
                inner_min=inner[k][1],
                tol=BOUND_TOL,
            )
        )
    return EpsilonLedger(ens.construction, q, d, tuple(records))


def epsilon_ledger_q(ens: PovmEnsemble, workers: int | None = None, strict: bool = True, values=None) -> EpsilonLedger:
    """Per-case maxima of ``q^2 Tr(M_i M_j)`` against the case bounds.

    Raises
    ------
    BoundViolated
        When ``strict`` and some case maximum exceeds its bound by more than
        ``1e-9``.
    """
    q = ens.q
    ledger = build_ledger(ens, CASES, case_formulas_q(q), pair_cases_q(ens), 1 / (q + 1), (), workers, values)
    if strict:
        for r in ledger.failures():
            raise BoundViolated(r.case, r.witness, r.measured_max, r.bound)
    return ledger


def default_function(spec: FieldSpec) -> PolyFunction:
    return PolyFunction.quadratic(spec, 1)
