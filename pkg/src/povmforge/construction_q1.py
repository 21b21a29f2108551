"""Approximately symmetric POVM in dimension q+1 from characters of N.

``S = {(alpha - b)^(q-1) : b in GF(q)} U {1}`` sits in the norm-one subgroup
``N`` of GF(q^3)*. Its quotient set covers ``N \\ {1}`` exactly once, which
makes every nontrivial character sum over ``S`` small; the vectors
``u_psi = (psi(d_i))_i / sqrt(q+1)`` plus the standard basis are then
renormalised by ``E^(-1/2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .characters import RootOfUnityHistogram, roots_table
from .construction_q import build_ledger, renormalize
from .ensemble import EpsilonLedger, PovmEnsemble
from .errors import BoundViolated, ClosedFormMismatch, LiBoundViolated, NotInN
from .finite_field import TowerSpec, n_discrete_log, norm_one_subgroup
from .errors import NotInSubgroup
from .linalg import frame_operator_q1_closed_form, max_abs, structured_inverse_sqrt_q1

CONSTRUCTION = "li_q1"
CLOSED_FORM_TOL = 1e-9
LI_TOL = 1e-9
CASES = ("1", "2", "3")


@dataclass(frozen=True)
class SSet:
    """``d_i = (alpha - b_i)^(q-1)`` for ``b_i`` in enumeration order, then ``d_(q+1) = 1``.

    ``logs[i]`` is the index ``j`` with ``d_i = alpha^(j(q-1))``.
    """

    tower: TowerSpec
    elements: tuple[int, ...]
    b_order: tuple[int, ...]
    logs: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.tower.q

    def __len__(self) -> int:
        return len(self.elements)

    def to_json(self) -> dict:
        return {"elements": list(self.elements), "b_order": list(self.b_order), "logs": list(self.logs)}


def build_s_set(tower: TowerSpec) -> SSet:
    """The ``q + 1`` elements of ``S`` with their N-logarithms.

    Raises
    ------
    NotInN
        An element misses the norm-one subgroup (arithmetic bug).
    """
    ext, q = tower.ext, tower.q
    b_order = tuple(tower.base.elements())
    elems = []
    for b in b_order:
        elems.append(ext.pow(ext.sub(tower.alpha, tower.embed(b)), q - 1))
    elems.append(1)
    try:
        logs = tuple(n_discrete_log(x, tower) for x in elems)
    except NotInSubgroup as exc:
        raise NotInN(str(exc)) from exc
    return SSet(tower, tuple(elems), b_order, logs)


@dataclass(frozen=True)
class DifferenceReport:
    ok: bool
    quotient_count: int
    distinct_count: int
    collisions: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    missing: tuple[int, ...]
    contains_one: bool

    def __bool__(self) -> bool:
        return self.ok


def verify_difference_structure(s: SSet) -> DifferenceReport:
    """All ``d_i / d_j`` (``i != j``) are distinct and fill ``N \\ {1}``.

    Quotients are formed in the field, not through the logarithms, so the
    check is independent of the discrete-log table.
    """
    ext, tower = s.tower.ext, s.tower
    seen: dict[int, tuple[int, int]] = {}
    collisions = []
    for i, di in enumerate(s.elements):
        for j, dj in enumerate(s.elements):
            if i == j:
                continue
            x = ext.div(di, dj)
            if x in seen:
                collisions.append((seen[x], (i, j)))
            else:
                seen[x] = (i, j)
    target = set(norm_one_subgroup(tower)) - {1}
    missing = tuple(sorted(target - set(seen)))
    extra = set(seen) - target
    count = len(s) * (len(s) - 1)
    ok = not collisions and not missing and not extra
    return DifferenceReport(ok, count, len(seen), tuple(collisions), missing, 1 in seen)


@dataclass(frozen=True)
class LiBoundReport:
    max_modulus: float
    argmax: int
    bound: float
    moduli: tuple[float, ...]
    trivial_sum: int

    @property
    def passed(self) -> bool:
        return self.max_modulus <= self.bound + LI_TOL


def character_sum_histograms(s: SSet) -> list[RootOfUnityHistogram]:
    """Exact histogram of ``sum_i psi_m(d_i)`` for ``m = 0..n-1``."""
    n = s.tower.n_order
    logs = np.asarray(s.logs, dtype=np.int_)
    return [RootOfUnityHistogram.from_exponents((m * logs) % n, n) for m in range(n)]


def verify_li_bound(s: SSet, strict: bool = True) -> LiBoundReport:
    """Largest ``|sum_(x in S) psi(x)|`` over the nontrivial characters of N.

    Raises
    ------
    LiBoundViolated
        When ``strict`` and the maximum exceeds ``sqrt(q) + 1e-9``.
    """
    hists = character_sum_histograms(s)
    moduli = tuple(h.modulus() for h in hists[1:])
    k = int(np.argmax(moduli))
    rep = LiBoundReport(moduli[k], k + 1, math.sqrt(s.q), moduli, hists[0].size)
    if strict and not rep.passed:
        raise LiBoundViolated(f"character {k + 1}: |sum| = {moduli[k]!r} > sqrt({s.q})")
    return rep


def build_vectors_q1(s: SSet) -> np.ndarray:
    """``u_psi_m`` for ``m = 1..q^2+q``, then ``e_1..e_(q+1)``."""
    n, d = s.tower.n_order, len(s)
    m = np.arange(1, n)
    logs = np.asarray(s.logs, dtype=np.int_)
    chars = roots_table(n)[(m[:, None] * logs[None, :]) % n] / math.sqrt(d)
    return np.vstack([chars, np.eye(d, dtype=np.complex128)])


def build_frame_operator_q1(vectors: np.ndarray) -> np.ndarray:
    """``E = sum (1/(q+1)) |u><u|``, checked against its closed form."""
    V = np.asarray(vectors, dtype=np.complex128)
    d = V.shape[1]
    if V.shape[0] != d * d:
        raise ValueError(f"expected {d * d} vectors, got {V.shape[0]}")
    E = (V.T @ V.conj()) / d
    dev = max_abs(E - frame_operator_q1_closed_form(d - 1))
    if dev > CLOSED_FORM_TOL:
        raise ClosedFormMismatch(f"frame operator deviates from its closed form by {dev:.3e}")
    return E


def build_ensemble_q1(tower: TowerSpec) -> PovmEnsemble:
    s = build_s_set(tower)
    vectors = build_vectors_q1(s)
    q, d = tower.q, tower.q + 1
    E = build_frame_operator_q1(vectors)
    B, B_gen = renormalize(E, structured_inverse_sqrt_q1(q))
    raw = np.einsum("ni,nj->nij", vectors, vectors.conj()) / d
    W = vectors @ B.T
    members = np.einsum("ni,nj->nij", W, W.conj()) / d
    labels = [("char", m) for m in range(1, tower.n_order)] + [("basis", i) for i in range(d)]
    params = {"q": q, "field": tower.base.to_json(), "tower": tower.to_json(), "s_set": s.to_json()}
    return PovmEnsemble(d, CONSTRUCTION, members, raw, vectors, B, B_gen, E, labels, params)


def case_formulas_q1(q: int) -> dict[str, dict[str, float]]:
    s = math.sqrt(q)
    d = q + 1
    D = (q * q + 2 * q + 2) * (q * q + q + 1)
    L = q * q + q + s + 1
    bound = {
        "1": (s * d * L / D) ** 2,
        "2": (d**1.5 * L / D) ** 2,
        "3": d**4 / D**2,
    }
    eps = {
        "1": (q * d**3 * L * L - D * D) / (D * D),
        "2": (d**4 * L * L - D * D) / (D * D),
        "3": (d**5 + 2 * d**2.5 * D) / (D * D),
    }
    et = {
        "1": (s * d**1.5 * L - D) / D,
        "2": (d * d * L - D) / D,
        "3": d**2.5 / D,
    }
    order = {"1": 2.5, "2": 2.0, "3": 1.0}
    return {c: {"bound": bound[c], "epsilon": eps[c], "epsilon_tilde": et[c], "order": order[c]} for c in CASES}


def pair_cases_q1(ens: PovmEnsemble) -> np.ndarray:
    kinds = ens.kinds()
    return (kinds[:, None] + kinds[None, :]).astype(np.int_)


def epsilon_ledger_q1(ens: PovmEnsemble, workers: int | None = None, strict: bool = True, values=None) -> EpsilonLedger:
    """Per-case maxima of ``(q+1)^2 Tr(F_i F_j)``; the basis case must be an equality.

    Raises
    ------
    BoundViolated
        When ``strict`` and a case fails.
    """
    q = ens.q
    ledger = build_ledger(ens, CASES, case_formulas_q1(q), pair_cases_q1(ens), 1 / (q + 2), ("3",), workers, values)
    if strict:
        for r in ledger.failures():
            raise BoundViolated(r.case, r.witness, r.measured_max, r.bound)
    return ledger


def inner_product_via_characters(s: SSet, m1: int, m2: int) -> complex:
    """``<u_(m1)|u_(m2)> = (1/(q+1)) sum_i psi_(m2-m1)(d_i)``, from an exact histogram."""
    n = s.tower.n_order
    h = RootOfUnityHistogram.from_exponents([((m2 - m1) * j) % n for j in s.logs], n)
    return h.value() / len(s)
