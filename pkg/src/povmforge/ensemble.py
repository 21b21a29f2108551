"""Ensemble container, per-case bound ledger and the pairwise scan."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .linalg import gram_matrix

BOUND_TOL = 1e-9


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("POVMFORGE_WORKERS", "1")))
    except ValueError:
        return 1


@dataclass
class PovmEnsemble:
    """``dim**2`` subnormalised projectors with their provenance.

    ``members[i] = B raw_members[i] B`` with ``B = renormalizer``; ``vectors``
    holds the unit vectors behind ``raw_members`` and ``weight`` their common
    prefactor ``1/dim``.
    """

    dim: int
    construction: str
    members: np.ndarray
    raw_members: np.ndarray
    vectors: np.ndarray
    renormalizer: np.ndarray
    renormalizer_generic: np.ndarray
    frame_operator: np.ndarray
    labels: list[tuple]
    parameters: dict[str, Any] = field(default_factory=dict)

    @property
    def weight(self) -> float:
        return 1.0 / self.dim

    @property
    def q(self) -> int:
        return int(self.parameters["q"])

    def __len__(self) -> int:
        return len(self.members)

    def kinds(self) -> np.ndarray:
        return np.array([0 if lab[0] == "char" else 1 for lab in self.labels])

    def member_sum(self) -> np.ndarray:
        return self.members.sum(axis=0)

    def dual_path_deviation(self) -> float:
        return float(np.max(np.abs(self.renormalizer - self.renormalizer_generic)))

    def pair_values(self) -> np.ndarray:
        """``dim^2 Tr(M_i M_j)`` for every ordered pair, from the members themselves."""
        return self.dim**2 * gram_matrix(self.members)

    def inner_products(self) -> np.ndarray:
        """``|<v_i|v_j>|`` for the unnormalised-frame vectors."""
        return np.abs(self.vectors.conj() @ self.vectors.T)

    def with_members(self, members: np.ndarray) -> PovmEnsemble:
        """Copy with replaced members (used to build mutants for the verifier)."""
        return PovmEnsemble(
            self.dim,
            self.construction,
            np.array(members, dtype=np.complex128),
            self.raw_members,
            self.vectors,
            self.renormalizer,
            self.renormalizer_generic,
            self.frame_operator,
            list(self.labels),
            dict(self.parameters),
        )


@dataclass(frozen=True)
class CaseRecord:
    """One pair class of the bound ledger.

    ``bound`` is the tight case bound, ``eps_form`` the value ``(1+eps)/d``
    it is relaxed to (larger than ``bound`` for the loose cases), ``gap`` is
    ``|1/(d+1) - bound|`` and ``scaled_gap = gap * q**order``.
    """

    case: str
    pair_count: int
    bound: float
    eps_form: float
    epsilon: float
    epsilon_tilde: float
    measured_max: float
    measured_min: float
    witness: tuple[int, int]
    sic_value: float
    gap: float
    order: float
    scaled_gap: float
    equality: bool = False
    inner_max: float = float("nan")
    inner_min: float = float("nan")
    tol: float = BOUND_TOL

    @property
    def margin(self) -> float:
        return self.bound - self.measured_max

    @property
    def loose(self) -> bool:
        return self.eps_form > self.bound * (1 + 1e-12)

    @property
    def passed(self) -> bool:
        if self.pair_count == 0:
            return True
        if self.equality:
            return (
                abs(self.measured_max - self.bound) <= self.tol
                and abs(self.measured_min - self.bound) <= self.tol
            )
        return self.margin >= -self.tol


@dataclass(frozen=True)
class EpsilonLedger:
    construction: str
    q: int
    dim: int
    records: tuple[CaseRecord, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def __getitem__(self, case: str) -> CaseRecord:
        for r in self.records:
            if r.case == case:
                return r
        raise KeyError(case)

    def failures(self) -> list[CaseRecord]:
        return [r for r in self.records if not r.passed]


def case_extrema(values: np.ndarray, cases: np.ndarray, n_cases: int, workers: int | None = None):
    """Per-case max/argmax/min/count over the pairs ``i < j``.

    Rows are split across workers; the reduction (max, min, integer counts)
    does not depend on the split.
    """
    n = values.shape[0]
    workers = default_workers() if workers is None else max(1, int(workers))
    iu = np.triu_indices(n, 1)

    def scan(rows: np.ndarray):
        mask = np.isin(iu[0], rows)
        ii, jj = iu[0][mask], iu[1][mask]
        v = values[ii, jj]
        c = cases[ii, jj]
        out = []
        for k in range(n_cases):
            sel = c == k
            if not sel.any():
                out.append((-np.inf, None, np.inf, 0))
                continue
            vk = v[sel]
            pos = int(np.argmax(vk))
            out.append((float(vk[pos]), (int(ii[sel][pos]), int(jj[sel][pos])), float(vk.min()), int(sel.sum())))
        return out

    chunks = [c for c in np.array_split(np.arange(n), workers) if c.size]
    if len(chunks) == 1:
        parts = [scan(chunks[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(scan, chunks))
    result = []
    for k in range(n_cases):
        best, arg, lo, cnt = -np.inf, None, np.inf, 0
        for part in parts:
            m, a, mn, c = part[k]
            # ties resolve to the lexicographically first pair
            if m > best or (m == best and a is not None and (arg is None or a < arg)):
                best, arg = m, a
            lo = min(lo, mn)
            cnt += c
        result.append((best, arg, lo, cnt))
    return result


def inner_extrema(inner: np.ndarray, cases: np.ndarray, n_cases: int):
    iu = np.triu_indices(inner.shape[0], 1)
    v = inner[iu]
    c = cases[iu]
    out = []
    for k in range(n_cases):
        sel = c == k
        out.append((float(v[sel].max()), float(v[sel].min())) if sel.any() else (float("nan"), float("nan")))
    return out
