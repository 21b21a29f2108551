"""POVM axiom checks, frame angles and codebook metrics."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .construction_q import CONSTRUCTION as CONSTRUCTION_Q, epsilon_ledger_q
from .construction_q1 import CONSTRUCTION as CONSTRUCTION_Q1, epsilon_ledger_q1
from .ensemble import EpsilonLedger, PovmEnsemble
from .errors import DimensionMismatch, TooFewVectors
from .linalg import PD_GATE, gram_rank, max_abs, min_eigenvalues

ANGLE_TOL = 1e-7
CSV_COLUMNS = ("case", "bound", "measured", "margin", "verdict")


@dataclass(frozen=True)
class Tolerances:
    completeness: float = 1e-9
    bound: float = 1e-9
    positivity: float = PD_GATE

    def __post_init__(self):
        for name in ("completeness", "bound", "positivity"):
            if getattr(self, name) <= 0:
                raise ValueError(f"tolerance {name} must be positive")


@dataclass
class VerificationReport:
    """Sub-verdicts for the three axioms plus member positivity.

    ``completeness_error`` is ``||sum M_i - I||_max`` and is compared against
    ``tolerances.completeness * dim``.
    """

    construction: str
    q: int
    dim: int
    completeness_error: float
    completeness_ok: bool
    ledger: EpsilonLedger
    ledger_ok: bool
    rank: int
    smallest_gram_eigenvalue: float
    rank_ok: bool
    min_member_eigenvalue: float
    positivity_ok: bool
    tolerances: Tolerances = field(default_factory=Tolerances)

    @property
    def passed(self) -> bool:
        return self.completeness_ok and self.ledger_ok and self.rank_ok and self.positivity_ok

    def failures(self) -> list[str]:
        names = {
            "completeness": self.completeness_ok,
            "bounds": self.ledger_ok,
            "rank": self.rank_ok,
            "positivity": self.positivity_ok,
        }
        return [k for k, ok in names.items() if not ok]

    def summary_rows(self) -> list[dict]:
        rows = []
        for r in self.ledger.records:
            rows.append(
                {
                    "case": r.case,
                    "bound": repr(r.bound),
                    "measured": repr(r.measured_max),
                    "margin": repr(r.margin),
                    "verdict": "pass" if r.passed else "fail",
                }
            )
        return rows

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(self.summary_rows())
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "construction": self.construction,
            "q": self.q,
            "dim": self.dim,
            "passed": self.passed,
            "completeness": {"error": self.completeness_error, "ok": self.completeness_ok},
            "bounds": {"ok": self.ledger_ok, "cases": [ledger_record_dict(r) for r in self.ledger.records]},
            "rank": {
                "rank": self.rank,
                "expected": self.dim**2,
                "smallest_eigenvalue": self.smallest_gram_eigenvalue,
                "ok": self.rank_ok,
            },
            "positivity": {"min_eigenvalue": self.min_member_eigenvalue, "ok": self.positivity_ok},
            "tolerances": vars(self.tolerances).copy(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def ledger_record_dict(r) -> dict:
    return {
        "case": r.case,
        "pairs": r.pair_count,
        "bound": r.bound,
        "eps_form": r.eps_form,
        "epsilon": r.epsilon,
        "epsilon_tilde": r.epsilon_tilde,
        "measured_max": r.measured_max,
        "measured_min": r.measured_min,
        "margin": r.margin,
        "witness": list(r.witness) if r.witness else None,
        "equality": r.equality,
        "loose": r.loose,
        "sic_value": r.sic_value,
        "gap": r.gap,
        "order": r.order,
        "scaled_gap": r.scaled_gap,
        "inner_max": r.inner_max,
        "inner_min": r.inner_min,
        "verdict": "pass" if r.passed else "fail",
    }


def ledger_for(ens: PovmEnsemble, workers: int | None = None, values=None) -> EpsilonLedger:
    if ens.construction == CONSTRUCTION_Q:
        return epsilon_ledger_q(ens, workers, strict=False, values=values)
    if ens.construction == CONSTRUCTION_Q1:
        return epsilon_ledger_q1(ens, workers, strict=False, values=values)
    raise ValueError(f"unknown construction {ens.construction!r}")


def verify_povm_axioms(
    ens: PovmEnsemble,
    tolerances: Tolerances | None = None,
    workers: int | None = None,
) -> VerificationReport:
    """Completeness, per-case bounds, informational completeness and positivity.

    Never raises on a failed check; the report carries the verdicts.
    """
    tol = tolerances or Tolerances()
    d = ens.dim
    err = max_abs(ens.member_sum() - np.eye(d))
    values = ens.pair_values()
    ledger = ledger_for(ens, workers, values)
    if tol.bound != ledger.records[0].tol:
        ledger = EpsilonLedger(
            ledger.construction,
            ledger.q,
            ledger.dim,
            tuple(_with_tol(r, tol.bound) for r in ledger.records),
        )
    try:
        rank, smallest = gram_rank(ens.members)
    except DimensionMismatch:
        rank, smallest = -1, float("nan")
    min_eig = float(np.min(min_eigenvalues(ens.members)))
    return VerificationReport(
        ens.construction,
        ens.q,
        d,
        err,
        err <= tol.completeness * d,
        ledger,
        ledger.passed,
        rank,
        smallest,
        rank == d * d,
        min_eig,
        min_eig >= -tol.positivity,
        tol,
    )


def _with_tol(r, tol):
    return replace(r, tol=tol)


def frame_span_check(vectors) -> bool:
    """True iff the vectors span their ambient space."""
    V = np.asarray(vectors, dtype=np.complex128)
    if V.ndim != 2 or V.shape[0] == 0:
        raise ValueError("expected a nonempty list of vectors of one dimension")
    return int(np.linalg.matrix_rank(V)) == V.shape[1]


@dataclass(frozen=True)
class FrameAngleProfile:
    """Distinct values of ``|<f_i|f_j>|`` over ordered pairs ``i != j``."""

    angles: tuple[float, ...]
    multiplicities: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.angles)

    def is_r_angular(self, r: int) -> bool:
        return self.count == r


def cluster_values(values, tol: float = ANGLE_TOL) -> tuple[tuple[float, ...], tuple[int, ...]]:
    """Merge sorted values whose consecutive gap is at most ``tol``; clusters report their mean."""
    v = np.sort(np.asarray(values, dtype=float).ravel())
    if v.size == 0:
        return (), ()
    breaks = np.nonzero(np.diff(v) > tol)[0] + 1
    groups = np.split(v, breaks)
    return tuple(float(math.fsum(g) / g.size) for g in groups), tuple(int(g.size) for g in groups)


def frame_angles(vectors, tol: float = ANGLE_TOL) -> FrameAngleProfile:
    V = np.asarray(vectors, dtype=np.complex128)
    G = np.abs(V.conj() @ V.T)
    off = G[~np.eye(len(V), dtype=bool)]
    angles, mult = cluster_values(np.clip(off, 0.0, 1.0), tol)
    return FrameAngleProfile(angles, mult)


def welch_bound(n: int, k: int) -> float:
    """``sqrt((N - K) / ((N - 1) K))``."""
    if n < k:
        raise TooFewVectors(f"{n} vectors in dimension {k}")
    if n == 1:
        return 0.0
    return math.sqrt((n - k) / ((n - 1) * k))


@dataclass(frozen=True)
class CodebookMetrics:
    N: int
    K: int
    i_max: float
    welch: float
    ratio: float


def codebook_metrics(vectors, degenerate_tol: float = 1e-12) -> CodebookMetrics:
    """Maximum cross-correlation amplitude against the Welch bound.

    With ``N = K`` both quantities vanish for an orthonormal basis and the
    ratio is reported as 1.
    """
    V = np.asarray(vectors, dtype=np.complex128)
    n, k = V.shape
    if n < k:
        raise TooFewVectors(f"{n} vectors in dimension {k}")
    G = np.abs(V.conj() @ V.T)
    np.fill_diagonal(G, 0.0)
    i_max = float(G.max()) if n > 1 else 0.0
    w = welch_bound(n, k)
    if w == 0.0:
        ratio = 1.0 if i_max <= degenerate_tol else math.inf
    else:
        ratio = i_max / w
    return CodebookMetrics(n, k, i_max, w, ratio)
