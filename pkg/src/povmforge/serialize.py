"""JSON and CSV artifacts.

Complex numbers are ``[re, im]`` pairs and operators are row-major nested
lists. Floats go through ``repr`` (the ``json`` default), keys are sorted and
nothing time- or host-dependent is written, so equal inputs give equal bytes.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Any

import numpy as np

from . import __version__
from .construction_q import CONSTRUCTION as CONSTRUCTION_Q, build_ensemble_q
from .construction_q1 import CONSTRUCTION as CONSTRUCTION_Q1, build_ensemble_q1
from .ensemble import EpsilonLedger, PovmEnsemble
from .finite_field import make_field, make_tower
from .functions import FPermutation, PolyFunction

SCHEMA_VERSION = 1
LEDGER_COLUMNS = (
    "schema_version",
    "construction",
    "q",
    "dim",
    "case",
    "pairs",
    "bound",
    "eps_form",
    "epsilon",
    "epsilon_tilde",
    "measured_max",
    "measured_min",
    "margin",
    "witness_i",
    "witness_j",
    "equality",
    "loose",
    "sic_value",
    "gap",
    "order",
    "scaled_gap",
    "verdict",
)


def complex_array(a) -> list:
    a = np.asarray(a, dtype=np.complex128)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def from_complex_array(x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    return a[..., 0] + 1j * a[..., 1]


def provenance() -> dict:
    return {"package": "povmforge", "version": __version__}


def ensemble_to_dict(ens: PovmEnsemble, include_operators: bool = True) -> dict[str, Any]:
    out = {
        "schema_version": SCHEMA_VERSION,
        "provenance": provenance(),
        "construction": ens.construction,
        "dim": ens.dim,
        "parameters": ens.parameters,
        "labels": [list(lab) for lab in ens.labels],
        "vectors": complex_array(ens.vectors),
        "frame_operator": complex_array(ens.frame_operator),
        "renormalizer": complex_array(ens.renormalizer),
    }
    if include_operators:
        out["members"] = complex_array(ens.members)
    return out


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=True) + "\n"


def rebuild_ensemble(doc: dict) -> PovmEnsemble:
    """Reconstruct an ensemble from the provenance stored in ``doc``."""
    params = doc["parameters"]
    fld = params["field"]
    if doc["construction"] == CONSTRUCTION_Q:
        spec = make_field(fld["p"], fld["k"])
        if list(spec.modulus) != list(fld["modulus"]):
            raise ValueError("stored field modulus does not match the canonical one")
        f = PolyFunction(spec, tuple(params["f"]["coeffs"]))
        perm = FPermutation(tuple(params["permutation"]), f)
        return build_ensemble_q(spec, f, perm, params["chi"])
    if doc["construction"] == CONSTRUCTION_Q1:
        return build_ensemble_q1(make_tower(fld["p"], fld["k"]))
    raise ValueError(f"unknown construction {doc['construction']!r}")


def load_ensemble(doc: dict) -> PovmEnsemble:
    """Rebuild from provenance, then substitute stored members when present."""
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
    ens = rebuild_ensemble(doc)
    if "members" in doc:
        members = from_complex_array(doc["members"])
        if members.shape != ens.members.shape:
            raise ValueError(f"stored members have shape {members.shape}, expected {ens.members.shape}")
        ens = ens.with_members(members)
    return ens


def ledger_rows(ledger: EpsilonLedger) -> list[dict]:
    rows = []
    for r in ledger.records:
        wi, wj = r.witness if r.witness else ("", "")
        rows.append(
            {
                "schema_version": SCHEMA_VERSION,
                "construction": ledger.construction,
                "q": ledger.q,
                "dim": ledger.dim,
                "case": r.case,
                "pairs": r.pair_count,
                "bound": repr(r.bound),
                "eps_form": repr(r.eps_form),
                "epsilon": repr(r.epsilon),
                "epsilon_tilde": repr(r.epsilon_tilde),
                "measured_max": repr(r.measured_max),
                "measured_min": repr(r.measured_min),
                "margin": repr(r.margin),
                "witness_i": wi,
                "witness_j": wj,
                "equality": int(r.equality),
                "loose": int(r.loose),
                "sic_value": repr(r.sic_value),
                "gap": repr(r.gap),
                "order": repr(r.order),
                "scaled_gap": repr(r.scaled_gap),
                "verdict": "pass" if r.passed else "fail",
            }
        )
    return rows


def write_csv(rows: list[dict], columns) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def ledger_csv(ledger: EpsilonLedger) -> str:
    return write_csv(ledger_rows(ledger), LEDGER_COLUMNS)
