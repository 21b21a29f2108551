import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from povmforge.construction_q import build_ensemble_q
from povmforge.construction_q1 import build_ensemble_q1
from povmforge.errors import TooFewVectors
from povmforge.finite_field import make_field, make_tower
from povmforge.functions import PolyFunction
from povmforge.verify import (
    Tolerances,
    cluster_values,
    codebook_metrics,
    frame_angles,
    frame_span_check,
    verify_povm_axioms,
    welch_bound,
)


@pytest.fixture(scope="module")
def ens5():
    spec = make_field(5, 1)
    return build_ensemble_q(spec, PolyFunction.quadratic(spec, 1))


def test_axioms_pass(ens5):
    rep = verify_povm_axioms(ens5)
    assert rep.passed and rep.failures() == []
    assert rep.rank == 25
    assert verify_povm_axioms(build_ensemble_q1(make_tower(3, 1))).passed


def test_zeroed_member_fails_completeness_and_rank(ens5):
    m = ens5.members.copy()
    m[7] = 0
    rep = verify_povm_axioms(ens5.with_members(m))
    assert "completeness" in rep.failures() and "rank" in rep.failures()


def test_perturbed_entry_fails(ens5):
    m = ens5.members.copy()
    m[7][0, 1] += 1e-3
    rep = verify_povm_axioms(ens5.with_members(m))
    assert not rep.completeness_ok
    assert not rep.passed


def test_report_serialisation(ens5):
    rep = verify_povm_axioms(ens5)
    lines = rep.to_csv().splitlines()
    assert lines[0] == "case,bound,measured,margin,verdict"
    assert len(lines) == 5
    assert '"passed": true' in rep.to_json()


def test_tolerances_must_be_positive():
    with pytest.raises(ValueError):
        Tolerances(completeness=0)


def test_frame_span():
    assert frame_span_check(np.eye(4))
    v = np.ones(4) / 2
    assert not frame_span_check(np.tile(v, (4, 1)))


def test_frame_span_q3():
    spec = make_field(3, 1)
    assert frame_span_check(build_ensemble_q(spec, PolyFunction.quadratic(spec, 1)).vectors)


def test_orthonormal_basis_angles():
    prof = frame_angles(np.eye(5))
    assert prof.angles == (0.0,)
    assert prof.multiplicities == (20,)


def test_biangular_q5(ens5):
    prof = frame_angles(ens5.vectors)
    assert prof.count == 2
    assert prof.angles[0] == pytest.approx(0, abs=1e-9)
    assert prof.angles[1] == pytest.approx(1 / math.sqrt(5), abs=1e-9)
    assert sum(prof.multiplicities) == 25 * 24


def test_q1_angles_bounded():
    ens = build_ensemble_q1(make_tower(3, 1))
    prof = frame_angles(ens.vectors)
    assert max(prof.angles) == pytest.approx(0.5, abs=1e-9)


@given(st.lists(st.floats(0, 1), min_size=1, max_size=40))
def test_clustering_idempotent_and_order_free(values):
    a, m = cluster_values(values)
    assert cluster_values(list(reversed(values)))[0] == pytest.approx(a)
    a2, _ = cluster_values(a)
    assert a2 == pytest.approx(a)
    assert sum(m) == len(values)


def test_codebook_q3():
    ens = build_ensemble_q1(make_tower(3, 1))
    m = codebook_metrics(ens.vectors)
    assert (m.N, m.K) == (16, 4)
    assert m.welch == pytest.approx(math.sqrt(12 / 60))
    assert m.i_max == pytest.approx(0.5)
    assert m.ratio == pytest.approx(1.1180, abs=1e-4)


def test_codebook_degenerate_and_errors():
    m = codebook_metrics(np.eye(3))
    assert m.welch == 0 and m.i_max == 0 and m.ratio == 1
    with pytest.raises(TooFewVectors):
        codebook_metrics(np.eye(3)[:2])
    with pytest.raises(TooFewVectors):
        welch_bound(2, 3)


@given(st.integers(2, 6), st.integers(0, 3), st.integers(0, 2**32 - 1))
def test_welch_inequality_random(k, extra, seed):
    rng = np.random.default_rng(seed)
    n = k + 1 + extra
    V = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    m = codebook_metrics(V)
    assert m.i_max >= m.welch - 1e-9
