import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from povmforge.construction_q import (
    build_ensemble_q,
    build_frame_operator_q,
    build_vectors_q,
    case_formulas_q,
    epsilon_ledger_q,
)
from povmforge.errors import BoundViolated, ClosedFormMismatch, EvenQ, InvalidPermutation, NotTwoToOnePN, TrivialCharacter
from povmforge.finite_field import make_field
from povmforge.functions import FPermutation, PolyFunction, build_f_permutation, catalogue_2to1_pn
from povmforge.linalg import gram_rank


def square(p, k=1):
    spec = make_field(p, k)
    return spec, PolyFunction.quadratic(spec, 1)


def test_vectors_q3():
    spec, f = square(3)
    V = build_vectors_q(spec, f)
    assert V.shape == (9, 3)
    assert np.allclose(np.abs(V[:6]), 1 / math.sqrt(3))
    assert np.allclose(V[6:], np.eye(3))
    assert np.allclose(np.linalg.norm(V, axis=1), 1)


def test_a_zero_rows_are_orthogonal():
    spec, f = square(5)
    V = build_vectors_q(spec, f)[:4]  # a = 0, b = 1..4
    assert np.allclose(V.conj() @ V.T, np.eye(4), atol=1e-12)


def test_count_at_q5():
    spec, f = square(5)
    assert len(build_vectors_q(spec, f)) == 25


def test_frame_operator_q3():
    spec, f = square(3)
    E = build_frame_operator_q(build_vectors_q(spec, f))
    assert np.allclose(E, [[1, 0, 0], [0, 1, -1 / 3], [0, -1 / 3, 1]], atol=1e-12)
    assert np.isclose(np.trace(E).real, 3)


def test_frame_operator_detects_corruption():
    spec, f = square(5)
    V = build_vectors_q(spec, f)
    V[0] = V[1]
    with pytest.raises(ClosedFormMismatch):
        build_frame_operator_q(V)


def test_preconditions():
    spec, f = square(5)
    with pytest.raises(EvenQ, match="odd q required"):
        build_vectors_q(make_field(2, 3), PolyFunction.quadratic(make_field(2, 3), 1))
    with pytest.raises(NotTwoToOnePN):
        build_vectors_q(spec, PolyFunction(spec, (0, 1)))
    with pytest.raises(InvalidPermutation):
        build_vectors_q(spec, f, FPermutation((0, 1, 2, 4, 3), f))
    with pytest.raises(TrivialCharacter):
        build_vectors_q(spec, f, None, 0)


def test_ensemble_q3():
    spec, f = square(3)
    ens = build_ensemble_q(spec, f)
    assert len(ens) == 9
    assert np.max(np.abs(ens.member_sum() - np.eye(3))) < 1e-9
    assert gram_rank(ens.members)[0] == 9
    kinds = [lab[0] for lab in ens.labels]
    assert kinds.count("char") == 6 and kinds.count("basis") == 3
    assert ens.dual_path_deviation() < 1e-9


def test_bounds_at_q3():
    b = case_formulas_q(3)
    assert b["3"]["bound"] == pytest.approx(9 / 64)
    assert b["1.2"]["bound"] == pytest.approx((7 / 24) ** 2)


@pytest.mark.parametrize("q", [3, 5, 7, 9, 13, 25, 27])
def test_epsilon_and_epsilon_tilde_agree(q):
    for c, fm in case_formulas_q(q).items():
        et = fm["epsilon_tilde"]
        assert fm["epsilon"] == pytest.approx(et * et + 2 * et, rel=1e-12)
    b = case_formulas_q(q)
    # the amplitude-level form reproduces the tight bound for the cases where it is not loosened
    for c in ("1.1", "2"):
        assert (1 + b[c]["epsilon"]) / q == pytest.approx(b[c]["bound"], rel=1e-12)
    for c in ("1.2", "3"):
        assert (1 + b[c]["epsilon"]) / q > b[c]["bound"]


def test_ledger_q5():
    spec, f = square(5)
    led = epsilon_ledger_q(build_ensemble_q(spec, f))
    assert led.passed
    assert [r.case for r in led.records] == ["1.1", "1.2", "2", "3"]
    assert [r.pair_count for r in led.records] == [160, 30, 100, 10]
    assert led["1.2"].inner_max < 1e-12
    assert led["1.1"].inner_min == pytest.approx(1 / math.sqrt(5), abs=1e-9)
    assert led["3"].measured_max == pytest.approx(led["3"].bound, abs=1e-12)
    assert led["1.2"].loose and led["3"].loose and not led["1.1"].loose


def test_ledger_raises_on_violation():
    spec, f = square(5)
    ens = build_ensemble_q(spec, f)
    bad = ens.members.copy()
    bad[0] = bad[1]
    mutant = ens.with_members(bad)
    with pytest.raises(BoundViolated) as exc:
        epsilon_ledger_q(mutant)
    assert exc.value.case == "1.2"
    assert not epsilon_ledger_q(mutant, strict=False).passed


def test_worker_count_does_not_change_ledger():
    spec, f = square(7)
    ens = build_ensemble_q(spec, f)
    one = epsilon_ledger_q(ens, workers=1)
    many = epsilon_ledger_q(ens, workers=5)
    assert one == many


@settings(max_examples=15)
@given(st.data())
def test_catalogue_functions_give_povms(data):
    p = data.draw(st.sampled_from([3, 5, 7]))
    spec = make_field(p, 1)
    cat = catalogue_2to1_pn(spec, limit=30)
    f = data.draw(st.sampled_from(cat))
    chi = data.draw(st.integers(1, p - 1))
    ens = build_ensemble_q(spec, f, build_f_permutation(f), chi)
    assert np.max(np.abs(ens.member_sum() - np.eye(p))) < 1e-9 * p
    assert epsilon_ledger_q(ens).passed
    assert np.min(np.linalg.eigvalsh(ens.members)) > -1e-10
