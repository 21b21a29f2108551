import math

import numpy as np
import pytest

from povmforge.construction_q1 import (
    build_ensemble_q1,
    build_s_set,
    case_formulas_q1,
    epsilon_ledger_q1,
    inner_product_via_characters,
    verify_difference_structure,
    verify_li_bound,
)
from povmforge.finite_field import make_tower, norm_to_base
from povmforge.linalg import gram_rank

TOWERS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]


def test_s_set_q2():
    tw = make_tower(2, 1)
    s = build_s_set(tw)
    # exponent q - 1 = 1: S = {alpha, alpha + 1, 1}
    assert s.elements == (tw.alpha, tw.ext.add(tw.alpha, 1), 1)


@pytest.mark.parametrize("p,k", TOWERS)
def test_s_set_in_n_without_collisions(p, k):
    tw = make_tower(p, k)
    s = build_s_set(tw)
    assert len(set(s.elements)) == tw.q + 1
    assert all(int(norm_to_base(x, tw)) == 1 for x in s.elements)


@pytest.mark.parametrize("p,k", TOWERS)
def test_difference_structure(p, k):
    rep = verify_difference_structure(build_s_set(make_tower(p, k)))
    q = p**k
    assert rep.ok
    assert rep.distinct_count == q * q + q
    assert not rep.contains_one


def test_difference_structure_reports_collisions():
    s = build_s_set(make_tower(3, 1))
    from dataclasses import replace

    broken = replace(s, elements=s.elements[:-1] + (s.elements[0],))
    rep = verify_difference_structure(broken)
    assert not rep.ok and rep.collisions and rep.contains_one


@pytest.mark.parametrize("p,k", TOWERS)
def test_li_bound(p, k):
    tw = make_tower(p, k)
    s = build_s_set(tw)
    rep = verify_li_bound(s)
    assert rep.max_modulus <= math.sqrt(tw.q) + 1e-9
    assert len(rep.moduli) == tw.q**2 + tw.q
    assert rep.trivial_sum == tw.q + 1


def test_li_bound_brute_force_q2():
    tw = make_tower(2, 1)
    s = build_s_set(tw)
    sums = [abs(sum(np.exp(2j * np.pi * m * j / 7) for j in s.logs)) for m in range(1, 7)]
    assert max(sums) <= math.sqrt(2) + 1e-12
    assert verify_li_bound(s).max_modulus == pytest.approx(max(sums), abs=1e-12)


def test_ensemble_q2():
    ens = build_ensemble_q1(make_tower(2, 1))
    assert len(ens) == 9 and ens.dim == 3
    assert np.max(np.abs(ens.member_sum() - np.eye(3))) < 1e-9
    E = ens.frame_operator
    off = E[~np.eye(3, dtype=bool)]
    assert np.allclose(off, -1 / 9)


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (2, 2), (5, 1)])
def test_rank(p, k):
    ens = build_ensemble_q1(make_tower(p, k))
    assert gram_rank(ens.members)[0] == (ens.q + 1) ** 2


def test_case3_value_q2():
    assert case_formulas_q1(2)["3"]["bound"] == pytest.approx(81 / 4900)


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (2, 2)])
def test_inner_products_two_routes(p, k):
    tw = make_tower(p, k)
    s = build_s_set(tw)
    ens = build_ensemble_q1(tw)
    n = tw.n_order
    V = ens.vectors[: n - 1]
    G = V.conj() @ V.T
    bound = math.sqrt(tw.q) / (tw.q + 1)
    for a in range(n - 1):
        for b in range(n - 1):
            if a == b:
                continue
            via = inner_product_via_characters(s, a + 1, b + 1)
            assert abs(G[a, b] - via) < 1e-12
            assert abs(via) <= bound + 1e-12


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (2, 2), (5, 1)])
def test_ledger(p, k):
    led = epsilon_ledger_q1(build_ensemble_q1(make_tower(p, k)))
    assert led.passed
    r3 = led["3"]
    assert r3.equality
    assert abs(r3.measured_min - r3.bound) < 1e-9 and abs(r3.measured_max - r3.bound) < 1e-9


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9])
def test_ledger_epsilon_forms(q):
    fm = case_formulas_q1(q)
    for c in ("1", "2"):
        assert (1 + fm[c]["epsilon"]) / (q + 1) == pytest.approx(fm[c]["bound"], rel=1e-12)
    for c in fm.values():
        et = c["epsilon_tilde"]
        assert c["epsilon"] == pytest.approx(et * et + 2 * et, rel=1e-9)
