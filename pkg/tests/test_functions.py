import itertools

import pytest
from hypothesis import given, strategies as st

from povmforge.errors import EvenQ, NotTwoToOne, TooLarge
from povmforge.finite_field import make_field
from povmforge.functions import (
    FPermutation,
    PolyFunction,
    build_f_permutation,
    catalogue_2to1_pn,
    count_two_to_one_bruteforce,
    count_two_to_one_formula,
    difference_table,
    fiber_profile,
    is_pn,
    is_two_to_one,
    is_two_to_one_pn,
)


def test_polynomial_evaluation_and_normalisation(gf9):
    f = PolyFunction(gf9, (1, 0, 1, 0, 0))
    assert f.coeffs == (1, 0, 1)
    assert f.degree == 2
    assert list(f.table()) == [f(x) for x in gf9.elements()]
    assert f.shifted(2).coeffs == (gf9.add(1, 2), 0, 1)
    assert str(PolyFunction.quadratic(make_field(5, 1), 1)) == "x^2"


def test_square_over_gf5():
    spec = make_field(5, 1)
    f = PolyFunction.quadratic(spec, 1)
    prof = is_two_to_one(f)
    assert prof and prof.exceptional == 0
    assert is_pn(f)
    perm = build_f_permutation(f)
    assert perm.order == (0, 1, 2, 3, 4)
    assert perm.is_valid()
    assert perm.pairs() == [(1, 4), (2, 3)]


def test_square_over_gf4_is_not_pn():
    spec = make_field(2, 2)
    f = PolyFunction.quadratic(spec, 1)
    assert not is_pn(f)
    assert not is_two_to_one(f)  # x^2 is a bijection in characteristic 2


def test_two_to_one_even_q():
    assert fiber_profile([0, 0, 1, 1])
    assert not fiber_profile([0, 0, 0, 1])


def test_f_permutation_errors():
    with pytest.raises(EvenQ):
        build_f_permutation(PolyFunction.quadratic(make_field(2, 2), 1))
    with pytest.raises(NotTwoToOne):
        build_f_permutation(PolyFunction(make_field(5, 1), (0, 1)))
    f = PolyFunction.quadratic(make_field(5, 1), 1)
    assert not FPermutation((0, 1, 2, 4, 3), f).is_valid()
    assert not FPermutation((1, 0, 2, 3, 4), f).is_valid()


@pytest.mark.parametrize("p,k", [(3, 1), (5, 1), (7, 1), (3, 2)])
def test_pn_against_brute_force_definition(p, k):
    spec = make_field(p, k)
    for s, t, w in itertools.islice(itertools.product(spec.nonzero(), spec.elements(), spec.elements()), 40):
        f = PolyFunction.quadratic(spec, s, t, w)
        brute = all(
            len({spec.sub(f(spec.add(x, a)), f(x)) for x in spec.elements()}) == spec.q
            for a in spec.nonzero()
        )
        assert is_pn(f) == brute
        assert is_two_to_one_pn(f)  # every quadratic is 2-to-1 PN in odd characteristic


def test_cubic_is_not_pn():
    spec = make_field(5, 1)
    assert not is_pn(PolyFunction(spec, (0, 0, 0, 1)))


@given(st.integers(1, 6), st.integers(0, 6), st.integers(0, 6))
def test_difference_maps_of_quadratics_are_affine(s, t, w):
    spec = make_field(7, 1)
    f = PolyFunction.quadratic(spec, s, t, w)
    for a in spec.nonzero():
        D = difference_table(f, a)
        slope = spec.sub(D[1], D[0])
        assert all(D[x] == spec.add(D[0], spec.mul(slope, x)) for x in spec.elements())


def test_catalogue():
    spec = make_field(5, 1)
    cat = catalogue_2to1_pn(spec)
    assert cat[0].coeffs == (0, 0, 1)
    assert len(cat) == 81
    assert len({g.coeffs for g in cat}) == len(cat)
    assert all(is_two_to_one_pn(g) for g in cat)
    assert sum(1 for g in cat if g.coeffs[0] != 0) >= 5
    assert len(catalogue_2to1_pn(make_field(3, 2))) == 107
    with pytest.raises(EvenQ):
        catalogue_2to1_pn(make_field(2, 2))


def test_catalogue_filters_extras():
    spec = make_field(7, 1)
    cubic = PolyFunction(spec, (0, 0, 0, 1))
    cat = catalogue_2to1_pn(spec, limit=5, extra=[cubic])
    assert all(g.degree == 2 for g in cat)


@pytest.mark.parametrize("p,k,expected", [(2, 1, 2), (3, 1, 18), (2, 2, 36), (5, 1, 900)])
def test_counting_formula_matches_enumeration(p, k, expected):
    spec = make_field(p, k)
    assert count_two_to_one_bruteforce(spec) == expected
    assert count_two_to_one_formula(spec) == expected


def test_bruteforce_refuses_large_q():
    with pytest.raises(TooLarge):
        count_two_to_one_bruteforce(make_field(7, 1))
    assert count_two_to_one_formula(make_field(7, 1)) > 0
