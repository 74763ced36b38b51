import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixdyn import (
    INF,
    MobiusMap,
    Polynomial,
    RationalMap,
    conjugate_map,
    fixed_point_polynomial,
    is_inf,
    mobius_apply,
    poly_compose,
    poly_derivative,
    poly_eval,
)
from fixdyn.errors import CapExceeded, DegenerateMap, IdentityMap, InvariantViolation

from suites import crandn, random_mobius, random_rational

coef = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)
polys = st.lists(coef, min_size=2, max_size=7).filter(lambda c: abs(c[-1]) > 0.1).map(Polynomial)
points = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)


def test_trims_negligible_leading_coefficients():
    p = Polynomial([1, 2, 1e-20])
    assert p.degree == 1
    assert Polynomial([0, 0]).is_zero
    assert Polynomial([]).coeffs == (0j,)


def test_poly_eval_examples():
    assert poly_eval(Polynomial([0.25, 0, 1]), 0.5) == 0.5
    assert poly_eval(Polynomial([3 - 1j, 5, 7]), 0) == 3 - 1j
    assert poly_eval(Polynomial([0, 0, -2, 0, 1]), -1) == -1


def test_poly_eval_vectorizes():
    p = Polynomial([1, 2, 3])
    z = np.array([0, 1, 2j])
    np.testing.assert_allclose(p(z), [1, 6, 1 + 4j - 12])


def test_derivative_examples():
    assert poly_derivative(Polynomial([0.3, 0, 1])).coeffs == (0, 2)
    assert poly_derivative(Polynomial([0, 0, -2, 0, 1])).coeffs == (0, -4, 0, 4)
    assert poly_derivative(Polynomial([5])).is_zero


def test_compose_examples():
    z2 = Polynomial([0, 0, 1])
    assert poly_compose(z2, z2).coeffs == Polynomial.monomial(4).coeffs
    q = Polynomial([-1, 0, 1])
    # (z^2 - 1)^2 - 1 = z^4 - 2 z^2 expanded by hand
    assert poly_compose(q, q).coeffs == (0, 0, -2, 0, 1)
    r = Polynomial([1 + 1j, -2, 0.5])
    assert poly_compose(Polynomial([0, 1]), r) == r


def test_compose_cap():
    p = Polynomial.monomial(70)
    with pytest.raises(CapExceeded):
        poly_compose(p, p)


@settings(max_examples=60, deadline=None)
@given(polys, polys, points)
def test_compose_matches_nested_evaluation(p, q, z):
    pq = poly_compose(p, q)
    lhs = poly_eval(pq, z)
    rhs = poly_eval(p, poly_eval(q, z))
    # values produced by heavy cancellation are judged against the rounding envelope
    scale = max(1.0, abs(rhs), 1e-6 * pq.abs_eval(z))
    assert abs(lhs - rhs) <= 1e-9 * scale


@settings(max_examples=60, deadline=None)
@given(polys, points)
def test_derivative_matches_central_difference(p, z):
    h = 1e-6 * max(1.0, abs(z))
    fd = (p(z + h) - p(z - h)) / (2 * h)
    exact = poly_derivative(p)(z)
    assert abs(fd - exact) <= 1e-5 * max(1.0, abs(exact), p.abs_eval(abs(z) + h))


def test_mobius_apply_examples():
    shift = MobiusMap.affine(1, 1)
    assert mobius_apply(shift, INF) is INF
    z0 = 0.3 - 2j
    m = MobiusMap(0, 1, 1, -z0)
    assert mobius_apply(m, z0) is INF
    assert mobius_apply(m, INF) == 0
    assert mobius_apply(MobiusMap.identity(), 3 + 4j) == 3 + 4j


def test_mobius_rejects_singular():
    with pytest.raises(InvariantViolation):
        MobiusMap(1, 2, 2, 4)


def test_mobius_round_trip():
    rng = np.random.default_rng(5)
    for _ in range(10):
        g = random_mobius(rng)
        ginv = g.inverse()
        for z in crandn(rng, 100):
            back = mobius_apply(g, mobius_apply(ginv, z))
            assert abs(back - z) <= 1e-10 * max(1.0, abs(z))
        assert is_inf(mobius_apply(g, mobius_apply(ginv, INF)))


def test_conjugate_examples():
    R = RationalMap.from_polynomial(Polynomial([0, 0, 1]))
    S = conjugate_map(R, MobiusMap.identity())
    assert S.numerator == R.numerator and S.denominator == R.denominator
    S = conjugate_map(RationalMap.from_polynomial(Polynomial([0, 0, 2])), MobiusMap.affine(2))
    np.testing.assert_allclose(S.as_polynomial().coeffs, [0, 0, 1], atol=1e-15)


def test_conjugate_quadratic_matches_sampling():
    rng = np.random.default_rng(9)
    for _ in range(5):
        d, b, a = crandn(rng, 3)
        R = RationalMap.from_polynomial(Polynomial([d, b, a]))
        g = MobiusMap.affine(a, b / 2)
        c = a * d + b / 2 - b * b / 4
        S = conjugate_map(R, g)
        for w in crandn(rng, 10):
            direct = g(R(g.inverse()(w)))
            assert abs(S(w) - direct) <= 1e-10 * max(1, abs(direct))
            assert abs(direct - (w * w + c)) <= 1e-10 * max(1, abs(direct))


def test_conjugate_preserves_degree():
    rng = np.random.default_rng(21)
    for _ in range(50):
        R = random_rational(rng, int(rng.integers(2, 7)))
        g = random_mobius(rng)
        assert conjugate_map(R, g).degree == R.degree


def test_conjugate_matches_pointwise_composition():
    rng = np.random.default_rng(22)
    R = random_rational(rng, 4)
    g = random_mobius(rng)
    S = conjugate_map(R, g)
    for w in crandn(rng, 20):
        assert abs(S(w) - g(R(g.inverse()(w)))) <= 1e-8 * max(1, abs(S(w)))


def test_rational_map_rejects_common_factor():
    num = Polynomial.from_roots([1, 2])
    den = Polynomial.from_roots([1, -3j])
    with pytest.raises(DegenerateMap):
        RationalMap(num, den)
    with pytest.raises(InvariantViolation):
        RationalMap(num, Polynomial([0]))


def test_rational_degree():
    R = RationalMap(Polynomial([0, 2]), Polynomial([1, 1, 1]))
    assert R.degree == 2
    assert not R.fixes_infinity


def test_fixed_point_polynomial_examples():
    c = 0.3 + 0.1j
    F = fixed_point_polynomial(RationalMap.from_polynomial(Polynomial([c, 0, 1])))
    assert F.coeffs == (c, -1, 1)
    k = 2.5
    F = fixed_point_polynomial(RationalMap(Polynomial([0, k]), Polynomial([1, 1, 1])))
    assert F.coeffs == (0, k - 1, -1, -1)
    with pytest.raises(IdentityMap):
        fixed_point_polynomial(RationalMap.from_polynomial(Polynomial([0, 1])))


def test_fixed_point_polynomial_degree_split():
    rng = np.random.default_rng(23)
    for _ in range(40):
        R = random_rational(rng, int(rng.integers(2, 7)))
        F = fixed_point_polynomial(R)
        expected = R.degree if R.fixes_infinity else R.degree + 1
        assert F.degree == expected
