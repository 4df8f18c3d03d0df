from fractions import Fraction
from math import factorial

import mpmath
import pytest
from hypothesis import given, strategies as st

from mpolylog.ratfield import RatFunc, var
from mpolylog.specialseq import (
    PoleError,
    eulerian_poly,
    eulerian_star_value,
    pochhammer,
    star_bernoulli,
)


def akiyama_tanigawa(n):
    """Classical Bernoulli numbers with B_1 = +1/2, then fixed to B_1 = -1/2."""
    out = []
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    out[1] = -out[1]
    return out


def test_star_bernoulli_examples():
    assert [star_bernoulli(k) for k in range(5)] == [1, Fraction(1, 2), Fraction(1, 6), 0, Fraction(-1, 30)]


def test_star_bernoulli_generating_function():
    with mpmath.workdps(40):
        series = mpmath.taylor(lambda x: x / mpmath.expm1(x) if x else mpmath.mpf(1), 0, 10)
    for k, c in enumerate(series):
        expected = (-1) ** k * star_bernoulli(k) / factorial(k)
        assert abs(c - mpmath.mpf(expected.numerator) / expected.denominator) < 1e-25


def test_star_bernoulli_against_classical():
    classical = akiyama_tanigawa(20)
    for k in range(21):
        assert star_bernoulli(k) == (-1) ** k * classical[k]


def test_eulerian_examples():
    assert eulerian_poly(0).coeffs == (1,)
    assert eulerian_poly(1).coeffs == (1,)
    assert eulerian_poly(2).coeffs == (1, 1)
    assert eulerian_poly(3).coeffs == (1, 4, 1)


def test_eulerian_generating_function():
    with mpmath.workdps(40):
        for t in (mpmath.mpf(2), mpmath.mpf(-3) / 7, mpmath.mpc(0.5, 1.25)):
            series = mpmath.taylor(lambda y: (1 - t) / (mpmath.exp((t - 1) * y) - t), 0, 8)
            for n, c in enumerate(series):
                assert abs(c * factorial(n) - eulerian_poly(n)(t)) < 1e-25


def test_eulerian_star_series_at_two():
    # 1/(c - e^{-x}) = 1/(c-1) * sum A*_n(c)/(c-1)^n x^n/n!
    c = Fraction(2)
    with mpmath.workdps(30):
        series = mpmath.taylor(lambda x: 1 / (2 - mpmath.exp(-x)), 0, 3)
    for n, coeff in enumerate(series):
        expected = eulerian_star_value(n, c) / (c - 1) ** (n + 1) / factorial(n)
        assert abs(coeff - mpmath.mpf(expected.numerator) / expected.denominator) < 1e-25


@pytest.mark.parametrize("n", range(11))
def test_eulerian_coefficients_count_permutations(n):
    assert sum(eulerian_poly(n).coeffs) == factorial(n)


def test_pochhammer_examples():
    s = var(1)
    assert pochhammer(s, 0) == 1
    assert pochhammer(3, 2) == 12
    assert pochhammer(s, -1) == RatFunc.const(1) / (s - 1)
    assert pochhammer(Fraction(1, 2), 3) == Fraction(15, 8)
    with pytest.raises(PoleError):
        pochhammer(1, -1)
    with pytest.raises(PoleError):
        pochhammer(mpmath.mpf(1), -1)


@given(st.integers(0, 8))
def test_pochhammer_step(k):
    s = var(1)
    assert pochhammer(s, k + 1) == pochhammer(s, k) * (s + k)


@given(st.fractions(min_value=-5, max_value=5, max_denominator=9), st.integers(0, 10))
def test_pochhammer_matches_gamma_ratio(x, k):
    value = pochhammer(x, k)
    with mpmath.workdps(30):
        expected = mpmath.rf(mpmath.mpf(x.numerator) / x.denominator, k)
        assert abs(mpmath.mpf(value.numerator) / value.denominator - expected) <= 1e-20 * (1 + abs(expected))
