import itertools
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from mpolylog.cyclo import CycloNumber, make_root
from mpolylog.domains import IndexProfile, in_closure_U_z, in_V_z, index_set_I
from mpolylog.numerics import as_roots
from mpolylog.ratfield import (
    RatFunc,
    RatMatrix,
    boundary_term,
    build_matrix_boundary,
    build_matrix_general,
    c_rational,
    h_factor,
    invert_unitriangular,
    laurent_expansion,
    matrix_A,
    matrix_A_inverse,
    matrix_B,
    matrix_B_inverse,
    parse_ratfunc,
    var,
)
from mpolylog.specialseq import eulerian_star_value

R = parse_ratfunc


def P(*z):
    return IndexProfile(as_roots(z))


def matrix(index, rows):
    return RatMatrix(index, [[R(x) if isinstance(x, str) else x for x in row] for row in rows])


# --- rational function arithmetic -----------------------------------------

small_int = st.integers(-3, 3)


@st.composite
def ratfuncs(draw):
    """Small random rational functions in s1, s2 with cyclotomic or rational coefficients."""
    c = draw(st.sampled_from([CycloNumber.rational(Fraction(2, 3)), CycloNumber.root(1, 3),
                              CycloNumber.rational(-1), CycloNumber.root(1, 4) + 1]))
    num = RatFunc.const(c) * var(1) ** draw(st.integers(0, 2)) + draw(small_int)
    den = var(1) + var(2) * draw(small_int) + draw(small_int)
    if den.is_zero():
        den = RatFunc.const(1)
    return num / den


@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_field_laws(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f * (g + h) == f * g + f * h
    assert f - f == 0
    if not f.is_zero():
        assert (g / f) * f == g


@given(ratfuncs(), ratfuncs())
def test_evaluation_commutes_with_products(f, g):
    s = [mpmath.mpf(1) / 3 + mpmath.pi / 100, mpmath.e / 7]
    with mpmath.workdps(40):
        assert abs((f * g).evaluate(s) - f.evaluate(s) * g.evaluate(s)) < 1e-30
        assert abs((f + g).evaluate(s) - f.evaluate(s) - g.evaluate(s)) < 1e-30


@given(ratfuncs())
def test_text_round_trip(f):
    assert R(f.text()) == f


def test_grammar_examples():
    f = R("(-1/2)/((s3+s2-1)*(s3+s2+s1-2))")
    assert f == RatFunc.const(Fraction(-1, 2)) / ((var(3) + var(2) - 1) * (var(3) + var(2) + var(1) - 2))
    assert R("zeta(3)^2*s1") == RatFunc.const(CycloNumber.root(2, 3)) * var(1)
    with pytest.raises(ValueError):
        R("s1+")


# --- H factors, boundary terms and C_i -------------------------------------

def test_h_factor_examples():
    assert h_factor(1, 1, P(1)) == var(1) - 1
    p = P(1, -1, -1)
    assert h_factor(3, 1, p) == R("s1+s2+s3-2")
    assert h_factor(3, 2, p) == R("s2+s3-1")
    assert h_factor(3, 3, p) == 2
    assert h_factor(1, 1, P(-1)) == 2


def test_boundary_term_examples():
    assert boundary_term(1, P(1, -1)) == R("-1/(s1-1)")
    assert boundary_term(0, P(1, -1)) == 1
    assert boundary_term(3, P(1, -1, -1)) == R("-1/(2*(s3+s2-1)*(s3+s2+s1-2))")


def test_c_rational_examples():
    assert c_rational(1, P(1, -1), (1, 1)) == R("1/(s1-1)")
    assert c_rational(0, P(1, -1), (1, 1)) == 1
    assert c_rational(1, P(-1, 1), (0, 1)).is_zero()
    assert c_rational(2, P(1, -1), (0, 4)).is_zero()


@given(st.lists(st.sampled_from([1, -1]), min_size=1, max_size=3), st.data())
def test_c_rational_vanishes_on_V(z, data):
    p = P(*z)
    a = data.draw(st.lists(st.integers(-1, 4), min_size=p.r, max_size=p.r))
    if in_V_z(p, a):
        assert all(c_rational(i, p, a).is_zero() for i in range(1, p.r + 1))


def test_consistency_with_cube_roots():
    # the boundary/general agreement also holds beyond z = +-1
    w, wb = make_root(1, 3), make_root(2, 3)
    one = make_root(0, 1)
    for z in [(w, wb), (one, w, wb), (w, wb, one), (wb, one, w)]:
        p = IndexProfile(z)
        for a in itertools.product(range(-1, 3), repeat=p.r):
            if not in_closure_U_z(p, a):
                continue
            I = index_set_I(p, a)
            for i in range(p.r + 1):
                c = c_rational(i, p, a)
                if i in I:
                    assert c * (-1) ** i == boundary_term(i, p), (z, a, i)
                else:
                    assert c.is_zero(), (z, a, i)


# --- matrices ----------------------------------------------------------------

def test_boundary_matrix_example():
    m = build_matrix_boundary(P(1, -1, -1), (1, 1, 0))
    assert m.index == [0, 1, 3]
    assert m == matrix([0, 1, 3], [
        [1, "-1/(s1-1)", "-1/(2*(s3+s2-1)*(s3+s2+s1-2))"],
        [0, 1, "1/(2*(s3+s2-1))"],
        [0, 0, 1],
    ])
    assert invert_unitriangular(m) == matrix([0, 1, 3], [
        [1, "1/(s1-1)", "-1/(2*(s1-1)*(s3+s2+s1-2))"],
        [0, 1, "-1/(2*(s3+s2-1))"],
        [0, 0, 1],
    ])


def test_general_matrix_example():
    m = build_matrix_general(P(-1, 1, -1, 1), (0, 1, 0, 1))
    assert m.index == [0, 3, 4]
    assert m == matrix([0, 3, 4], [
        [1, "-1/(4*(s1+s2+s3-1))", "1/(4*(s4-1)*(s1+s2+s3+s4-2))"],
        [0, 1, "-1/(s4-1)"],
        [0, 0, 1],
    ])
    assert invert_unitriangular(m) == matrix([0, 3, 4], [
        [1, "1/(4*(s1+s2+s3-1))", "1/(4*(s1+s2+s3-1)*(s1+s2+s3+s4-2))"],
        [0, 1, "1/(s4-1)"],
        [0, 0, 1],
    ])


def test_depth_one_boundary_matrix():
    m = build_matrix_boundary(P(1), (1,))
    assert m == matrix([0, 1], [[1, "-1/(s1-1)"], [0, 1]])


def test_boundary_mode_rejects_points_outside_closure():
    with pytest.raises(ValueError):
        build_matrix_boundary(P(1, -1), (0, 0))


def test_inverse_of_identity():
    eye = RatMatrix.identity([0, 2, 5])
    assert invert_unitriangular(eye).is_identity()
    with pytest.raises(ValueError):
        invert_unitriangular(matrix([0, 1], [[2, 0], [0, 1]]))


def test_laurent_examples():
    e = laurent_expansion(P(1, -1, -1), (1, 1, 0))
    assert e.mode == "boundary" and e.indices == [0, 1, 3]
    assert e.coefficient(0) == 1
    assert e.coefficient(1) == R("1/(s1-1)")
    assert e.coefficient(3) == R("-1/(2*(s1-1)*(s3+s2+s1-2))")

    e = laurent_expansion(P(-1, 1, -1, 1), (0, 1, 0, 1))
    assert e.mode == "general"
    assert e.coefficient(3) == R("1/(4*(s1+s2+s3-1))")
    assert e.coefficient(4) == R("1/(4*(s1+s2+s3-1)*(s1+s2+s3+s4-2))")

    assert laurent_expansion(P(1, -1), (1, 1)).coefficient(1) == R("1/(s1-1)")
    assert laurent_expansion(P(-1, -1), (1, 1)).indices == [0]


@given(st.lists(st.sampled_from([1, -1]), min_size=1, max_size=3), st.data())
def test_forward_then_inverse_is_identity(z, data):
    p = P(*z)
    a = data.draw(st.lists(st.integers(-1, 3), min_size=p.r, max_size=p.r))
    e = laurent_expansion(p, a)
    assert (e.matrix @ e.inverse).is_identity()
    assert (e.inverse @ e.matrix).is_identity()


# --- translation matrices ----------------------------------------------------

def test_matrix_A_examples():
    m1 = make_root(1, 2)
    assert matrix_A(1, m1, 1) == matrix([0], [[-2]])
    assert matrix_A_inverse(1, m1, 1) == matrix([0], [[Fraction(-1, 2)]])
    s = var(1)
    assert matrix_A(1, m1, 2) == matrix([0, 1], [[-2, s], [0, -2]])
    expected = matrix([0, 1], [[1, s * RatFunc.const(Fraction(eulerian_star_value(1, -1), -2))], [0, 1]])
    assert matrix_A_inverse(1, m1, 2) == expected.scaled(Fraction(-1, 2))
    assert (matrix_A(1, m1, 2) @ matrix_A_inverse(1, m1, 2)).is_identity()
    with pytest.raises(ValueError):
        matrix_A(1, make_root(0, 1), 2)


def test_matrix_B_examples():
    assert matrix_B(1, 1) == matrix([0], [["s1-1"]])
    assert matrix_B_inverse(1, 1) == matrix([0], [["1/(s1-1)"]])
    inv = matrix_B_inverse(1, 3)
    assert inv[0, 1] == Fraction(1, 2)
    assert inv[0, 2] == R("s1/12")
    assert inv[1, 1] == R("1/s1")


@pytest.mark.parametrize("q", [2, 3, 4, 6])
def test_matrix_A_inverse_small(q):
    for p in range(1, q):
        assert (matrix_A(1, make_root(p, q), 3) @ matrix_A_inverse(1, make_root(p, q), 3)).is_identity()
