import math
import random
from fractions import Fraction

import mpmath
import pytest

from mpolylog.asymptotics import FitError
from mpolylog.cyclo import make_root
from mpolylog.domains import IndexProfile, in_V_z
from mpolylog.numerics import (
    EvalConfig,
    as_roots,
    li_value,
    partial_sum,
    partial_sum_exact,
    partial_sums,
    partial_sum_taylor,
    regularized_value,
    star_tail,
    star_tail_infinite,
    verify_combi,
    verify_corollary_vrz,
    verify_expansion,
    verify_translation,
)
from mpolylog.specialseq import PoleError

CFG = EvalConfig()


def close(x, y, tol):
    return abs(mpmath.mpmathify(x) - mpmath.mpmathify(y)) < tol


# --- configuration ------------------------------------------------------------

def test_config_validation():
    with pytest.raises(ValueError):
        EvalConfig(precision=10)
    with pytest.raises(ValueError):
        EvalConfig(precision=40, tolerance=1e-25)
    cfg = EvalConfig.from_mapping({"precision": "80", "delta": "1/500", "pole_tolerance": "none"})
    assert cfg.precision == 80 and cfg.delta == Fraction(1, 500)
    assert cfg.working_digits == 80 + cfg.guard_digits
    with pytest.raises(ValueError):
        EvalConfig.from_mapping({"colour": "blue"})


# --- partial sums -----------------------------------------------------------

def test_partial_sum_examples():
    assert partial_sum_exact([-1], [0], 5) == 0
    assert partial_sum_exact([-1], [0], 4) == -1
    assert partial_sum([], [], None, 10) == 1
    with mpmath.workdps(30):
        v = partial_sum([1, -1], [2, -1], None, 10 ** 4)
        assert abs(v - (-0.2703)) < 1e-3


def test_partial_sum_matches_brute_force():
    z = as_roots([make_root(1, 3), -1, 1])
    s = [mpmath.mpf(1.5), mpmath.mpc(0.5, 1), 2]
    N = 40
    with mpmath.workdps(40):
        w = [x.to_complex() for x in z]
        brute = mpmath.mpf(0)
        for n1 in range(1, N):
            for n2 in range(1, n1):
                for n3 in range(1, n2):
                    brute += (w[0] ** n1 * w[1] ** n2 * w[2] ** n3
                              / (mpmath.mpf(n1) ** s[0] * mpmath.mpf(n2) ** s[1] * mpmath.mpf(n3) ** s[2]))
        assert close(partial_sum(z, s, None, N), brute, 1e-30)


def test_partial_sum_with_logs():
    N = 30
    with mpmath.workdps(40):
        brute = sum(mpmath.log(n) ** 2 / n for n in range(1, N))
        assert close(partial_sum([1], [1], [2], N), brute, 1e-30)


def test_exact_path_matches_floating_path():
    z = as_roots([1, -1, make_root(1, 4)])
    exact = partial_sum_exact(z, (1, 0, -1), 25)
    with mpmath.workdps(40):
        assert close(exact.to_complex(), partial_sum(z, (1, 0, -1), None, 25), 1e-30)


def test_taylor_coefficients_of_partial_sums():
    # d/dt sum n^-(a+t) = -sum log(n) n^-a
    N = 50
    with mpmath.workdps(40):
        coeffs = partial_sum_taylor([1], (2,), [1], 2, [N], CFG)[N]
        assert close(coeffs[0], sum(mpmath.mpf(n) ** -2 for n in range(1, N)), 1e-30)
        assert close(coeffs[1], -sum(mpmath.log(n) / n ** 2 for n in range(1, N)), 1e-30)
        assert close(coeffs[2], sum(mpmath.log(n) ** 2 / n ** 2 for n in range(1, N)) / 2, 1e-30)


def test_partial_sums_batch_agrees_with_single():
    Ns = [5, 17, 100]
    batch = partial_sums([-1, 1], (1, 2), None, Ns, CFG)
    for N in Ns:
        assert close(batch[N], partial_sum([-1, 1], (1, 2), None, N), 1e-40)


# --- star tails ---------------------------------------------------------------

def test_star_tail_examples():
    with mpmath.workdps(40):
        t = star_tail([1], [2], 10, 10 ** 5)
        exact = mpmath.psi(1, 10)
        assert close(exact, 0.105166, 1e-6)
        assert abs(t.value - exact) <= t.bound
        assert star_tail([make_root(1, 3)], [2], 50, 40).value == 0
        brute = sum(mpmath.mpf(n1) ** -3 * mpmath.mpf(n2) ** -2
                    for n1 in range(5, 300) for n2 in range(5, n1 + 1))
        assert close(star_tail([1, 1], [3, 2], 5, 300).value, brute, 1e-10)


@pytest.mark.parametrize("w,s", [(1, 2), (-1, 1), (make_root(1, 3), mpmath.mpf(0.5))])
def test_infinite_star_tail_depth_one(w, s):
    w = as_roots([w])[0]
    with mpmath.workdps(50):
        x = w.to_complex()
        expected = x ** 7 * mpmath.lerchphi(x, s, 7)
        assert close(star_tail_infinite([w], [s], 7), expected, 1e-40)


# --- values -----------------------------------------------------------------

def test_li_value_examples():
    with mpmath.workdps(60):
        assert close(li_value([-1], [1]), -mpmath.log(2), 1e-50)
        assert close(li_value([1, -1], [2, 0]), -mpmath.pi ** 2 / 24, 1e-50)
        assert close(li_value([1], [2]), mpmath.pi ** 2 / 6, 1e-50)


@pytest.mark.parametrize("k", range(2, 7))
def test_depth_one_golden_values(k):
    with mpmath.workdps(60):
        zeta = mpmath.zeta(k)
        assert close(li_value([1], [k]), zeta, 1e-50)
        assert close(li_value([-1], [k]), -(1 - mpmath.mpf(2) ** (1 - k)) * zeta, 1e-50)


def test_li_value_multiple_zeta_values():
    with mpmath.workdps(60):
        assert close(li_value([1, 1], [3, 1]), mpmath.zeta(4) / 4, 1e-50)
        assert close(li_value([1, 1, 1], [2, 2, 2]), mpmath.pi ** 6 / 5040, 1e-50)
        assert close(li_value([1, 1, 1], [3, 1, 1]), 2 * mpmath.zeta(5) - mpmath.zeta(2) * mpmath.zeta(3), 1e-50)


def test_li_value_analytic_continuation():
    with mpmath.workdps(60):
        assert close(li_value([1], [0]), -mpmath.mpf(1) / 2, 1e-50)
        assert close(li_value([1], [-1]), -mpmath.mpf(1) / 12, 1e-50)
        assert close(li_value([-1], [-1]), mpmath.mpf(1) / 4 * -1, 1e-50)
        w = make_root(1, 3)
        assert close(li_value([w], [1.5]), mpmath.polylog(1.5, w.to_complex()), 1e-40)


def test_li_value_rejects_poles():
    with pytest.raises(PoleError) as info:
        li_value([1, 1], [2, 0])
    assert "s1+s2=2" in str(info.value)
    with pytest.raises(PoleError):
        li_value([1], [1])
    with pytest.raises(ValueError):
        li_value([1, 1], [3])


def test_regularized_value_examples():
    assert close(regularized_value([-1], [0]).value, -0.5, 1e-20)
    reg = regularized_value([1, -1], [1, -1])
    with mpmath.workdps(40):
        assert close(reg.value, (1 - mpmath.log(2) - mpmath.euler) / 4, 1e-12)
    assert close(regularized_value([1], [1], [0]).value, mpmath.euler, 1e-12)
    assert regularized_value([], []).value == 1
    assert "two_grid_gap" in reg.diagnostics["chosen"]


def test_regularized_value_reports_failure():
    cfg = CFG.replace(m_max_limit=3, tolerance=1e-25, fit_tolerance=1e-25)
    with pytest.raises(FitError) as info:
        regularized_value([1, 1, 1], [1, 1, 1], [2, 2, 2], cfg)
    assert info.value.diagnostics["attempts"]


def _V_points(count, seed=11):
    """Points a in V_r(z) whose non-oscillating decay is at least 1/N^2."""
    rng = random.Random(seed)
    roots = [make_root(0, 1), make_root(1, 2), make_root(1, 4), make_root(1, 3)]
    out = []
    while len(out) < count:
        r = rng.randint(1, 3)
        z = tuple(rng.choice(roots) for _ in range(r))
        a = tuple(rng.randint(-1, 4) for _ in range(r))
        p = IndexProfile(z)
        ok = in_V_z(p, a)
        for i in range(1, r + 1):
            excess = sum(a[:i]) - p.Q(i)
            if p.q(1, i) and excess < 2:
                ok = False
        if ok:
            out.append((z, a))
    return out


@pytest.mark.parametrize("z,a", _V_points(20))
def test_regularised_value_is_averaged_limit(z, a):
    L = math.lcm(*(w.order for w in z))
    N = 20000
    with mpmath.workdps(40):
        sums = partial_sums(z, a, None, range(N, N + L), CFG)
        averaged = sum(sums.values()) / L
        assert close(regularized_value(z, a).value, averaged, 1e-6)


# --- identity checks ---------------------------------------------------------

def test_verify_translation_examples():
    rep = verify_translation([-1], [2.5], 50)
    assert rep.passed and rep.residual < 1e-20
    assert verify_translation([1, -1], [2.2, 1.3], 50).passed
    assert verify_translation([1], [3], 50).residual < 1e-20
    with pytest.raises(ValueError):
        verify_translation([1], [0.5], 50)


def test_verify_combi_examples():
    assert verify_combi([-1], [2], 30).residual < 1e-20
    assert verify_combi([1, -1], [3, 2], 30).passed
    assert verify_combi([1, 1, 1], [4, 3, 2], 20).passed


def test_verify_expansion_depth_one():
    rep = verify_expansion([1], (1,))
    assert rep.passed, rep.to_json()
    assert rep.details["coefficients"]["1"] == "1/(s1-1)"


def test_verify_corollary_examples():
    rep = verify_corollary_vrz([1, -1], (2, 0))
    assert rep.passed
    assert close(mpmath.mpf(rep.details["li_value"]), -mpmath.pi ** 2 / 24, 1e-20)
    assert verify_corollary_vrz([1, -1], (2, 1)).passed
    for a in [(0, 0), (-2, 3), (1, -1)]:
        assert verify_corollary_vrz([-1, 1], a).passed
    with pytest.raises(ValueError):
        verify_corollary_vrz([1, 1], (1, 1))


def test_report_serialisation():
    rep = verify_combi([1], [2], 10)
    assert rep.to_dict()["pass"] is True
    assert rep.line().startswith("PASS combinatorial")


def test_fit_grid_respects_N_max():
    with pytest.raises(FitError):
        regularized_value([1], [2], None, CFG.replace(N_max=1000))
