"""Acceptance criteria 1-10, one test each.

Every test prints a single ``ACCEPTANCE <n> PASS|FAIL ...`` line to the
terminal (bypassing capture) and then asserts the same condition,
including the runtime budget.
"""

import itertools
import math
import time
from fractions import Fraction

import mpmath
import pytest

from mpolylog.asymptotics import AsymptoticModel, decompose_sequence, truncated_tail
from mpolylog.cli import random_U_points, random_V_points
from mpolylog.cyclo import make_root
from mpolylog.domains import IndexProfile, in_closure_U_z, index_set_I
from mpolylog.numerics import (
    EvalConfig,
    as_roots,
    fit_grids,
    li_value,
    partial_sum_exact,
    partial_sums,
    regularized_value,
    verify_combi,
    verify_corollary_vrz,
    verify_expansion,
    verify_translation,
)
from mpolylog.ratfield import (
    RatMatrix,
    boundary_term,
    build_matrix_boundary,
    build_matrix_general,
    c_rational,
    invert_unitriangular,
    matrix_A,
    matrix_A_inverse,
    matrix_B,
    matrix_B_inverse,
    parse_ratfunc,
)
from mpolylog.specialseq import star_bernoulli

CFG = EvalConfig(precision=60)


@pytest.fixture
def report(capsys):
    def emit(n, ok, elapsed, budget, detail):
        ok = bool(ok) and elapsed < budget
        with capsys.disabled():
            status = "PASS" if ok else "FAIL"
            print(f"\nACCEPTANCE {n} {status} {detail} [{elapsed:.2f}s / budget {budget}s]")
        assert ok, detail
    return emit


def test_criterion_01_exact_finite_identities(report):
    start = time.perf_counter()
    bad = []
    for N in range(2, 201):
        sign = (-1) ** N
        if partial_sum_exact([-1], [0], N) != Fraction(-sign, 2) - Fraction(1, 2):
            bad.append(("s=0", N))
        if partial_sum_exact([-1], [-1], N) != Fraction(-sign * N, 2) + Fraction(sign, 4) - Fraction(1, 4):
            bad.append(("s=-1", N))
    elapsed = time.perf_counter() - start
    report(1, not bad, elapsed, 1, f"exact closed forms for 2<=N<=200, mismatches={bad[:3]}")


def test_criterion_02_regularised_golden_values(report):
    start = time.perf_counter()
    with mpmath.workdps(60):
        v0 = regularized_value([-1], [0], None, CFG).value
        v1 = regularized_value([-1], [-1], None, CFG).value
        reg = regularized_value([1, -1], [1, -1], None, CFG)
        target = (1 - mpmath.log(2) - mpmath.euler) / 4
        errs = {
            "l(0)(-1)": abs(v0 + mpmath.mpf(1) / 2),
            "l(-1)(-1)": abs(v1 + mpmath.mpf(1) / 4),
            "l(1,-1)(1,-1)": abs(reg.value - target),
            "logN": abs(reg.coefficient(make_root(0, 1), 0, 1) + mpmath.mpf(1) / 4),
            "(-1)^N": abs(reg.coefficient(make_root(1, 2), 0, 0) - mpmath.mpf(1) / 4),
        }
        tol = {"l(0)(-1)": 1e-20, "l(-1)(-1)": 1e-20, "l(1,-1)(1,-1)": 1e-8, "logN": 1e-6, "(-1)^N": 1e-6}
    ok = all(errs[k] < tol[k] for k in errs)
    elapsed = time.perf_counter() - start
    report(2, ok, elapsed, 30, " ".join(f"{k}:{mpmath.nstr(v, 3)}" for k, v in errs.items()))


def stieltjes_oracle(k, N=60, terms=12):
    """gamma_k by Euler-Maclaurin on f(x) = log(x)^k / x summed up to N."""
    f = lambda x: mpmath.log(x) ** k / x
    total = mpmath.fsum(f(n) for n in range(1, N)) + f(N) / 2 - mpmath.log(N) ** (k + 1) / (k + 1)
    for j in range(1, terms + 1):
        b = mpmath.bernoulli(2 * j)
        total -= b / mpmath.factorial(2 * j) * mpmath.diff(f, N, 2 * j - 1)
    return total


def test_criterion_03_stieltjes_recovery(report):
    start = time.perf_counter()
    errs = []
    with mpmath.workdps(60):
        for k in range(3):
            oracle = stieltjes_oracle(k)
            assert abs(oracle - mpmath.stieltjes(k)) < 1e-20  # the oracle itself is sound
            value = regularized_value([1], [1], [k], CFG).value
            errs.append(abs(value - oracle))
    elapsed = time.perf_counter() - start
    report(3, all(e < 1e-6 for e in errs), elapsed, 60,
           "gamma_0..2 errors " + ", ".join(mpmath.nstr(e, 3) for e in errs))


def test_criterion_04_averaged_partial_sums(report):
    start = time.perf_counter()
    limit = mpmath.log(2) / 2 - mpmath.pi ** 2 / 16
    errs = []
    with mpmath.workdps(40):
        for N in (10 ** 3, 10 ** 4, 10 ** 5):
            sums = partial_sums([1, -1], [2, -1], None, [N, N + 1], CFG)
            errs.append(abs((sums[N] + sums[N + 1]) / 2 - limit))
    ok = errs[-1] < 1e-5 and errs[0] > errs[1] > errs[2]
    elapsed = time.perf_counter() - start
    report(4, ok, elapsed, 30, "averaged error at N=1e3,1e4,1e5: " + ", ".join(mpmath.nstr(e, 3) for e in errs))


def _matrix(index, rows):
    return RatMatrix(index, [[parse_ratfunc(x) if isinstance(x, str) else x for x in row] for row in rows])


def test_criterion_05_exact_matrix_reproduction(report):
    start = time.perf_counter()
    p = IndexProfile(as_roots([1, -1, -1]))
    m = build_matrix_boundary(p, (1, 1, 0))
    ok_m = m == _matrix([0, 1, 3], [
        [1, "-1/(s1-1)", "-1/(2*(s3+s2-1)*(s3+s2+s1-2))"],
        [0, 1, "1/(2*(s3+s2-1))"],
        [0, 0, 1]])
    ok_mi = invert_unitriangular(m) == _matrix([0, 1, 3], [
        [1, "1/(s1-1)", "-1/(2*(s1-1)*(s3+s2+s1-2))"],
        [0, 1, "-1/(2*(s3+s2-1))"],
        [0, 0, 1]])
    q = IndexProfile(as_roots([-1, 1, -1, 1]))
    n = build_matrix_general(q, (0, 1, 0, 1))
    ok_n = n == _matrix([0, 3, 4], [
        [1, "-1/(4*(s1+s2+s3-1))", "1/(4*(s4-1)*(s1+s2+s3+s4-2))"],
        [0, 1, "-1/(s4-1)"],
        [0, 0, 1]])
    ok_ni = invert_unitriangular(n) == _matrix([0, 3, 4], [
        [1, "1/(4*(s1+s2+s3-1))", "1/(4*(s1+s2+s3-1)*(s1+s2+s3+s4-2))"],
        [0, 1, "1/(s4-1)"],
        [0, 0, 1]])
    elapsed = time.perf_counter() - start
    flags = dict(M=ok_m, M_inv=ok_mi, N=ok_n, N_inv=ok_ni)
    report(5, all(flags.values()), elapsed, 5, f"entry-by-entry equality {flags}")


def test_criterion_06_consistency_sweep(report):
    start = time.perf_counter()
    checked, failures = 0, []
    for r in (1, 2, 3):
        for signs in itertools.product([1, -1], repeat=r):
            p = IndexProfile(as_roots(signs))
            for a in itertools.product(range(-3, 4), repeat=r):
                if not in_closure_U_z(p, a):
                    continue
                I = index_set_I(p, a)
                for i in range(r + 1):
                    c = c_rational(i, p, a)
                    good = (c * (-1) ** i == boundary_term(i, p)) if i in I else c.is_zero()
                    checked += 1
                    if not good:
                        failures.append((signs, a, i))
    elapsed = time.perf_counter() - start
    report(6, not failures and checked > 0, elapsed, 60,
           f"{checked} coefficient identities checked, failures={failures[:3]}")


def test_criterion_07_identity_suites(report):
    start = time.perf_counter()
    residuals = {}
    for depth in (1, 2):
        for z, s in random_U_points(depth, 10, CFG.seed):
            rep = verify_translation(z, s, 50, CFG)
            residuals.setdefault(f"translation-{depth}", []).append(rep.residual)
    for depth in (1, 2, 3):
        for z, s in random_U_points(depth, 10, CFG.seed + 1):
            rep = verify_combi(z, s, 30, CFG)
            residuals.setdefault(f"combi-{depth}", []).append(rep.residual)
    for z, a, mode in [((1, -1), (1, 1), "boundary"), ((1, -1, -1), (1, 1, 0), "boundary"),
                       ((-1, 1, -1, 1), (0, 1, 0, 1), "general")]:
        rep = verify_expansion(z, a, mode, CFG)
        residuals[f"expansion{a}"] = [rep.residual]
    worst = {k: max(v) for k, v in residuals.items()}
    elapsed = time.perf_counter() - start
    report(7, all(v < 1e-8 for v in worst.values()), elapsed, 300,
           "worst residuals " + " ".join(f"{k}:{v:.1e}" for k, v in worst.items()))


def test_criterion_08_value_equals_regularised_on_V(report):
    start = time.perf_counter()
    points = [((1, -1), (2, 0))] + random_V_points(2, 4, 5) + random_V_points(3, 3, 5) + random_V_points(1, 2, 5)
    residuals = [verify_corollary_vrz(z, a, CFG).residual for z, a in points]
    with mpmath.workdps(60):
        parity = -mpmath.zeta(2) / 4  # only even n1 survive the inner alternating count
        anchor = abs(li_value([1, -1], [2, 0], CFG) - parity)
    ok = len(points) == 10 and all(r < 1e-6 for r in residuals) and anchor < 1e-6
    elapsed = time.perf_counter() - start
    report(8, ok, elapsed, 120,
           f"{len(points)} points, worst |Li - l| {max(residuals):.1e}, anchor -pi^2/24 error {float(anchor):.1e}")


def _unit_tail(N, a):
    return (-1) ** a * mpmath.psi(a - 1, N) / mpmath.factorial(a - 1)


def test_criterion_09_tail_properties(report):
    start = time.perf_counter()
    # zero part: depth-1 tails with z != 1 have no non-decaying unit-root terms
    worst_zero = mpmath.mpf(0)
    with mpmath.workdps(CFG.working_digits):
        for w in (make_root(1, 2), make_root(1, 3), make_root(1, 4), make_root(5, 6)):
            for a in (-1, 0, 1, 2):
                total = mpmath.polylog(a, w.to_complex())
                model = AsymptoticModel.from_shape((w,), (a,), m_max=12)
                Ns = fit_grids(model, CFG)[0]
                values = partial_sums((w,), (a,), None, Ns, CFG)
                dec = decompose_sequence([(N, total - values[N]) for N in Ns], model)
                for t, c in dec.coefficients.items():
                    if t.xi.is_one() and t.e >= 0:
                        worst_zero = max(worst_zero, abs(c))
    # precision class: truncated tails lose a factor 2^A per doubling of N
    K = 4
    cases = [((1,), (2,), lambda N: _unit_tail(N, 2)),
             ((1, 1), (2, 2), lambda N: (_unit_tail(N, 2) ** 2 + _unit_tail(N, 4)) / 2)]
    worst_margin = math.inf
    ratios = {}
    with mpmath.workdps(60):
        for z, a, oracle in cases:
            p = IndexProfile(as_roots(z))
            A = sum(a) + K + 1 - p.Q(p.r)
            errs = [abs(truncated_tail(p, a, a, N, {"k": K}) - oracle(N)) for N in (50, 100, 200, 400)]
            rs = [float(errs[i] / errs[i + 1]) for i in range(3)]
            ratios[str(z)] = [round(x, 1) for x in rs]
            worst_margin = min(worst_margin, min(x / 2 ** (A - 0.5) for x in rs))
    ok = worst_zero < 1e-8 and worst_margin >= 1
    elapsed = time.perf_counter() - start
    report(9, ok, elapsed, 120,
           f"max unit-root tail coefficient {mpmath.nstr(worst_zero, 3)}, doubling ratios {ratios}")


def test_criterion_10_translation_matrix_inverses(report):
    start = time.perf_counter()
    roots = [make_root(p, q) for q in range(2, 7) for p in range(1, q) if math.gcd(p, q) == 1]
    bad = []
    for size in range(1, 7):
        for w in roots:
            if not (matrix_A(1, w, size) @ matrix_A_inverse(1, w, size)).is_identity():
                bad.append(("A", w.text(), size))
        if not (matrix_B(1, size) @ matrix_B_inverse(1, size)).is_identity():
            bad.append(("B", size))
    elapsed = time.perf_counter() - start
    report(10, not bad, elapsed, 10,
           f"A for {len(roots)} roots and B, sizes 1-6, failures={bad[:3]}")
