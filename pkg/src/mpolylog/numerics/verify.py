"""Numeric checks of the translation formula, the head/tail split, and the Laurent-type expansions."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import mpmath

from ..domains import in_U, in_V_z, polar_hyperplanes
from ..ratfield import laurent_expansion
from ..specialseq import PoleError, pochhammer
from .config import EvalConfig
from .sums import as_roots, partial_sum, star_tail_infinite, window_sums, _nested_pass
from .values import generic_direction, li_value, regularized_taylor, regularized_value

__all__ = [
    "VerificationReport",
    "verify_translation",
    "verify_combi",
    "verify_expansion",
    "verify_corollary_vrz",
]


def _num(x, digits: int = 25):
    x = mpmath.mpmathify(x)
    if isinstance(x, mpmath.mpc):
        if x.imag == 0:
            return mpmath.nstr(x.real, digits)
        return [mpmath.nstr(x.real, digits), mpmath.nstr(x.imag, digits)]
    return mpmath.nstr(x, digits)


@dataclass
class VerificationReport:
    identity: str
    inputs: dict
    residual: float
    tolerance: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.residual < self.tolerance

    def to_dict(self) -> dict:
        return {"identity": self.identity, "inputs": self.inputs, "residual": self.residual,
                "tolerance": self.tolerance, "pass": self.passed, "details": self.details}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.identity} {json.dumps(self.inputs)} residual={self.residual:.3e}"


def _texts(z):
    return [w.text() for w in z]


def _k_terms(N: int, digits: int) -> int:
    """Terms of the translation k-series needed for ``N^-k`` to fall below ``10^-digits``."""
    return min(4000, int(math.ceil((digits + 10) / math.log10(N))) + 8)


def _translation_sides(z, s, N, window, tail):
    """Both sides of the translation formula given star-sum evaluators ``tail(z, s)``."""
    z1 = z[0]
    zbar = z1.conjugate().to_complex() if not z1.is_one() else mpmath.mpf(1)
    lhs = mpmath.mpf(0)
    if not z1.is_one():
        lhs += (1 - zbar) * tail(z, [s[0] - 1] + s[1:])
    if len(z) == 1:
        lhs += (z1 ** ((N - 1) % z1.order)).to_complex() * mpmath.mpf(N) ** (1 - s[0])
    else:
        lhs += zbar * tail((z[0] * z[1],) + z[2:], [s[0] + s[1] - 1] + s[2:])
    rhs = mpmath.mpf(0)
    for k in range(window):
        c = (-1) ** k * pochhammer(s[0] - 1, k + 1) / mpmath.factorial(k + 1)
        if c == 0:
            continue
        rhs += c * tail(z, [s[0] + k] + s[1:])
    return lhs, rhs


def verify_translation(z, s: Sequence, N: int, cfg: EvalConfig | None = None) -> VerificationReport:
    """Translation formula for star tails from ``N``, checked twice.

    The infinite form uses full tails.  The window form restricts every
    index to ``[N, M)``; there the identity picks up the boundary term
    ``-conj(z_1) z_1^M M^(1-s_1) Li*_(z_2..)(s_2..)_[N,M)``, which is added,
    so that check needs nothing but direct summation.
    """
    cfg = cfg or EvalConfig()
    z = as_roots(z)
    s = [mpmath.mpmathify(x) for x in s]
    if N < 2:
        raise ValueError("N must be at least 2")
    if not in_U(s):
        raise ValueError("s must lie in U_r")
    digits = cfg.working_digits
    K = _k_terms(N, digits)
    M = N + max(400, N)
    with mpmath.workdps(digits):
        lhs_inf, rhs_inf = _translation_sides(
            z, s, N, K, lambda zz, ss: star_tail_infinite(zz, ss, N, cfg))
        lhs_win, rhs_win = _translation_sides(
            z, s, N, K, lambda zz, ss: window_sums(zz, ss, N, M, digits)[0])
        z1 = z[0]
        boundary = (z1 ** ((M - 1) % z1.order)).to_complex() * mpmath.mpf(M) ** (1 - s[0])
        if len(z) > 1:
            boundary *= window_sums(z[1:], s[1:], N, M, digits)[0]
        lhs_win -= boundary
        res_inf = abs(lhs_inf - rhs_inf)
        res_win = abs(lhs_win - rhs_win)
    return VerificationReport(
        "translation",
        {"z": _texts(z), "s": [_num(x, 12) for x in s], "N": N},
        float(max(res_inf, res_win)), cfg.tolerance,
        {"lhs": _num(lhs_inf), "rhs": _num(rhs_inf), "residual_infinite": float(res_inf),
         "residual_window": float(res_win), "window_end": M, "k_terms": K},
    )


def verify_combi(z, s: Sequence, N: int, cfg: EvalConfig | None = None) -> VerificationReport:
    """``Li_<N = sum_i (-1)^i Li*_(z_i..z_1)(s_i..s_1)_>=N * Li_(z_i+1..)(s_i+1..)``.

    Also checked in the finite form where every index stays below
    ``M = N + 500`` and the suffix values are truncated sums below ``M``.
    """
    cfg = cfg or EvalConfig()
    z = as_roots(z)
    s = [mpmath.mpmathify(x) for x in s]
    r = len(z)
    digits = cfg.working_digits
    M = N + 500
    with mpmath.workdps(digits):
        head = partial_sum(z, s, None, N, cfg)
        rhs = mpmath.mpf(0)
        for i in range(r + 1):
            rz, rs = tuple(reversed(z[:i])), list(reversed(s[:i]))
            tail = star_tail_infinite(rz, rs, N, cfg) if i else mpmath.mpf(1)
            rhs += (-1) ** i * tail * li_value(z[i:], s[i:], cfg)
        res_inf = abs(head - rhs)

        below = [row[0] for row in _nested_pass(z, s, [0] * r, [M], digits, all_levels=True)[M]]
        below.append(mpmath.mpf(1))
        finite = mpmath.mpf(0)
        for i in range(r + 1):
            rz, rs = tuple(reversed(z[:i])), list(reversed(s[:i]))
            tail = window_sums(rz, rs, N, M, digits)[0] if i else mpmath.mpf(1)
            finite += (-1) ** i * tail * below[i]
        res_fin = abs(head - finite)
    return VerificationReport(
        "combinatorial",
        {"z": _texts(z), "s": [_num(x, 12) for x in s], "N": N},
        float(max(res_inf, res_fin)), cfg.tolerance,
        {"head": _num(head), "rhs": _num(rhs), "residual_infinite": float(res_inf),
         "residual_finite": float(res_fin), "finite_end": M},
    )


def verify_expansion(z, a: Sequence[int], mode: str = "auto",
                     cfg: EvalConfig | None = None) -> VerificationReport:
    """Compare ``Li_z(s)`` with ``sum_i D_i(s) LiReg_(suffix i)(s)`` at ``s = a + delta * d``.

    ``d`` is the generic direction; if some ``D_i`` has a pole there the
    direction is nudged with the next seed.  Each ``LiReg`` comes from its
    Taylor coefficients at the suffix anchor.
    """
    cfg = cfg or EvalConfig()
    z = as_roots(z)
    a = tuple(int(x) for x in a)
    r = len(z)
    exp = laurent_expansion(z, a, mode)
    delta = mpmath.mpf(cfg.delta.numerator) / cfg.delta.denominator
    degree = cfg.taylor_degree
    with mpmath.workdps(cfg.working_digits):
        for seed in range(cfg.seed, cfg.seed + 5):
            d = generic_direction(r, seed)
            s = [x + delta * y for x, y in zip(a, d)]
            try:
                coeffs = {i: exp.coefficient(i).evaluate(s) for i in exp.indices}
                lhs = li_value(z, s, cfg)
                break
            except PoleError:
                continue
        else:
            raise PoleError("no direction avoids the coefficient denominators")
        rhs = mpmath.mpf(0)
        terms = {}
        truncation = mpmath.mpf(0)
        for i in exp.indices:
            taylor = regularized_taylor(z[i:], a[i:], d[i:], degree, cfg, scale=delta)
            reg = sum((c * delta ** m for m, c in enumerate(taylor)), mpmath.mpf(0))
            rhs += coeffs[i] * reg
            truncation += abs(coeffs[i]) * abs(taylor[-1]) * delta ** (degree + 1)
            terms[str(i)] = {"D": _num(coeffs[i]), "LiReg": _num(reg)}
        if all(w.is_real() for w in z):
            rhs = mpmath.re(rhs)
            lhs = mpmath.re(lhs)
        residual = abs(lhs - rhs)
    return VerificationReport(
        f"expansion-{exp.mode}",
        {"z": _texts(z), "a": list(a), "delta": str(cfg.delta), "direction_seed": seed},
        float(residual), cfg.tolerance,
        {"lhs": _num(lhs), "rhs": _num(rhs), "terms": terms,
         "taylor_truncation_estimate": float(truncation),
         "coefficients": {str(i): exp.coefficient(i).text() for i in exp.indices}},
    )


def verify_corollary_vrz(z, a: Sequence[int], cfg: EvalConfig | None = None) -> VerificationReport:
    """At ``a`` in ``V_r(z)`` the value of ``Li_z`` equals the regularised value.

    When ``Li_z`` has no candidate polar hyperplane at all, every integer
    point is accepted.
    """
    cfg = cfg or EvalConfig()
    z = as_roots(z)
    a = tuple(int(x) for x in a)
    if not (in_V_z(z, a) or polar_hyperplanes(z).is_empty()):
        raise ValueError(f"{a} is not in V_r(z)")
    value = li_value(z, a, cfg)
    reg = regularized_value(z, a, None, cfg)
    residual = abs(value - reg.value)
    return VerificationReport(
        "value-equals-regularised",
        {"z": _texts(z), "a": list(a)},
        float(residual), cfg.tolerance,
        {"li_value": _num(value), "regularized": _num(reg.value)},
    )
