"""Values of multiple polylogarithms and regularised values at integer points."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import mpmath

from ..asymptotics import AsymptoticModel, Decomposition, FitError, decompose_sequence, tail_expansion
from ..domains import polar_hyperplanes
from ..specialseq import PoleError
from .config import EvalConfig
from .sums import _nested_pass, as_roots, partial_sum_taylor, partial_sums

__all__ = [
    "li_value",
    "regularized_value",
    "regularized_taylor",
    "RegularizedValue",
    "generic_direction",
    "fit_grids",
]


def generic_direction(r: int, seed: int = 0) -> list:
    """``(1, 1/pi, 1/pi^2, ...)``, nudged deterministically when ``seed`` is non-zero."""
    d = [mpmath.pi ** (-j) for j in range(r)]
    if seed:
        d = [x * (1 + mpmath.mpf(seed) / (7 + 3 * j) / 97) for j, x in enumerate(d)]
    return d


# ---------------------------------------------------------------------------
# li_value
# ---------------------------------------------------------------------------

def _check_poles(z, s, cfg: EvalConfig) -> None:
    near = polar_hyperplanes(z).nearest(s)
    if near is not None and near[1] < cfg.pole_threshold:
        raise PoleError(f"s is within {mpmath.nstr(near[1], 3)} of the polar hyperplane "
                        f"{near[0].text()}")


def _li_combined(z, s, cfg: EvalConfig, digits: int):
    """Truncated sums below ``M`` plus star tails above it, suffix by suffix."""
    r = len(z)
    M = cfg.tail_N
    with mpmath.workdps(digits):
        heads = _nested_pass(z, s, [0] * r, [M], digits, all_levels=True)[M]
        below = [row[0] for row in heads] + [mpmath.mpf(1)]
        values = [None] * r + [mpmath.mpf(1)]
        for i in range(r - 1, -1, -1):
            total = below[i]
            for t in range(1, r - i + 1):
                rz = tuple(reversed(z[i:i + t]))
                rs = list(reversed(s[i:i + t]))
                total += (-1) ** (t + 1) * tail_expansion(rz, rs, M, cfg.tail_terms) * values[i + t]
            values[i] = total
        return values[0]


def _li_symmetric(z, s, cfg: EvalConfig):
    """Mean of evaluations at ``s +- eps d`` and ``s +- 2 eps d``, Richardson-combined (error ``eps^4``)."""
    power = cfg.working_digits // 4 + 5
    digits = cfg.working_digits + power * (len(z) + 1) + 10
    with mpmath.workdps(digits):
        eps = mpmath.mpf(10) ** -power
        d = generic_direction(len(z))

        def mean(h):
            plus = [x + h * y for x, y in zip(s, d)]
            minus = [x - h * y for x, y in zip(s, d)]
            return (_li_combined(z, plus, cfg, digits) + _li_combined(z, minus, cfg, digits)) / 2

        return (4 * mean(eps) - mean(2 * eps)) / 3


def li_value(z, s: Sequence, cfg: EvalConfig | None = None):
    """``Li_z(s)`` at any ``s`` off the candidate polar hyperplanes.

    Raises :class:`PoleError` when ``s`` is within ``cfg.pole_threshold`` of
    a candidate hyperplane.  When the split into head and tails lands on a
    pole of an individual piece, the value is taken from symmetric means of
    nearby evaluations at raised precision.
    """
    cfg = cfg or EvalConfig()
    z = as_roots(z)
    s = [mpmath.mpmathify(x) if not isinstance(x, int) else x for x in s]
    if len(s) != len(z):
        raise ValueError("z and s must have equal length")
    if not z:
        return mpmath.mpf(1)
    _check_poles(z, s, cfg)
    try:
        value = _li_combined(z, s, cfg, cfg.working_digits)
    except PoleError:
        value = _li_symmetric(z, s, cfg)
    with mpmath.workdps(cfg.precision):
        return +value


# ---------------------------------------------------------------------------
# regularised values
# ---------------------------------------------------------------------------

def fit_grids(model: AsymptoticModel, cfg: EvalConfig, scale: int = 1) -> tuple[list[int], list[int]]:
    """Two disjoint sampling grids: geometric anchors, each followed by one full period."""
    L = model.period
    need = max(model.columns_per_root().values())
    T = math.ceil(cfg.oversample * need) + 3
    N0 = cfg.fit_N0 * scale

    def anchors(start: float) -> list[int]:
        out = []
        for t in range(T):
            A = int(round(start * cfg.fit_span ** (t / (T - 1))))
            if out and A < out[-1] + L:
                A = out[-1] + L
            out.append(A)
        return out

    grid_a = [A + i for A in anchors(N0) for i in range(L)]
    taken = set(grid_a)
    grid_b = []
    for A in anchors(1.5 * N0):
        while any(A + i in taken for i in range(L)):
            A += 1
        grid_b.extend(A + i for i in range(L))
    if max(grid_a[-1], grid_b[-1]) > cfg.N_max:
        raise FitError(f"sampling grid reaches N={max(grid_a[-1], grid_b[-1])} beyond N_max={cfg.N_max}")
    return grid_a, grid_b


def _m_schedule(cfg: EvalConfig) -> list[int]:
    out = [cfg.m_max]
    while out[-1] < cfg.m_max_limit:
        out.append(min(cfg.m_max_limit, out[-1] + 3))
    return out


def _extract(model_for: Callable[[int], AsymptoticModel],
             samples_for: Callable[[list[int]], dict],
             cfg: EvalConfig, target: float) -> tuple[Decomposition, dict]:
    """Escalate ``m_max`` until both grids give the same constant to ``10 * target``."""
    attempts = []
    best = None
    for m_max in _m_schedule(cfg):
        model = model_for(m_max)
        grid_a, grid_b = fit_grids(model, cfg)
        values = samples_for(grid_a + grid_b)
        holdout = 2 * model.period
        try:
            dec_a = decompose_sequence([(N, values[N]) for N in grid_a], model, holdout)
            dec_b = decompose_sequence([(N, values[N]) for N in grid_b], model, holdout)
        except (FitError, ZeroDivisionError) as exc:
            attempts.append({"m_max": m_max, "error": str(exc)})
            continue
        gap = abs(dec_a.constant - dec_b.constant)
        info = {
            "m_max": m_max,
            "terms": model.size,
            "grid_a": [grid_a[0], grid_a[-1], len(grid_a)],
            "grid_b": [grid_b[0], grid_b[-1], len(grid_b)],
            "two_grid_gap": float(gap),
            "holdout_residual": float(dec_a.residual),
        }
        attempts.append(info)
        if best is None or gap < best[1]:
            best = (dec_a, gap, info)
        if gap <= 10 * target and dec_a.residual <= max(target, 1e-30):
            break
    if best is None:
        raise FitError("no model could be fitted", {"attempts": attempts})
    dec, gap, info = best
    diagnostics = {"attempts": attempts, "chosen": info, "converged": gap <= 10 * target}
    if gap > 10 * cfg.tolerance:
        raise FitError(f"two-grid gap {float(gap):.3g} exceeds {10 * cfg.tolerance:.3g}", diagnostics)
    return dec, diagnostics


@dataclass
class RegularizedValue:
    """The constant term of the partial sums of ``sum z^n (log n)^k / n^a``."""

    z: tuple
    a: tuple
    k_vec: tuple
    value: object
    decomposition: Decomposition = field(repr=False)
    diagnostics: dict = field(default_factory=dict, repr=False)

    def coefficient(self, xi, e: int, j: int):
        return self.decomposition.coefficient(xi, e, j)

    def to_dict(self, digits: int = 30) -> dict:
        v = mpmath.mpmathify(self.value)
        return {
            "z": [w.text() for w in self.z],
            "a": list(self.a),
            "k": list(self.k_vec),
            "value": [mpmath.nstr(v.real, digits), mpmath.nstr(v.imag, digits)]
            if isinstance(v, mpmath.mpc) else mpmath.nstr(v, digits),
            "fit": self.decomposition.to_dict(),
            "diagnostics": self.diagnostics,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def regularized_value(z, a: Sequence[int], k_vec: Sequence[int] | None = None,
                      cfg: EvalConfig | None = None) -> RegularizedValue:
    """Regularised value of the partial sums at the integer point ``a``."""
    cfg = cfg or EvalConfig()
    z = as_roots(z)
    a = tuple(int(x) for x in a)
    k_vec = tuple(k_vec) if k_vec is not None else (0,) * len(z)
    if not (len(z) == len(a) == len(k_vec)):
        raise ValueError("z, a and k_vec must have equal length")
    if not z:
        dec = decompose_sequence([(N, 1) for N in range(1, 9)], AsymptoticModel.from_caps([], 0, 0, 0), 2)
        return RegularizedValue(z, a, k_vec, mpmath.mpf(1), dec, {})

    with mpmath.workdps(cfg.working_digits):
        dec, diag = _extract(
            lambda m: AsymptoticModel.from_shape(z, a, k_vec, m),
            lambda Ns: partial_sums(z, a, k_vec, Ns, cfg),
            cfg, cfg.fit_tolerance,
        )
        diag["precision"] = cfg.precision
    with mpmath.workdps(cfg.precision):
        value = +dec.constant
    return RegularizedValue(z, a, k_vec, value, dec, diag)


def regularized_taylor(z, a: Sequence[int], direction: Sequence, degree: int,
                       cfg: EvalConfig | None = None, scale=None) -> list:
    """Taylor coefficients ``c_m`` of ``t -> LiReg_(z;a)(a + t * direction)``.

    Each coefficient is the regularised value of the matching Taylor
    coefficient of the partial sums.  ``scale`` (the intended ``|t|``)
    relaxes the target accuracy of high-order coefficients accordingly.
    """
    cfg = cfg or EvalConfig()
    z = as_roots(z)
    a = tuple(int(x) for x in a)
    if not z:
        return [mpmath.mpf(1)] + [mpmath.mpf(0)] * degree
    scale = mpmath.mpf(scale if scale is not None else cfg.delta.numerator) / (
        1 if scale is not None else cfg.delta.denominator)
    out = []
    with mpmath.workdps(cfg.working_digits):
        for m in range(degree + 1):
            target = min(1.0, cfg.fit_tolerance / float(scale) ** m)
            dec, _ = _extract(
                lambda mm: AsymptoticModel.from_shape(z, a, None, mm, log_degree=m),
                lambda Ns: {N: v[m] for N, v in partial_sum_taylor(z, a, direction, m, Ns, cfg).items()},
                cfg.replace(tolerance=max(cfg.tolerance, target)), target,
            )
            out.append(dec.constant)
    return out
