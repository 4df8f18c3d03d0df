"""Partial sums and star tails by prefix recursion.

A nested sum over ``N > n_1 > ... > n_r > 0`` is accumulated in one pass
over ``n``: ``acc[j]`` holds the running sum of levels ``j..r``, and every
level is updated from the outermost inwards so that each sees the inner
value from the previous step.  Cost is ``O(N * r)`` per Taylor coefficient
squared.  Floating work is done in gmpy2 and converted to mpmath at the
end.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

import gmpy2
import mpmath

from ..cyclo import CycloNumber, RootOfUnity, parse_root
from ..asymptotics import tail_expansion
from .config import EvalConfig

__all__ = [
    "as_roots",
    "partial_sum",
    "partial_sums",
    "partial_sum_exact",
    "partial_sum_taylor",
    "window_sums",
    "star_tail",
    "star_tail_infinite",
    "TailValue",
]


def as_roots(z: Iterable) -> tuple[RootOfUnity, ...]:
    """Accept roots, turn fractions, or strings such as ``"-1"`` and ``"1/3"``."""
    out = []
    for w in z:
        if isinstance(w, RootOfUnity):
            out.append(w)
        elif isinstance(w, str):
            out.append(parse_root(w))
        elif isinstance(w, int) and w in (1, -1):
            out.append(RootOfUnity(Fraction(0) if w == 1 else Fraction(1, 2)))
        else:
            out.append(RootOfUnity(Fraction(w)))
    return tuple(out)


def _bits(digits: int) -> int:
    return int(digits * 3.33) + 16


def _to_gmp(x, real: bool):
    if isinstance(x, (int, Fraction)):
        return gmpy2.mpfr(gmpy2.mpq(x.numerator, x.denominator)) if isinstance(x, Fraction) else gmpy2.mpfr(x)
    x = mpmath.mpmathify(x)
    if isinstance(x, mpmath.mpc):
        if real:
            return gmpy2.mpfr(mpmath.nstr(x.real, mpmath.mp.dps + 10, strip_zeros=False))
        return gmpy2.mpc(_to_gmp(x.real, True), _to_gmp(x.imag, True))
    sign, man, exp, _ = x._mpf_
    if not man:
        return gmpy2.mpfr(0)
    v = gmpy2.mpfr(man) * gmpy2.mpfr(2) ** exp
    return -v if sign else v


def _to_mp(x):
    if isinstance(x, gmpy2.mpc(0).__class__):
        return mpmath.mpc(_to_mp(x.real), _to_mp(x.imag))
    if x == 0:
        return mpmath.mpf(0)
    m, e = x.as_mantissa_exp()
    return mpmath.ldexp(mpmath.mpf(int(m)), int(e))


def _is_integral(x) -> bool:
    if isinstance(x, int):
        return True
    if isinstance(x, Fraction):
        return x.denominator == 1
    x = mpmath.mpmathify(x)
    return mpmath.isint(x)


def _is_real(x) -> bool:
    return isinstance(x, (int, Fraction, float)) or not isinstance(mpmath.mpmathify(x), mpmath.mpc) \
        or mpmath.mpmathify(x).imag == 0


class _Weights:
    """Per-level weights ``z_j^n n^-s_j (log n)^k_j exp(-eps d_j log n)`` as eps-polynomials."""

    def __init__(self, z, s, k_vec, direction, degree):
        self.r = len(z)
        self.real = all(w.is_real() for w in z) and all(_is_real(x) for x in s) \
            and all(_is_real(x) for x in (direction or ()))
        real = self.real
        self.degree = degree
        self.k = list(k_vec)
        self.orders = [w.order for w in z]
        self.tables = []
        with mpmath.workprec(gmpy2.get_context().precision + 10):
            for w in z:
                if real:
                    row = [gmpy2.mpfr(1 if w.is_one() else (-1) ** p) for p in range(w.order)]
                else:
                    row = [_to_gmp((w ** p).to_complex(), False) for p in range(w.order)]
                self.tables.append(row)
        self.int_s = [int(mpmath.mpmathify(x).real) if _is_integral(x) else None for x in s]
        self.s = [_to_gmp(x, real) for x in s]
        self.dirs = [-_to_gmp(d, real) for d in direction] if direction else None
        self.needs_log = any(self.k) or degree > 0 or any(v is None for v in self.int_s)
        self.zero = gmpy2.mpfr(0) if real else gmpy2.mpc(0)
        self.one = gmpy2.mpfr(1) if real else gmpy2.mpc(1)
        self.inv_fact = [gmpy2.mpfr(1) / factorial(m) for m in range(degree + 1)]

    def at(self, n: int) -> list[list]:
        ln = gmpy2.log(gmpy2.mpfr(n)) if self.needs_log else None
        out = []
        for j in range(self.r):
            if self.int_s[j] is not None:
                base = gmpy2.mpfr(n) ** (-self.int_s[j])
            else:
                base = gmpy2.exp(-self.s[j] * ln)
            if self.k[j]:
                base = base * ln ** self.k[j]
            base = base * self.tables[j][n % self.orders[j]]
            if self.degree:
                step = self.dirs[j] * ln
                poly = [base]
                for m in range(1, self.degree + 1):
                    poly.append(poly[-1] * step)
                out.append([poly[m] * self.inv_fact[m] for m in range(self.degree + 1)])
            else:
                out.append([base])
        return out


def _mul_add(acc: list, w: list, inner: list) -> None:
    D = len(acc)
    if D == 1:
        acc[0] += w[0] * inner[0]
        return
    for m in range(D):
        t = acc[m]
        for p in range(m + 1):
            t += w[p] * inner[m - p]
        acc[m] = t


def _nested_pass(z, s, k_vec, Ns, digits, direction=None, degree=0, all_levels=False):
    """Prefix recursion for ``sum_{N>n_1>...>n_r>0}``; returns ``{N: eps-coefficients}``.

    With ``all_levels`` each record is the list over levels ``j`` of the
    sum of the suffix starting at ``j``.
    """
    r = len(z)
    Ns = sorted(set(int(N) for N in Ns))
    if Ns and Ns[0] < 1:
        raise ValueError("N must be at least 1")
    with gmpy2.context(gmpy2.get_context(), precision=_bits(digits)):
        W = _Weights(z, s, k_vec, direction, degree)
        D = degree + 1
        acc = [[W.zero] * D for _ in range(r)] + [[W.one] + [W.zero] * (D - 1)]
        want = set(Ns)
        out = {}

        def record(N):
            rows = acc[:r] if all_levels else acc[:1]
            out[N] = [[_to_mp(x) for x in row] for row in rows]

        if 1 in want:
            record(1)
        for n in range(1, Ns[-1] if Ns else 1):
            weights = W.at(n)
            for j in range(r):
                _mul_add(acc[j], weights[j], acc[j + 1])
            if n + 1 in want:
                record(n + 1)
    return out


def _depth_zero(Ns):
    return {N: [[mpmath.mpf(1)]] for N in Ns}


def partial_sums(z, s: Sequence, k_vec: Sequence[int] | None, Ns: Iterable[int],
                 cfg: EvalConfig | None = None) -> dict[int, object]:
    """``{N: sum_{N>n_1>...>n_r>0} prod z_j^n_j (log n_j)^k_j / n_j^s_j}`` for every requested ``N``."""
    cfg = cfg or EvalConfig()
    z = as_roots(z)
    s = list(s)
    k_vec = list(k_vec) if k_vec is not None else [0] * len(z)
    if not (len(z) == len(s) == len(k_vec)):
        raise ValueError("z, s and k_vec must have equal length")
    Ns = list(Ns)
    if not z:
        return {N: mpmath.mpf(1) for N in Ns}
    with mpmath.workdps(cfg.working_digits):
        raw = _nested_pass(z, s, k_vec, Ns, cfg.working_digits)
    return {N: +v[0][0] for N, v in raw.items()}


def partial_sum(z, s: Sequence, k_vec: Sequence[int] | None, N: int, cfg: EvalConfig | None = None):
    """Truncated multiple polylogarithm (with log powers) over ``N > n_1 > ... > n_r > 0``."""
    return partial_sums(z, s, k_vec, [N], cfg)[N]


def partial_sum_taylor(z, a: Sequence, direction: Sequence, degree: int, Ns: Iterable[int],
                       cfg: EvalConfig | None = None, k_vec=None) -> dict[int, list]:
    """Taylor coefficients in ``eps`` of the partial sums at ``s = a + eps * direction``."""
    cfg = cfg or EvalConfig()
    z = as_roots(z)
    Ns = list(Ns)
    if not z:
        return {N: [mpmath.mpf(1)] + [mpmath.mpf(0)] * degree for N in Ns}
    k_vec = list(k_vec) if k_vec is not None else [0] * len(z)
    with mpmath.workdps(cfg.working_digits):
        raw = _nested_pass(z, list(a), k_vec, Ns, cfg.working_digits, list(direction), degree)
    return {N: v[0] for N, v in raw.items()}


def partial_sum_exact(z, s: Sequence[int], N: int):
    """Exact partial sum for integer ``s``; a Fraction for real roots, else a CycloNumber."""
    z = as_roots(z)
    if not all(_is_integral(x) for x in s):
        raise ValueError("the exact path needs integer exponents")
    s = [int(x) for x in s]
    if len(s) != len(z):
        raise ValueError("z and s must have equal length")
    if N < 1:
        raise ValueError("N must be at least 1")
    if all(w.is_real() for w in z):
        one, zero = Fraction(1), Fraction(0)
        tables = [[Fraction(1 if w.is_one() else (-1) ** p) for p in range(w.order)] for w in z]
    else:
        one, zero = CycloNumber.rational(1), CycloNumber.rational(0)
        tables = [[(w ** p).to_cyclo() for p in range(w.order)] for w in z]
    r = len(z)
    acc = [zero] * r + [one]
    for n in range(1, N):
        for j in range(r):
            acc[j] = acc[j] + tables[j][n % z[j].order] * Fraction(n) ** (-s[j]) * acc[j + 1]
    return acc[0]


def window_sums(z, s: Sequence, N: int, M: int, digits: int) -> list:
    """Star sums ``sum_{M > n_j >= ... >= n_r >= N}`` for every level ``j`` (weak inequalities)."""
    z = as_roots(z)
    r = len(z)
    if M <= N:
        return [mpmath.mpf(0)] * r
    with gmpy2.context(gmpy2.get_context(), precision=_bits(digits)):
        W = _Weights(z, list(s), [0] * r, None, 0)
        acc = [W.zero] * r + [W.one]
        for n in range(N, M):
            weights = W.at(n)
            for j in range(r - 1, -1, -1):
                acc[j] += weights[j][0] * acc[j + 1]
        with mpmath.workdps(digits):
            return [_to_mp(x) for x in acc[:r]]


@dataclass(frozen=True)
class TailValue:
    """A truncated star tail with a heuristic bound on the omitted part."""

    value: object
    bound: object

    def __complex__(self) -> complex:
        return complex(self.value)


def _tail_bound(s, N: int, M: int):
    sig = [mpmath.re(mpmath.mpmathify(x)) for x in s]
    excess = sig[0] - sum(max(0, 1 - x) for x in sig[1:])
    if excess <= 1:
        return mpmath.inf
    const = mpmath.mpf(1)
    for x in sig[1:]:
        const *= 1 if x == 1 else 1 + 1 / abs(1 - x) + mpmath.mpf(N) ** (-x)
    logs = (1 + mpmath.log(M)) ** (len(sig) - 1)
    M = mpmath.mpf(M)
    return const * logs * (M ** (1 - excess) / (excess - 1) + M ** -excess)


def star_tail(z, s: Sequence, N: int, M_cut: int, cfg: EvalConfig | None = None) -> TailValue:
    """Direct sum over ``M_cut > n_1 >= ... >= n_r >= N`` with a bound on the rest of the tail."""
    cfg = cfg or EvalConfig()
    z = as_roots(z)
    if not z:
        return TailValue(mpmath.mpf(1), mpmath.mpf(0))
    with mpmath.workdps(cfg.working_digits):
        value = window_sums(z, s, N, M_cut, cfg.working_digits)[0] if M_cut > N else mpmath.mpf(0)
        bound = _tail_bound(s, N, max(M_cut, N))
    return TailValue(value, bound)


def star_tail_infinite(z, s: Sequence, N: int, cfg: EvalConfig | None = None):
    """``Li*_z(s)_{>=N}`` for any ``s`` off the poles of the expansion.

    Splits by how many indices reach ``M = max(N, cfg.tail_N)``: the part
    below ``M`` is summed directly, the part above uses the tail expansion.
    """
    cfg = cfg or EvalConfig()
    z = as_roots(z)
    s = list(s)
    r = len(z)
    if r == 0:
        return mpmath.mpf(1)
    M = max(N, cfg.tail_N)
    with mpmath.workdps(cfg.working_digits):
        windows = window_sums(z, s, N, M, cfg.working_digits) + [mpmath.mpf(1)]
        total = windows[0] if M > N else mpmath.mpf(0)
        for j in range(1, r + 1):
            head = tail_expansion(z[:j], s[:j], M, cfg.tail_terms)
            total += head * windows[j]
        return +total
