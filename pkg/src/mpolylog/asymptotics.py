"""Asymptotic models of partial sums and star tails.

Sequences are expanded over basis terms ``xi^N * N^e * (log N)^j`` where
``xi`` ranges over products of the roots in ``z``.  Terms with ``e >= 0``
are the non-decaying part; ``(1, 0, 0)`` is the constant slot whose
coefficient is the regularised value.

Three tools live here:

* :class:`AsymptoticModel` predicts which basis terms can occur for a
  given nested sum, by propagating term shapes through each summation.
* :func:`h_star` / :func:`truncated_tail` give the exact coefficients of
  the non-oscillating part of a star tail, and :func:`tail_expansion`
  evaluates the full tail (oscillating part included) numerically.
* :func:`decompose_sequence` fits sampled values against a model.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Mapping, Sequence

import flint
import mpmath

from .cyclo import RootOfUnity
from .domains import as_profile
from .ratfield import RatFunc, compositions, eulerian_weight, linear_form
from .specialseq import PoleError, pochhammer, star_bernoulli

__all__ = [
    "BasisTerm",
    "AsymptoticModel",
    "Decomposition",
    "h_star",
    "truncated_tail",
    "tail_expansion",
    "decompose_sequence",
    "x_exponent",
    "FitError",
]

ONE = RootOfUnity(0)


class FitError(ArithmeticError):
    """A least-squares decomposition failed its residual or two-grid checks."""

    def __init__(self, message: str, diagnostics: Mapping | None = None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


@dataclass(frozen=True, order=True)
class BasisTerm:
    """The sequence ``xi^N N^e (log N)^j``."""

    xi: RootOfUnity
    e: int
    j: int

    @property
    def is_constant(self) -> bool:
        return self.xi.is_one() and self.e == 0 and self.j == 0

    @property
    def is_decaying(self) -> bool:
        return self.e < 0

    def key(self) -> str:
        return f"({self.xi.text()},{self.e},{self.j})"

    def value(self, N: int, log_N=None):
        if log_N is None:
            log_N = mpmath.log(N)
        v = mpmath.mpf(N) ** self.e * log_N ** self.j
        if self.xi.is_one():
            return v
        if self.xi == -1:
            return -v if N % 2 else v
        return (self.xi ** (N % self.xi.order)).to_complex() * v


def _shape(z: Sequence[RootOfUnity], a: Sequence[int], k: Sequence[int], floor: int) -> dict:
    """Map ``(xi, e) -> max log power`` for ``sum_{N>n_1>...>n_r>0}`` of the given weights."""
    state = {(ONE, 0): 0}
    for zj, aj, kj in zip(reversed(z), reversed(a), reversed(k)):
        multiplied = {}
        for (xi, e), j in state.items():
            key = (xi * zj, e - aj)
            multiplied[key] = max(multiplied.get(key, -1), j + kj)
        summed = {(ONE, 0): 0}

        def put(key, j):
            if key[1] >= floor:
                summed[key] = max(summed.get(key, -1), j)

        for (xi, e), j in multiplied.items():
            if not xi.is_one():
                for e2 in range(floor, e + 1):
                    put((xi, e2), j)
            elif e == -1:
                put((ONE, 0), j + 1)
                for e2 in range(floor, 0):
                    put((ONE, e2), j)
            else:
                for e2 in range(floor, e + 2):
                    put((ONE, e2), j)
        state = summed
    return state


@dataclass(frozen=True)
class AsymptoticModel:
    """A finite family of basis terms; the fit target for sampled sequences."""

    terms: tuple[BasisTerm, ...]

    def __post_init__(self):
        if BasisTerm(ONE, 0, 0) not in self.terms:
            raise ValueError("a model must contain the constant slot")

    @classmethod
    def from_shape(cls, z: Sequence[RootOfUnity], a: Sequence[int],
                   k_vec: Sequence[int] | None = None, m_max: int = 3,
                   log_degree: int = 0) -> "AsymptoticModel":
        """Terms that can occur in ``sum z^n (log n)^k / n^a`` up to ``N^-m_max``.

        ``log_degree`` adds the union over all ways of distributing that many
        extra log powers across levels (the shape of a degree-``log_degree``
        Taylor coefficient in ``s``).
        """
        z = tuple(z)
        a = tuple(int(x) for x in a)
        k_vec = tuple(k_vec) if k_vec is not None else (0,) * len(z)
        if not (len(z) == len(a) == len(k_vec)):
            raise ValueError("z, a and k_vec must have equal length")
        floor = -(m_max + sum(max(0, -x) for x in a) + len(z) + 2)
        merged: dict = {}
        for extra in compositions(log_degree, len(z)) if z else [()]:
            k = tuple(x + y for x, y in zip(k_vec, extra))
            for key, j in _shape(z, a, k, floor).items():
                merged[key] = max(merged.get(key, -1), j)
        terms = sorted(
            BasisTerm(xi, e, j)
            for (xi, e), jmax in merged.items() if e >= -m_max
            for j in range(jmax + 1)
        )
        return cls(tuple(terms))

    @classmethod
    def from_caps(cls, xis: Iterable[RootOfUnity], i_max: int, j_max: int,
                  m_max: int) -> "AsymptoticModel":
        """Rectangular model: every ``xi``, ``-m_max <= e <= i_max``, ``j <= j_max``."""
        terms = sorted({BasisTerm(xi, e, j) for xi in set(xis) | {ONE}
                        for e in range(-m_max, i_max + 1) for j in range(j_max + 1)})
        return cls(tuple(terms))

    @property
    def size(self) -> int:
        return len(self.terms)

    @property
    def i_max(self) -> int:
        return max(t.e for t in self.terms)

    @property
    def j_max(self) -> int:
        return max(t.j for t in self.terms)

    @property
    def m_max(self) -> int:
        return -min(t.e for t in self.terms)

    @property
    def roots(self) -> list[RootOfUnity]:
        return sorted({t.xi for t in self.terms})

    @property
    def period(self) -> int:
        return math.lcm(*(xi.order for xi in self.roots))

    def is_real(self) -> bool:
        return all(xi.is_real() for xi in self.roots)

    def columns_per_root(self) -> dict[RootOfUnity, int]:
        out: dict[RootOfUnity, int] = {}
        for t in self.terms:
            out[t.xi] = out.get(t.xi, 0) + 1
        return out

    def row(self, N: int) -> list:
        log_N = mpmath.log(N)
        return [t.value(N, log_N) for t in self.terms]

    def to_dict(self) -> dict:
        return {"terms": [t.key() for t in self.terms], "i_max": self.i_max,
                "j_max": self.j_max, "m_max": self.m_max}


# ---------------------------------------------------------------------------
# Exact coefficients of the non-oscillating part of a star tail
# ---------------------------------------------------------------------------

def x_exponent(profile, a: Sequence[int], k_vec: Sequence[int]) -> int:
    """Power of ``1/N`` attached to ``h*_(l,k)``: ``|a| + |k| - Q_[1,r]``."""
    p = as_profile(profile)
    return sum(a) + sum(k_vec) - p.Q_interval(1, p.r)


def _chain_terms(p, k_vec):
    """Scalar weight and Pochhammer (base offset, length) pairs of ``h*`` for ``k_vec``."""
    weight = Fraction(1)
    chain = []
    shift = 0  # sum_{t<j} k_t - Q_[1,j-1]
    for j in range(1, p.r + 1):
        kj = k_vec[j - 1]
        unit = p.q(1, j)
        if unit:
            weight = weight * star_bernoulli(kj)
        else:
            weight = eulerian_weight(p.product(1, j).conjugate(), kj) * weight
        weight = weight / factorial(kj)
        if weight == 0:
            return 0, []
        chain.append((j, shift, kj - unit))
        shift += kj - unit
    return weight, chain


def h_star(l: int, k_vec: Sequence[int], profile, a: Sequence[int]) -> RatFunc:
    """Coefficient of ``(log N)^l N^-(|a|+|k|-Q)`` in the star tail of ``profile`` near ``a``.

    The tail is ``sum_{n_1 >= ... >= n_r >= N}`` with ``z_1`` on the outermost
    index, exactly as listed in ``profile``.
    """
    p = as_profile(profile)
    k_vec = tuple(k_vec)
    if l < 0 or len(k_vec) != p.r or min(k_vec, default=0) < 0:
        raise ValueError("need l >= 0 and a non-negative k_vec of length r")
    if p.r == 0 or not p.q(1, p.r):
        return RatFunc.const(0)
    weight, chain = _chain_terms(p, k_vec)
    if weight == 0:
        return RatFunc.const(0)
    out = RatFunc.const(weight * Fraction((-1) ** l, factorial(l)))
    for j, shift, length in chain:
        out = out * pochhammer(linear_form(1, j) + shift, length)
    total = linear_form(1, p.r) - sum(a)
    for _ in range(l):
        out = out * total
    return out


@lru_cache(maxsize=4096)
def _weight_numeric(xi: RootOfUnity, k: int, prec: int):
    """Numeric coefficient of the k-th term of a depth-1 tail with root ``xi``."""
    with mpmath.workprec(prec):
        if xi.is_one():
            return mpmath.mpf(star_bernoulli(k).numerator) / star_bernoulli(k).denominator / factorial(k)
        return eulerian_weight(xi.conjugate(), k).to_complex() / factorial(k)


def truncated_tail(profile, a: Sequence[int], s: Sequence, N: int, caps: Mapping[str, int]):
    """Sum of ``h*_(l,k)(s) (log N)^l N^-(|a|+|k|-Q)`` over ``|k| <= caps['k']``, ``l <= caps['l']``.

    Approximates the star tail ``Li*_{profile}(s)_{>=N}`` with the
    oscillating contributions left out (they carry no non-decaying part).
    """
    p = as_profile(profile)
    k_cap = int(caps.get("k", 8))
    l_cap = int(caps.get("l", 0 if all(mpmath.mpmathify(x) == y for x, y in zip(s, a)) else 24))
    if k_cap < 0 or l_cap < 0:
        raise ValueError("caps leave no terms in the expansion")
    if p.r == 0:
        return mpmath.mpf(1)
    if not p.q(1, p.r):
        return mpmath.mpf(0)
    s = [mpmath.mpmathify(x) for x in s]
    prefix = [sum(s[:j], mpmath.mpf(0)) for j in range(1, p.r + 1)]
    log_N = mpmath.log(N)
    diff = prefix[-1] - sum(a)
    l_factor = sum(((-diff * log_N) ** l / factorial(l) for l in range(l_cap + 1)), mpmath.mpf(0))
    Q = p.Q_interval(1, p.r)
    total = mpmath.mpf(0)
    for K in range(k_cap + 1):
        layer = mpmath.mpf(0)
        for k_vec in compositions(K, p.r):
            weight, chain = _chain_terms(p, k_vec)
            if weight == 0:
                continue
            term = weight.to_complex() if hasattr(weight, "to_complex") else mpmath.mpf(weight.numerator) / weight.denominator
            for j, shift, length in chain:
                term *= pochhammer(prefix[j - 1] + shift, length)
            layer += term
        total += layer * mpmath.mpf(N) ** (-(sum(a) + K - Q))
    return total * l_factor


# ---------------------------------------------------------------------------
# Full numeric tail expansion
# ---------------------------------------------------------------------------

def tail_expansion(z: Sequence[RootOfUnity], s: Sequence, M: int, terms: int = 40):
    """``Li*_z(s)_{>=M} = sum_{n_1 >= ... >= n_r >= M} prod z_j^{n_j} n_j^{-s_j}`` for large ``M``.

    Each outer sum is replaced by its Euler-Maclaurin type expansion at the
    next index, so the oscillating parts are kept.  Accuracy is roughly
    ``(terms * order / (2 pi M))^terms``; ``s`` may lie anywhere as long as no
    expansion term hits a pole (``PoleError`` otherwise).
    """
    z = tuple(z)
    r = len(z)
    if r == 0:
        return mpmath.mpf(1)
    s = [mpmath.mpmathify(x) for x in s]
    prec = mpmath.mp.prec
    roots = [z[0]]
    for w in z[1:]:
        roots.append(roots[-1] * w)
    sigma = [sum(s[:j + 1], mpmath.mpf(0)) for j in range(r)]
    logM = mpmath.log(M)
    memo: dict[tuple[int, int], object] = {}
    cap = terms

    inv_M = 1 / mpmath.mpf(M)

    def level(j: int, shift: int):
        key = (j, shift)
        if key in memo:
            return memo[key]
        w = roots[j]
        x = sigma[j] + shift
        unit = w.is_one()
        last = j == r - 1
        # running values of (x)_length and M^-(x+length) as k grows
        if unit:
            poch = pochhammer(x, -1)
            power = mpmath.exp(-(x - 1) * logM) if last else None
        else:
            poch = mpmath.mpf(1)
            power = mpmath.exp(-x * logM) * (w ** (M % w.order)).to_complex() if last else None
        acc = mpmath.mpf(0)
        for k in range(0, cap - max(shift, 0) + 1):
            length = k - 1 if unit else k
            if k > 0:
                poch = poch * (x + length - 1) if length > 0 or not unit else mpmath.mpf(1)
                if last:
                    power = power * inv_M
            c = _weight_numeric(w, k, prec)
            if c == 0:
                continue
            inner = power if last else level(j + 1, shift + length)
            acc += c * poch * inner
        memo[key] = acc
        return acc

    value = level(0, 0)
    if all(w.is_real() for w in roots) and all(not isinstance(x, mpmath.mpc) for x in s):
        return mpmath.re(value)
    return value


# ---------------------------------------------------------------------------
# Least-squares decomposition
# ---------------------------------------------------------------------------

_flint_lock = threading.Lock()


@dataclass
class Decomposition:
    """Fitted coefficients of a sampled sequence over an :class:`AsymptoticModel`."""

    model: AsymptoticModel
    coefficients: dict[BasisTerm, object]
    residual: object          # max relative error on the held-out samples
    fit_residual: object      # max relative error on the fitted samples
    samples_used: int
    holdout: list[int] = field(default_factory=list)

    @property
    def constant(self):
        return self.coefficients[BasisTerm(ONE, 0, 0)]

    def coefficient(self, xi, e: int, j: int):
        xi = xi if isinstance(xi, RootOfUnity) else RootOfUnity(Fraction(xi))
        return self.coefficients.get(BasisTerm(xi, e, j), mpmath.mpf(0))

    def evaluate(self, N: int):
        log_N = mpmath.log(N)
        return sum((c * t.value(N, log_N) for t, c in self.coefficients.items()), mpmath.mpf(0))

    def to_dict(self, digits: int = 20) -> dict:
        def enc(v):
            v = mpmath.mpmathify(v)
            if isinstance(v, mpmath.mpc):
                return [mpmath.nstr(v.real, digits), mpmath.nstr(v.imag, digits)]
            return mpmath.nstr(v, digits)

        return {
            "constant": enc(self.constant),
            "coefficients": {t.key(): enc(c) for t, c in self.coefficients.items()},
            "residual": mpmath.nstr(self.residual, 5),
            "fit_residual": mpmath.nstr(self.fit_residual, 5),
            "samples": self.samples_used,
            "holdout": self.holdout,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _solve_normal(rows: list[list], rhs: list, real: bool, prec: int) -> list:
    """Least squares via the normal equations solved in flint at ``prec`` bits."""
    n = len(rows[0])
    with _flint_lock:
        old = flint.ctx.prec
        flint.ctx.prec = prec
        try:
            if real:
                A = flint.arb_mat([[flint.arb(x) for x in row] for row in rows])
                b = flint.arb_mat([[flint.arb(v)] for v in rhs])
                At = A.transpose()
            else:
                A = flint.acb_mat([[flint.acb(x) for x in row] for row in rows])
                b = flint.acb_mat([[flint.acb(v)] for v in rhs])
                At = A.conjugate().transpose()
            x = (At * A).solve(At * b, algorithm="approx")
            out = []
            for i in range(n):
                v = x[i, 0]
                if real:
                    out.append(mpmath.mpf(v.mid()))
                else:
                    out.append(mpmath.mpc(mpmath.mpf(v.real.mid()), mpmath.mpf(v.imag.mid())))
            return out
        finally:
            flint.ctx.prec = old


def decompose_sequence(samples: Sequence[tuple[int, object]], model: AsymptoticModel,
                       holdout: int | None = None, tolerance=None,
                       margin: int = 4) -> Decomposition:
    """Fit ``samples = [(N, value), ...]`` against ``model`` by least squares.

    The ``holdout`` largest-``N`` samples (default: one period of the
    oscillating roots, at least two) are left out of the fit and used to
    measure the residual.  Residuals are relative to ``max(1, |value|)``.
    Raises :class:`FitError` when there are too few samples or when the
    held-out residual exceeds ``tolerance``.
    """
    samples = sorted((int(N), mpmath.mpmathify(v)) for N, v in samples)
    if holdout is None:
        holdout = max(2, model.period)
    n_fit = len(samples) - holdout
    if n_fit < model.size + margin:
        raise FitError(f"{len(samples)} samples cannot support {model.size} terms",
                       {"samples": len(samples), "terms": model.size, "holdout": holdout})
    fit, held = samples[:n_fit], samples[n_fit:]
    real = model.is_real() and all(not isinstance(v, mpmath.mpc) or v.imag == 0 for _, v in samples)
    if real:
        fit = [(N, mpmath.re(v)) for N, v in fit]
        held = [(N, mpmath.re(v)) for N, v in held]
    rows = [model.row(N) for N, _ in fit]
    scale = [max(abs(row[c]) for row in rows) or mpmath.mpf(1) for c in range(model.size)]
    scaled = [[row[c] / scale[c] for c in range(model.size)] for row in rows]
    if real:
        scaled = [[mpmath.re(x) for x in row] for row in scaled]
    solution = _solve_normal(scaled, [v for _, v in fit], real, 2 * mpmath.mp.prec + 64)
    coeffs = {t: solution[c] / scale[c] for c, t in enumerate(model.terms)}

    def worst(points):
        out = mpmath.mpf(0)
        for N, v in points:
            row = model.row(N)
            approx = sum((coeffs[t] * row[c] for c, t in enumerate(model.terms)), mpmath.mpf(0))
            out = max(out, abs(approx - v) / max(1, abs(v)))
        return out

    dec = Decomposition(model, coeffs, worst(held), worst(fit), n_fit, [N for N, _ in held])
    if tolerance is not None and dec.residual > tolerance:
        raise FitError(f"held-out residual {mpmath.nstr(dec.residual, 3)} exceeds {tolerance}",
                       dec.to_dict())
    return dec
