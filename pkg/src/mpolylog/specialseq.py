"""Star Bernoulli numbers, Eulerian polynomials and the extended Pochhammer symbol."""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb
from typing import Sequence

import mpmath

__all__ = [
    "IntPoly",
    "PoleError",
    "star_bernoulli",
    "eulerian_poly",
    "eulerian_star_value",
    "pochhammer",
    "MEMO_BOUND",
]

MEMO_BOUND = 64

_lock = threading.Lock()
_bernoulli: list[Fraction] = [Fraction(1)]
_eulerian: list["IntPoly"] = []


class PoleError(ArithmeticError):
    """Raised when a numeric evaluation lands on a pole."""


class IntPoly:
    """Univariate polynomial with rational coefficients, low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t):
        acc = 0 * t if not isinstance(t, (int, Fraction)) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def derivative(self) -> "IntPoly":
        return IntPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def __add__(self, other: "IntPoly") -> "IntPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return IntPoly([x + y for x, y in zip(a, b)])

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return IntPoly(out)

    def __eq__(self, other) -> bool:
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == IntPoly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPoly({[str(c) for c in self.coeffs]})"


def star_bernoulli(k: int) -> Fraction:
    """``B*_k`` from ``x/(e^x - 1) = sum (-1)^k B*_k x^k / k!``, i.e. ``B*_1 = +1/2``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k < len(_bernoulli):
        return _bernoulli[k]
    with _lock:
        # classical recurrence sum_{j<=n} C(n+1, j) B_j = 0, then flip odd signs
        classical = [(-1) ** j * b for j, b in enumerate(_bernoulli)]
        for n in range(len(classical), k + 1):
            total = sum((comb(n + 1, j) * classical[j] for j in range(n)), Fraction(0))
            classical.append(-total / (n + 1))
        _bernoulli[:] = [(-1) ** j * b for j, b in enumerate(classical)]
    return _bernoulli[k]


def eulerian_poly(n: int) -> IntPoly:
    """Eulerian polynomial ``A_n(t)`` with ``(1-t)/(e^{(t-1)y} - t) = sum A_n(t) y^n/n!``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    with _lock:
        if not _eulerian:
            _eulerian.append(IntPoly([1]))
        while len(_eulerian) <= n:
            m = len(_eulerian)
            prev = _eulerian[-1]
            # A_m = (1 + (m-1) t) A_{m-1} + t (1 - t) A'_{m-1}
            _eulerian.append(
                IntPoly([1, m - 1]) * prev + IntPoly([0, 1, -1]) * prev.derivative()
            )
        return _eulerian[n]


def eulerian_star_value(n: int, c):
    """``A*_n(c) = (-1)^n A_n(c)`` evaluated at any ring element ``c``."""
    v = eulerian_poly(n)(c)
    return v if n % 2 == 0 else -v


def pochhammer(base, length: int):
    """Rising factorial ``(base)_length``; length ``-1`` means ``1/(base - 1)``.

    ``base`` may be an int, Fraction, mpmath number or any ring element
    supporting ``+``, ``*`` and division (e.g. a rational function).
    """
    if length < -1:
        raise ValueError("length must be at least -1")
    if length == -1:
        denom = base - 1
        if isinstance(denom, (int, Fraction)) or isinstance(denom, (mpmath.mpf, mpmath.mpc)):
            if denom == 0:
                raise PoleError("(1)_{-1} is a pole")
        if isinstance(denom, (int, Fraction)):
            return Fraction(1) / denom
        return 1 / denom
    acc = None
    for j in range(length):
        term = base + j
        acc = term if acc is None else acc * term
    if acc is None:
        return 1
    return acc
