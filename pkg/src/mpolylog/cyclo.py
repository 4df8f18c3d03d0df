"""Exact arithmetic for roots of unity and cyclotomic rationals.

A :class:`RootOfUnity` is stored as a reduced turn ``p/q`` (the number
``exp(2*pi*i*p/q)``), which makes products and ``is_one`` tests O(1).
A :class:`CycloNumber` is an element of ``Q(zeta_m)`` stored as a dense
coefficient tuple of length ``phi(m)`` in the power basis of ``zeta_m``.
Orders congruent to 2 mod 4 are folded onto ``m/2`` (the fields coincide),
so rational numbers always live in order 1.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import mpmath

Rational = Union[int, Fraction]

__all__ = [
    "RootOfUnity",
    "CycloNumber",
    "make_root",
    "interval_product",
    "distinct_products",
    "parse_root",
    "cyclotomic_polynomial",
    "euler_phi",
]


# ---------------------------------------------------------------------------
# integer / rational polynomial helpers (coefficient lists, low degree first)
# ---------------------------------------------------------------------------

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _pmul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _pdivmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    """Quotient and remainder of ``a / b`` over the rationals."""
    a = [Fraction(x) for x in a]
    _trim(a)
    b = _trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] -= c * y
        a.pop()
        _trim(a)
    return _trim(q), a


def _psub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


@lru_cache(maxsize=None)
def euler_phi(m: int) -> int:
    result, n, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of the m-th cyclotomic polynomial, low degree first."""
    if m < 1:
        raise ValueError("order must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num, rem = _pdivmod(num, cyclotomic_polynomial(d))
            assert not rem
    return tuple(int(c) for c in num)


def _canonical_order(m: int) -> int:
    if m % 4 == 2:
        return m // 2
    return m


@lru_cache(maxsize=None)
def _power_reduced(m: int, k: int) -> tuple[Fraction, ...]:
    """Coefficients of ``zeta_m**k`` reduced modulo the m-th cyclotomic polynomial."""
    phi = euler_phi(m)
    k %= m
    if k < phi:
        out = [Fraction(0)] * phi
        out[k] = Fraction(1)
        return tuple(out)
    mono = [0] * k + [1]
    _, rem = _pdivmod(mono, cyclotomic_polynomial(m))
    rem = rem + [Fraction(0)] * (phi - len(rem))
    return tuple(rem)


def _reduce(coeffs: Sequence, m: int) -> tuple[Fraction, ...]:
    phi = euler_phi(m)
    out = [Fraction(0)] * phi
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        if k < phi:
            out[k] += c
        else:
            for i, v in enumerate(_power_reduced(m, k)):
                if v:
                    out[i] += c * v
    return tuple(out)


# ---------------------------------------------------------------------------
# RootOfUnity
# ---------------------------------------------------------------------------

class RootOfUnity:
    """The root of unity ``exp(2*pi*i*turn)`` with ``turn`` a reduced fraction in [0, 1)."""

    __slots__ = ("turn",)

    def __init__(self, turn: Rational):
        t = Fraction(turn)
        t -= math.floor(t)
        object.__setattr__(self, "turn", t)

    def __setattr__(self, name, value):
        raise AttributeError("RootOfUnity is immutable")

    @property
    def order(self) -> int:
        return self.turn.denominator

    @property
    def p(self) -> int:
        return self.turn.numerator

    def is_one(self) -> bool:
        return self.turn == 0

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        return RootOfUnity(self.turn + other.turn)

    def __truediv__(self, other: "RootOfUnity") -> "RootOfUnity":
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        return RootOfUnity(self.turn - other.turn)

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity(self.turn * k)

    def conjugate(self) -> "RootOfUnity":
        return RootOfUnity(-self.turn)

    def __eq__(self, other) -> bool:
        if isinstance(other, RootOfUnity):
            return self.turn == other.turn
        if isinstance(other, (int, Fraction)):
            return (other == 1 and self.turn == 0) or (other == -1 and self.turn == Fraction(1, 2))
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("root", self.turn))

    def __lt__(self, other: "RootOfUnity") -> bool:
        return self.turn < other.turn

    def __repr__(self) -> str:
        return f"RootOfUnity({self.turn})"

    def __str__(self) -> str:
        return self.text()

    def text(self) -> str:
        """Text form ``zeta(q)^p``; the units 1 and -1 print as integers."""
        if self.turn == 0:
            return "1"
        if self.turn == Fraction(1, 2):
            return "-1"
        return f"zeta({self.order})^{self.p}"

    def to_cyclo(self) -> "CycloNumber":
        return CycloNumber.root(self.p, self.order)

    def to_complex(self) -> mpmath.mpc:
        if self.turn == 0:
            return mpmath.mpc(1)
        if self.turn == Fraction(1, 2):
            return mpmath.mpc(-1)
        if self.turn == Fraction(1, 4):
            return mpmath.mpc(0, 1)
        if self.turn == Fraction(3, 4):
            return mpmath.mpc(0, -1)
        return mpmath.expjpi(2 * mpmath.mpf(self.p) / self.order)

    def is_real(self) -> bool:
        return self.order <= 2


def make_root(p: int, q: int) -> RootOfUnity:
    """Canonical root ``exp(2*pi*i*p/q)``."""
    if q == 0:
        raise ValueError("root of unity needs a positive denominator")
    if q < 0:
        p, q = -p, -q
    return RootOfUnity(Fraction(p, q))


_ROOT_TEXT = re.compile(r"^\s*zeta\(\s*(\d+)\s*\)\s*(?:\^\s*(-?\d+))?\s*$")


def parse_root(text: str) -> RootOfUnity:
    """Parse ``1``, ``-1``, ``i``, ``-i``, a turn ``p/q``, or ``zeta(q)^p``."""
    t = text.strip()
    short = {"1": Fraction(0), "-1": Fraction(1, 2), "i": Fraction(1, 4), "-i": Fraction(3, 4)}
    if t in short:
        return RootOfUnity(short[t])
    m = _ROOT_TEXT.match(t)
    if m:
        q = int(m.group(1))
        p = int(m.group(2)) if m.group(2) is not None else 1
        return make_root(p, q)
    if "/" in t:
        num, den = t.split("/", 1)
        return make_root(int(num), int(den))
    if t == "0":
        return RootOfUnity(0)
    raise ValueError(f"cannot parse root of unity from {text!r}")


def interval_product(z: Sequence[RootOfUnity], j: int, i: int) -> RootOfUnity:
    """``z_j * ... * z_i`` with 1-based inclusive indices."""
    if not (1 <= j <= i <= len(z)):
        raise IndexError(f"interval [{j},{i}] outside 1..{len(z)}")
    return RootOfUnity(sum((z[k].turn for k in range(j - 1, i)), Fraction(0)))


def distinct_products(z: Iterable[RootOfUnity]) -> frozenset[RootOfUnity]:
    """Closure of ``{1, z_1, ..., z_r}`` under multiplication (a finite cyclic group)."""
    L = 1
    for w in z:
        L = math.lcm(L, w.order)
    return frozenset(RootOfUnity(Fraction(k, L)) for k in range(L))


def exponent_labels(z: Sequence[RootOfUnity]) -> dict[RootOfUnity, tuple[int, ...]]:
    """Map each product value to its lexicographically smallest exponent vector."""
    orders = [w.order for w in z]
    labels: dict[RootOfUnity, tuple[int, ...]] = {}

    def rec(prefix: tuple[int, ...]):
        if len(prefix) == len(z):
            val = RootOfUnity(sum((k * w.turn for k, w in zip(prefix, z)), Fraction(0)))
            labels.setdefault(val, prefix)
            return
        for k in range(orders[len(prefix)]):
            rec(prefix + (k,))

    rec(())
    return labels


# ---------------------------------------------------------------------------
# CycloNumber
# ---------------------------------------------------------------------------

class CycloNumber:
    """Element of the cyclotomic field ``Q(zeta_m)`` in the power basis of ``zeta_m``."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Sequence[Rational]):
        m = _canonical_order(order)
        if m != order:
            # zeta_order = -zeta_h^((h+1)/2) for h = order/2 odd
            h = m
            c = (h + 1) // 2
            lifted = [Fraction(0)] * (h * len(coeffs) + 1)
            for k, v in enumerate(coeffs):
                if v:
                    lifted[(c * k) % h] += v * (-1) ** k
            coeffs = _reduce(lifted, h)
        elif len(coeffs) != euler_phi(m):
            coeffs = _reduce(coeffs, m)
        object.__setattr__(self, "order", m)
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("CycloNumber is immutable")

    # constructors -------------------------------------------------------
    @classmethod
    def rational(cls, value: Rational) -> "CycloNumber":
        return cls(1, (Fraction(value),))

    @classmethod
    def root(cls, p: int, q: int) -> "CycloNumber":
        coeffs = [Fraction(0)] * (p % q + 1)
        coeffs[p % q] = Fraction(1)
        return cls(q, coeffs)

    @classmethod
    def coerce(cls, value) -> "CycloNumber":
        if isinstance(value, CycloNumber):
            return value
        if isinstance(value, RootOfUnity):
            return value.to_cyclo()
        if isinstance(value, (int, Fraction)):
            return cls.rational(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to CycloNumber")

    # structure ----------------------------------------------------------
    def lift(self, m: int) -> "CycloNumber":
        """Re-express in ``Q(zeta_m)``; the current order must divide the canonical ``m``."""
        m = _canonical_order(m)
        if m == self.order:
            return self
        if m % self.order:
            raise ValueError(f"order {self.order} does not divide {m}")
        step = m // self.order
        raw = [Fraction(0)] * (step * (len(self.coeffs) - 1) + 1)
        for k, c in enumerate(self.coeffs):
            raw[k * step] = c
        obj = object.__new__(CycloNumber)
        object.__setattr__(obj, "order", m)
        object.__setattr__(obj, "coeffs", _reduce(raw, m))
        return obj

    def _common(self, other: "CycloNumber") -> tuple["CycloNumber", "CycloNumber"]:
        if self.order == other.order:
            return self, other
        m = _canonical_order(math.lcm(self.order, other.order))
        return self.lift(m), other.lift(m)

    @staticmethod
    def _make(order: int, coeffs: Sequence[Fraction]) -> "CycloNumber":
        obj = object.__new__(CycloNumber)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "coeffs", tuple(coeffs))
        return obj

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            if self.order == 1:
                return CycloNumber._make(1, (self.coeffs[0] + other,))
            c = list(self.coeffs)
            c[0] += other
            return CycloNumber._make(self.order, c)
        if not isinstance(other, CycloNumber):
            return NotImplemented
        if self.order == 1 and other.order == 1:
            return CycloNumber._make(1, (self.coeffs[0] + other.coeffs[0],))
        a, b = self._common(other)
        return CycloNumber._make(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber._make(self.order, [-x for x in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, CycloNumber)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloNumber._make(self.order, [x * other for x in self.coeffs])
        if not isinstance(other, CycloNumber):
            return NotImplemented
        if self.order == 1:
            return other * self.coeffs[0]
        if other.order == 1:
            return self * other.coeffs[0]
        a, b = self._common(other)
        return CycloNumber._make(a.order, _reduce(_pmul(a.coeffs, b.coeffs), a.order))

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.order == 1:
            return CycloNumber._make(1, (1 / self.coeffs[0],))
        # extended Euclid: find u with u*self = 1 mod Phi_m
        r0, r1 = list(cyclotomic_polynomial(self.order)), _trim(list(self.coeffs))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        inv = [x / r1[0] for x in s1]
        return CycloNumber._make(self.order, _reduce(inv, self.order))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if not isinstance(other, CycloNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int) -> "CycloNumber":
        if k < 0:
            return self.inverse() ** (-k)
        out = CycloNumber.rational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "CycloNumber":
        out = [Fraction(0)] * self.order
        for k, c in enumerate(self.coeffs):
            out[(-k) % self.order] += c
        return CycloNumber(self.order, out)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and all(c == 0 for c in self.coeffs[1:])
        if isinstance(other, RootOfUnity):
            other = other.to_cyclo()
        if not isinstance(other, CycloNumber):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    __hash__ = None  # type: ignore[assignment]

    # embedding and text -------------------------------------------------
    def to_complex(self) -> mpmath.mpc:
        if self.order == 1:
            return mpmath.mpc(mpmath.mpf(self.coeffs[0].numerator) / self.coeffs[0].denominator)
        w = mpmath.expjpi(mpmath.mpf(2) / self.order)
        acc = mpmath.mpc(0)
        for k, c in enumerate(self.coeffs):
            if c:
                acc += (mpmath.mpf(c.numerator) / c.denominator) * w ** k
        return acc

    def __complex__(self) -> complex:
        return complex(self.to_complex())

    def text(self) -> str:
        """Rational-coefficient polynomial in ``zeta(m)``, e.g. ``1/2*zeta(3)^2+zeta(3)-1``."""
        if self.order == 1:
            return _frac_text(self.coeffs[0])
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                mono = _frac_text(c)
            else:
                base = f"zeta({self.order})" + (f"^{k}" if k > 1 else "")
                if c == 1:
                    mono = base
                elif c == -1:
                    mono = "-" + base
                else:
                    mono = f"{_frac_text(c)}*{base}"
            parts.append(mono)
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self) -> str:
        return f"CycloNumber({self.text()})"

    __str__ = text


def _frac_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
