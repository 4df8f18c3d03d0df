"""Sparse multivariate polynomials and rational functions over cyclotomic rationals.

Variables are ``s1, s2, ...`` addressed by positive integer index.  A monomial
is a tuple of ``(variable, exponent)`` pairs sorted by variable.  Coefficients
are ``Fraction`` whenever rational and :class:`CycloNumber` otherwise.

A :class:`RatFunc` keeps its denominator factored: a list of distinct monic
polynomials with multiplicities.  Monic means the lexicographically leading
monomial (``s1 > s2 > ...``) has coefficient 1; any constant goes into the
numerator.  After every operation shared factors are cancelled by exact
polynomial division.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import mpmath

from ..cyclo import CycloNumber, RootOfUnity
from ..specialseq import PoleError

Monomial = tuple  # tuple[tuple[int, int], ...]
Coeff = Union[Fraction, CycloNumber]

__all__ = ["Poly", "RatFunc", "var", "const", "linear_form"]


def _coeff(c) -> Coeff:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, RootOfUnity):
        c = c.to_cyclo()
    if isinstance(c, CycloNumber):
        return c.to_fraction() if c.is_rational() else c
    raise TypeError(f"unsupported coefficient {c!r}")


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    d = dict(a)
    for v, e in b:
        have = d.get(v, 0)
        if have < e:
            return None
        if have == e:
            del d[v]
        else:
            d[v] = have - e
    return tuple(sorted(d.items()))


def _lex_key(m: Monomial, width: int) -> tuple:
    dense = [0] * width
    for v, e in m:
        dense[v - 1] = e
    return tuple(dense)


def _mono_text(m: Monomial) -> str:
    return "*".join(f"s{v}" + (f"^{e}" if e > 1 else "") for v, e in reversed(m))


def _coeff_text(c: Coeff) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return c.text()


def _print_order(m: Monomial) -> tuple:
    deg = sum(e for _, e in m)
    return (-deg, tuple((-v, -e) for v, e in reversed(m)))


class Poly:
    """Immutable sparse polynomial in ``s1, s2, ...``."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = _coeff(c)
                if c != 0:
                    clean[m] = c
        self.terms: dict[Monomial, Coeff] = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    # basic queries -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def constant_value(self) -> Coeff:
        return self.terms.get((), Fraction(0))

    def max_var(self) -> int:
        return max((v for m in self.terms for v, _ in m), default=0)

    def variables(self) -> set[int]:
        return {v for m in self.terms for v, _ in m}

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def leading(self, width: int | None = None) -> tuple[Monomial, Coeff]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        w = width if width is not None else self.max_var()
        m = max(self.terms, key=lambda mono: _lex_key(mono, w))
        return m, self.terms[m]

    # arithmetic ----------------------------------------------------------
    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = _coeff(v + c)
                if v == 0:
                    del out[m]
                else:
                    out[m] = v
        return Poly._raw(out)

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = out.get(m)
                prod = c1 * c2
                out[m] = prod if v is None else v + prod
        return Poly({m: c for m, c in out.items()})

    def scale(self, c) -> "Poly":
        c = _coeff(c)
        if c == 0:
            return Poly()
        return Poly._raw({m: _coeff(v * c) for m, v in self.terms.items()})

    def __pow__(self, k: int) -> "Poly":
        out = Poly({(): 1})
        for _ in range(k):
            out = out * self
        return out

    def exact_divide(self, divisor: "Poly") -> "Poly | None":
        """Quotient if ``divisor`` divides ``self`` exactly, else None."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        width = max(self.max_var(), divisor.max_var())
        lm, lc = divisor.leading(width)
        inv_lc = 1 / lc if isinstance(lc, Fraction) else lc.inverse()
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            m = max(rem, key=lambda mono: _lex_key(mono, width))
            d = _mono_div(m, lm)
            if d is None:
                return None
            c = _coeff(rem[m] * inv_lc)
            quot[d] = c
            for dm, dc in divisor.terms.items():
                key = _mono_mul(d, dm)
                v = _coeff(rem.get(key, Fraction(0)) - c * dc)
                if v == 0:
                    rem.pop(key, None)
                else:
                    rem[key] = v
        return Poly._raw(quot)

    def monic(self) -> tuple[Coeff, "Poly"]:
        """``(c, p)`` with ``self = c * p`` and ``p`` having leading coefficient 1."""
        _, lc = self.leading()
        inv = 1 / lc if isinstance(lc, Fraction) else lc.inverse()
        return lc, self.scale(inv)

    def shift_vars(self, offset: int) -> "Poly":
        if offset == 0:
            return self
        return Poly._raw({tuple((v + offset, e) for v, e in m): c for m, c in self.terms.items()})

    def substitute(self, values: Mapping[int, "Poly"]) -> "Poly":
        out = Poly()
        for m, c in self.terms.items():
            term = Poly({(): c})
            for v, e in m:
                base = values.get(v)
                if base is None:
                    base = Poly({((v, 1),): 1})
                term = term * base ** e
            out = out + term
        return out

    def evaluate(self, values: Sequence) -> mpmath.mpc:
        """Numeric value with ``values[k-1]`` substituted for ``s_k``."""
        acc = mpmath.mpc(0)
        for m, c in self.terms.items():
            t = _coeff_num(c)
            for v, e in m:
                t *= mpmath.mpmathify(values[v - 1]) ** e
            acc += t
        return acc

    def evaluate_exact(self, values: Sequence) -> Coeff:
        acc: Coeff = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t = t * _coeff(values[v - 1]) ** e
            acc = acc + t
        return _coeff(acc)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly({(): other})
        if not isinstance(other, Poly):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[m] == other.terms[m] for m in self.terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.keys()))
        return self._hash

    def text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=_print_order):
            c = self.terms[m]
            if m == ():
                parts.append(_coeff_text(c))
                continue
            mono = _mono_text(m)
            if isinstance(c, Fraction):
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append("-" + mono)
                else:
                    parts.append(f"{_coeff_text(c)}*{mono}")
            else:
                parts.append(f"({c.text()})*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self) -> str:
        return f"Poly({self.text()})"


def _coeff_num(c: Coeff):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    return c.to_complex()


class RatFunc:
    """Quotient ``num / prod(f**e)`` with monic, pairwise distinct factors ``f``."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Iterable[tuple[Poly, int]] = ()):
        self.num = num
        self.den: tuple[tuple[Poly, int], ...] = tuple(den)

    # construction ----------------------------------------------------------
    @classmethod
    def const(cls, c) -> "RatFunc":
        return cls(Poly({(): c}))

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFunc":
        return cls(p)

    @classmethod
    def coerce(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, Poly):
            return cls(x)
        return cls.const(x)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return not self.den and self.num.is_constant()

    def constant_value(self) -> Coeff:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.constant_value()

    def variables(self) -> set[int]:
        out = set(self.num.variables())
        for f, _ in self.den:
            out |= f.variables()
        return out

    def den_poly(self) -> Poly:
        out = Poly({(): 1})
        for f, e in self.den:
            out = out * f ** e
        return out

    # normalization ---------------------------------------------------------
    @staticmethod
    def _build(num: Poly, factors: list[list]) -> "RatFunc":
        if num.is_zero():
            return RatFunc(Poly())
        kept = []
        for f, e in factors:
            while e > 0:
                q = num.exact_divide(f)
                if q is None:
                    break
                num = q
                e -= 1
            if e > 0:
                kept.append((f, e))
        return RatFunc(num, kept)

    @staticmethod
    def _merge(a: Sequence, b: Sequence, combine) -> list[list]:
        out = [[f, e] for f, e in a]
        for f, e in b:
            for slot in out:
                if slot[0] == f:
                    slot[1] = combine(slot[1], e)
                    break
            else:
                out.append([f, combine(0, e)])
        return out

    # arithmetic ------------------------------------------------------------
    def __add__(self, other) -> "RatFunc":
        other = RatFunc.coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if not self.den and not other.den:
            return RatFunc(self.num + other.num)
        common = self._merge(self.den, other.den, max)
        lhs = self.num * _cofactor(common, self.den)
        rhs = other.num * _cofactor(common, other.den)
        return RatFunc._build(lhs + rhs, common)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other) -> "RatFunc":
        return RatFunc.coerce(other) - self

    def __mul__(self, other) -> "RatFunc":
        if not isinstance(other, RatFunc):
            if isinstance(other, Poly):
                other = RatFunc(other)
            else:
                c = _coeff(other)
                return RatFunc(self.num.scale(c), self.den if c != 0 else ())
        if self.is_zero() or other.is_zero():
            return RatFunc(Poly())
        if other.is_constant():
            return RatFunc(self.num.scale(other.num.constant_value()), self.den)
        if self.is_constant():
            return RatFunc(other.num.scale(self.num.constant_value()), other.den)
        num = self.num * other.num
        factors = self._merge(self.den, other.den, lambda x, y: x + y)
        return RatFunc._build(num, factors)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        if self.num.is_constant():
            c = self.num.constant_value()
            inv = 1 / c if isinstance(c, Fraction) else c.inverse()
            return RatFunc(self.den_poly().scale(inv))
        lc, monic = self.num.monic()
        inv = 1 / lc if isinstance(lc, Fraction) else lc.inverse()
        return RatFunc._build(self.den_poly().scale(inv), [[monic, 1]])

    def __truediv__(self, other) -> "RatFunc":
        other = RatFunc.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "RatFunc":
        base = self if k >= 0 else self.inverse()
        out = RatFunc.const(1)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, CycloNumber, Poly, RatFunc)):
            return (self - RatFunc.coerce(other)).is_zero()
        return NotImplemented

    def __hash__(self):  # pragma: no cover - rational functions are not hashable keys
        raise TypeError("RatFunc is unhashable")

    # variables -------------------------------------------------------------
    def shift_vars(self, offset: int) -> "RatFunc":
        if offset == 0:
            return self
        return RatFunc(self.num.shift_vars(offset), [(f.shift_vars(offset), e) for f, e in self.den])

    # evaluation ------------------------------------------------------------
    def evaluate(self, values: Sequence) -> mpmath.mpc:
        num = self.num.evaluate(values)
        den = mpmath.mpc(1)
        for f, e in self.den:
            v = f.evaluate(values)
            if v == 0:
                raise PoleError(f"denominator factor {f.text()} vanishes")
            den *= v ** e
        return num / den

    def evaluate_exact(self, values: Sequence) -> Coeff:
        num = self.num.evaluate_exact(values)
        den: Coeff = Fraction(1)
        for f, e in self.den:
            v = f.evaluate_exact(values)
            if v == 0:
                raise PoleError(f"denominator factor {f.text()} vanishes")
            den = den * v ** e
        return _coeff(num / den)

    def linear_factors(self) -> list[Poly]:
        return [f for f, _ in self.den if f.degree() == 1]

    # text ------------------------------------------------------------------
    def text(self) -> str:
        if not self.den:
            return self.num.text()
        num = self.num.text()
        if not (self.num.is_constant() and isinstance(self.num.constant_value(), Fraction)
                and self.num.constant_value() >= 0 and self.num.constant_value().denominator == 1):
            num = f"({num})"
        factors = sorted(self.den, key=lambda fe: (len(fe[0].terms), fe[0].degree(), fe[0].text()))
        pieces = [f"({f.text()})" + (f"^{e}" if e > 1 else "") for f, e in factors]
        if len(pieces) == 1:
            return f"{num}/{pieces[0]}"
        return f"{num}/({'*'.join(pieces)})"

    __str__ = text

    def __repr__(self) -> str:
        return f"RatFunc({self.text()})"


def _cofactor(common: Sequence, own: Sequence) -> Poly:
    out = Poly({(): 1})
    for f, e in common:
        have = next((k for g, k in own if g == f), 0)
        if e > have:
            out = out * f ** (e - have)
    return out


def var(k: int) -> RatFunc:
    """The variable ``s_k``."""
    if k < 1:
        raise ValueError("variables are indexed from 1")
    return RatFunc(Poly({((k, 1),): 1}))


def const(c) -> RatFunc:
    return RatFunc.const(c)


def linear_form(first: int, last: int, constant=0) -> RatFunc:
    """``s_first + ... + s_last + constant`` (empty variable range allowed)."""
    terms: dict = {((k, 1),): 1 for k in range(first, last + 1)}
    if constant:
        terms[()] = constant
    return RatFunc(Poly(terms))
