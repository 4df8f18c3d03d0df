"""Translation matrices ``A(s)`` and ``B(s)`` and their closed-form inverses."""

from __future__ import annotations

from math import factorial

from ..cyclo import RootOfUnity
from ..specialseq import eulerian_star_value, pochhammer, star_bernoulli
from .matrices import RatMatrix
from .ratfunc import RatFunc, var

__all__ = ["matrix_A", "matrix_A_inverse", "matrix_B", "matrix_B_inverse", "nilpotent_M"]


def _variable(s) -> RatFunc:
    return var(s) if isinstance(s, int) else RatFunc.coerce(s)


def nilpotent_M(s, size: int) -> RatMatrix:
    """Superdiagonal matrix with entries ``s, s+1, ...``."""
    x = _variable(s)
    return RatMatrix.build(range(size), lambda i, j: x + i if j == i + 1 else RatFunc.const(0))


def matrix_A(s, z: RootOfUnity, size: int) -> RatMatrix:
    """``conj(z) I - exp(-M(s))`` as a terminating nilpotent series."""
    if z.is_one():
        raise ValueError("matrix A needs z != 1")
    if size < 1:
        raise ValueError("size must be positive")
    x = _variable(s)
    diag = z.conjugate().to_cyclo() - 1

    def entry(i: int, j: int) -> RatFunc:
        n = j - i
        if n == 0:
            return RatFunc.const(diag)
        return pochhammer(x + i, n) * RatFunc.const((-1) ** (n + 1)) / factorial(n)

    return RatMatrix.build(range(size), entry, "upper")


def matrix_A_inverse(s, z: RootOfUnity, size: int) -> RatMatrix:
    """Closed form ``(w-1)^{-1} sum_n A*_n(w) / (w-1)^n M^n / n!`` with ``w = conj(z)``."""
    if z.is_one():
        raise ValueError("matrix A needs z != 1")
    x = _variable(s)
    w = z.conjugate().to_cyclo()

    def entry(i: int, j: int) -> RatFunc:
        n = j - i
        coeff = eulerian_star_value(n, w) / (w - 1) ** (n + 1) / factorial(n)
        return pochhammer(x + i, n) * RatFunc.const(coeff)

    return RatMatrix.build(range(size), entry, "upper")


def matrix_B(s, size: int) -> RatMatrix:
    """Entries ``(-1)^n (s - 1 + i)_{n+1} / (n+1)!`` with ``n = j - i``."""
    if size < 1:
        raise ValueError("size must be positive")
    x = _variable(s)

    def entry(i: int, j: int) -> RatFunc:
        n = j - i
        return pochhammer(x + (i - 1), n + 1) * RatFunc.const((-1) ** n) / factorial(n + 1)

    return RatMatrix.build(range(size), entry, "upper")


def matrix_B_inverse(s, size: int) -> RatMatrix:
    """Entries ``(s + i)_{k-1} B*_k / k!`` with ``k = j - i`` (diagonal ``1/(s+i-1)``)."""
    x = _variable(s)

    def entry(i: int, j: int) -> RatFunc:
        k = j - i
        return RatFunc.coerce(pochhammer(x + i, k - 1)) * RatFunc.const(star_bernoulli(k) / factorial(k))

    return RatMatrix.build(range(size), entry, "upper")
