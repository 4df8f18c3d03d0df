"""Boundary and general-point coefficients and the Laurent-type expansions they induce.

Every function taking an ``offset`` builds its rational functions in the
variables ``s_{offset+1}, ...``; the matrix builders use this to express the
expansion of a suffix tuple in the variables of the full tuple.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

from ..cyclo import CycloNumber, RootOfUnity
from ..domains import as_profile, in_closure_U_z, index_set_I, index_set_I_z
from ..specialseq import eulerian_star_value, pochhammer, star_bernoulli
from .matrices import RatMatrix, invert_unitriangular
from .ratfunc import RatFunc, linear_form

__all__ = [
    "h_factor",
    "boundary_term",
    "c_rational",
    "eulerian_weight",
    "compositions",
    "build_matrix_boundary",
    "build_matrix_general",
    "laurent_expansion",
    "LaurentExpansion",
]


@lru_cache(maxsize=None)
def eulerian_weight(w: RootOfUnity, k: int) -> CycloNumber:
    """``w * A*_k(w) / (w - 1)**(k+1)`` for a root ``w != 1``."""
    if w.is_one():
        raise ValueError("weight undefined at w = 1")
    c = w.to_cyclo()
    return c * eulerian_star_value(k, c) / (c - 1) ** (k + 1)


def compositions(total: int, parts: int):
    """All tuples of ``parts`` non-negative integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def h_factor(i: int, j: int, profile, offset: int = 0) -> RatFunc:
    """Factor ``H_j^(i)``: a shifted partial sum of ``s_j..s_i`` or the constant ``1 - z_[t,i]``."""
    p = as_profile(profile)
    if not 1 <= j <= i <= p.r:
        raise IndexError(f"need 1 <= j <= i <= {p.r}")
    t = p.t_index(i)
    if j < t:
        return linear_form(j + offset, i + offset, -(i - j))
    if j == t:
        return RatFunc.const(1 - p.product(t, i).to_cyclo())
    return linear_form(j + offset, i + offset, -(i - j + 1))


def boundary_term(i: int, profile, offset: int = 0) -> RatFunc:
    """``(-1)^i / prod_j H_j^(i)``; equal to 1 for ``i = 0``."""
    p = as_profile(profile)
    if i == 0:
        return RatFunc.const(1)
    out = RatFunc.const((-1) ** i)
    for j in range(1, i + 1):
        out = out / h_factor(i, j, p, offset)
    return out


def c_rational(i: int, profile, a: Sequence[int], offset: int = 0) -> RatFunc:
    """General-point coefficient ``C_i(s_1..s_i)`` for the anchor ``a``."""
    p = as_profile(profile)
    if i == 0:
        return RatFunc.const(1)
    if not p.q(1, i):
        return RatFunc.const(0)
    target = p.Q(i) - sum(a[:i])
    if target < 0:
        return RatFunc.const(0)
    unit = [p.q(j, i) for j in range(0, i + 1)]  # unit[j] = q_[j,i]
    conj = [None] + [p.product(j, i).conjugate() for j in range(1, i + 1)]
    # partial linear forms s_j + ... + s_i
    sums = [None] + [linear_form(j + offset, i + offset) for j in range(1, i + 1)]
    Q_after = [0] * (i + 2)  # Q_after[j] = Q_[j,i], Q_after[i+1] = 0
    for j in range(i, 0, -1):
        Q_after[j] = Q_after[j + 1] + unit[j]

    total = RatFunc.const(0)
    for ks in compositions(target, i):
        weight: Fraction | CycloNumber = Fraction(1)
        for j in range(1, i + 1):
            k = ks[j - 1]
            weight = weight / factorial(k)
            if unit[j]:
                weight = weight * star_bernoulli(k)
            else:
                weight = eulerian_weight(conj[j], k) * weight
            if weight == 0:
                break
        if weight == 0:
            continue
        term = RatFunc.const(weight)
        carried = 0  # k_{j+1} + ... + k_i
        for j in range(i, 0, -1):
            length = ks[j - 1] - unit[j]
            base = sums[j] + (carried - Q_after[j + 1])
            term = term * pochhammer(base, length)
            carried += ks[j - 1]
        total = total + term
    return total


def _suffix_anchor(a: Sequence[int], i: int) -> tuple[int, ...]:
    return tuple(a[i:])


def build_matrix_boundary(profile, a: Sequence[int]) -> RatMatrix:
    """Matrix ``M`` with ``V_reg = M V`` over the index set ``I(z, a)``."""
    p = as_profile(profile)
    a = tuple(a)
    if not in_closure_U_z(p, a):
        raise ValueError(f"anchor {a} is outside the closure of U_r(z)")
    idx = index_set_I(p, a)

    def entry(i: int, j: int) -> RatFunc:
        if i == j:
            return RatFunc.const(1)
        return boundary_term(j - i, p.suffix(i), offset=i)

    return RatMatrix.build(idx, entry, "unitriangular")


def build_matrix_general(profile, a: Sequence[int]) -> RatMatrix:
    """Matrix ``N`` with ``V_reg = N V`` over the index set ``I(z)``."""
    p = as_profile(profile)
    a = tuple(a)
    if len(a) != p.r:
        raise ValueError(f"anchor has {len(a)} entries, expected {p.r}")
    idx = index_set_I_z(p)

    def entry(i: int, j: int) -> RatFunc:
        if i == j:
            return RatFunc.const(1)
        return c_rational(j - i, p.suffix(i), _suffix_anchor(a, i), offset=i) * (-1) ** (j - i)

    return RatMatrix.build(idx, entry, "unitriangular")


@dataclass
class LaurentExpansion:
    """``Li_z(s) = sum_i D_i(s_1..s_i) * LiReg_(suffix z; suffix a)(s_{i+1}..s_r)``."""

    z: tuple[RootOfUnity, ...]
    anchor: tuple[int, ...]
    mode: str
    indices: list[int]
    coefficients: dict[int, RatFunc]
    matrix: RatMatrix = field(repr=False)
    inverse: RatMatrix = field(repr=False)

    def coefficient(self, i: int) -> RatFunc:
        return self.coefficients.get(i, RatFunc.const(0))

    def forward_terms(self) -> dict[int, RatFunc]:
        """First row of the forward matrix: ``LiReg = sum_i c_i * Li(suffix i)``."""
        return self.matrix.first_row()

    def to_dict(self) -> dict:
        return {
            "z": [w.text() for w in self.z],
            "anchor": list(self.anchor),
            "mode": self.mode,
            "indices": self.indices,
            "coefficients": {str(i): self.coefficients[i].text() for i in self.indices},
            "matrix": self.matrix.to_text_rows(),
            "inverse": self.inverse.to_text_rows(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def text(self) -> str:
        lines = []
        for i in self.indices:
            suffix_z = ",".join(w.text() for w in self.z[i:])
            suffix_a = ",".join(str(x) for x in self.anchor[i:])
            args = ",".join(f"s{k}" for k in range(i + 1, len(self.z) + 1))
            reg = f"LiReg[({suffix_z};{suffix_a})]({args})" if i < len(self.z) else "1"
            lines.append(f"D{i} = {self.coefficients[i].text()}    * {reg}")
        return "\n".join(lines)


def laurent_expansion(profile, a: Sequence[int], mode: str = "auto") -> LaurentExpansion:
    """Invert the boundary (``M``) or general (``N``) system and keep its first row.

    ``mode="auto"`` picks the boundary system when ``a`` lies in the closure
    of ``U_r(z)`` and the general one otherwise.
    """
    p = as_profile(profile)
    a = tuple(a)
    if mode == "auto":
        mode = "boundary" if in_closure_U_z(p, a) else "general"
    if mode == "boundary":
        m = build_matrix_boundary(p, a)
    elif mode == "general":
        m = build_matrix_general(p, a)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    inv = invert_unitriangular(m)
    return LaurentExpansion(
        z=p.z, anchor=a, mode=mode, indices=list(m.index),
        coefficients=inv.first_row(), matrix=m, inverse=inv,
    )
