"""Index-set combinatorics, convergence regions and candidate polar hyperplanes.

Everything here depends only on which interval products ``z_j * ... * z_i``
equal 1, so an :class:`IndexProfile` precomputes that table once.
Indices follow the 1-based convention used throughout the package: the
profile's ``z[0]`` is ``z_1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import mpmath

from .cyclo import RootOfUnity, interval_product

__all__ = [
    "IndexProfile",
    "Hyperplane",
    "PolarDescription",
    "as_profile",
    "index_set_I",
    "index_set_I_prime",
    "index_set_I_z",
    "in_U",
    "in_U_z",
    "in_V_z",
    "in_closure_U_z",
    "polar_hyperplanes",
    "partial_sum_thresholds_U_z",
]


class IndexProfile:
    """Cached interval-product data for a tuple of roots of unity."""

    def __init__(self, z: Sequence[RootOfUnity]):
        self.z = tuple(z)
        self.r = len(self.z)
        # _unit[j][i] is True iff z_[j,i] == 1 (1-based, j <= i)
        unit = [[False] * (self.r + 1) for _ in range(self.r + 2)]
        for i in range(1, self.r + 1):
            turn = Fraction(0)
            for j in range(i, 0, -1):
                turn += self.z[j - 1].turn
                unit[j][i] = turn.denominator == 1
        self._unit = unit

    def __eq__(self, other) -> bool:
        return isinstance(other, IndexProfile) and self.z == other.z

    def __hash__(self) -> int:
        return hash(("profile", self.z))

    def __repr__(self) -> str:
        return f"IndexProfile(z=({', '.join(w.text() for w in self.z)}))"

    # interval data ------------------------------------------------------
    def product(self, j: int, i: int) -> RootOfUnity:
        return interval_product(self.z, j, i)

    def q(self, j: int, i: int) -> int:
        """1 if ``z_[j,i] = 1`` else 0."""
        return 1 if self._unit[j][i] else 0

    def Q_interval(self, j: int, i: int) -> int:
        """``q_[j,i] + q_[j+1,i] + ... + q_[i,i]``; zero for an empty interval."""
        return sum(self.q(k, i) for k in range(j, i + 1))

    def J(self, i: int) -> frozenset[int]:
        return frozenset(j for j in range(1, i + 1) if self._unit[j][i])

    def J_prime(self, i: int) -> frozenset[int]:
        return frozenset(j for j in range(1, i + 1) if not self._unit[j][i])

    def Q(self, i: int) -> int:
        return self.Q_interval(1, i)

    @cached_property
    def first_nonunit(self) -> int:
        """Smallest index with ``z_i != 1``, or ``r + 1`` if none."""
        for i, w in enumerate(self.z, start=1):
            if not w.is_one():
                return i
        return self.r + 1

    def a_flag(self, i: int) -> int:
        """0 iff ``z_1 = ... = z_i = 1`` (and for ``i = 0``), else 1."""
        return 0 if i < self.first_nonunit else 1

    def nonunit_starts(self, i: int) -> list[int]:
        return [t for t in range(1, i + 1) if not self._unit[t][i]]

    def t_index(self, i: int) -> int:
        """The unique ``t`` with ``z_[t,i] != 1``, 0 if none; ValueError if several."""
        starts = self.nonunit_starts(i)
        if len(starts) > 1:
            raise ValueError(f"more than one t with z_[t,{i}] != 1: {starts}")
        return starts[0] if starts else 0

    def suffix(self, i: int) -> "IndexProfile":
        return IndexProfile(self.z[i:])

    def prefix(self, i: int) -> "IndexProfile":
        return IndexProfile(self.z[:i])

    def reversed(self) -> "IndexProfile":
        return IndexProfile(self.z[::-1])

    def to_dict(self) -> dict:
        rows = []
        for i in range(1, self.r + 1):
            starts = self.nonunit_starts(i)
            rows.append({
                "i": i,
                "J": sorted(self.J(i)),
                "J_prime": sorted(self.J_prime(i)),
                "Q": self.Q(i),
                "t": (starts[0] if starts else 0) if len(starts) <= 1 else None,
                "a_flag": self.a_flag(i),
                "prefix_product": self.product(1, i).text(),
            })
        return {"z": [w.text() for w in self.z], "r": self.r,
                "first_nonunit": self.first_nonunit, "rows": rows}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def as_profile(z) -> IndexProfile:
    return z if isinstance(z, IndexProfile) else IndexProfile(z)


def index_set_I(z, a: Sequence[int]) -> list[int]:
    """Indices ``i`` (0 always) with ``z_[1,i] = 1``, at most one non-unit interval
    ending at ``i``, and ``a_1 + ... + a_i = i - a(z)_i``."""
    p = as_profile(z)
    _check_len(p, a)
    out = [0]
    total = 0
    for i in range(1, p.r + 1):
        total += a[i - 1]
        if p.q(1, i) and len(p.nonunit_starts(i)) <= 1 and total == i - p.a_flag(i):
            out.append(i)
    return out


def index_set_I_prime(z, a: Sequence[int]) -> list[int]:
    """Indices with ``z_1 != 1``, ``z_2 = ... = z_i = 1`` and ``a_1 + ... + a_i = i - 1``."""
    p = as_profile(z)
    _check_len(p, a)
    if p.r == 0 or p.z[0].is_one():
        return []
    out = []
    total = 0
    for i in range(1, p.r + 1):
        if i > 1 and not p.z[i - 1].is_one():
            break
        total += a[i - 1]
        if total == i - 1:
            out.append(i)
    return out


def index_set_I_z(z) -> list[int]:
    """``{0}`` together with every ``i`` with ``z_[1,i] = 1``."""
    p = as_profile(z)
    return [0] + [i for i in range(1, p.r + 1) if p.q(1, i)]


# ---------------------------------------------------------------------------
# regions
# ---------------------------------------------------------------------------

def _real_parts(s: Iterable) -> list:
    out = []
    for x in s:
        if isinstance(x, (int, Fraction)):
            out.append(Fraction(x))
        elif isinstance(x, complex):
            out.append(mpmath.mpf(x.real))
        else:
            out.append(mpmath.re(x))
    return out


def _check_len(p: IndexProfile, v: Sequence) -> None:
    if len(v) != p.r:
        raise ValueError(f"expected {p.r} coordinates, got {len(v)}")


def _satisfies(s, thresholds: Sequence[int], strict: bool) -> bool:
    total = 0
    for x, bound in zip(_real_parts(s), thresholds):
        total = total + x
        if strict and not total > bound:
            return False
        if not strict and not total >= bound:
            return False
    return True


def partial_sum_thresholds_U_z(z) -> list[int]:
    p = as_profile(z)
    return [i - p.a_flag(i) for i in range(1, p.r + 1)]


def in_U(s: Sequence) -> bool:
    """``Re(s_1 + ... + s_i) > i`` for every ``i``."""
    return _satisfies(s, range(1, len(s) + 1), strict=True)


def in_U_z(z, s: Sequence) -> bool:
    p = as_profile(z)
    _check_len(p, s)
    return _satisfies(s, partial_sum_thresholds_U_z(p), strict=True)


def in_closure_U_z(z, s: Sequence) -> bool:
    p = as_profile(z)
    _check_len(p, s)
    return _satisfies(s, partial_sum_thresholds_U_z(p), strict=False)


def in_V_z(z, s: Sequence) -> bool:
    """``Re(s_1 + ... + s_i) > Q_i(z)`` for every ``i``."""
    p = as_profile(z)
    _check_len(p, s)
    return _satisfies(s, [p.Q(i) for i in range(1, p.r + 1)], strict=True)


# ---------------------------------------------------------------------------
# polar hyperplanes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Hyperplane:
    """The plane ``s_1 + ... + s_last_index = level``."""

    last_index: int
    level: int

    def text(self) -> str:
        lhs = "+".join(f"s{k}" for k in range(1, self.last_index + 1))
        return f"{lhs}={self.level}"

    def distance(self, s: Sequence) -> mpmath.mpf:
        return abs(mpmath.fsum(mpmath.mpmathify(x) for x in s[: self.last_index]) - self.level)


@dataclass(frozen=True)
class PolarFamily:
    """All planes ``s_1 + ... + s_last_index = n`` with ``n <= max_level``
    (or only ``n == max_level`` when ``exact`` is set)."""

    last_index: int
    max_level: int
    exact: bool = False

    def contains_level(self, n: int) -> bool:
        return n == self.max_level if self.exact else n <= self.max_level

    def to_dict(self) -> dict:
        return {"last_index": self.last_index, "max_level": self.max_level, "only_max": self.exact}


@dataclass(frozen=True)
class PolarDescription:
    families: tuple[PolarFamily, ...]

    def is_empty(self) -> bool:
        return not self.families

    def is_candidate(self, plane: Hyperplane) -> bool:
        return any(f.last_index == plane.last_index and f.contains_level(plane.level)
                   for f in self.families)

    def nearest(self, s: Sequence) -> tuple[Hyperplane, mpmath.mpf] | None:
        """Closest candidate plane to ``s`` (by the real offset of the partial sum)."""
        best = None
        for f in self.families:
            total = mpmath.fsum(mpmath.mpmathify(x) for x in s[: f.last_index])
            n = int(mpmath.nint(mpmath.re(total)))
            n = min(n, f.max_level)
            if f.exact:
                n = f.max_level
            plane = Hyperplane(f.last_index, n)
            d = abs(total - n)
            if best is None or d < best[1]:
                best = (plane, d)
        return best

    def planes_through(self, a: Sequence[int]) -> list[Hyperplane]:
        out = []
        for f in self.families:
            n = sum(a[: f.last_index])
            if f.contains_level(n):
                out.append(Hyperplane(f.last_index, n))
        return out

    def to_dict(self) -> dict:
        return {"families": [f.to_dict() for f in self.families]}


def polar_hyperplanes(z) -> PolarDescription:
    """Finite description of every candidate polar hyperplane of ``Li_z``."""
    p = as_profile(z)
    unit_prefixes = [i for i in range(1, p.r + 1) if p.q(1, i)]
    families = []
    for j, i in enumerate(unit_prefixes, start=1):
        if j == 1 and i == 1:
            families.append(PolarFamily(1, 1, exact=True))
        else:
            families.append(PolarFamily(i, j))
    return PolarDescription(tuple(families))
