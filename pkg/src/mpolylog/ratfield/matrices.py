"""Upper-triangular matrices of rational functions, indexed by arbitrary labels."""

from __future__ import annotations

from typing import Callable, Sequence

from .ratfunc import RatFunc

__all__ = ["RatMatrix", "invert_unitriangular", "invert_upper_triangular"]


class RatMatrix:
    """Square matrix whose rows and columns carry the labels ``index`` (e.g. an index set)."""

    def __init__(self, index: Sequence[int], rows: Sequence[Sequence], shape: str = "upper"):
        self.index = list(index)
        n = len(self.index)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ValueError("matrix must be square and match its labels")
        self.rows = [[RatFunc.coerce(x) for x in row] for row in rows]
        self.shape = shape

    @classmethod
    def build(cls, index: Sequence[int], entry: Callable[[int, int], RatFunc], shape: str = "upper"):
        """Upper-triangular matrix with ``entry(i_label, j_label)`` for ``i <= j``."""
        idx = list(index)
        zero = RatFunc.const(0)
        rows = [[entry(a, b) if p <= q else zero for q, b in enumerate(idx)]
                for p, a in enumerate(idx)]
        return cls(idx, rows, shape)

    @classmethod
    def identity(cls, index: Sequence[int]) -> "RatMatrix":
        idx = list(index)
        return cls(idx, [[RatFunc.const(1 if p == q else 0) for q in range(len(idx))]
                         for p in range(len(idx))], "unitriangular")

    @property
    def size(self) -> int:
        return len(self.index)

    def __getitem__(self, key: tuple[int, int]) -> RatFunc:
        """Entry addressed by labels, not positions."""
        i, j = key
        return self.rows[self.index.index(i)][self.index.index(j)]

    def position(self, p: int, q: int) -> RatFunc:
        return self.rows[p][q]

    def is_upper_triangular(self) -> bool:
        return all(self.rows[p][q].is_zero() for p in range(self.size) for q in range(p))

    def is_unitriangular(self) -> bool:
        return self.is_upper_triangular() and all(self.rows[p][p] == 1 for p in range(self.size))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.index != other.index:
            raise ValueError("label mismatch")
        n = self.size
        upper = self.is_upper_triangular() and other.is_upper_triangular()
        rows = []
        for p in range(n):
            row = []
            for q in range(n):
                acc = RatFunc.const(0)
                ks = range(p, q + 1) if upper else range(n)
                for k in ks:
                    a, b = self.rows[p][k], other.rows[k][q]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            rows.append(row)
        return RatMatrix(self.index, rows, self.shape if upper else "general")

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix) or self.index != other.index:
            return NotImplemented if not isinstance(other, RatMatrix) else False
        return all(a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    def is_identity(self) -> bool:
        return self == RatMatrix.identity(self.index)

    def scaled(self, c) -> "RatMatrix":
        return RatMatrix(self.index, [[x * c for x in row] for row in self.rows], self.shape)

    def first_row(self) -> dict[int, RatFunc]:
        return dict(zip(self.index, self.rows[0]))

    def to_text_rows(self) -> list[list[str]]:
        return [[x.text() for x in row] for row in self.rows]

    def __repr__(self) -> str:
        body = "\n".join("  [" + ", ".join(r) + "]" for r in self.to_text_rows())
        return f"RatMatrix(index={self.index},\n{body})"


def invert_upper_triangular(m: RatMatrix) -> RatMatrix:
    """Exact inverse of an upper-triangular matrix with non-zero diagonal."""
    if not m.is_upper_triangular():
        raise ValueError("matrix is not upper triangular")
    n = m.size
    diag_inv = []
    for p in range(n):
        d = m.rows[p][p]
        if d.is_zero():
            raise ZeroDivisionError("singular diagonal entry")
        diag_inv.append(d.inverse())
    inv = [[RatFunc.const(0)] * n for _ in range(n)]
    for q in range(n):
        inv[q][q] = diag_inv[q]
        for p in range(q - 1, -1, -1):
            acc = RatFunc.const(0)
            for k in range(p + 1, q + 1):
                a = m.rows[p][k]
                if not a.is_zero() and not inv[k][q].is_zero():
                    acc = acc + a * inv[k][q]
            inv[p][q] = -(diag_inv[p] * acc)
    return RatMatrix(m.index, inv, m.shape)


def invert_unitriangular(m: RatMatrix) -> RatMatrix:
    if not m.is_unitriangular():
        raise ValueError("matrix is not unitriangular")
    return invert_upper_triangular(m)
