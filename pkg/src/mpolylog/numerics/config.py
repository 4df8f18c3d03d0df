"""Evaluation settings shared by every numeric routine."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping

__all__ = ["EvalConfig"]


@dataclass(frozen=True)
class EvalConfig:
    precision: int = 60                 # decimal digits
    tolerance: float = 1e-8             # identity residual threshold
    fit_tolerance: float = 1e-15        # target accuracy of fitted constants
    delta: Fraction = Fraction(1, 1000)  # offset from an integer anchor
    N_max: int = 10 ** 5                # largest N a fit may sample
    tail_N: int = 200                   # cut-off where tails switch to expansions
    tail_terms: int = 40                # expansion terms per level
    fit_N0: int = 256                   # first sampling anchor
    fit_span: int = 16                  # last anchor / first anchor
    m_max: int = 3                      # decaying powers N^-1..N^-m_max in the model
    m_max_limit: int = 24
    taylor_degree: int = 6
    oversample: float = 2.0
    guard_digits: int = 30
    pole_tolerance: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.precision < 15:
            raise ValueError("precision must be at least 15 digits")
        if not self.tolerance > 10.0 ** (-self.precision / 2):
            raise ValueError("tolerance must exceed 10^(-precision/2)")
        if self.fit_N0 < 8 or self.fit_span < 2:
            raise ValueError("fit grid too small")
        object.__setattr__(self, "delta", Fraction(self.delta))

    @property
    def pole_threshold(self) -> float:
        if self.pole_tolerance is not None:
            return self.pole_tolerance
        return 10.0 ** (-self.precision / 2)

    @property
    def working_digits(self) -> int:
        return self.precision + self.guard_digits

    def replace(self, **changes) -> "EvalConfig":
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_mapping(cls, values: Mapping[str, str]) -> "EvalConfig":
        """Build from ``key=value`` strings, converting by field type."""
        kwargs: dict[str, Any] = {}
        types = {f.name: f.type for f in dataclasses.fields(cls)}
        for key, raw in values.items():
            if key not in types:
                raise ValueError(f"unknown config key {key!r}")
            t = str(types[key])
            if "Fraction" in t:
                kwargs[key] = Fraction(raw)
            elif "float" in t:
                kwargs[key] = None if raw.lower() == "none" else float(raw)
            else:
                kwargs[key] = int(raw)
        return cls(**kwargs)
