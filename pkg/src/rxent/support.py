"""Support descriptions for densities and integrals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidParameterError


class SupportKind(Enum):
    INTERVAL = "interval"
    POSITIVE_REALS = "positive_reals"
    ALL_REALS = "all_reals"
    REAL_VECTOR = "real_vector"


@dataclass(frozen=True)
class SupportSpec:
    """Support of a density: a bounded interval, a half line, the real line,
    or an n-dimensional real vector space.

    ``lower``/``upper`` are only meaningful for INTERVAL, ``dim`` only for
    REAL_VECTOR.  ``length`` is the Lebesgue measure when finite, else None.
    """

    kind: SupportKind
    lower: float = math.nan
    upper: float = math.nan
    dim: int = 1

    def __post_init__(self):
        if self.kind is SupportKind.INTERVAL:
            if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
                raise InvalidParameterError("interval endpoints must be finite")
            if not self.lower < self.upper:
                raise InvalidParameterError(
                    f"interval needs lower < upper, got [{self.lower}, {self.upper}]"
                )
        if self.kind is SupportKind.REAL_VECTOR and self.dim < 1:
            raise InvalidParameterError("vector support needs dim >= 1")

    @classmethod
    def interval(cls, lower: float, upper: float) -> "SupportSpec":
        return cls(SupportKind.INTERVAL, float(lower), float(upper))

    @classmethod
    def unit_interval(cls) -> "SupportSpec":
        return cls.interval(0.0, 1.0)

    @classmethod
    def positive_reals(cls) -> "SupportSpec":
        return cls(SupportKind.POSITIVE_REALS)

    @classmethod
    def all_reals(cls) -> "SupportSpec":
        return cls(SupportKind.ALL_REALS)

    @classmethod
    def real_vector(cls, dim: int) -> "SupportSpec":
        return cls(SupportKind.REAL_VECTOR, dim=int(dim))

    @property
    def length(self) -> float | None:
        """Lebesgue measure if finite (INTERVAL only), else None."""
        if self.kind is SupportKind.INTERVAL:
            return self.upper - self.lower
        return None

    @property
    def is_finite_measure(self) -> bool:
        return self.kind is SupportKind.INTERVAL

    def contains(self, x: float) -> bool:
        """Membership test for scalar supports (boundaries included)."""
        if self.kind is SupportKind.INTERVAL:
            return self.lower <= x <= self.upper
        if self.kind is SupportKind.POSITIVE_REALS:
            return x >= 0.0
        if self.kind is SupportKind.ALL_REALS:
            return True
        raise InvalidParameterError("contains() is for scalar supports")


UNIT_INTERVAL = SupportSpec.unit_interval()
POSITIVE_REALS = SupportSpec.positive_reals()
ALL_REALS = SupportSpec.all_reals()
