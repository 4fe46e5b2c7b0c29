"""Run configurations. Thresholds are acceptance-level defaults, not
properties of the systems themselves."""
from __future__ import annotations

from dataclasses import dataclass, field

from .dynamics import DEFAULT_CEILING


@dataclass(frozen=True)
class Tolerances:
    drift: float = 1e-8
    laurent: float = 1e-4
    closed_form: float = 1e-6


@dataclass(frozen=True)
class VerifyConfig:
    x0: tuple = (1.0, 2.0, 3.0)
    t_end: float = 10.0
    h: float = 1e-3
    ceiling: float = DEFAULT_CEILING
    # series start point and comparison point, measured from the pole
    laurent_offsets: tuple = (1e-3, 1e-2)
    laurent_order: int = 8
    tol: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if len(self.x0) != 3:
            raise ValueError("x0 needs three components")
        if not (self.h > 0 and self.t_end > 0):
            raise ValueError("t_end and h must be positive")


@dataclass(frozen=True)
class ScanConfig:
    max_abs: int = 3
    jobs: int = 1

    def __post_init__(self):
        if self.max_abs < 1:
            raise ValueError("max_abs must be at least 1")
