"""Exact arithmetic for higher-level q-divided powers, q-de Rham and q-jet complexes."""

from .coeff import (
    IntPolyQ,
    LevelCtx,
    LocalizationError,
    LocalizedQ,
    RatFuncQ,
    hl_angle,
    hl_brace,
    q_binom_factorial,
    q_binom_pascal,
    q_factorial,
    q_int,
)
from .report import Report

__all__ = [
    "IntPolyQ",
    "LevelCtx",
    "LocalizationError",
    "LocalizedQ",
    "RatFuncQ",
    "Report",
    "hl_angle",
    "hl_brace",
    "q_binom_factorial",
    "q_binom_pascal",
    "q_factorial",
    "q_int",
]
