"""Coefficient tolerance policy.

A coefficient c of a multivector A counts as zero iff

    |c| <= EPS_ABS + rel_eps() * max_abs(A)

so thresholds scale with the size of the object being tested.  The relative
part can be overridden (the CLI honours the GA_TOLERANCE environment
variable); the absolute floor is fixed.
"""

from __future__ import annotations

EPS_ABS = 1e-12

_DEFAULT_REL = 1e-9
_rel_eps = _DEFAULT_REL


def rel_eps() -> float:
    return _rel_eps


def set_rel_eps(value: float | None) -> None:
    """Override the relative tolerance; None restores the default."""
    global _rel_eps
    _rel_eps = _DEFAULT_REL if value is None else float(value)


def threshold(scale: float) -> float:
    """Zero threshold for coefficients of an object of the given magnitude."""
    return EPS_ABS + _rel_eps * abs(scale)


def is_zero(value: float, scale: float) -> bool:
    return abs(value) <= threshold(scale)
