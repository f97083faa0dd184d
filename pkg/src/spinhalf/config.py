"""Global numeric tolerance for approximate equality checks.

All arithmetic in the numeric modules is a handful of multiply-adds on
unit-magnitude complex numbers, so a single absolute tolerance suffices.
It can be overridden process-wide (e.g. to tighten property tests) or
temporarily through the :func:`tolerance` context manager.
"""

from __future__ import annotations

from contextlib import contextmanager

DEFAULT_TOLERANCE = 1e-12

_tolerance = DEFAULT_TOLERANCE


def get_tolerance() -> float:
    """Return the current absolute tolerance for equality checks."""
    return _tolerance


def set_tolerance(value: float) -> None:
    """Set the process-wide tolerance. Must be a positive finite float."""
    value = float(value)
    if not value > 0.0 or value != value or value == float("inf"):
        raise ValueError(f"tolerance must be positive and finite, got {value!r}")
    global _tolerance
    _tolerance = value


@contextmanager
def tolerance(value: float):
    """Temporarily override the tolerance inside a ``with`` block."""
    previous = get_tolerance()
    set_tolerance(value)
    try:
        yield
    finally:
        set_tolerance(previous)
