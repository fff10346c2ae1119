"""Compensated running sums.

Long cumulative sums (weight tables, partial sums of a series) must not
drift by more than ~1e-12 per 1e4 terms, which plain left-to-right
accumulation cannot promise once terms vary in magnitude.  The Neumaier
variant of Kahan summation tracks the rounding error in a carry term and
folds it in at the end.
"""

import math


class CompensatedSum:
    """Neumaier summation: exact to one rounding of the true sum."""

    __slots__ = ("_sum", "_carry")

    def __init__(self, value: float = 0.0):
        self._sum = float(value)
        self._carry = 0.0

    def add(self, x: float) -> "CompensatedSum":
        t = self._sum + x
        if abs(self._sum) >= abs(x):
            self._carry += (self._sum - t) + x
        else:
            self._carry += (x - t) + self._sum
        self._sum = t
        return self

    @property
    def total(self) -> float:
        return self._sum + self._carry


def compensated_total(values) -> float:
    """Sum an iterable with Neumaier compensation."""
    acc = CompensatedSum()
    for v in values:
        acc.add(v)
    return acc.total


def running_totals(values) -> list:
    """Prefix sums of `values`, each compensated.

    The k-th entry equals the compensated sum of values[:k+1]; NaN or
    infinity in the input propagates to every later entry.
    """
    acc = CompensatedSum()
    out = []
    for v in values:
        acc.add(v)
        out.append(acc.total)
    return out


def is_all_finite(values) -> bool:
    return all(math.isfinite(v) for v in values)
