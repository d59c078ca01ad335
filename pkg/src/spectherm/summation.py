"""Compensated floating-point accumulation.

Heat traces and partition functions sum many terms spanning a huge dynamic
range; a Kahan-Neumaier accumulator keeps the result insensitive to the
(fixed, sorted) summation order at the 1e-13 relative level required by the
reproducibility contract.
"""

from __future__ import annotations

from typing import Iterable


class CompensatedSum:
    """Kahan-Neumaier running sum. Call add() per term, read value at the end."""

    __slots__ = ("_sum", "_compensation")

    def __init__(self) -> None:
        self._sum = 0.0
        self._compensation = 0.0

    def add(self, term: float) -> None:
        t = self._sum + term
        if abs(self._sum) >= abs(term):
            self._compensation += (self._sum - t) + term
        else:
            self._compensation += (term - t) + self._sum
        self._sum = t

    @property
    def value(self) -> float:
        return self._sum + self._compensation


def kahan_sum(terms: Iterable[float]) -> float:
    """Compensated sum of an iterable of floats."""
    acc = CompensatedSum()
    for term in terms:
        acc.add(term)
    return acc.value
