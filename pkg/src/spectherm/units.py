"""Unit system threaded through every computation in the package."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class UnitSystem:
    """Physical constants scaling energies, entropies and temperatures.

    hbar is the reduced Planck constant (action units), k_boltzmann the
    Boltzmann constant (energy per temperature), mass the particle mass.
    Immutable, so instances can be shared freely.
    """

    hbar: float
    k_boltzmann: float
    mass: float

    def __post_init__(self) -> None:
        for name in ("hbar", "k_boltzmann", "mass"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")


def natural_units() -> UnitSystem:
    """Default system: hbar = k_B = 1 and mass = 1/2.

    With this choice hbar^2/(2m) = 1, so kinetic eigenvalues coincide with
    squared wavenumbers and entropies are measured in units of k_B.
    """
    return UnitSystem(hbar=1.0, k_boltzmann=1.0, mass=0.5)


def kinetic_prefactor(u: UnitSystem) -> float:
    """hbar^2/(2m), the factor turning a squared wavenumber into an energy."""
    return u.hbar * u.hbar / (2.0 * u.mass)
