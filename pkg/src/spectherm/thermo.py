"""Thermostatic side of the spectral problem.

Covers the ideal-gas fundamental equation S(V) = S0 + k_B ln(V/V0), the
entropy expectation in a radial mode with its volume-independent closed
form, the relation |psi|^2 = exp(S/k_B), the constraint fixing the fiducial
wavenumber, the imaginary-time/temperature substitution tau = hbar/(k_B T),
and the partition functions built from a discrete level list.

The fiducial entropy S0 may be the formal value -infinity; that limit is
carried as an explicit IEEE -inf (never a large negative float) and short
circuits the wavenumber constraint to the pure sine-node solutions.
"""

from __future__ import annotations

import cmath
import math
import sys
from dataclasses import dataclass
from typing import Sequence

from .heattrace import EnergyLevel, expand_levels
from .spectra import (
    DEGENERACY_REL_TOLERANCE,
    eval_radial_wavefunction,
    hilbert_dim_min,
    radial_modes,
)
from .specfun import DEFAULT_QUADRATURE, QuadratureSpec, integrate, sine_integral
from .summation import CompensatedSum
from .units import UnitSystem

__all__ = [
    "NEGATIVE_INFINITE_ENTROPY",
    "FundamentalEquation",
    "DualityPoint",
    "NoRealSolution",
    "EntropyOverflowError",
    "ideal_gas_entropy",
    "entropy_expectation",
    "entropy_from_density",
    "density_from_entropy",
    "solve_fiducial_wavenumber",
    "duality_map",
    "duality_map_from_temperature",
    "boltzmann_weight_from_entropy",
    "real_time_phase",
    "qm_partition",
    "thermal_partition",
    "quasistatic_partition",
]

# Formal fiducial-entropy limit; use this constant rather than an ad-hoc float.
NEGATIVE_INFINITE_ENTROPY = float("-inf")


class NoRealSolution(Exception):
    """The fiducial constraint has no real wavenumber solution.

    Raised when exp(S0/(2 k_B)) exceeds 1/r0, since the sine factor is
    bounded by one.
    """


class EntropyOverflowError(OverflowError):
    """exp(S/k_B) exceeds the double-precision range."""


@dataclass(frozen=True)
class FundamentalEquation:
    """Thermostatic reference state (S0, V0) at a fixed temperature.

    s0 is either finite or NEGATIVE_INFINITE_ENTROPY. temperature_fixed is
    recorded for bookkeeping only; S(V) does not depend on it.
    """

    s0: float
    v0: float
    temperature_fixed: float = 1.0

    def __post_init__(self) -> None:
        if math.isnan(self.s0) or self.s0 == math.inf:
            raise ValueError(f"s0 must be finite or -inf, got {self.s0!r}")
        if not (math.isfinite(self.v0) and self.v0 > 0.0):
            raise ValueError(f"v0 must be positive and finite, got {self.v0!r}")
        if not (math.isfinite(self.temperature_fixed) and self.temperature_fixed > 0.0):
            raise ValueError(
                f"temperature_fixed must be positive, got {self.temperature_fixed!r}"
            )

    @property
    def has_finite_entropy(self) -> bool:
        return math.isfinite(self.s0)


@dataclass(frozen=True)
class DualityPoint:
    """A single physical point seen from both sides of the substitution.

    The imaginary time tau and the temperature T describe the same state,
    linked by tau * k_B * T = hbar.
    """

    imaginary_time: float
    temperature: float

    def __post_init__(self) -> None:
        for name in ("imaginary_time", "temperature"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")

    def residual(self, u: UnitSystem) -> float:
        """Relative defect of tau * k_B * T = hbar; zero up to rounding."""
        return self.imaginary_time * u.k_boltzmann * self.temperature / u.hbar - 1.0


def ideal_gas_entropy(v: float, fe: FundamentalEquation, u: UnitSystem) -> float:
    """S(V) = S0 + k_B ln(V/V0); returns -inf in the formal S0 = -inf limit."""
    if not (math.isfinite(v) and v > 0.0):
        raise ValueError(f"volume must be positive and finite, got {v!r}")
    if not fe.has_finite_entropy:
        return NEGATIVE_INFINITE_ENTROPY
    return fe.s0 + u.k_boltzmann * math.log(v / fe.v0)


def _entropy_closed_form(n: int, u: UnitSystem) -> float:
    x = 2.0 * math.pi * n
    return 3.0 * u.k_boltzmann * (sine_integral(x) / x - 1.0)


def _entropy_quadrature(n: int, r0: float, u: UnitSystem, spec: QuadratureSpec) -> float:
    mode = radial_modes(r0, n, u)[-1]

    def integrand(r: float) -> float:
        psi = eval_radial_wavefunction(mode, r)
        return r * r * psi * psi * math.log(r / r0)

    return 3.0 * u.k_boltzmann * integrate(integrand, 0.0, r0, spec)


def entropy_expectation(
    n: int,
    r0: float,
    method: str,
    u: UnitSystem,
    quad_spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Entropy expectation in radial mode n, with the fiducial constant subtracted.

    method "closed_form" evaluates 3 k_B (Si(2 pi n)/(2 pi n) - 1); method
    "quadrature" integrates 3 k_B r^2 |psi_n|^2 ln(r/r0) over [0, r0]
    numerically. The two agree to 1e-8 k_B, and neither depends on r0: the
    fiducial radius cancels from the expectation.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    if not (math.isfinite(r0) and r0 > 0.0):
        raise ValueError(f"r0 must be positive and finite, got {r0!r}")
    if method == "closed_form":
        return _entropy_closed_form(n, u)
    if method == "quadrature":
        return _entropy_quadrature(n, r0, u, quad_spec)
    raise ValueError(f"method must be 'closed_form' or 'quadrature', got {method!r}")


def entropy_from_density(psi_squared: float, u: UnitSystem) -> float:
    """Entropy matching a probability density: S = k_B ln |psi|^2."""
    if not (math.isfinite(psi_squared) and psi_squared > 0.0):
        raise ValueError(f"psi_squared must be positive and finite, got {psi_squared!r}")
    return u.k_boltzmann * math.log(psi_squared)


def density_from_entropy(s: float, u: UnitSystem) -> float:
    """Inverse of entropy_from_density: |psi|^2 = exp(S/k_B)."""
    return boltzmann_weight_from_entropy(s, u)


_MAX_EXP_ARGUMENT = math.log(sys.float_info.max)


def boltzmann_weight_from_entropy(s: float, u: UnitSystem) -> float:
    """exp(S/k_B), the statistical weight attached to an entropy value."""
    if not math.isfinite(s):
        raise ValueError(f"entropy must be finite, got {s!r}")
    exponent = s / u.k_boltzmann
    if exponent > _MAX_EXP_ARGUMENT:
        raise EntropyOverflowError(
            f"exp({exponent:.6g}) exceeds the double-precision range"
        )
    return math.exp(exponent)


def _bisect_increasing(target: float, lo: float, hi: float) -> float:
    # sin is increasing on [lo, hi]; solve sin(x) = target.
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if math.sin(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return 0.5 * (lo + hi)


def solve_fiducial_wavenumber(
    fe: FundamentalEquation, r0: float, branch: int, u: UnitSystem
) -> float:
    """Wavenumber c solving sin(c r0)/r0 = exp(S0/(2 k_B)), branch-th root.

    In the formal S0 = -inf limit the constraint degenerates to sin(c r0) = 0
    and the roots are exactly branch * pi / r0. For finite S0 the roots are
    located by scanning the monotone half-periods of the sine in order and
    bisecting, which makes the branch indexing deterministic. There is no
    real solution once exp(S0/(2 k_B)) exceeds 1/r0.
    """
    if not (math.isfinite(r0) and r0 > 0.0):
        raise ValueError(f"r0 must be positive and finite, got {r0!r}")
    if branch < 1:
        raise ValueError(f"branch must be >= 1, got {branch!r}")

    if not fe.has_finite_entropy:
        return branch * math.pi / r0

    # compare in log space so oversized fiducial entropies cannot overflow
    log_rhs = fe.s0 / (2.0 * u.k_boltzmann)
    if log_rhs > -math.log(r0):
        raise NoRealSolution(
            f"exp(S0/(2 k_B)) = exp({log_rhs:.6g}) exceeds 1/r0 = {1.0 / r0:.6g}; "
            "the sine factor is bounded by one"
        )
    target = math.exp(log_rhs) * r0  # solve sin(x) = target with x = c * r0
    if target >= 1.0:
        # tangency (exact or by rounding): one root per period, at the maxima
        x = 0.5 * math.pi + 2.0 * math.pi * (branch - 1)
        return x / r0

    found = 0
    period = 0
    while True:
        base = 2.0 * math.pi * period
        # rising half-period [base, base + pi/2]: sin goes 0 -> 1
        found += 1
        if found == branch:
            x = _bisect_increasing(target, base, base + 0.5 * math.pi)
            return x / r0
        # falling half-period [base + pi/2, base + pi]: sin goes 1 -> 0,
        # so solve the reflected problem on the rising side
        found += 1
        if found == branch:
            x_reflected = _bisect_increasing(target, base, base + 0.5 * math.pi)
            x = base + math.pi - (x_reflected - base)
            return x / r0
        period += 1


def duality_map(tau: float, u: UnitSystem) -> DualityPoint:
    """Temperature dual to the imaginary time tau: T = hbar/(k_B tau)."""
    if not (math.isfinite(tau) and tau > 0.0):
        raise ValueError(f"tau must be positive and finite, got {tau!r}")
    return DualityPoint(imaginary_time=tau, temperature=u.hbar / (u.k_boltzmann * tau))


def duality_map_from_temperature(temperature: float, u: UnitSystem) -> DualityPoint:
    """Imaginary time dual to a temperature: tau = hbar/(k_B T)."""
    if not (math.isfinite(temperature) and temperature > 0.0):
        raise ValueError(f"temperature must be positive and finite, got {temperature!r}")
    return DualityPoint(
        imaginary_time=u.hbar / (u.k_boltzmann * temperature), temperature=temperature
    )


def real_time_phase(energy: float, t: float, u: UnitSystem) -> complex:
    """Unimodular evolution factor exp(-i E t / hbar) for a single level.

    The oscillatory real-time sum over a full spectrum is out of numerical
    scope; only this exact single-level phase is exposed.
    """
    if not math.isfinite(energy) or not math.isfinite(t):
        raise ValueError(f"energy and t must be finite, got {energy!r}, {t!r}")
    return cmath.exp(complex(0.0, -energy * t / u.hbar))


def qm_partition(levels: Sequence[EnergyLevel], tau: float, u: UnitSystem) -> float:
    """Partition sum over levels at imaginary time tau.

    Computes sum of multiplicity * exp(-E tau / hbar) in ascending energy
    order with compensated accumulation.
    """
    if not (math.isfinite(tau) and tau > 0.0):
        raise ValueError(f"tau must be positive and finite, got {tau!r}")
    if len(levels) == 0:
        raise ValueError("level list must be nonempty")
    ordered = sorted(levels, key=lambda lv: (lv.energy, lv.multiplicity))
    acc = CompensatedSum()
    for level in ordered:
        acc.add(level.multiplicity * math.exp(-level.energy * tau / u.hbar))
    return acc.value


def thermal_partition(
    levels: Sequence[EnergyLevel], temperature: float, u: UnitSystem
) -> float:
    """Boltzmann sum at temperature T, evaluated through the dual imaginary time.

    Shares the arithmetic path of qm_partition exactly, so the two sides of
    the substitution agree bit for bit whenever tau and T are duals.
    """
    tau = duality_map_from_temperature(temperature, u).imaginary_time
    return qm_partition(levels, tau, u)


def quasistatic_partition(levels: Sequence[EnergyLevel], tau: float, u: UnitSystem) -> float:
    """Ground-level contribution: dim(lowest eigenspace) * exp(-E_min tau / hbar).

    At tau = 0 this returns the lowest-level multiplicity exactly, counting
    levels that are degenerate with the minimum under the default tolerance.
    """
    if not (math.isfinite(tau) and tau >= 0.0):
        raise ValueError(f"tau must be >= 0 and finite, got {tau!r}")
    if len(levels) == 0:
        raise ValueError("level list must be nonempty")
    dim = hilbert_dim_min(expand_levels(levels), DEGENERACY_REL_TOLERANCE)
    if tau == 0.0:
        return float(dim)
    e_min = min(level.energy for level in levels)
    return dim * math.exp(-e_min * tau / u.hbar)
