"""Eigenmodes of the kinetic operator on spheres, radial intervals and boxes.

Analytic mode families:

* angular modes on the unit sphere, energies proportional to l(l+1) with
  the usual 2l+1 degeneracy;
* radial modes on [0, r0] that are regular at the origin and vanish at r0,
  which are sine modes of wavenumber n*pi/r0 divided by r;
* Cartesian box modes in d dimensions with vanishing boundary values.

A finite-difference solver covers the radial problem with an arbitrary
radial potential. Substituting u(r) = r*psi(r) removes the first-derivative
term and the coordinate singularity at r = 0, leaving a plain Dirichlet
problem -pref * u'' + U(r) u = E u on the interval, discretized by central
differences into a symmetric tridiagonal matrix whose lowest eigenpairs are
extracted by bisection with Sturm counts (bit-stable across runs).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .units import UnitSystem, kinetic_prefactor

__all__ = [
    "AngularMode",
    "RadialMode",
    "BoxMode",
    "Potential",
    "NumericSpectrum",
    "DEGENERACY_REL_TOLERANCE",
    "angular_modes",
    "radial_modes",
    "eval_radial_wavefunction",
    "box_modes",
    "solve_radial_numeric",
    "hilbert_dim_min",
    "tensor_ground_space",
]

# Energies closer to the minimum than this fraction of the spectral spread
# count as degenerate with it. Far below physical level spacings at desk
# scale, far above accumulated rounding.
DEGENERACY_REL_TOLERANCE = 1e-9


@dataclass(frozen=True)
class AngularMode:
    """One angular momentum sector on the unit sphere."""

    l: int
    kinetic_energy: float
    degeneracy: int


@dataclass(frozen=True)
class RadialMode:
    """Analytic radial mode on [0, r0] vanishing at r0."""

    n: int
    r0: float
    wavenumber: float
    kinetic_energy: float


@dataclass(frozen=True)
class BoxMode:
    """Dirichlet mode of a d-dimensional box with side `side`."""

    quantum_numbers: tuple[int, ...]
    side: float
    kinetic_energy: float


@dataclass(frozen=True)
class Potential:
    """Radial potential for the numeric solver.

    Supply either a callable evaluated at the grid nodes or explicit
    samples matching the solver grid (including both endpoints). Every
    sampled value must be finite.
    """

    func: Callable[[float], float] | None = None
    samples: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if (self.func is None) == (self.samples is None):
            raise ValueError("exactly one of func or samples must be given")

    @classmethod
    def from_callable(cls, func: Callable[[float], float]) -> "Potential":
        return cls(func=func)

    @classmethod
    def from_samples(cls, samples: Sequence[float]) -> "Potential":
        return cls(samples=tuple(float(v) for v in samples))

    def on_grid(self, r: np.ndarray) -> np.ndarray:
        """Values at the given grid nodes, validated finite."""
        if self.func is not None:
            values = np.array([float(self.func(float(ri))) for ri in r], dtype=float)
        else:
            if len(self.samples) != len(r):
                raise ValueError(
                    f"potential has {len(self.samples)} samples but the grid has {len(r)} nodes"
                )
            values = np.asarray(self.samples, dtype=float)
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise ValueError(f"potential is not finite at grid node {bad} (r={r[bad]!r})")
        return values


@dataclass(frozen=True)
class NumericSpectrum:
    """Finite-difference eigenpairs of the radial problem.

    energies are ascending. Each row of modes holds u(r) = r*psi(r) on the
    full grid (both endpoints zero), normalized so that sum(u^2) * h = 1.
    """

    r0: float
    grid_points: int
    energies: np.ndarray
    modes: np.ndarray
    grid: np.ndarray = field(repr=False)

    @property
    def spacing(self) -> float:
        return self.r0 / (self.grid_points - 1)


def angular_modes(l_max: int, u: UnitSystem) -> list[AngularMode]:
    """Angular sectors l = 0..l_max with energies pref*l(l+1) and degeneracy 2l+1."""
    if l_max < 0:
        raise ValueError(f"l_max must be >= 0, got {l_max!r}")
    pref = kinetic_prefactor(u)
    return [
        AngularMode(l=l, kinetic_energy=pref * l * (l + 1), degeneracy=2 * l + 1)
        for l in range(l_max + 1)
    ]


def radial_modes(r0: float, n_max: int, u: UnitSystem) -> list[RadialMode]:
    """Radial modes n = 1..n_max on [0, r0], ascending in energy."""
    if not (math.isfinite(r0) and r0 > 0.0):
        raise ValueError(f"r0 must be positive and finite, got {r0!r}")
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max!r}")
    pref = kinetic_prefactor(u)
    modes = []
    for n in range(1, n_max + 1):
        c = n * math.pi / r0
        modes.append(RadialMode(n=n, r0=r0, wavenumber=c, kinetic_energy=pref * c * c))
    return modes


def eval_radial_wavefunction(mode: RadialMode, r: float) -> float:
    """psi_n(r) = sqrt(2/r0) * sin(c_n r) / r for r in (0, r0].

    Normalized against the r^2 weight on [0, r0]. The value at r = r0 is
    zero up to the rounding of the sine argument.
    """
    if not (0.0 < r <= mode.r0):
        raise ValueError(f"r must lie in (0, {mode.r0!r}], got {r!r}")
    return math.sqrt(2.0 / mode.r0) * math.sin(mode.wavenumber * r) / r


def box_modes(side: float, d: int, n_max_per_axis: int, u: UnitSystem) -> list[BoxMode]:
    """All Dirichlet modes of the d-dimensional box with quantum numbers <= n_max_per_axis.

    Sorted ascending by energy; ties broken by ascending lexicographic
    order of the quantum-number tuples so the output is reproducible.
    """
    if not (math.isfinite(side) and side > 0.0):
        raise ValueError(f"side must be positive and finite, got {side!r}")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d!r}")
    if n_max_per_axis < 1:
        raise ValueError(f"n_max_per_axis must be >= 1, got {n_max_per_axis!r}")
    scale = kinetic_prefactor(u) * (math.pi / side) ** 2
    modes = [
        BoxMode(quantum_numbers=numbers, side=side,
                kinetic_energy=scale * sum(n * n for n in numbers))
        for numbers in itertools.product(range(1, n_max_per_axis + 1), repeat=d)
    ]
    modes.sort(key=lambda m: (m.kinetic_energy, m.quantum_numbers))
    return modes


def solve_radial_numeric(
    r0: float,
    grid_points: int,
    k_lowest: int,
    u: UnitSystem,
    potential: Potential | None = None,
) -> NumericSpectrum:
    """Lowest k_lowest eigenpairs of -pref*u'' + U(r)u = E u with u(0) = u(r0) = 0.

    Uniform grid of grid_points nodes spanning [0, r0], second-order central
    differences. Eigenvalues come out ascending; eigenvectors are fixed to a
    deterministic sign (positive slope at the origin) and grid-normalized.
    """
    if not (math.isfinite(r0) and r0 > 0.0):
        raise ValueError(f"r0 must be positive and finite, got {r0!r}")
    if grid_points < 3:
        raise ValueError(f"grid too coarse: need at least 3 points, got {grid_points!r}")
    if not (1 <= k_lowest < grid_points - 1):
        raise ValueError(
            f"k_lowest must satisfy 1 <= k_lowest < grid_points - 1, got {k_lowest!r}"
        )

    pref = kinetic_prefactor(u)
    grid = np.linspace(0.0, r0, grid_points)
    h = r0 / (grid_points - 1)
    interior = grid[1:-1]

    if potential is None:
        u_interior = np.zeros(grid_points - 2)
    elif potential.samples is not None:
        # samples are given on the full grid; endpoint values never enter the matrix
        u_interior = potential.on_grid(grid)[1:-1]
    else:
        u_interior = potential.on_grid(interior)

    inv_h2 = pref / (h * h)
    diagonal = 2.0 * inv_h2 + u_interior
    off_diagonal = np.full(grid_points - 3, -inv_h2)
    energies, vectors = eigh_tridiagonal(
        diagonal, off_diagonal, select="i", select_range=(0, k_lowest - 1)
    )

    modes = np.zeros((k_lowest, grid_points))
    norm = 1.0 / math.sqrt(h)
    for k in range(k_lowest):
        v = vectors[:, k]
        # deterministic sign: first appreciable component positive
        lead = v[np.argmax(np.abs(v) > 1e-12 * np.max(np.abs(v)))]
        if lead < 0.0:
            v = -v
        modes[k, 1:-1] = v * norm

    return NumericSpectrum(
        r0=r0, grid_points=grid_points, energies=energies, modes=modes, grid=grid
    )


def hilbert_dim_min(energies: Sequence[float], rel_tolerance: float = DEGENERACY_REL_TOLERANCE) -> int:
    """Dimension of the lowest-energy eigenspace in a list of energies.

    Counts entries within rel_tolerance of the minimum, measured relative
    to the spread max - min (absolute when the spread vanishes).
    """
    if len(energies) == 0:
        raise ValueError("energies must be nonempty")
    if not (rel_tolerance > 0.0):
        raise ValueError(f"rel_tolerance must be positive, got {rel_tolerance!r}")
    lowest = min(energies)
    spread = max(energies) - lowest
    threshold = rel_tolerance * spread if spread > 0.0 else rel_tolerance
    return sum(1 for e in energies if e - lowest <= threshold)


def tensor_ground_space(angular_dim: int, radial_dim: int) -> int:
    """Dimension of the product of the angular and radial ground spaces."""
    if angular_dim < 1 or radial_dim < 1:
        raise ValueError(
            f"dimensions must be >= 1, got ({angular_dim!r}, {radial_dim!r})"
        )
    return angular_dim * radial_dim
