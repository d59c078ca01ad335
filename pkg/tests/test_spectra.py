import math

import numpy as np
import pytest
import sympy

from spectherm import (
    Potential,
    QuadratureSpec,
    angular_modes,
    box_modes,
    eval_radial_wavefunction,
    hilbert_dim_min,
    integrate,
    kinetic_prefactor,
    natural_units,
    radial_modes,
    solve_radial_numeric,
    tensor_ground_space,
)

from oracles import (
    dirichlet_tridiagonal_eigenvalue,
    radial_overlap_mpmath,
    shooting_ground_energy,
)


def harmonic_polynomial_dimension(l: int) -> int:
    """Brute-force count of harmonic homogeneous polynomials of degree l."""
    x, y, z = sympy.symbols("x y z")
    monomials = [
        x**i * y**j * z ** (l - i - j)
        for i in range(l + 1)
        for j in range(l + 1 - i)
    ]
    coeffs = sympy.symbols(f"c0:{len(monomials)}")
    poly = sum(c * m for c, m in zip(coeffs, monomials))
    laplacian = sympy.expand(
        sympy.diff(poly, x, 2) + sympy.diff(poly, y, 2) + sympy.diff(poly, z, 2)
    )
    constraints = sympy.Poly(laplacian, x, y, z).coeffs() if laplacian != 0 else []
    solution = sympy.linsolve(constraints, coeffs)
    free = len(solution.free_symbols) if solution else 0
    return free if constraints else len(monomials)


class TestAngularModes:
    def test_l_zero_sector(self, u):
        modes = angular_modes(0, u)
        assert len(modes) == 1
        assert modes[0].l == 0
        assert modes[0].kinetic_energy == 0.0
        assert modes[0].degeneracy == 1

    def test_l_one_energy(self, u):
        assert angular_modes(1, u)[1].kinetic_energy == 2.0

    @pytest.mark.parametrize("l", [1, 2])
    def test_degeneracy_matches_harmonic_polynomial_count(self, u, l):
        assert angular_modes(l, u)[l].degeneracy == harmonic_polynomial_dimension(l)

    def test_degeneracies_are_odd_integers(self, u):
        for mode in angular_modes(6, u):
            assert mode.degeneracy == 2 * mode.l + 1

    def test_energies_nonnegative_and_increasing(self, u):
        modes = angular_modes(8, u)
        energies = [m.kinetic_energy for m in modes]
        assert all(e >= 0.0 for e in energies)
        assert energies == sorted(energies)

    def test_negative_l_max_rejected(self, u):
        with pytest.raises(ValueError):
            angular_modes(-1, u)


class TestRadialModes:
    def test_ground_mode_unit_ball(self, u):
        mode = radial_modes(1.0, 1, u)[0]
        assert mode.wavenumber == math.pi
        assert mode.kinetic_energy == pytest.approx(math.pi**2, rel=1e-15)

    def test_wavenumber_substitution(self, u):
        mode = radial_modes(2.0, 3, u)[2]
        assert mode.wavenumber == pytest.approx(3.0 * math.pi / 2.0, rel=1e-15)

    def test_energy_ratios_are_squares(self, u):
        modes = radial_modes(0.7, 6, u)
        e1 = modes[0].kinetic_energy
        for mode in modes:
            assert mode.kinetic_energy / e1 == pytest.approx(mode.n**2, rel=1e-12)

    def test_validation(self, u):
        with pytest.raises(ValueError):
            radial_modes(0.0, 3, u)
        with pytest.raises(ValueError):
            radial_modes(1.0, 0, u)


class TestRadialWavefunction:
    def test_midpoint_value(self, u):
        mode = radial_modes(1.0, 1, u)[0]
        assert eval_radial_wavefunction(mode, 0.5) == pytest.approx(
            2.0 * math.sqrt(2.0), rel=1e-15
        )

    def test_vanishes_at_boundary(self, u):
        mode = radial_modes(1.0, 1, u)[0]
        assert abs(eval_radial_wavefunction(mode, 1.0)) < 1e-14

    @pytest.mark.parametrize("r", [0.0, -0.5, 1.0 + 1e-12])
    def test_domain_enforced(self, u, r):
        mode = radial_modes(1.0, 1, u)[0]
        with pytest.raises(ValueError):
            eval_radial_wavefunction(mode, r)

    @pytest.mark.parametrize("n", [1, 2, 3])
    @pytest.mark.parametrize("r0", [0.5, 1.0, 2.0])
    def test_normalization(self, u, n, r0):
        mode = radial_modes(r0, n, u)[n - 1]

        def integrand(r):
            psi = eval_radial_wavefunction(mode, r)
            return r * r * psi * psi

        value = integrate(integrand, 0.0, r0, QuadratureSpec(1e-11, 60))
        assert value == pytest.approx(1.0, abs=1e-10)

    def test_orthonormality_gram(self, u):
        # r^2-weighted overlaps of the first five modes form the identity
        for r0 in (0.5, 1.0, 2.0):
            modes = radial_modes(r0, 5, u)
            for i, mi in enumerate(modes):
                for j, mj in enumerate(modes):
                    if j < i:
                        continue

                    def integrand(r):
                        return (
                            r
                            * r
                            * eval_radial_wavefunction(mi, r)
                            * eval_radial_wavefunction(mj, r)
                        )

                    value = integrate(integrand, 0.0, r0, QuadratureSpec(1e-10, 60))
                    expected = 1.0 if i == j else 0.0
                    assert abs(value - expected) < 1e-8

    def test_overlap_matches_mpmath(self, u):
        modes = radial_modes(2.0, 3, u)

        def integrand(r):
            return (
                r
                * r
                * eval_radial_wavefunction(modes[0], r)
                * eval_radial_wavefunction(modes[2], r)
            )

        ours = integrate(integrand, 0.0, 2.0, QuadratureSpec(1e-11, 60))
        assert ours == pytest.approx(radial_overlap_mpmath(1, 3, 2.0), abs=1e-10)


class TestNumericSolver:
    def test_matches_discrete_eigenvalue_formula(self, u):
        spectrum = solve_radial_numeric(1.0, 2000, 5, u)
        for k in range(1, 6):
            exact = dirichlet_tridiagonal_eigenvalue(k, 2000)
            assert spectrum.energies[k - 1] == pytest.approx(exact, rel=1e-8)

    def test_converges_to_continuum_ground_energy(self, u):
        spectrum = solve_radial_numeric(1.0, 2000, 1, u)
        assert spectrum.energies[0] == pytest.approx(math.pi**2, rel=1e-4)

    def test_five_lowest_match_analytic(self, u):
        spectrum = solve_radial_numeric(1.0, 2000, 5, u)
        for mode in radial_modes(1.0, 5, u):
            numeric = spectrum.energies[mode.n - 1]
            assert abs(numeric - mode.kinetic_energy) / mode.kinetic_energy < 1e-4

    def test_energy_ratios(self, u):
        spectrum = solve_radial_numeric(1.0, 2000, 5, u)
        for n in range(1, 6):
            ratio = spectrum.energies[n - 1] / spectrum.energies[0]
            assert ratio == pytest.approx(n**2, rel=1e-5)

    def test_second_order_convergence(self, u):
        errors = []
        for grid_points in (251, 501, 1001, 2001):
            spectrum = solve_radial_numeric(1.0, grid_points, 1, u)
            errors.append(abs(spectrum.energies[0] - math.pi**2))
        for coarse, fine in zip(errors, errors[1:]):
            assert 3.5 < coarse / fine < 4.5

    def test_scaled_domain_and_units(self):
        from spectherm import UnitSystem

        u2 = UnitSystem(hbar=2.0, k_boltzmann=1.0, mass=1.0)
        r0 = 2.0
        spectrum = solve_radial_numeric(r0, 1500, 1, u2)
        expected = kinetic_prefactor(u2) * (math.pi / r0) ** 2
        assert spectrum.energies[0] == pytest.approx(expected, rel=1e-5)

    def test_constant_potential_shifts_spectrum(self, u):
        free = solve_radial_numeric(1.0, 600, 4, u)
        shifted = solve_radial_numeric(
            1.0, 600, 4, u, potential=Potential.from_callable(lambda r: 5.0)
        )
        assert np.allclose(shifted.energies - free.energies, 5.0, atol=1e-8)

    def test_sampled_zero_potential_equals_free(self, u):
        free = solve_radial_numeric(1.0, 400, 3, u)
        sampled = solve_radial_numeric(
            1.0, 400, 3, u, potential=Potential.from_samples([0.0] * 400)
        )
        assert np.array_equal(free.energies, sampled.energies)
        assert np.array_equal(free.modes, sampled.modes)

    @pytest.mark.parametrize(
        "well", [lambda r: r, lambda r: r * r, lambda r: 5.0 * r]
    )
    def test_confining_potential_keeps_ground_state_simple(self, u, well):
        spectrum = solve_radial_numeric(
            1.0, 800, 6, u, potential=Potential.from_callable(well)
        )
        assert hilbert_dim_min(list(spectrum.energies)) == 1

    def test_potential_ground_energy_matches_shooting_method(self, u):
        well = lambda r: r * r
        spectrum = solve_radial_numeric(
            1.0, 3000, 1, u, potential=Potential.from_callable(well)
        )
        reference = shooting_ground_energy(well, math.pi**2, math.pi**2 + 1.0)
        assert spectrum.energies[0] == pytest.approx(reference, rel=1e-6)

    def test_eigenpairs_satisfy_difference_equation(self, u):
        well = lambda r: 3.0 * r
        spectrum = solve_radial_numeric(
            1.0, 400, 3, u, potential=Potential.from_callable(well)
        )
        h = spectrum.spacing
        r = spectrum.grid
        for k in range(3):
            mode = spectrum.modes[k]
            energy = spectrum.energies[k]
            interior = slice(1, -1)
            second_diff = (mode[:-2] - 2.0 * mode[1:-1] + mode[2:]) / (h * h)
            residual = -second_diff + well(r[interior]) * mode[interior] - energy * mode[interior]
            assert np.max(np.abs(residual)) < 1e-6 * abs(energy)

    def test_mode_vectors_normalized_and_pinned(self, u):
        spectrum = solve_radial_numeric(1.0, 500, 3, u)
        h = spectrum.spacing
        for k in range(3):
            mode = spectrum.modes[k]
            assert mode[0] == 0.0 and mode[-1] == 0.0
            assert np.sum(mode**2) * h == pytest.approx(1.0, abs=1e-12)
            assert mode[1] > 0.0  # deterministic sign convention

    def test_ground_mode_shape_matches_sine(self, u):
        spectrum = solve_radial_numeric(1.0, 500, 1, u)
        r = spectrum.grid[1:-1]
        expected = math.sqrt(2.0) * np.sin(math.pi * r)
        assert np.max(np.abs(spectrum.modes[0][1:-1] - expected)) < 1e-4

    def test_energies_ascending(self, u):
        spectrum = solve_radial_numeric(1.0, 300, 8, u)
        assert np.all(np.diff(spectrum.energies) > 0.0)

    def test_deterministic_across_calls(self, u):
        first = solve_radial_numeric(1.0, 700, 4, u)
        second = solve_radial_numeric(1.0, 700, 4, u)
        assert np.array_equal(first.energies, second.energies)
        assert np.array_equal(first.modes, second.modes)

    def test_nonfinite_potential_rejected(self, u):
        with pytest.raises(ValueError):
            solve_radial_numeric(
                1.0, 50, 2, u,
                potential=Potential.from_callable(
                    lambda r: math.inf if r > 0.5 else 0.0
                ),
            )

    def test_sample_count_must_match_grid(self, u):
        with pytest.raises(ValueError):
            solve_radial_numeric(
                1.0, 50, 2, u, potential=Potential.from_samples([0.0] * 49)
            )

    def test_grid_too_coarse(self, u):
        with pytest.raises(ValueError):
            solve_radial_numeric(1.0, 2, 1, u)

    def test_k_lowest_bounds(self, u):
        with pytest.raises(ValueError):
            solve_radial_numeric(1.0, 10, 9, u)
        with pytest.raises(ValueError):
            solve_radial_numeric(1.0, 10, 0, u)

    def test_potential_requires_exactly_one_source(self):
        with pytest.raises(ValueError):
            Potential()
        with pytest.raises(ValueError):
            Potential(func=lambda r: 0.0, samples=(0.0,))


class TestHilbertDimMin:
    def test_free_ball_ground_space(self, u):
        energies = [m.kinetic_energy for m in radial_modes(1.0, 8, u)]
        assert hilbert_dim_min(energies) == 1

    def test_sphere_kernel(self, u):
        expanded = [
            m.kinetic_energy for m in angular_modes(4, u) for _ in range(m.degeneracy)
        ]
        assert hilbert_dim_min(expanded) == 1

    def test_cube_first_excited_level(self, u):
        energies = [m.kinetic_energy for m in box_modes(1.0, 3, 3, u)]
        assert hilbert_dim_min(energies[1:]) == 3

    def test_all_equal(self):
        assert hilbert_dim_min([5.0, 5.0, 5.0]) == 3

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            hilbert_dim_min([])

    def test_tolerance_validated(self):
        with pytest.raises(ValueError):
            hilbert_dim_min([1.0], rel_tolerance=0.0)


class TestBoxModes:
    def test_ground_state_cube(self, u):
        modes = box_modes(1.0, 3, 2, u)
        assert modes[0].quantum_numbers == (1, 1, 1)
        assert modes[0].kinetic_energy == pytest.approx(3.0 * math.pi**2, rel=1e-14)

    def test_ground_state_unique(self, u):
        energies = [m.kinetic_energy for m in box_modes(1.0, 3, 2, u)]
        assert hilbert_dim_min(energies) == 1

    def test_one_dimensional_box_equals_radial_spectrum(self, u):
        box = box_modes(1.0, 1, 5, u)
        radial = radial_modes(1.0, 5, u)
        for bm, rm in zip(box, radial):
            assert bm.kinetic_energy == pytest.approx(rm.kinetic_energy, rel=1e-14)

    def test_degenerate_levels_in_lexicographic_order(self, u):
        modes = box_modes(1.0, 3, 2, u)
        first_excited = [m.quantum_numbers for m in modes[1:4]]
        assert first_excited == [(1, 1, 2), (1, 2, 1), (2, 1, 1)]

    def test_energies_sorted(self, u):
        modes = box_modes(2.0, 2, 4, u)
        energies = [m.kinetic_energy for m in modes]
        assert energies == sorted(energies)

    def test_mode_count(self, u):
        assert len(box_modes(1.0, 3, 3, u)) == 27

    def test_validation(self, u):
        with pytest.raises(ValueError):
            box_modes(0.0, 3, 2, u)
        with pytest.raises(ValueError):
            box_modes(1.0, 0, 2, u)
        with pytest.raises(ValueError):
            box_modes(1.0, 3, 0, u)


class TestTensorGroundSpace:
    @pytest.mark.parametrize("a,r,expected", [(1, 1, 1), (1, 3, 3), (2, 2, 4)])
    def test_products(self, a, r, expected):
        assert tensor_ground_space(a, r) == expected

    def test_validation(self):
        with pytest.raises(ValueError):
            tensor_ground_space(0, 1)
        with pytest.raises(ValueError):
            tensor_ground_space(1, -2)


def test_all_mode_families_have_nonnegative_energies(u):
    assert all(m.kinetic_energy >= 0.0 for m in angular_modes(6, u))
    assert all(m.kinetic_energy >= 0.0 for m in radial_modes(0.3, 6, u))
    assert all(m.kinetic_energy >= 0.0 for m in box_modes(1.5, 2, 4, u))
    spectrum = solve_radial_numeric(1.0, 200, 5, natural_units())
    assert np.all(spectrum.energies >= 0.0)
