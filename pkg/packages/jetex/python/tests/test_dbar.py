"""Tests for the Cauchy transform, minimal dbar solutions and estimate checks."""

import math

import numpy as np
import pytest

from jetex import (
    ContractError,
    NonIntegrableDataError,
    OperatorNotPositiveError,
    PreconditionError,
    UnsupportedGeometryError,
)
from jetex.bergman import BasisSpec, WeightField, quadratic_phi
from jetex.dbar import (
    CurvatureOperatorData,
    DbarProblem,
    cauchy_quadrature,
    cauchy_transform,
    dbar_residual,
    hormander_estimate_check,
    minimal_dbar_solution,
    puncture_extension_check,
    singular_weight_solve,
)
from jetex.model import ModelDomain, geometric_breakpoints, make_grid


@pytest.fixture
def disc():
    return ModelDomain.disc(1.0)


@pytest.fixture
def disc_grid(disc):
    return make_grid(disc, (32, 64))


@pytest.fixture
def shell_grid(disc):
    """Excised unit disc with a panel edge at |z| = 1/2 and dyadic panels near 0."""
    delta = 1e-3
    cuts = (*geometric_breakpoints(delta, 0.5, ratio=2.0), 0.5)
    return make_grid(disc, (16, 64), excision_radius=delta, breakpoints=cuts)


def _shell_data(grid, power: int) -> np.ndarray:
    """z^power on 1/2 < |z| < 1, zero inside."""
    z = grid.z
    return np.where(np.abs(z) > 0.5, z**power, 0.0)


def _singular_problem(grid, data, m: int) -> DbarProblem:
    weight = WeightField.from_function(grid, singular_exponent=m)
    return DbarProblem(grid.domain, grid, weight, data)


# =============================================================================
# Problems
# =============================================================================


class TestDbarProblem:
    """Test problem validation and serialization."""

    def test_scalar_data_broadcasts(self, disc_grid):
        problem = DbarProblem.on_grid(disc_grid, 1.0)
        assert problem.g.shape == (len(disc_grid),)

    def test_misaligned_data(self, disc_grid):
        with pytest.raises(ContractError, match="samples"):
            DbarProblem.on_grid(disc_grid, np.ones(5))

    def test_non_finite_data(self, disc_grid):
        data = np.ones(len(disc_grid), dtype=complex)
        data[0] = np.nan
        with pytest.raises(PreconditionError, match="finite"):
            DbarProblem.on_grid(disc_grid, data)

    def test_planar_only(self):
        grid = make_grid(ModelDomain.polydisc(1.0, 1.0), (8, 16))
        with pytest.raises(UnsupportedGeometryError, match="planar"):
            DbarProblem.on_grid(grid, 1.0)

    def test_json_round_trip(self, shell_grid, tmp_path):
        problem = _singular_problem(shell_grid, _shell_data(shell_grid, 2), 2)
        path = problem.to_json(tmp_path / "problem.json")
        loaded = DbarProblem.from_json(path)
        np.testing.assert_allclose(loaded.g, problem.g)
        np.testing.assert_allclose(loaded.grid.nodes, problem.grid.nodes)
        assert loaded.weight.singular_exponent == 2

    def test_json_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            DbarProblem.from_json(tmp_path / "absent.json")

    def test_json_malformed(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"domain": {"kind": "disc"}}')
        with pytest.raises(ContractError, match="Malformed"):
            DbarProblem.from_json(path)


# =============================================================================
# Cauchy transform
# =============================================================================


class TestCauchyTransform:
    """Test the mode-by-mode Cauchy transform."""

    def test_constant_data(self, disc_grid):
        u0 = cauchy_transform(DbarProblem.on_grid(disc_grid, 1.0))
        np.testing.assert_allclose(u0, np.conj(disc_grid.z), atol=1e-10)

    def test_zero_data(self, disc_grid):
        u0 = cauchy_transform(DbarProblem.on_grid(disc_grid, 0.0))
        assert np.all(u0 == 0)

    def test_conjugate_data(self, disc_grid):
        z = disc_grid.z
        u0 = cauchy_transform(DbarProblem.on_grid(disc_grid, np.conj(z)))
        np.testing.assert_allclose(u0, np.conj(z) ** 2 / 2, atol=1e-10)

    def test_holomorphic_mode(self, disc_grid):
        """g = z: the transform is |z|^2 - 1 plus a holomorphic part."""
        z = disc_grid.z
        u0 = cauchy_transform(DbarProblem.on_grid(disc_grid, z))
        assert dbar_residual(disc_grid, u0, z) < 1e-8

    def test_annulus(self):
        grid = make_grid(ModelDomain.annulus(0.5, 1.0), (24, 64))
        z = grid.z
        data = z * np.conj(z) ** 2
        u0 = cauchy_transform(DbarProblem.on_grid(grid, data))
        assert dbar_residual(grid, u0, data) < 1e-8

    def test_matches_direct_kernel_sum(self, disc_grid):
        """The direct sum is only accurate to the local node spacing."""
        targets = np.array([0.3 + 0.1j, -0.2 + 0.45j, 0.05j])
        direct = cauchy_quadrature(disc_grid, np.ones(len(disc_grid)), targets)
        np.testing.assert_allclose(direct, np.conj(targets), atol=0.1)

    def test_direct_sum_node_collision(self, disc_grid):
        target = disc_grid.z[100] + 1e-12
        with pytest.raises(PreconditionError, match="quadrature node"):
            cauchy_quadrature(disc_grid, np.ones(len(disc_grid)), [target])


# =============================================================================
# Minimal solutions
# =============================================================================


class TestMinimalDbarSolution:
    """Test particular solution plus weighted projection."""

    def test_constant_data(self, disc_grid):
        solution = minimal_dbar_solution(DbarProblem.on_grid(disc_grid, 1.0))
        np.testing.assert_allclose(solution.u, np.conj(disc_grid.z), atol=1e-10)
        assert solution.norm_squared == pytest.approx(math.pi / 2, rel=1e-10)

    def test_zero_data(self, disc_grid):
        solution = minimal_dbar_solution(DbarProblem.on_grid(disc_grid, 0.0))
        assert solution.norm_squared == 0.0

    def test_conjugate_data(self, disc_grid):
        z = disc_grid.z
        solution = minimal_dbar_solution(DbarProblem.on_grid(disc_grid, np.conj(z)))
        np.testing.assert_allclose(solution.u, np.conj(z) ** 2 / 2, atol=1e-10)
        assert solution.norm_squared == pytest.approx(math.pi / 12, abs=1e-5)

    def test_orthogonal_to_basis(self, disc_grid):
        z = disc_grid.z
        weight = WeightField.from_function(disc_grid, quadratic_phi(0.5))
        data = 1 + z * np.conj(z) + 2j * z**2
        solution = minimal_dbar_solution(DbarProblem.on_grid(disc_grid, data, weight))
        assert solution.orthogonality < 1e-8
        assert solution.residual < 1e-8

    def test_minimality(self, disc_grid):
        z = disc_grid.z
        weight = WeightField.from_function(disc_grid, quadratic_phi(1.0))
        problem = DbarProblem.on_grid(disc_grid, np.conj(z) + z, weight)
        solution = minimal_dbar_solution(problem)
        rng = np.random.default_rng(2)
        for _ in range(5):
            coeffs = rng.normal(size=4) + 1j * rng.normal(size=4)
            competitor = solution.u + np.polynomial.polynomial.polyval(z, coeffs)
            assert weight.norm_squared(competitor) >= solution.norm_squared - 1e-12

    def test_linearity(self, disc_grid):
        z = disc_grid.z
        first, second = np.conj(z) ** 2, 1 + z
        base = DbarProblem.on_grid(disc_grid, first)
        u1 = minimal_dbar_solution(base).u
        u2 = minimal_dbar_solution(base.with_g(second)).u
        combined = minimal_dbar_solution(base.with_g(first + 2 * second)).u
        np.testing.assert_allclose(combined, u1 + 2 * u2, atol=1e-8)


# =============================================================================
# Singular weights
# =============================================================================


class TestSingularWeightSolve:
    """Test solves against |z|^{-2m} for data supported away from the puncture."""

    def test_solution_vanishes_to_order_two(self, shell_grid):
        problem = _singular_problem(shell_grid, _shell_data(shell_grid, 2), 2)
        solution = singular_weight_solve(problem)
        assert solution.vanishing.shape == (2,)
        assert solution.max_vanishing < 1e-6
        assert solution.residual < 1e-6

    def test_zero_data(self, shell_grid):
        problem = _singular_problem(shell_grid, np.zeros(len(shell_grid)), 1)
        solution = singular_weight_solve(problem)
        assert solution.norm_squared == 0.0

    def test_higher_order_costs_more(self, shell_grid):
        data = _shell_data(shell_grid, 2)
        low = singular_weight_solve(_singular_problem(shell_grid, data, 1))
        high = singular_weight_solve(_singular_problem(shell_grid, data, 2))
        flat = WeightField.from_function(shell_grid)
        assert flat.norm_squared(high.u) > flat.norm_squared(low.u)

    def test_data_at_puncture_rejected(self, shell_grid):
        problem = _singular_problem(shell_grid, np.ones(len(shell_grid)), 1)
        with pytest.raises(NonIntegrableDataError, match="vanish"):
            singular_weight_solve(problem)

    def test_needs_integer_exponent(self, shell_grid):
        problem = _singular_problem(shell_grid, _shell_data(shell_grid, 1), 0)
        with pytest.raises(PreconditionError, match="positive integer"):
            singular_weight_solve(problem)

    def test_solution_extends_across_puncture(self, shell_grid):
        data = _shell_data(shell_grid, 2)
        solution = singular_weight_solve(_singular_problem(shell_grid, data, 2))
        report = puncture_extension_check(shell_grid, solution.u, data)
        assert report["extends"]


# =============================================================================
# Estimates
# =============================================================================


class TestHormanderEstimate:
    """Test the scalar twisted estimate."""

    def test_quadratic_weight_constant_data(self, disc_grid):
        weight = WeightField.from_function(disc_grid, quadratic_phi(1.0))
        report = hormander_estimate_check(DbarProblem.on_grid(disc_grid, 1.0, weight))
        assert report["holds"]
        assert 0 < report["ratio"] <= 1
        expected_rhs = 2 * math.pi * (1 - math.exp(-1))
        assert report["rhs"] == pytest.approx(expected_rhs, rel=1e-8)

    def test_zero_data(self, disc_grid):
        weight = WeightField.from_function(disc_grid, quadratic_phi(1.0))
        report = hormander_estimate_check(DbarProblem.on_grid(disc_grid, 0.0, weight))
        assert report["lhs"] == 0.0
        assert report["rhs"] == 0.0
        assert report["holds"]

    def test_random_batch(self, disc_grid):
        rng = np.random.default_rng(13)
        z = disc_grid.z
        for _ in range(20):
            a, b = rng.uniform(0.2, 2.0), rng.uniform(0.0, 1.0)

            def phi(nodes, a=a, b=b):
                r2 = np.abs(nodes[:, 0]) ** 2
                return a * r2 + b * r2**2

            weight = WeightField.from_function(disc_grid, phi)
            coeffs = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
            data = sum(coeffs[p, q] * z**p * np.conj(z) ** q for p in range(3) for q in range(3))
            eta, lam = rng.uniform(0.5, 2.0, size=2)
            report = hormander_estimate_check(
                DbarProblem.on_grid(disc_grid, data, weight), eta, lam, basis=BasisSpec(10)
            )
            assert report["holds"]
            assert report["ratio"] <= 1

    def test_flat_weight_not_positive(self, disc_grid):
        problem = DbarProblem.on_grid(disc_grid, 1.0)
        with pytest.raises(OperatorNotPositiveError, match="positive"):
            hormander_estimate_check(problem)

    def test_curvature_from_weight(self, disc_grid):
        weight = WeightField.from_function(disc_grid, quadratic_phi(3.0))
        curvature = CurvatureOperatorData.from_weight(weight, eta=2.0)
        np.testing.assert_allclose(curvature.b, 6.0, rtol=1e-8)

    def test_parameters_positive(self, disc_grid):
        weight = WeightField.from_function(disc_grid, quadratic_phi(1.0))
        with pytest.raises(PreconditionError, match="positive"):
            hormander_estimate_check(DbarProblem.on_grid(disc_grid, 1.0, weight), lam=0.0)


class TestPunctureExtension:
    """Test the dyadic-annulus extension criterion."""

    @pytest.fixture
    def dyadic_grid(self, disc):
        delta = 1e-4
        cuts = geometric_breakpoints(delta, 1.0, ratio=2.0)
        return make_grid(disc, (8, 32), excision_radius=delta, breakpoints=cuts)

    def test_conjugate_extends(self, dyadic_grid):
        z = dyadic_grid.z
        report = puncture_extension_check(dyadic_grid, np.conj(z), 1.0)
        assert report["slope"] == pytest.approx(4.0, abs=1e-6)
        assert report["extends"]
        assert report["residual"] < 1e-8

    def test_wrong_data_does_not_extend(self, dyadic_grid):
        report = puncture_extension_check(dyadic_grid, np.conj(dyadic_grid.z), 0.0)
        assert report["slope"] == pytest.approx(4.0, abs=1e-6)
        assert report["residual"] == pytest.approx(1.0, abs=1e-8)
        assert not report["extends"]

    def test_residual_tolerance_scales_with_data(self, dyadic_grid):
        z = dyadic_grid.z
        report = puncture_extension_check(dyadic_grid, 1e3 * np.conj(z), 1e3 + 1e-2)
        assert report["residual"] == pytest.approx(1e-2, rel=1e-4)
        assert report["extends"]

    def test_pole_flagged(self, dyadic_grid):
        report = puncture_extension_check(dyadic_grid, 1 / dyadic_grid.z)
        assert report["slope"] == pytest.approx(0.0, abs=1e-6)
        assert not report["extends"]

    def test_needs_excision(self, disc_grid):
        with pytest.raises(PreconditionError, match="excised"):
            puncture_extension_check(disc_grid, disc_grid.z)
