"""Tests for weighted Gram systems, minimal extensions and Bergman checks."""

import math

import numpy as np
import pytest
from scipy import linalg, special

from jetex import (
    ContractError,
    IllConditionedBasisError,
    InfeasibleConstraintsError,
    NonHolomorphicError,
    PreconditionError,
    UnsupportedGeometryError,
)
from jetex.bergman import (
    BasisSpec,
    GramData,
    WeightField,
    bergman_projection,
    derivative_control,
    gram_matrix,
    minimal_jet_extension,
    orthogonality_residual,
    parse_phi,
    parseval_check,
    quadratic_phi,
    real_part_phi,
    verify_corollary_bound,
)
from jetex.jets import JetData
from jetex.model import ModelDomain, make_grid


@pytest.fixture
def disc():
    return ModelDomain.disc(1.0)


@pytest.fixture
def disc_grid(disc):
    return make_grid(disc, (32, 64))


def _off_diagonal(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix - np.diag(matrix.diagonal()))))


# =============================================================================
# Weights
# =============================================================================


class TestWeightField:
    """Test weight sampling and singular factors."""

    def test_constant_weight(self, disc_grid):
        weight = WeightField.from_function(disc_grid, 0.5)
        np.testing.assert_allclose(weight.density, math.exp(-0.5))

    def test_singular_factor_needs_excision(self, disc_grid):
        with pytest.raises(PreconditionError, match="excised"):
            WeightField.from_function(disc_grid, singular_exponent=1.0)

    def test_singular_density(self, disc):
        grid = make_grid(disc, (16, 32), excision_radius=1e-3)
        weight = WeightField.from_function(grid, singular_exponent=1.0)
        np.testing.assert_allclose(weight.density, np.abs(grid.z) ** -2.0)

    def test_log_factor_needs_small_section(self):
        grid = make_grid(ModelDomain.disc(2.0), (8, 16), excision_radius=1e-3)
        with pytest.raises(PreconditionError, match="log"):
            WeightField.from_function(grid, log_factor=True)

    def test_misaligned_phi(self, disc_grid):
        with pytest.raises(ContractError, match="samples"):
            WeightField(disc_grid, np.zeros(3))

    def test_norm_of_constant(self, disc_grid):
        weight = WeightField.from_function(disc_grid)
        assert weight.norm_squared(np.ones(len(disc_grid))) == pytest.approx(math.pi)

    def test_parse_phi(self):
        nodes = np.array([[0.5 + 0.5j]])
        assert parse_phi("zero")(nodes)[0] == 0.0
        assert parse_phi("re")(nodes)[0] == pytest.approx(0.5)
        assert parse_phi("radial:quadratic:2")(nodes)[0] == pytest.approx(1.0)
        assert parse_phi("re:smoothed")(nodes)[0] == pytest.approx(math.log(1 + math.exp(0.5)))

    def test_parse_phi_unknown(self):
        with pytest.raises(ValueError, match="Unknown weight"):
            parse_phi("cubic")


# =============================================================================
# Gram matrices
# =============================================================================


class TestGramMatrix:
    """Test Gram assembly by quadrature."""

    def test_flat_disc_monomials(self, disc, disc_grid):
        weight = WeightField.from_function(disc_grid)
        gram = gram_matrix(disc, disc_grid, weight, BasisSpec(6))
        expected = math.pi / (np.arange(7) + 1)
        np.testing.assert_allclose(gram.matrix.diagonal().real, expected, rtol=1e-12)
        assert _off_diagonal(gram.matrix) < 1e-10

    def test_radial_weight_keeps_orthogonality(self, disc, disc_grid):
        weight = WeightField.from_function(disc_grid, quadratic_phi(1.0))
        gram = gram_matrix(disc, disc_grid, weight, BasisSpec(6))
        assert _off_diagonal(gram.matrix) < 1e-10

    def test_non_radial_weight_couples_monomials(self, disc, disc_grid):
        weight = WeightField.from_function(disc_grid, real_part_phi())
        gram = gram_matrix(disc, disc_grid, weight, BasisSpec(2))
        assert abs(gram.matrix[0, 1]) > 1e-2

    def test_hermitian(self, disc, disc_grid):
        weight = WeightField.from_function(disc_grid, real_part_phi())
        gram = gram_matrix(disc, disc_grid, weight, BasisSpec(5))
        np.testing.assert_array_equal(gram.matrix, np.conj(gram.matrix).T)

    def test_ill_conditioned_basis(self):
        domain = ModelDomain.disc(0.1)
        grid = make_grid(domain, (32, 64))
        weight = WeightField.from_function(grid)
        with pytest.raises(IllConditionedBasisError, match="condition number"):
            gram_matrix(domain, grid, weight, BasisSpec(12))

    def test_weight_on_other_grid(self, disc, disc_grid):
        other = make_grid(disc, (8, 16))
        with pytest.raises(ContractError, match="different grid"):
            gram_matrix(disc, disc_grid, WeightField.from_function(other), BasisSpec(2))

    def test_jitter_warning(self):
        singular = np.array([[1.0, 1.0], [1.0, 1.0]], dtype=complex)
        gram = GramData(singular, np.inf, BasisSpec(1), np.eye(2), np.ones(2))
        with pytest.warns(UserWarning, match="jitter"):
            _, jitter = gram.factor()
        assert jitter == pytest.approx(2e-12)

    def test_projection_removes_antiholomorphic_part(self, disc, disc_grid):
        weight = WeightField.from_function(disc_grid)
        gram = gram_matrix(disc, disc_grid, weight, BasisSpec(6))
        z = disc_grid.z
        coeffs, projected = bergman_projection(gram, z**2 + np.conj(z))
        np.testing.assert_allclose(projected, z**2, atol=1e-10)
        assert abs(coeffs[2] - 1) < 1e-10
        assert orthogonality_residual(gram, np.conj(z)) < 1e-12

    def test_basis_bounds(self):
        with pytest.raises(PreconditionError, match="min_degree"):
            BasisSpec(2, min_degree=3)
        assert len(BasisSpec(3, min_degree=1)) == 3
        assert len(BasisSpec(2, dim=2)) == 6


# =============================================================================
# Minimal extension
# =============================================================================


class TestMinimalJetExtension:
    """Test least-weighted-norm interpolation of point jets."""

    def test_radial_weight_gives_taylor_polynomial(self, disc, disc_grid):
        values = [1.0, -0.5, 2j, 0.3, 1 + 1j]
        weight = WeightField.from_function(disc_grid, quadratic_phi(1.0))
        fit = minimal_jet_extension(
            disc, disc_grid, weight, JetData.at_point(values), BasisSpec(16)
        )
        expected = np.zeros(17, dtype=complex)
        expected[:5] = values
        assert np.max(np.abs(fit.coefficients - expected)) < 1e-10

    def test_flat_norm_matches_closed_form(self, disc, disc_grid):
        weight = WeightField.from_function(disc_grid)
        fit = minimal_jet_extension(
            disc, disc_grid, weight, JetData.at_point([1.0, 2.0]), BasisSpec(8)
        )
        assert fit.norm_squared == pytest.approx(math.pi * (1 + 4 / 2), rel=1e-12)
        assert fit.constraint_residual < 1e-12

    def test_zero_jet(self, disc, disc_grid):
        weight = WeightField.from_function(disc_grid, real_part_phi())
        fit = minimal_jet_extension(disc, disc_grid, weight, JetData.zeros(1, 3), BasisSpec(8))
        assert fit.norm_squared == 0.0
        assert np.all(fit.coefficients == 0)

    def test_non_radial_weight_matches_null_space_oracle(self, disc, disc_grid):
        weight = WeightField.from_function(disc_grid, real_part_phi())
        fit = minimal_jet_extension(
            disc, disc_grid, weight, JetData.at_point([1.0]), BasisSpec(10)
        )
        gram = fit.gram.matrix
        particular = np.zeros(11, dtype=complex)
        particular[0] = 1.0
        constraint = particular[None, :]
        null = linalg.null_space(constraint)
        reduced = np.conj(null).T @ gram @ null
        shift = linalg.solve(reduced, -np.conj(null).T @ gram @ particular)
        oracle = particular + null @ shift

        assert np.max(np.abs(fit.coefficients - oracle)) < 1e-8
        assert np.max(np.abs(fit.coefficients[1:])) > 1e-3

    def test_optimality_and_pythagoras(self, disc, disc_grid):
        weight = WeightField.from_function(disc_grid, real_part_phi())
        fit = minimal_jet_extension(
            disc, disc_grid, weight, JetData.at_point([1.0, -1.0, 0.5]), BasisSpec(10)
        )
        gram = fit.gram.matrix
        rng = np.random.default_rng(7)
        for _ in range(5):
            step = np.zeros(11, dtype=complex)
            step[3:] = rng.normal(size=8) + 1j * rng.normal(size=8)
            competitor = fit.coefficients + 0.1 * step
            norm_g = np.real(np.conj(competitor) @ gram @ competitor)
            gap = competitor - fit.coefficients
            norm_d = np.real(np.conj(gap) @ gram @ gap)
            assert norm_g >= fit.norm_squared - 1e-10
            assert norm_g == pytest.approx(fit.norm_squared + norm_d, rel=1e-10)

    def test_larger_weight_never_decreases_norm(self, disc, disc_grid):
        jet = JetData.at_point([1.0, 0.5j])
        basis = BasisSpec(10)

        def heavier(nodes):
            return real_part_phi()(nodes) - np.log1p(np.abs(nodes[:, 0]) ** 2)

        light = WeightField.from_function(disc_grid, real_part_phi())
        heavy = WeightField.from_function(disc_grid, heavier)
        low = minimal_jet_extension(disc, disc_grid, light, jet, basis).norm_squared
        high = minimal_jet_extension(disc, disc_grid, heavy, jet, basis).norm_squared
        assert high >= low

    def test_jet_at_off_center_point(self, disc, disc_grid):
        weight = WeightField.from_function(disc_grid)
        fit = minimal_jet_extension(
            disc, disc_grid, weight, JetData.at_point([1.0, 2.0]), BasisSpec(10), y=0.3
        )
        basis = fit.basis
        assert fit.constraint_residual < 1e-10
        assert basis.polynomial(fit.coefficients, np.array([[0.3]]))[0] == pytest.approx(1.0)

    def test_basis_too_small(self, disc, disc_grid):
        weight = WeightField.from_function(disc_grid)
        jet = JetData.at_point([1.0, 2.0, 3.0, 4.0])
        with pytest.raises(InfeasibleConstraintsError, match="rank"):
            minimal_jet_extension(disc, disc_grid, weight, jet, BasisSpec(1))

    def test_basis_missing_low_degrees(self, disc, disc_grid):
        weight = WeightField.from_function(disc_grid)
        with pytest.raises(InfeasibleConstraintsError):
            minimal_jet_extension(
                disc, disc_grid, weight, JetData.at_point([1.0, 0.0]), BasisSpec(4, min_degree=2)
            )

    def test_codimension_mismatch(self, disc, disc_grid):
        weight = WeightField.from_function(disc_grid)
        with pytest.raises(ContractError, match="codimension"):
            minimal_jet_extension(
                disc, disc_grid, weight, JetData.at_point([1.0, 0.0, 0.0], r=2), BasisSpec(4)
            )


# =============================================================================
# Point-jet extension constant
# =============================================================================


class TestCorollaryBound:
    """Test the extension constant with the weight |z - z0|^{-2(n - eps)}."""

    def test_constant_data_on_unit_disc(self, disc):
        report = verify_corollary_bound(disc, 0j, JetData.at_point([1.0]), epsilon=0.5)
        assert report["lhs"] == pytest.approx(2 * math.pi, rel=1e-6)
        assert report["rhs_frame"] == pytest.approx(2.0)
        assert report["ratio"] == pytest.approx(math.pi, rel=1e-6)

    def test_zero_jet(self, disc):
        report = verify_corollary_bound(disc, 0j, JetData.zeros(1, 2))
        assert report["lhs"] == 0.0
        assert report["ratio"] == 0.0

    def test_random_jets_stay_below_flat_constant(self, disc):
        rng = np.random.default_rng(3)
        ratios = []
        for k in range(4):
            values = rng.normal(size=k + 1) + 1j * rng.normal(size=k + 1)
            report = verify_corollary_bound(disc, 0j, JetData.at_point(values), epsilon=0.5)
            ratios.append(report["ratio"])
        assert all(math.isfinite(c) and c > 0 for c in ratios)
        assert max(ratios) <= math.pi * (1 + 1e-6)

    def test_report_fields(self, disc):
        report = verify_corollary_bound(disc, 0j, JetData.at_point([1.0, 1.0]), phi=0.3)
        assert set(report) >= {"lhs", "rhs_frame", "ratio", "basis_degree", "grid_resolution"}
        assert report["excision"] > 0

    @pytest.mark.parametrize("epsilon", [0.0, -0.5, 1.5])
    def test_epsilon_range(self, disc, epsilon):
        with pytest.raises(PreconditionError, match="epsilon"):
            verify_corollary_bound(disc, 0j, JetData.at_point([1.0]), epsilon=epsilon)

    def test_off_center_point(self, disc):
        report = verify_corollary_bound(disc, 0.3, JetData.at_point([1.0]), epsilon=0.5)
        # F = 1 is admissible: int_D |z - 0.3|^{-1} = int_0^{2 pi} R(theta) = 4 E(0.09)
        constant_norm = 4.0 * special.ellipe(0.09)
        assert 0.0 < report["lhs"] <= constant_norm * (1 + 1e-6)
        assert report["rhs_frame"] == pytest.approx(2.0)
        assert report["ratio"] == pytest.approx(report["lhs"] / 2.0)
        assert math.isfinite(report["ratio"])

    def test_off_center_is_translation_invariant(self):
        jet = JetData.at_point([1.0, 0.5])
        shifted = verify_corollary_bound(ModelDomain.disc(1.0, 0.3), 0j, jet)
        unit = verify_corollary_bound(ModelDomain.disc(1.0), -0.3, jet)
        assert shifted["ratio"] == pytest.approx(unit["ratio"], rel=1e-8)

    def test_excision_must_fit(self, disc):
        with pytest.raises(PreconditionError, match="does not fit"):
            verify_corollary_bound(disc, 1.0 - 1e-9, JetData.at_point([1.0]))

    def test_off_center_needs_disc(self):
        domain = ModelDomain.polydisc(1.0, 1.0)
        with pytest.raises(UnsupportedGeometryError, match="discs"):
            verify_corollary_bound(domain, (0.2, 0j), JetData.at_point([1.0], r=2))

    @pytest.mark.slow
    def test_bidisc_constant_is_finite(self):
        domain = ModelDomain.polydisc(1.0, 1.0)
        jet = JetData.at_point([1.0, 0.5, -0.5], r=2)
        report = verify_corollary_bound(domain, (0j, 0j), jet, epsilon=1.0, basis_degree=4)
        assert math.isfinite(report["ratio"])
        assert report["ratio"] > 0


# =============================================================================
# Parseval and derivative control
# =============================================================================


class TestParsevalCheck:
    """Test the disc Parseval identity."""

    def test_constant(self):
        report = parseval_check([1.0], 1.0)
        assert report["lhs"] == pytest.approx(math.pi, rel=1e-12)
        assert report["rhs"] == pytest.approx(math.pi, rel=1e-12)

    def test_linear(self):
        report = parseval_check([0.0, 1.0], 1.0)
        assert report["lhs"] == pytest.approx(math.pi / 2, rel=1e-12)

    def test_random_degree_eight(self):
        rng = np.random.default_rng(11)
        coeffs = rng.normal(size=9) + 1j * rng.normal(size=9)
        assert parseval_check(coeffs, 0.7)["residual"] < 1e-9

    def test_exact_constant(self):
        assert parseval_check([1.0], 0.5)["exact_constant"] == pytest.approx(math.pi / 2)

    def test_rho_positive(self):
        with pytest.raises(PreconditionError, match="rho"):
            parseval_check([1.0], 0.0)


class TestDerivativeControl:
    """Test Cauchy-type control of jets by the weighted L2 norm."""

    @pytest.mark.parametrize("k", [0, 1, 3])
    def test_monomial_ratio(self, disc_grid, k):
        weight = WeightField.from_function(disc_grid)
        report = derivative_control(disc_grid, disc_grid.z**k, weight, k, [0j])
        assert report["gamma"] == pytest.approx((k + 1) / math.pi, rel=1e-8)
        assert report["within_bound"]

    def test_constant_has_no_higher_terms(self, disc_grid):
        weight = WeightField.from_function(disc_grid)
        samples = np.full(len(disc_grid), 2.0 + 0j)
        report = derivative_control(disc_grid, samples, weight, 2, [0j, 0.4])
        np.testing.assert_allclose(report["ratios"], 1 / math.pi, rtol=1e-8)

    def test_random_polynomials_within_bound(self, disc_grid):
        weight = WeightField.from_function(disc_grid, quadratic_phi(1.0))
        rng = np.random.default_rng(5)
        points = [0j, 0.3, -0.2 + 0.4j]
        for _ in range(50):
            coeffs = rng.normal(size=7) + 1j * rng.normal(size=7)
            samples = np.polynomial.polynomial.polyval(disc_grid.z, coeffs)
            report = derivative_control(disc_grid, samples, weight, 2, points)
            assert report["within_bound"]
            assert math.isfinite(report["gamma"])

    @pytest.mark.parametrize("k", [0, 1, 3])
    def test_single_term_form_on_unit_disc(self, disc_grid, k):
        weight = WeightField.from_function(disc_grid)
        report = derivative_control(disc_grid, disc_grid.z**k, weight, k, [0j])
        # rho = 1: Const 2(1 + k) = (k + 1)(k + 2) / (2 pi) = sum_{m<=k} (m + 1) / pi
        assert report["shape_bound"] == pytest.approx((k + 1) * (k + 2) / (2 * math.pi))
        assert report["shape_bound"] == pytest.approx(report["bound"])
        assert report["oscillations"][0] == 0.0
        assert report["within_shape_bound"]

    def test_single_term_form_dominates_inside(self, disc_grid):
        weight = WeightField.from_function(disc_grid, quadratic_phi(1.0))
        samples = np.polynomial.polynomial.polyval(disc_grid.z, [1.0, -0.5, 0.25])
        report = derivative_control(disc_grid, samples, weight, 2, [0j, 0.3, -0.2 + 0.4j])
        assert np.all(report["shape_bounds"] >= report["bounds"] * (1 - 1e-12))
        assert np.all(report["oscillations"] > 0)
        assert report["within_bound"]
        assert report["within_shape_bound"]

    def test_non_holomorphic_rejected(self, disc_grid):
        weight = WeightField.from_function(disc_grid)
        with pytest.raises(NonHolomorphicError, match="not holomorphic"):
            derivative_control(disc_grid, np.conj(disc_grid.z), weight, 1, [0j])

    def test_annulus_rejected(self):
        grid = make_grid(ModelDomain.annulus(0.5, 1.0), (8, 16))
        weight = WeightField.from_function(grid)
        with pytest.raises(UnsupportedGeometryError, match="discs"):
            derivative_control(grid, grid.z, weight, 1, [0.75])

    def test_point_outside(self, disc_grid):
        weight = WeightField.from_function(disc_grid)
        with pytest.raises(PreconditionError, match="inside"):
            derivative_control(disc_grid, disc_grid.z, weight, 1, [1.5])
