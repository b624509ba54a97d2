"""Tests for model charts, geodesic flow, comparison checks and primitives."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from jetex import PreconditionError, UnsupportedGeometryError
from jetex.geom import (
    GeodesicState,
    admissible_a,
    constant_curvature,
    curvature_radius,
    exp_differential,
    frame_orthonormality,
    gauss_lemma_check,
    gaussian_bump,
    geodesic,
    gronwall_batch,
    gronwall_bounds_check,
    inversion_radius,
    jacobi_field,
    metric_equivalence_check,
    parse_model,
    perturbed_flat,
    poincare_primitive,
    primitive_one_form,
    random_exact_form,
    rauch_bound,
    rauch_deviation_check,
    sample_tangent_ball,
    surface_of_revolution,
)


@pytest.fixture
def sphere():
    return constant_curvature(1.0)


@pytest.fixture
def hyperbolic():
    return constant_curvature(-1.0)


@pytest.fixture
def flat():
    return constant_curvature(0.0)


# =============================================================================
# Models
# =============================================================================


class TestModels:
    """Tests for the model constructors and parse_model."""

    def test_constant_curvature_at_origin(self, sphere):
        assert_allclose(sphere.metric(np.zeros(2)), np.eye(2))
        assert sphere.curvature(np.array([0.5, -0.2])) == 1.0
        assert sphere.k_bound == 1.0
        assert sphere.label == "sphere:1"

    def test_orthonormal_frame(self, hyperbolic):
        x = np.array([0.4, -0.3])
        frame = hyperbolic.orthonormal_frame(x)
        assert_allclose(frame.T @ hyperbolic.metric(x) @ frame, np.eye(2), atol=1e-12)

    def test_dimension_three(self):
        model = constant_curvature(1.0, dim=3)
        assert model.dim == 3
        assert model.label == "sphere:1:3"

    def test_unsupported_dimension(self):
        with pytest.raises(UnsupportedGeometryError, match="dimension 2 or 3"):
            constant_curvature(1.0, dim=4)

    def test_radius_beyond_hyperbolic_chart(self):
        with pytest.raises(PreconditionError, match="chart boundary"):
            constant_curvature(-1.0, radius=2.5)

    def test_revolution_curvature_and_derivatives(self):
        surface = surface_of_revolution([1.0, 0.1])
        # K(r) = -0.6 / (1 + 0.1 r^2)
        assert surface.curvature(np.zeros(2)) == pytest.approx(-0.6)
        assert surface.curvature(np.array([0.5, 0.0])) == pytest.approx(-0.6 / 1.025)
        assert surface.curvature_norm(np.zeros(2), 1) == pytest.approx(0.0, abs=1e-12)
        assert surface.curvature_norm(np.zeros(2), 2) == pytest.approx(0.12)

    def test_revolution_profile_needs_unit_constant(self):
        with pytest.raises(PreconditionError, match="Q\\(0\\) = 1"):
            surface_of_revolution([2.0, 0.1])

    def test_perturbed_flat_finite_differences(self):
        model = perturbed_flat(gaussian_bump(0.1, 0.5))
        assert model.fd_error < 1e-6
        # K(0) = -exp(-2 h(0)) Laplacian(h)(0) = exp(-2 A) 2 A / w^2
        assert model.curvature(np.zeros(2)) == pytest.approx(0.8 * math.exp(-0.2), rel=1e-6)
        assert model.curvature_norm(np.zeros(2), 1) == pytest.approx(0.0, abs=1e-6)

    def test_perturbed_flat_has_no_second_derivatives(self):
        model = perturbed_flat(gaussian_bump())
        with pytest.raises(UnsupportedGeometryError, match="order 2"):
            model.curvature_norm(np.zeros(2), 2)

    def test_parse_model(self):
        assert parse_model("hyperbolic:2").curvature(np.zeros(2)) == -2.0
        assert parse_model("sphere:1:3").dim == 3
        assert parse_model("flat").kind == "flat"
        assert parse_model("revolution:0.1").curvature(np.zeros(2)) == pytest.approx(-0.6)
        assert parse_model("bump:0.1:0.5").kind == "perturbed"

    def test_parse_model_unknown(self):
        with pytest.raises(ValueError, match="Unknown model"):
            parse_model("torus")

    def test_parse_model_malformed(self):
        with pytest.raises(ValueError, match="Malformed"):
            parse_model("sphere:x")


# =============================================================================
# Geodesics and Jacobi fields
# =============================================================================


class TestGeodesic:
    """Tests for geodesic integration."""

    def test_flat_straight_line(self, flat):
        u = np.array([0.6, 0.8])
        path = geodesic(flat, np.array([0.1, 0.2]), u, 2.0)
        assert_allclose(path.position, np.array([0.1, 0.2]) + np.outer(path.t, u), atol=1e-10)
        assert isinstance(path.final, GeodesicState)

    def test_sphere_antipode(self, sphere):
        # (2, 0) lies on the equator of the stereographic chart; its antipode is (-2, 0)
        start = np.array([2.0, 0.0])
        u = np.array([-2.0, 0.0])  # |u|_g = 1 since g = I / 4 there
        path = geodesic(sphere, start, u, math.pi)
        assert_allclose(path.final.position, [-2.0, 0.0], atol=1e-8)

    def test_hyperbolic_distance(self, hyperbolic):
        T = 1.3
        path = geodesic(hyperbolic, np.zeros(2), np.array([0.0, 1.0]), T)
        distance = 2.0 * math.atanh(float(np.linalg.norm(path.final.position)) / 2.0)
        assert distance == pytest.approx(T, abs=1e-8)

    def test_speed_and_frame_preserved(self, hyperbolic):
        path = geodesic(hyperbolic, np.zeros(2), np.array([1.0, 0.0]), 1.0)
        assert path.speed_drift < 1e-8
        assert path.frame_drift < 1e-8

    def test_velocity_must_be_unit(self, sphere):
        with pytest.raises(PreconditionError, match="Initial velocity"):
            geodesic(sphere, np.zeros(2), np.array([2.0, 0.0]), 1.0)

    def test_negative_time(self, sphere):
        with pytest.raises(PreconditionError, match="nonnegative"):
            geodesic(sphere, np.zeros(2), np.array([1.0, 0.0]), -1.0)

    def test_leaving_the_chart(self):
        # f(r) = r - r^3 / 2 closes up at r = sqrt(2)
        surface = surface_of_revolution([1.0, -0.5])
        with pytest.raises(PreconditionError, match="Geodesic"):
            geodesic(surface, np.zeros(2), np.array([1.0, 0.0]), 2.0)


class TestJacobiField:
    """Tests for Jacobi fields in the parallel frame."""

    def test_flat_is_linear(self, flat):
        v = np.array([0.3, -0.2])
        fields = jacobi_field(flat, np.zeros(2), np.array([1.0, 0.0]), v, 1.5)
        assert_allclose(fields.values[:, :, 0], np.outer(fields.geodesic.t, v), atol=1e-10)

    def test_sphere_sine(self, sphere):
        fields = jacobi_field(sphere, np.zeros(2), np.array([1.0, 0.0]), np.array([0.0, 1.0]), 2.0)
        assert_allclose(fields.norms[:, 0], np.sin(fields.geodesic.t), atol=1e-8)

    def test_hyperbolic_sinh(self, hyperbolic):
        fields = jacobi_field(
            hyperbolic, np.zeros(2), np.array([1.0, 0.0]), np.array([0.0, 1.0]), 1.0
        )
        assert_allclose(fields.norms[:, 0], np.sinh(fields.geodesic.t), atol=1e-8)

    def test_sphere_dimension_three(self):
        model = constant_curvature(1.0, dim=3)
        fields = jacobi_field(model, np.zeros(3), np.eye(3)[0], np.eye(3)[2], 1.0)
        assert_allclose(fields.norms[:, 0], np.sin(fields.geodesic.t), atol=1e-8)

    def test_several_fields(self, sphere):
        fields = jacobi_field(sphere, np.zeros(2), np.array([1.0, 0.0]), np.eye(2), 1.0)
        assert fields.values.shape == (65, 2, 2)
        # The radial field is not bent
        assert_allclose(fields.norms[:, 0], fields.geodesic.t, atol=1e-8)
        assert fields.state(-1, 1).value[1] == pytest.approx(math.sin(1.0), abs=1e-8)

    def test_wrong_field_shape(self, sphere):
        with pytest.raises(PreconditionError, match="frame components"):
            jacobi_field(sphere, np.zeros(2), np.array([1.0, 0.0]), np.ones(3), 1.0)


class TestExpDifferential:
    """Tests for exp_differential and the Gauss lemma."""

    def test_identity_at_origin(self, sphere):
        assert_allclose(exp_differential(sphere, np.zeros(2), np.zeros(2)), np.eye(2))

    def test_sphere_singular_values(self, sphere):
        matrix = exp_differential(sphere, np.zeros(2), np.array([1.0, 0.0]))
        assert_allclose(np.linalg.svd(matrix, compute_uv=False), [1.0, math.sin(1.0)], atol=1e-8)

    def test_hyperbolic_singular_values(self, hyperbolic):
        matrix = exp_differential(hyperbolic, np.zeros(2), np.array([0.0, 1.0]))
        singular_values = np.linalg.svd(matrix, compute_uv=False)
        assert_allclose(singular_values, [math.sinh(1.0), 1.0], atol=1e-8)

    @pytest.mark.parametrize("spec", ["sphere:1", "hyperbolic:1", "revolution:0.1", "bump:0.1:0.5"])
    def test_gauss_lemma(self, spec):
        model = parse_model(spec)
        report = gauss_lemma_check(model, np.zeros(2), np.array([0.5, 0.3]))
        assert report["holds"], report

    def test_frame_orthonormality_away_from_origin(self, sphere):
        m = np.array([0.3, 0.2])
        u = sphere.orthonormal_frame(m)[:, 0]
        assert frame_orthonormality(sphere, m, u, 1.0)["holds"]


# =============================================================================
# Comparison checks
# =============================================================================


class TestGronwall:
    """Tests for the sin/sinh bounds of v'' = q v."""

    def test_q_equal_k_saturates_upper(self):
        report = gronwall_bounds_check(lambda t: 1.0, k=1.0)
        assert report["upper_gap"] < 1e-8
        assert report["holds"]

    def test_q_equal_minus_k_saturates_lower(self):
        report = gronwall_bounds_check(lambda t: -1.0, k=1.0)
        assert report["lower_gap"] < 1e-8
        assert report["holds"]

    def test_zero_curvature_strictly_between(self):
        report = gronwall_bounds_check(lambda t: 0.0, k=1.0, A=2.0)
        assert report["lower_margin"] >= 0.0
        assert report["upper_margin"] >= 0.0
        assert report["lower_gap"] > 1e-3
        assert report["upper_gap"] > 1e-3

    def test_time_past_first_zero(self):
        with pytest.raises(PreconditionError, match="pi/sqrt"):
            gronwall_bounds_check(lambda t: 0.0, k=1.0, T=4.0)

    def test_nonpositive_slope(self):
        with pytest.raises(PreconditionError, match="A > 0"):
            gronwall_bounds_check(lambda t: 0.0, k=1.0, A=0.0)

    @pytest.mark.parametrize("k", [0.1, 1.0, 10.0])
    def test_random_batch(self, k):
        report = gronwall_batch(k, n_samples=40, seed=3)
        assert report["holds"]
        assert report["count"] == 40

    @pytest.mark.slow
    def test_full_batch(self):
        assert gronwall_batch(1.0, n_samples=1000, seed=0)["holds"]


class TestRauch:
    """Tests for the deviation of T_x exp from the identity."""

    def test_rauch_bound_values(self):
        assert rauch_bound(1.0, 1.0) == pytest.approx(math.sinh(1.0) - 1.0)
        assert rauch_bound(0.0, 1.0) == 0.0

    def test_flat_deviation_is_zero(self, flat):
        xs = sample_tangent_ball(2, 1.0, 10, seed=0)
        report = rauch_deviation_check(flat, np.zeros(2), xs, k_bound=1.0)
        assert max(report["deviations"]) < 1e-10
        assert report["holds"]

    def test_sphere_unit_vector(self, sphere):
        report = rauch_deviation_check(sphere, np.zeros(2), np.array([[1.0, 0.0]]))
        assert report["deviations"][0] == pytest.approx(1.0 - math.sin(1.0), abs=1e-8)
        assert report["bounds"][0] == pytest.approx(math.sinh(1.0) - 1.0)
        assert report["holds"]

    def test_hyperbolic_saturates(self, hyperbolic):
        report = rauch_deviation_check(hyperbolic, np.zeros(2), np.array([[0.0, 1.0]]))
        assert abs(report["deviations"][0] - report["bounds"][0]) < 1e-6
        assert report["holds"]

    def test_curvature_hypothesis_checked(self, sphere):
        report = rauch_deviation_check(sphere, np.zeros(2), np.array([[0.5, 0.0]]), k_bound=0.5)
        assert not report["curvature_ok"]
        assert not report["holds"]

    @pytest.mark.slow
    @pytest.mark.parametrize("spec", ["flat", "sphere:1", "hyperbolic:1"])
    def test_random_samples(self, spec):
        model = parse_model(spec)
        xs = sample_tangent_ball(2, 1.0, 1000, seed=11)
        report = rauch_deviation_check(model, np.zeros(2), xs, k_bound=max(model.k_bound, 1.0))
        assert report["holds"], report["max_violation"]


class TestCurvatureRadius:
    """Tests for curvature_radius and admissible_a."""

    def test_constant_curvature_closed_form(self, sphere):
        assert curvature_radius(sphere, np.zeros(2))["radius"] == pytest.approx(0.1)

    def test_doubling_curvature(self):
        r1 = curvature_radius(constant_curvature(-1.0), np.zeros(2))["radius"]
        r2 = curvature_radius(constant_curvature(-2.0), np.zeros(2))["radius"]
        assert r1 / r2 == pytest.approx(math.sqrt(2.0))

    def test_flat_is_capped(self, flat):
        with pytest.warns(UserWarning, match="capped"):
            report = curvature_radius(flat, np.zeros(2))
        assert report["capped"]
        assert report["radius"] == flat.radius

    def test_revolution_bisection(self):
        surface = surface_of_revolution([1.0, 0.1])
        report = curvature_radius(surface, np.zeros(2), max_order=1)
        assert not report["capped"]
        r = report["radius"]
        assert 0.0 < r < 1.0
        assert r**2 * 0.6 < 1e-2
        # Near the sup: slightly larger balls fail
        assert (1.01 * r) ** 2 * 0.6 > 1e-2 * 0.99

    def test_convention_recorded(self, sphere):
        assert "2-planes" in curvature_radius(sphere, np.zeros(2))["convention"]

    def test_admissible_a(self):
        report = admissible_a()
        assert report["a"] == 1
        assert report["ratio"] == pytest.approx(math.sinh(0.1) / 0.1)
        assert report["condition_1"] and report["condition_2"]
        assert report["a0_ratio"] == pytest.approx(math.sinh(1.0))
        assert report["a0_admissible"]


class TestMetricEquivalence:
    """Tests for eigenvalues of the pulled-back metric."""

    def test_flat(self, flat):
        report = metric_equivalence_check(flat, np.zeros(2), 0.5)
        assert report["min_eigenvalue"] == pytest.approx(1.0)
        assert report["max_eigenvalue"] == pytest.approx(1.0)

    def test_sphere(self, sphere):
        report = metric_equivalence_check(sphere, np.zeros(2), 0.1)
        assert report["min_eigenvalue"] == pytest.approx(math.sin(0.1) ** 2 / 0.01, rel=1e-7)
        assert report["holds"]

    def test_hyperbolic(self, hyperbolic):
        report = metric_equivalence_check(hyperbolic, np.zeros(2), 0.1)
        assert report["max_eigenvalue"] == pytest.approx(math.sinh(0.1) ** 2 / 0.01, rel=1e-7)
        assert report["holds"]

    def test_curvature_radius_ball(self, sphere):
        radius = curvature_radius(sphere, np.zeros(2))["radius"]
        assert metric_equivalence_check(sphere, np.zeros(2), radius)["holds"]


# =============================================================================
# Primitives
# =============================================================================


def _quadratic(x):
    return x + x**2 / 2


class TestInversionRadius:
    """Tests for inversion_radius."""

    def test_quadratic(self):
        report = inversion_radius(_quadratic, 0.0, 1.0, n_pairs=2000)
        assert report["rho"] == pytest.approx(1 / 6, rel=1e-6)
        assert not report["capped"]
        assert report["injective"]

    def test_scaling(self):
        report = inversion_radius(lambda x: 3.0 * _quadratic(x), 0.0, 1.0, n_pairs=500)
        assert report["rho"] == pytest.approx(1 / 6, rel=1e-6)

    def test_linear_is_capped(self):
        matrix = np.array([[2.0, 1.0], [0.0, 1.0]])
        with pytest.warns(UserWarning, match="capped"):
            report = inversion_radius(lambda x: matrix @ x, np.zeros(2), 0.5, n_pairs=500)
        assert report["capped"]
        assert report["rho"] == 0.5
        assert report["injective"]

    def test_singular_differential(self):
        with pytest.raises(PreconditionError, match="singular"):
            inversion_radius(lambda x: x**2, 0.0, 1.0)


class TestPoincarePrimitive:
    """Tests for the radial primitive of closed 2-forms."""

    def test_constant_area_form(self):
        def area(x):
            return np.array([[0.0, 1.0], [-1.0, 0.0]])

        primitive = poincare_primitive(area)
        x = primitive.points[5]
        assert_allclose(primitive.values[5], [-x[1] / 2, x[0] / 2], atol=1e-14)
        assert primitive.d_residual < 1e-8
        assert primitive.holds()

    def test_zero_form(self):
        primitive = poincare_primitive(lambda x: np.zeros((2, 2)), n_points=8)
        assert np.all(primitive.values == 0.0)
        assert primitive.constant == 0.0

    @pytest.mark.parametrize("dim", [2, 3])
    def test_random_exact_form(self, dim):
        form = random_exact_form(dim, degree=2, seed=5)
        primitive = poincare_primitive(form, dim=dim, n_points=16)
        assert primitive.d_residual < 1e-8
        assert primitive.closed_residual < 1e-6
        assert primitive.constant <= primitive.radius

    def test_non_closed_form(self):
        def twisted(x):
            v = np.zeros((3, 3))
            v[0, 1], v[1, 0] = x[2], -x[2]
            return v

        with pytest.raises(PreconditionError, match="not closed"):
            poincare_primitive(twisted, dim=3, n_points=4)

    def test_primitive_at_origin_vanishes(self):
        form = random_exact_form(2, seed=1)
        assert_allclose(primitive_one_form(form, np.zeros(2)), np.zeros(2))
