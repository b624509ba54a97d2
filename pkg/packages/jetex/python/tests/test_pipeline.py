"""Tests for extension problems, liftings, the induction and measured constants."""

import json
import math

import numpy as np
import pytest

from jetex import ChartCoverageError, ContractError, PreconditionError, UnsupportedGeometryError
from jetex.bump import BumpProfile
from jetex.jets import JetData
from jetex.model import ModelDomain, geometric_breakpoints, make_grid
from jetex.pipeline import (
    MIN_BATCH,
    Chart,
    ExtensionProblem,
    ExtensionResult,
    constant_batch,
    construct_extension,
    direct_minimal_extension,
    extrapolate_norms,
    jet_batch,
    measure_constant,
    polynomial_jet,
    richardson,
    run_induction,
    single_chart,
    smooth_extension,
    sweep_jet_order,
    sweep_weight_strength,
    taylor_components,
    taylor_lift,
    truncate,
    truncation_norm,
    two_charts,
)

RESOLUTION = (12, 32)


@pytest.fixture
def point_problem():
    """Setup A with the 1-jet 1 + z/2."""
    return ExtensionProblem("A", JetData.at_point([1.0, 0.5]), resolution=RESOLUTION)


@pytest.fixture
def y_grid():
    """The z2-disc grid of setup B at its default resolution."""
    return make_grid(ModelDomain.disc(1.0), (8, 16))


@pytest.fixture
def excised_grid():
    delta = 1e-3
    cuts = geometric_breakpoints(delta, 1.0, ratio=2.0)
    return make_grid(ModelDomain.disc(1.0), (16, 32), excision_radius=delta, breakpoints=cuts)


def _fake_result(problem, data_norm: float, norm_squared: float) -> ExtensionResult:
    return ExtensionResult(problem, (), data_norm, norm_squared, np.zeros((1, 1)), {})


# =============================================================================
# Problems
# =============================================================================


class TestExtensionProblem:
    """Test validation, grids and serialization of extension problems."""

    def test_setup_a(self, point_problem):
        assert point_problem.k == 1
        assert point_problem.section_scale == pytest.approx(2 * math.e)
        assert len(point_problem.y_grid) == 1
        assert point_problem.components.shape == (2, 1)

    def test_setup_b_scale(self, y_grid):
        jet = polynomial_jet("B", np.array([[1.0, 1.0]]), y_grid)
        problem = ExtensionProblem("B", jet)
        assert problem.section_scale == pytest.approx(2 * math.sqrt(2) * math.e)
        assert problem.components.shape == (1, 2)
        np.testing.assert_allclose(problem.components[0], [1.0, 1.0], atol=1e-10)

    def test_unknown_setup(self):
        with pytest.raises(PreconditionError, match="Unknown setup"):
            ExtensionProblem("C", JetData.at_point([1.0]))  # type: ignore[arg-type]

    def test_codimension_two_rejected(self):
        with pytest.raises(PreconditionError, match="codimension 1"):
            ExtensionProblem("A", JetData.at_point([1.0, 0.0, 0.0], r=2))

    def test_jet_not_on_y_grid(self):
        jet = JetData(1, 0, {(0,): np.ones(3)})
        with pytest.raises(ContractError, match="samples"):
            ExtensionProblem("A", jet)

    def test_setup_b_needs_polynomial_coefficients(self, y_grid):
        jet = JetData(1, 0, {(0,): np.abs(y_grid.z) ** 2})
        with pytest.raises(PreconditionError, match="polynomial"):
            ExtensionProblem("B", jet)

    def test_unknown_weight(self):
        with pytest.raises(ValueError, match="Unknown weight"):
            ExtensionProblem("A", JetData.at_point([1.0]), phi="cubic")

    def test_shell_outside_domain(self, point_problem):
        with pytest.raises(PreconditionError, match="outside"):
            point_problem.transversal_grid(0.5, 1e-3)

    def test_shell_collides_with_excision(self, point_problem):
        with pytest.raises(PreconditionError, match="collides"):
            point_problem.transversal_grid(1e-3, 1e-3)

    def test_shell_is_a_panel(self, point_problem):
        grid = point_problem.transversal_grid(1e-1, 1e-3)
        c = point_problem.section_scale
        edges = np.asarray(grid.polar.edges)
        assert np.min(np.abs(edges - c * 0.1)) < 1e-12
        assert np.min(np.abs(edges - c * 0.1 / math.sqrt(2))) < 1e-12

    def test_json_round_trip(self, point_problem, tmp_path):
        path = point_problem.with_phi("radial:quadratic:4").to_json(tmp_path / "problem.json")
        loaded = ExtensionProblem.from_json(path)
        assert loaded.setup == "A"
        assert loaded.phi == "radial:quadratic:4"
        assert loaded.resolution == RESOLUTION
        np.testing.assert_array_equal(loaded.jet.as_matrix(), point_problem.jet.as_matrix())

    def test_json_missing_key(self, tmp_path):
        path = tmp_path / "problem.json"
        path.write_text(json.dumps({"setup": "A"}))
        with pytest.raises(ContractError, match="Malformed"):
            ExtensionProblem.from_json(path)

    def test_json_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            ExtensionProblem.from_json(tmp_path / "absent.json")


# =============================================================================
# Liftings
# =============================================================================


class TestSmoothExtension:
    """Test chart liftings and their partition of unity."""

    def test_single_chart_is_holomorphic(self, point_problem):
        grid = point_problem.transversal_grid(1e-1, 1e-2)
        lift = smooth_extension(point_problem, grid)
        assert np.max(np.abs(lift.dbar)) == 0.0
        np.testing.assert_allclose(lift.values[:, 0], 1.0 + 0.5 * grid.z)
        assert lift.holds

    def test_two_charts_without_corrections(self, point_problem):
        grid = point_problem.transversal_grid(1e-1, 1e-2)
        lift = smooth_extension(point_problem, grid, two_charts(0.25))
        np.testing.assert_allclose(lift.values, taylor_lift(point_problem, grid), atol=1e-14)
        assert np.max(np.abs(lift.dbar)) < 1e-14

    def test_two_charts_dbar_vanishes_to_order_k_plus_one(self, point_problem):
        grid = point_problem.transversal_grid(1e-1, 1e-2)
        charts = two_charts(0.25, corrections=(None, lambda w: np.ones_like(w)))
        lift = smooth_extension(point_problem, grid, charts)
        assert lift.ratio > 0
        assert lift.bound == pytest.approx(1.0, rel=1e-3)
        assert lift.holds

    def test_components_recombine(self, point_problem):
        grid = point_problem.transversal_grid(1e-1, 1e-2)
        charts = two_charts(0.25, corrections=(None, lambda w: w**2))
        lift = smooth_extension(point_problem, grid, charts)
        y_monomials = point_problem.y_monomials()
        np.testing.assert_allclose(lift.components @ y_monomials, lift.values, atol=1e-14)
        np.testing.assert_allclose(lift.dbar_components @ y_monomials, lift.dbar, atol=1e-14)
        np.testing.assert_allclose(
            taylor_components(point_problem, grid) @ y_monomials,
            taylor_lift(point_problem, grid),
        )

    def test_charts_must_cover(self, point_problem):
        grid = point_problem.transversal_grid(1e-1, 1e-2)
        half = Chart(
            partition=lambda w: 0.5 * np.ones(np.shape(w)),
            partition_dbar=lambda w: np.zeros(np.shape(w), dtype=complex),
        )
        with pytest.raises(ChartCoverageError, match="cover"):
            smooth_extension(point_problem, grid, [half])

    def test_zero_jet(self, point_problem):
        problem = point_problem.with_jet(JetData.zeros(1, 1))
        grid = problem.transversal_grid(1e-1, 1e-2)
        assert np.max(np.abs(smooth_extension(problem, grid).values)) == 0.0

    def test_bad_width(self):
        with pytest.raises(ValueError, match="positive"):
            two_charts(0.0)


class TestTruncate:
    """Test the cutoff applied to a lifting."""

    def test_support_and_identity_region(self):
        profile = BumpProfile(0.1)
        s_abs = np.array([0.01, 0.07, 0.1, 0.3])
        lift = np.array([2.0, 3.0, 4.0, 5.0])
        truncated = truncate(lift, np.zeros(4), s_abs, profile)
        np.testing.assert_allclose(truncated, [2.0, 3.0, 0.0, 0.0])

    def test_subtracts_previous_level(self):
        profile = BumpProfile(0.1)
        s_abs = np.array([0.01, 0.2])
        lift = np.ones((2, 3))
        truncated = truncate(lift, 0.25 * np.ones((2, 3)), s_abs, profile)
        np.testing.assert_allclose(truncated, [[0.75] * 3, [0.0] * 3])

    def test_shape_mismatch(self):
        with pytest.raises(ContractError, match="truncate"):
            truncate(np.ones(3), np.ones(2), np.ones(3), BumpProfile(0.1))

    def test_mass_shrinks_with_width(self, excised_grid):
        s_abs = np.abs(excised_grid.z) / (2 * math.e)
        ones = np.ones(len(excised_grid))
        masses = [
            float(np.dot(excised_grid.weights, truncate(ones, 0 * ones, s_abs, BumpProfile(e))))
            for e in (1e-1, 3e-2, 1e-2)
        ]
        assert masses[0] > masses[1] > masses[2] > 0


class TestTruncationNorm:
    """Test the log-weighted norm of the truncated lifting."""

    def test_scaled_norm_stays_bounded(self, point_problem):
        scaled = []
        for epsilon in (1e-1, 1e-2):
            grid = point_problem.transversal_grid(epsilon, 1e-3)
            s_abs = np.abs(grid.z) / point_problem.section_scale
            profile = BumpProfile(epsilon)
            truncated = truncate(np.ones(len(grid)), np.zeros(len(grid)), s_abs, profile)
            report = truncation_norm(grid, truncated, s_abs, np.zeros(len(grid)), profile)
            assert report["norm"] > 0
            scaled.append(report["scaled"])
        assert 0.5 < scaled[1] / scaled[0] < 2.0


# =============================================================================
# Extrapolation
# =============================================================================


class TestExtrapolation:
    """Test the linear fit in the bump width."""

    def test_linear_data(self):
        report = extrapolate_norms([1e-2, 1e-1, 3e-2], [2.01, 2.1, 2.03])
        assert report["epsilons"] == [1e-1, 3e-2, 1e-2]
        assert report["limit"] == pytest.approx(2.0)
        assert report["slope"] == pytest.approx(1.0)
        assert report["stable"]

    def test_unstable_data(self):
        report = extrapolate_norms([1e-1, 3e-2, 1e-2], [1.0, 5.0, 1.0])
        assert not report["stable"]

    def test_single_width(self):
        report = extrapolate_norms([1e-2], [3.0])
        assert report["limit"] == 3.0
        assert report["changes"] == []
        assert report["stable"]

    def test_nonpositive_width(self):
        with pytest.raises(PreconditionError, match="positive"):
            extrapolate_norms([1e-1, 0.0], [1.0, 1.0])

    def test_vector_values(self):
        values = np.array([[1.1, 2.2], [1.01, 2.02]])
        limit, slope = richardson([1e-1, 1e-2], values)
        np.testing.assert_allclose(limit, [1.0, 2.0], atol=1e-12)
        np.testing.assert_allclose(slope, [1.0, 2.0], atol=1e-10)

    def test_length_mismatch(self):
        with pytest.raises(PreconditionError, match="one value per epsilon"):
            richardson([1e-1, 1e-2], np.ones(3))


# =============================================================================
# Induction
# =============================================================================


class TestRunInduction:
    """Test the inductive construction on the model setups."""

    def test_reproduces_one_jet(self):
        problem = ExtensionProblem("A", JetData.at_point([0.0, 1.0]), resolution=RESOLUTION)
        result = run_induction(problem, epsilons=[1e-2])
        assert abs(result.coefficients[0, 0]) < 1e-3
        assert abs(result.coefficients[1, 0] - 1.0) < 1e-3
        assert result.jet_residual < 1e-6

    def test_levels(self, point_problem):
        result = run_induction(point_problem, epsilons=[1e-2])
        run = result.final
        assert [level.order for level in run.levels] == [0, 1]
        assert run.holomorphy_residual < 1e-4
        assert run.cauchy_drift < 1e-3
        assert all(level.dbar_residual < 1e-4 for level in run.levels)
        assert all(math.isfinite(level.chain_ratio) for level in run.levels)
        assert run.samples.shape == (len(run.grid), 1)

    def test_constant_positive(self, point_problem):
        result = run_induction(point_problem, epsilons=[1e-2])
        assert result.data_norm > 0
        assert result.constant > 0
        assert math.isfinite(result.constant)

    def test_zero_jet(self, point_problem):
        result = run_induction(point_problem.with_jet(JetData.zeros(1, 1)), epsilons=[1e-2])
        assert np.max(np.abs(result.final.samples)) == 0.0
        assert result.norm_squared == 0.0
        assert math.isnan(result.constant)
        assert result.to_dict()["constant"] is None

    def test_schedule_extrapolates(self, point_problem):
        result = run_induction(point_problem, epsilons=[1e-1, 3e-2, 1e-2])
        assert len(result.runs) == 3
        assert [run.epsilon for run in result.runs] == [1e-1, 3e-2, 1e-2]
        assert result.extrapolation["epsilons"] == [1e-1, 3e-2, 1e-2]
        assert math.isfinite(result.norm_squared)

    def test_empty_schedule(self, point_problem):
        with pytest.raises(PreconditionError, match="empty"):
            run_induction(point_problem, epsilons=[])

    def test_report_is_json_ready(self, point_problem):
        result = run_induction(point_problem, epsilons=[1e-2])
        report = json.loads(json.dumps(result.to_dict()))
        assert report["k"] == 1
        assert len(report["runs"][0]["levels"]) == 2

    def test_matches_direct_minimal_extension(self):
        problem = ExtensionProblem("A", JetData.at_point([1.0]), resolution=RESOLUTION)
        result = run_induction(problem, epsilons=[1e-2], delta=1e-3)
        direct = direct_minimal_extension(problem, delta=1e-3, basis_degree=6)
        assert direct["constraint_residual"] < 1e-8
        assert result.norm_squared == pytest.approx(direct["norm_squared"], rel=0.05)

    def test_default_charts_are_single_chart(self, point_problem):
        default = construct_extension(point_problem, 1e-2)
        explicit = construct_extension(point_problem, 1e-2, charts=single_chart())
        np.testing.assert_array_equal(default.samples, explicit.samples)
        assert default.norm_squared == explicit.norm_squared

    def test_uncorrected_two_charts_match_single_chart(self, point_problem):
        single = run_induction(point_problem, epsilons=[1e-2])
        glued = run_induction(point_problem, epsilons=[1e-2], charts=two_charts(0.25))
        assert glued.jet_residual < 1e-6
        np.testing.assert_allclose(glued.coefficients, single.coefficients, atol=1e-8)
        assert glued.norm_squared == pytest.approx(single.norm_squared, rel=1e-8)

    def test_records_vanishing_per_level(self, point_problem):
        result = run_induction(point_problem, epsilons=[1e-2])
        assert all(level.vanishing < 1e-6 for level in result.final.levels)
        assert result.vanishing < 1e-6
        report = result.to_dict()
        assert "vanishing" in report
        assert "vanishing" in report["runs"][0]["levels"][0]

    def test_direct_needs_point_jet(self, y_grid):
        problem = ExtensionProblem("B", polynomial_jet("B", np.array([[1.0]]), y_grid))
        with pytest.raises(UnsupportedGeometryError):
            direct_minimal_extension(problem)

    def test_setup_b(self, y_grid):
        jet = polynomial_jet("B", np.array([[1.0, 1.0]]), y_grid)
        problem = ExtensionProblem("B", jet, resolution=RESOLUTION)
        result = run_induction(problem, epsilons=[1e-2])
        assert result.jet_residual < 1e-6
        np.testing.assert_allclose(result.coefficients[0], 1.0 + y_grid.z, atol=1e-5)
        assert result.data_norm > 0


# =============================================================================
# Constants
# =============================================================================


class TestJetBatch:
    """Test the batches of unit and random jets."""

    def test_unit_jets_first(self, point_problem):
        batch = jet_batch(point_problem, n_random=3)
        assert len(batch) == 8
        np.testing.assert_array_equal(batch[0].as_matrix()[:, 0], [1.0, 0.0])
        np.testing.assert_array_equal(batch[1].as_matrix()[:, 0], [0.0, 1.0])

    def test_nested_across_orders(self, point_problem):
        lower = jet_batch(point_problem.with_jet(JetData.at_point([1.0])), n_random=3)
        higher = jet_batch(point_problem, n_random=3)
        for low, high in zip(lower[1:], higher[2:5], strict=True):
            np.testing.assert_array_equal(high.as_matrix()[:1], low.as_matrix())
            np.testing.assert_array_equal(high.as_matrix()[1:], 0.0)

    def test_seeded(self, point_problem):
        first = jet_batch(point_problem, n_random=2, seed=7)
        second = jet_batch(point_problem, n_random=2, seed=7)
        for a, b in zip(first, second, strict=True):
            np.testing.assert_array_equal(a.as_matrix(), b.as_matrix())

    def test_setup_b_jets_are_polynomial(self, y_grid):
        problem = ExtensionProblem("B", polynomial_jet("B", np.array([[1.0]]), y_grid))
        for jet in jet_batch(problem, n_random=2):
            assert problem.with_jet(jet).components.shape[1] <= 2


class TestMeasureConstant:
    """Test the sup and spread over a batch."""

    def test_excludes_zero_jets(self, point_problem):
        results = [_fake_result(point_problem, 1.0, 1.0 + 0.1 * i) for i in range(MIN_BATCH)]
        results += [_fake_result(point_problem, 0.0, 0.0)] * 2
        report = measure_constant(results)
        assert report["count"] == MIN_BATCH
        assert report["excluded"] == 2
        assert report["C_measured"] == pytest.approx(1.9)
        assert report["spread"] == pytest.approx(1.9)
        assert report["finite"]

    def test_needs_enough_jets(self, point_problem):
        results = [_fake_result(point_problem, 1.0, 1.0)] * (MIN_BATCH - 1)
        with pytest.raises(PreconditionError, match="at least"):
            measure_constant(results)

    @pytest.mark.slow
    def test_batch_spread_order_zero(self):
        problem = ExtensionProblem("A", JetData.at_point([1.0]), resolution=RESOLUTION)
        report = constant_batch(problem, n_random=MIN_BATCH)
        assert report["count"] == MIN_BATCH + 1
        assert report["finite"]
        assert report["spread"] <= 2.0

    @pytest.mark.slow
    def test_constant_nondecreasing_in_order(self):
        problem = ExtensionProblem("A", JetData.at_point([1.0]), resolution=RESOLUTION)
        report = sweep_jet_order(problem, max_order=2, n_random=MIN_BATCH)
        constants = [row["C_measured"] for row in report["rows"]]
        assert len(constants) == 3
        assert report["nondecreasing"]
        assert report["min_step"] >= 1.0 - 1e-6
        assert constants[0] <= constants[2] * (1.0 + 1e-6)

    def test_negative_order(self, point_problem):
        with pytest.raises(PreconditionError, match="nonnegative"):
            sweep_jet_order(point_problem, max_order=-1)

    @pytest.mark.slow
    def test_weight_sweep(self):
        problem = ExtensionProblem("A", JetData.at_point([1.0]), resolution=RESOLUTION)
        rows = sweep_weight_strength(problem, strengths=(0.0, 1.0))
        assert [row["phi"] for row in rows] == ["radial:quadratic:0", "radial:quadratic:1"]
        assert all(math.isfinite(row["C_measured"]) for row in rows)
