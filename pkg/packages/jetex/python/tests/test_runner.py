"""Tests for experiment configs, suite runs, reports and the command line."""

import csv
import io
import json
import math

import pytest

from jetex import ConfigError, ContractError, PreconditionError, get_lab_config, set_lab_options
from jetex._parallel import map_runs
from jetex.runner import (
    ROW_FIELDS,
    SUITE_CHECKS,
    Check,
    CheckRow,
    ExperimentConfig,
    Measurement,
    Report,
    config_jet,
    emit,
    load_report,
    main,
    render,
    run,
    run_checks,
)
from jetex.runner._cli import _jet_entry


@pytest.fixture
def sample_report():
    rows = (
        CheckRow("jets", "jets.a", "rho = 1, for s = z / (e diam)", 1.0, 1.0, True, 1e-12),
        CheckRow("jets", "jets.b", 'quoted "anchor"', [0.5, 2.0], [0.5, 2.0], True),
        CheckRow("jets", "jets.c", "plumbing", math.nan, "finite", False),
    )
    return Report("jets", rows, {"jetex": "0.1.0", "seed": 7}, {"suite": "jets"})


def _ok(value: float = 1.0) -> Measurement:
    return Measurement(value, value, True)


# =============================================================================
# Configs
# =============================================================================


class TestExperimentConfig:
    """Test schema validation of experiment configs."""

    def test_defaults(self):
        config = ExperimentConfig.from_dict({"suite": "geom", "seed": 7})
        assert config.model == "sphere:1"
        assert config.format == "json"
        assert config.randomized

    def test_deterministic_suite_needs_no_seed(self):
        config = ExperimentConfig.from_dict({"suite": "jets"})
        assert config.seed is None
        assert not config.randomized

    def test_unknown_suite(self):
        with pytest.raises(ConfigError, match="Unknown suite"):
            ExperimentConfig.from_dict({"suite": "everything", "seed": 1})

    def test_randomized_suite_needs_seed(self):
        with pytest.raises(ConfigError, match="needs a seed"):
            ExperimentConfig.from_dict({"suite": "bergman"})

    def test_missing_suite(self):
        with pytest.raises(ConfigError, match="suite"):
            ExperimentConfig.from_dict({"seed": 1})

    def test_unknown_keys(self):
        with pytest.raises(ConfigError, match="Unknown config keys: colour"):
            ExperimentConfig.from_dict({"suite": "jets", "colour": "red"})

    def test_boolean_seed(self):
        with pytest.raises(ConfigError, match="Malformed"):
            ExperimentConfig.from_dict({"suite": "geom", "seed": True})

    def test_bad_resolution(self):
        with pytest.raises(ConfigError, match="resolution"):
            ExperimentConfig.from_dict({"suite": "jets", "resolution": [16]})

    def test_nonpositive_epsilon(self):
        with pytest.raises(ConfigError, match="epsilons"):
            ExperimentConfig.from_dict({"suite": "jets", "epsilons": [0.1, 0.0]})

    def test_unknown_model(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"suite": "geom", "seed": 1, "model": "torus"})

    def test_unknown_phi(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"suite": "pipeline", "seed": 1, "phi": "cubic"})

    def test_not_an_object(self):
        with pytest.raises(ConfigError, match="object"):
            ExperimentConfig.from_dict([1, 2])  # type: ignore[arg-type]

    def test_jet_decoding(self):
        config = ExperimentConfig.from_dict(
            {"suite": "jets", "jet": [1, {"re": 0.5, "im": -1.0}, [1.0, 2.0]]}
        )
        assert config.jet == (1.0, complex(0.5, -1.0), (1.0, 2.0))

    def test_dict_round_trip(self):
        config = ExperimentConfig(
            "pipeline", seed=3, setup="A", jet=(1.0, 2j), epsilons=(0.1, 0.01), delta=1e-3
        )
        assert ExperimentConfig.from_dict(json.loads(json.dumps(config.to_dict()))) == config

    def test_from_json(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"suite": "geom", "seed": 5, "model": "hyperbolic:1"}))
        config = ExperimentConfig.from_json(path)
        assert config.model == "hyperbolic:1"
        assert config.seed == 5

    def test_from_json_missing(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            ExperimentConfig.from_json(tmp_path / "missing.json")

    def test_from_json_malformed(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("{suite: geom")
        with pytest.raises(ConfigError, match="Invalid JSON"):
            ExperimentConfig.from_json(path)

    def test_config_jet_setup_a(self):
        jet = config_jet(ExperimentConfig("jets", jet=(1.0, 0.5)))
        assert jet.k == 1

    def test_config_jet_rejects_rows_in_setup_a(self):
        with pytest.raises(PreconditionError, match="Setup A"):
            config_jet(ExperimentConfig("jets", jet=((1.0, 2.0),)))


# =============================================================================
# Reports
# =============================================================================


@pytest.mark.unit
class TestCheckRow:
    """Test row validation and serialization."""

    def test_needs_anchor(self):
        with pytest.raises(ContractError, match="anchor"):
            CheckRow("jets", "jets.x", "", 1.0, 1.0, True)

    def test_pass_key(self):
        data = CheckRow("jets", "jets.x", "plumbing", 1.0, 1.0, True).to_dict()
        assert list(data) == list(ROW_FIELDS)
        assert data["pass"] is True

    def test_clean_values(self):
        row = CheckRow("jets", "jets.x", "plumbing", complex(1, 2), math.inf, False)
        data = row.to_dict()
        assert data["measured"] == {"re": 1.0, "im": 2.0}
        assert data["claimed"] == "inf"


class TestRender:
    """Test JSON and long-format CSV output."""

    def test_json_round_trip(self, sample_report):
        restored = Report.from_dict(json.loads(render(sample_report, "json")))
        assert [row.id for row in restored.rows] == ["jets.a", "jets.b", "jets.c"]
        assert restored.rows[0] == sample_report.rows[0]
        assert restored.rows[2].measured == "nan"
        assert restored.environment == sample_report.environment

    def test_json_summary(self, sample_report):
        data = json.loads(render(sample_report))
        assert data["count"] == 3
        assert data["failures"] == 1
        assert data["passed"] is False

    def test_csv_row_count(self, sample_report):
        text = render(sample_report, "csv")
        lines = text.splitlines()
        assert len(lines) == len(sample_report.rows) + 1
        assert lines[0] == ",".join(ROW_FIELDS)

    def test_csv_anchors_verbatim(self, sample_report):
        rows = list(csv.DictReader(io.StringIO(render(sample_report, "csv"))))
        assert [row["anchor"] for row in rows] == [row.anchor for row in sample_report.rows]
        assert json.loads(rows[1]["measured"]) == [0.5, 2.0]
        assert rows[1]["tolerance"] == ""

    def test_identical_reports_identical_text(self, sample_report):
        assert render(sample_report, "csv") == render(sample_report, "csv")
        assert render(sample_report) == render(sample_report)

    def test_unknown_format(self, sample_report):
        with pytest.raises(ValueError, match="format"):
            render(sample_report, "xml")

    def test_emit_and_load(self, sample_report, tmp_path):
        path = emit(sample_report, tmp_path / "out" / "report.json")
        assert path.exists()
        assert load_report(path).rows[0] == sample_report.rows[0]

    def test_load_missing(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_report(tmp_path / "missing.json")

    def test_load_count_mismatch(self, sample_report, tmp_path):
        data = sample_report.to_dict()
        data["count"] = 5
        path = tmp_path / "report.json"
        path.write_text(json.dumps(data))
        with pytest.raises(ContractError, match="5 rows"):
            load_report(path)

    def test_exit_code(self, sample_report):
        assert sample_report.exit_code == 1
        passing = Report("jets", sample_report.rows[:2])
        assert passing.exit_code == 0
        assert Report("jets", ()).exit_code == 1


# =============================================================================
# Runs
# =============================================================================


class TestRunChecks:
    """Test ordered, fail-fast evaluation of checks."""

    def test_rows_in_order(self):
        checks = [Check(f"t.{i}", "plumbing", lambda i=i: _ok(i)) for i in range(3)]
        rows = run_checks("t", checks)
        assert [row.id for row in rows] == ["t.0", "t.1", "t.2"]
        assert all(row.passed for row in rows)

    def test_precondition_error_aborts_suite(self):
        evaluated = []

        def broken() -> Measurement:
            raise PreconditionError("epsilon must lie in (0, 1/e)")

        def later() -> Measurement:
            evaluated.append("later")
            return _ok()

        checks = [
            Check("t.first", "plumbing", _ok),
            Check("t.broken", "plumbing", broken),
            Check("t.later", "plumbing", later),
        ]
        rows = run_checks("t", checks)
        assert [row.id for row in rows] == ["t.first", "t.broken"]
        assert not rows[1].passed
        assert "PreconditionError" in rows[1].measured
        assert evaluated == []

    def test_other_errors_propagate(self):
        def broken() -> Measurement:
            raise RuntimeError("bug")

        with pytest.raises(RuntimeError):
            run_checks("t", [Check("t.bug", "plumbing", broken)])

    def test_every_suite_has_anchored_checks(self):
        config = ExperimentConfig("all", seed=1)
        for name, build in SUITE_CHECKS.items():
            checks = build(config.with_suite(name))
            ids = [check.id for check in checks]
            assert checks, name
            assert len(ids) == len(set(ids))
            assert all(check.id.startswith(f"{name}.") for check in checks)
            assert all(check.anchor for check in checks)


class TestMapRuns:
    """Test the thread fan-out used for independent runs."""

    def test_order_kept(self):
        with set_lab_options(threads=4):
            assert map_runs(lambda x: x * x, list(range(10))) == [x * x for x in range(10)]

    def test_workers_see_lab_options(self):
        with set_lab_options(threads=3, holomorphy_tol=1e-6):
            seen = map_runs(lambda _: get_lab_config().holomorphy_tol, [0, 1, 2])
        assert seen == [1e-6] * 3


@pytest.mark.integration
class TestRun:
    """Test whole suites."""

    def test_jets_suite_passes(self):
        report = run(ExperimentConfig("jets"))
        assert report.passed
        assert report.exit_code == 0
        assert report.rows[0].id == "jets.rho.flat_section"

    def test_jets_suite_is_deterministic(self):
        config = ExperimentConfig("jets")
        assert render(run(config)) == render(run(config))

    def test_report_config_excludes_output(self, tmp_path):
        report = run(ExperimentConfig("jets", out=str(tmp_path / "r.json")))
        assert "out" not in report.config
        assert report.environment["seed"] is None

    def test_geom_sphere_rauch_rows_pass(self):
        config = ExperimentConfig("geom", seed=7, model="sphere:1", samples=20)
        report = run(config)
        rauch = [row for row in report.rows if row.id.startswith("geom.rauch")]
        assert {row.id for row in rauch} >= {"geom.rauch.sphere:1", "geom.rauch.hyperbolic:1"}
        assert all(row.passed for row in rauch)

    def test_geom_suite_is_deterministic(self):
        config = ExperimentConfig("geom", seed=7, samples=5)
        assert render(run(config), "csv") == render(run(config), "csv")

    def test_geom_adds_configured_model(self):
        report = run(ExperimentConfig("geom", seed=7, model="revolution:0.1", samples=5))
        assert any(row.id == "geom.rauch.revolution:0.1" for row in report.rows)

    @pytest.mark.slow
    def test_all_is_byte_identical(self):
        config = ExperimentConfig("all", seed=7)
        first = render(run(config))
        with set_lab_options(threads=4):
            second = render(run(config))
        assert first == second


# =============================================================================
# Command line
# =============================================================================


@pytest.mark.integration
class TestCli:
    """Test the jetex command."""

    def test_jet_entries(self):
        assert _jet_entry("1.5") == 1.5
        assert _jet_entry("1+2j") == {"re": 1.0, "im": 2.0}
        assert _jet_entry("1,0.5") == [1.0, 0.5]

    def test_invalid_config_writes_nothing(self, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"suite": "geom", "samples": 5}))
        out = tmp_path / "report.json"
        assert main(["run", "--config", str(config), "--out", str(out)]) == 2
        assert not out.exists()
        assert "seed" in capsys.readouterr().err

    def test_missing_suite(self, capsys):
        assert main(["run"]) == 2
        assert "suite" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path):
        assert main(["run", "--config", str(tmp_path / "missing.json")]) == 2

    def test_invalid_thread_count(self, monkeypatch, tmp_path):
        monkeypatch.setenv("JETEX_THREADS", "zero")
        out = tmp_path / "report.json"
        assert main(["run", "--suite", "jets", "--out", str(out)]) == 2
        assert not out.exists()

    def test_run_to_stdout(self, capsys):
        assert main(["run", "--suite", "jets"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["suite"] == "jets"
        assert data["passed"] is True

    def test_csv_inferred_from_suffix(self, tmp_path):
        out = tmp_path / "jets.csv"
        assert main(["run", "--suite", "jets", "--out", str(out)]) == 0
        header = out.read_text().splitlines()[0]
        assert header == ",".join(ROW_FIELDS)

    def test_config_file_with_overrides(self, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"suite": "geom", "seed": 1}))
        out = tmp_path / "report.json"
        assert main(["run", "--config", str(config), "--suite", "jets", "--out", str(out)]) == 0
        assert load_report(out).suite == "jets"

    def test_geom_suite_needs_seed(self, tmp_path):
        assert main(["geom-suite", "--out", str(tmp_path / "geom.csv")]) == 2

    def test_geom_suite(self, tmp_path):
        out = tmp_path / "geom.csv"
        argv = ["geom-suite", "--model", "sphere:1", "--samples", "5", "--seed", "3"]
        main([*argv, "--out", str(out)])
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        assert all(row["suite"] == "geom" for row in rows)
        assert any(row["id"] == "geom.rauch.sphere:1" and row["pass"] == "True" for row in rows)

    def test_extend(self, tmp_path):
        out = tmp_path / "extend.json"
        argv = ["extend", "--jet", "1", "0.5", "--epsilons", "0.01", "--resolution", "12", "32"]
        argv += ["--out", str(out)]
        assert main(argv) == 0
        report = load_report(out)
        assert report.suite == "extend"
        assert report.rows[0].id == "pipeline.extend.jet_residual"
        assert report.config["jet"] == [1.0, 0.5]
