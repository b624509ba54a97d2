"""Experiment configs, suites of checks and their reports.

- ``ExperimentConfig`` validates a JSON config (or the command line) and
  names the suite: jets, bergman, dbar, bump, pipeline, geom or all
- ``run`` evaluates the suite's checks in order, stopping at the first
  library error, and returns a ``Report`` of ``CheckRow`` entries
- ``render`` and ``emit`` write reports as JSON or long-format CSV; reports
  hold no timings, so equal configs give equal bytes
- ``main`` is the ``jetex`` command with the ``run``, ``extend`` and
  ``geom-suite`` subcommands

## Example

```python
from jetex.runner import ExperimentConfig, emit, run

report = run(ExperimentConfig("geom", seed=7, model="hyperbolic:1"))
emit(report, "geom.csv", "csv")
report.exit_code   # 0 iff every row passes
```

From the shell:

```bash
JETEX_THREADS=4 jetex run --suite all --seed 7 --out report.json
jetex extend --setup A --jet 1 0.5 --phi radial:quadratic:1 --epsilons 0.1 0.03 0.01
jetex geom-suite --model sphere:1 --samples 1000 --seed 7 --out geom.csv
```
"""

from __future__ import annotations

from ._cli import EXIT_INVALID, build_parser, config_from_args, main
from ._experiment import FORMATS, RANDOMIZED_SUITES, SUITES, ExperimentConfig, ReportFormat
from ._report import (
    PLUMBING,
    ROW_FIELDS,
    CheckRow,
    Report,
    clean_value,
    emit,
    environment,
    load_report,
    render,
)
from ._run import ALL_SUITES, run, run_checks, run_extension
from ._suites import (
    GEOM_MODELS,
    SUITE_CHECKS,
    Check,
    Measurement,
    at_most,
    close_to,
    config_jet,
    extension_checks,
    reported,
)

__all__ = [
    # Configs
    "FORMATS",
    "RANDOMIZED_SUITES",
    "SUITES",
    "ExperimentConfig",
    "ReportFormat",
    # Checks
    "GEOM_MODELS",
    "SUITE_CHECKS",
    "Check",
    "Measurement",
    "at_most",
    "close_to",
    "config_jet",
    "extension_checks",
    "reported",
    # Running
    "ALL_SUITES",
    "run",
    "run_checks",
    "run_extension",
    # Reports
    "PLUMBING",
    "ROW_FIELDS",
    "CheckRow",
    "Report",
    "clean_value",
    "emit",
    "environment",
    "load_report",
    "render",
    # Command line
    "EXIT_INVALID",
    "build_parser",
    "config_from_args",
    "main",
]
