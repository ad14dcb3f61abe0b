"""Run the closed-form against brute-force comparison for every scenario that has both."""

import sys

from entransfer.cli import CROSSCHECK_DEFAULTS
from entransfer.scenarios import ScenarioConfig, crosscheck

TOLERANCE = {"bogoliubov": 1e-6, "beta-mixed": 1e-6}


def main() -> int:
    failures = 0
    for scenario, params in CROSSCHECK_DEFAULTS.items():
        if scenario == "perturbative":
            continue
        cfg = ScenarioConfig.from_mapping({"scenario": scenario, "t_max": 8.0, "t_steps": 81, **params})
        report = crosscheck(cfg, TOLERANCE.get(scenario, 1e-10))
        print(report.summary())
        failures += not report.passed
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
