"""Command-line scenario runner.

    entransfer run --scenario jc-pure --config cfg.json --out curve.csv
    entransfer crosscheck --scenario bogoliubov --tol 1e-6
    entransfer scan-beta --beta-min 0.3 --beta-max 0.7 --steps 41
    entransfer figures --out-dir data/

Exit codes: 0 success, 1 config error, 2 numeric or capacity error,
3 crosscheck failure.
"""

from __future__ import annotations

import argparse
import sys
from math import pi, sqrt
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import CapacityError, DomainError, NumericError, ScenarioError
from .fock import condensate_state, make_basis, mixed_coupling
from .perturbation import beta_threshold, correlators_exact, fourth_order, mixed_operator_correlators
from .scenarios import SCENARIOS, ScenarioConfig, crosscheck, format_rows, run_rows

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_CROSSCHECK = 0, 1, 2, 3

# crosscheck defaults: parameters that exercise each scenario away from symmetric points
CROSSCHECK_DEFAULTS = {
    "jc-pure": {"N": 3, "u1": 0.6, "u2": "0.5j", "g1": 1.3, "g2": 0.7},
    "jc-excited": {"N": 1, "u1": 0.6, "u2": "0.5j", "g1": 1.3, "g2": 0.7},
    "m-photon": {"N": 3, "m": 2, "u1": 0.6, "u2": "0.5j", "g1": 1.3, "g2": 0.7},
    "beta-mixed": {"beta": 0.5},
    "bogoliubov": {"beta": 0.5},
    "two-mode": {"N1": 2, "N2": 1, "g1": 1.3, "g2": 0.7},
    "su2-pair": {"theta": pi / 8, "eta": 0.4, "g1": 3 / sqrt(2), "g2": 1.0},
    "mixture": {"distribution": "binomial:4:0.3", "u1": 0.6, "u2": "0.5j"},
    "perturbative": {},
}


def _overrides(args) -> dict:
    keys = ("scenario", "t_max", "t_steps")
    out = {k: getattr(args, k, None) for k in keys}
    for item in getattr(args, "set", None) or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ScenarioError(f"--set expects key=value, got {item!r}")
        out[key] = value
    return out


def _load(args, defaults: Optional[dict] = None) -> ScenarioConfig:
    over = _overrides(args)
    if getattr(args, "config", None):
        return ScenarioConfig.from_file(args.config, over)
    data = dict(defaults or {})
    data.update({k: v for k, v in over.items() if v is not None})
    return ScenarioConfig.from_mapping(data)


def _write(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    cfg = _load(args)
    rows = run_rows(cfg)
    _write(format_rows(rows), args.out)
    return EXIT_OK


def cmd_crosscheck(args) -> int:
    defaults = {"scenario": args.scenario, "t_max": 5.0, "t_steps": 51}
    defaults.update(CROSSCHECK_DEFAULTS.get(args.scenario, {}))
    cfg = _load(args, defaults)
    report = crosscheck(cfg, args.tol)
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_CROSSCHECK


def beta_scan(beta_min: float, beta_max: float, steps: int, cutoff: int = 4):
    """Fourth-order n23 coefficient for the symmetric mixed coupling over a beta grid.

    Each point uses exact correlators in a truncated space (``cutoff`` is ample
    for a 1-particle field state) next to the analytic expression.
    """
    if steps < 2 or not 0 <= beta_min < beta_max < 1:
        raise ScenarioError("need 0 <= beta-min < beta-max < 1 and steps >= 2")
    basis = make_basis(2, cutoff)
    s = 1 / sqrt(2)
    psi = condensate_state(basis, 1, s, s)
    out = []
    for beta in np.linspace(beta_min, beta_max, steps):
        F1 = mixed_coupling(basis, 0, 1.0, beta)
        F2 = mixed_coupling(basis, 1, 1.0, beta)
        numeric = fourth_order(correlators_exact(F1, F2, psi)).n23_coeff
        analytic = fourth_order(mixed_operator_correlators(beta, 0.0, beta, 0.0, s, s)).n23_coeff
        out.append((float(beta), numeric, analytic))
    return out


def sign_change(points) -> Optional[tuple[float, float, float]]:
    """First (lo, hi, interpolated) bracket where the coefficient turns nonpositive."""
    for (b0, v0, _), (b1, v1, _) in zip(points, points[1:]):
        if v0 > 0 >= v1:
            return b0, b1, b0 + (b1 - b0) * v0 / (v0 - v1)
    return None


def cmd_scan_beta(args) -> int:
    points = beta_scan(args.beta_min, args.beta_max, args.steps)
    lines = ["beta,n23_coeff,n23_coeff_analytic"]
    lines += [f"{b:.17g},{v:.17g},{a:.17g}" for b, v, a in points]
    _write("\n".join(lines) + "\n", args.out)
    bracket = sign_change(points)
    target = beta_threshold()
    if bracket is None:
        print(f"no sign change in [{args.beta_min}, {args.beta_max}]; analytic threshold {target:.4f}", file=sys.stderr)
    else:
        lo, hi, x = bracket
        print(
            f"sign change in [{lo:.4f}, {hi:.4f}], interpolated {x:.4f}; analytic threshold {target:.4f}",
            file=sys.stderr,
        )
    return EXIT_OK


FIGURES = {
    "fig2a": [
        ("N=1", {"scenario": "jc-pure", "N": 1, "g1": pi / 2, "g2": pi / 2, "t_max": 6.0, "t_steps": 601}),
        ("N=3", {"scenario": "jc-pure", "N": 3, "g1": pi / 2, "g2": pi / 2, "t_max": 6.0, "t_steps": 601}),
    ],
    "fig2b": [
        ("N=2", {"scenario": "jc-pure", "N": 2, "g1": pi / 2, "g2": pi / 2, "t_max": 6.0, "t_steps": 601}),
        ("N=4", {"scenario": "jc-pure", "N": 4, "g1": pi / 2, "g2": pi / 2, "t_max": 6.0, "t_steps": 601}),
    ],
    "fig3a": [
        ("N=2 m=2", {"scenario": "m-photon", "N": 2, "m": 2, "t_max": 10.0, "t_steps": 1001}),
        ("N=3 m=2", {"scenario": "m-photon", "N": 3, "m": 2, "t_max": 10.0, "t_steps": 1001}),
    ],
    "fig3b": [
        ("init=11", {"scenario": "jc-excited", "g1": pi / 2, "g2": pi / 2, "t_max": 14.0, "t_steps": 10000}),
    ],
    "fig4": [
        (f"beta={b}", {"scenario": "bogoliubov", "beta": b, "t_max": 10.0, "t_steps": 1001})
        for b in (0.0, 0.5, 0.7)
    ],
    "fig5": [
        ("su2-pair", {"scenario": "su2-pair", "theta": pi / 8, "g1": 3 / sqrt(2), "g2": 1.0,
                      "t_max": 10.0, "t_steps": 1001}),
        ("condensate N=2", {"scenario": "jc-pure", "N": 2, "g1": 3 / sqrt(2), "g2": 1.0,
                            "t_max": 10.0, "t_steps": 1001}),
    ],
}


def figure_csv(name: str) -> str:
    chunks = []
    for i, (label, params) in enumerate(FIGURES[name]):
        text = format_rows(run_rows(ScenarioConfig.from_mapping(params)), extra=("curve", label))
        chunks.append(text if i == 0 else text.split("\n", 1)[1])
    return "".join(chunks)


def cmd_figures(args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name in FIGURES:
        path = out / f"{name}.csv"
        with open(path, "w", newline="\n") as fh:
            fh.write(figure_csv(name))
        print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="entransfer", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="evaluate one scenario over a time grid and write CSV")
    r.add_argument("--scenario", choices=SCENARIOS)
    r.add_argument("--config", help="flat JSON config; flags override its keys")
    r.add_argument("--out", help="CSV path (default stdout)")
    r.add_argument("--t-max", dest="t_max", type=float)
    r.add_argument("--t-steps", dest="t_steps", type=int)
    r.add_argument("--set", action="append", metavar="KEY=VALUE", help="override any config key")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("crosscheck", help="compare closed form against brute force")
    c.add_argument("--scenario", choices=SCENARIOS, required=True)
    c.add_argument("--tol", type=float, default=1e-10)
    c.add_argument("--config")
    c.add_argument("--t-max", dest="t_max", type=float)
    c.add_argument("--t-steps", dest="t_steps", type=int)
    c.add_argument("--set", action="append", metavar="KEY=VALUE")
    c.set_defaults(func=cmd_crosscheck)

    b = sub.add_parser("scan-beta", help="fourth-order n23 coefficient across beta")
    b.add_argument("--beta-min", dest="beta_min", type=float, default=0.3)
    b.add_argument("--beta-max", dest="beta_max", type=float, default=0.7)
    b.add_argument("--steps", type=int, default=41)
    b.add_argument("--out")
    b.set_defaults(func=cmd_scan_beta)

    f = sub.add_parser("figures", help="write the curve data behind each figure")
    f.add_argument("--out-dir", dest="out_dir", required=True)
    f.set_defaults(func=cmd_figures)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, NumericError, CapacityError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
