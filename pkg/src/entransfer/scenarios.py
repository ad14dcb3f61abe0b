"""Scenario configuration and the two evaluation paths behind the CLI.

Every scenario can be evaluated by brute force (truncated Fock space plus
the exact channel); most also have an analytic path.  ``run`` prefers the
analytic path, ``crosscheck`` compares the two.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from math import sqrt
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import closed_form as cf
from .channel import InitialQubitState, TwoQubitState, reduced_density
from .distributions import NumberDistribution
from .entanglement import XState, negativity
from .errors import CapacityError, DomainError, ScenarioError
from .fock import (
    MAX_DIM,
    condensate_state,
    make_basis,
    mixed_coupling,
    mode_lowering,
    number_mixture,
    occupied_orbitals_state,
)
from .perturbation import expansion_density

SCENARIOS = (
    "jc-pure",
    "jc-excited",
    "m-photon",
    "beta-mixed",
    "bogoliubov",
    "two-mode",
    "su2-pair",
    "mixture",
    "perturbative",
)
HEADER = (
    "t", "rho11", "rho22", "rho33", "rho44",
    "re_rho23", "im_rho23", "re_rho14", "im_rho14",
    "negativity", "n23", "n14",
)
ROW_TRACE_TOL = 1e-10
CUTOFF_START = 12
CUTOFF_STEP = 8
CUTOFF_MAX = 400
SYMMETRIC = 1 / sqrt(2)


def parse_complex(value) -> complex:
    """Numbers, strings such as "0.5+0.1j", or [re, im] pairs."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ScenarioError(f"complex pair must have two entries, got {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", ""))
        except ValueError:
            raise ScenarioError(f"cannot read {value!r} as a complex number") from None
    return complex(value)


def parse_distribution(spec: str) -> NumberDistribution:
    """"binomial:M:p", "poisson:lam", "thermal:z", "point:N" or "weights:p0,p1,..."."""
    kind, _, rest = str(spec).partition(":")
    args = [a for a in rest.split(":") if a]
    try:
        if kind == "binomial":
            return NumberDistribution.binomial(int(args[0]), float(args[1]))
        if kind == "poisson":
            return NumberDistribution.poisson(float(args[0]))
        if kind == "thermal":
            return NumberDistribution.thermal(float(args[0]))
        if kind == "point":
            return NumberDistribution.point(int(args[0]))
        if kind == "weights":
            return NumberDistribution.from_weights([float(w) for w in rest.split(",")])
    except (IndexError, ValueError) as exc:
        raise ScenarioError(f"bad distribution {spec!r}: {exc}") from None
    raise ScenarioError(f"unknown distribution kind {kind!r}")


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str = "jc-pure"
    N: int = 1
    m: int = 1
    u1: complex = SYMMETRIC
    u2: complex = SYMMETRIC
    g1: float = 1.0
    g2: float = 1.0
    beta: float = 0.5
    theta: float = 0.0
    eta: float = 0.0
    N1: int = 1
    N2: int = 1
    phi_b1: tuple = (SYMMETRIC, SYMMETRIC, 0.0)
    phi_b2: tuple = (SYMMETRIC, -SYMMETRIC, 0.0)
    distribution: str = "binomial:4:0.3"
    init: str = "A1"
    t_max: float = 6.0
    t_steps: int = 601
    method: str = "auto"
    cutoff: Optional[int] = None
    cutoff_tol: float = 1e-10
    workers: int = 1

    @classmethod
    def from_mapping(cls, data: dict) -> "ScenarioConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ScenarioError(f"unknown config keys: {sorted(unknown)}")
        kw = dict(data)
        for key in ("u1", "u2"):
            if key in kw:
                kw[key] = parse_complex(kw[key])
        for key in ("phi_b1", "phi_b2"):
            if key in kw:
                kw[key] = tuple(parse_complex(v) for v in kw[key])
        for key in ("N", "m", "N1", "N2", "t_steps", "workers"):
            if key in kw:
                if float(kw[key]) != int(float(kw[key])):
                    raise ScenarioError(f"{key} must be an integer, got {kw[key]!r}")
                kw[key] = int(float(kw[key]))
        if kw.get("cutoff") is not None:
            kw["cutoff"] = int(kw["cutoff"])
        for key in ("g1", "g2", "beta", "theta", "eta", "t_max", "cutoff_tol"):
            if key in kw:
                kw[key] = float(kw[key])
        return cls(**kw).validated()

    @classmethod
    def from_file(cls, path, overrides: Optional[dict] = None) -> "ScenarioConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ScenarioError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict) or any(isinstance(v, dict) for v in data.values()):
            raise ScenarioError("config must be a flat JSON object")
        data.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls.from_mapping(data)

    def validated(self) -> "ScenarioConfig":
        """Check every invariant of the owning scenario; raises ScenarioError."""
        if self.scenario not in SCENARIOS:
            raise ScenarioError(f"unknown scenario {self.scenario!r}; choose from {', '.join(SCENARIOS)}")
        if self.N < 0 or self.N1 < 0 or self.N2 < 0:
            raise ScenarioError("particle numbers must be >= 0")
        if self.m < 1:
            raise ScenarioError("photon order m must be >= 1")
        if abs(self.u1) ** 2 + abs(self.u2) ** 2 > 1 + 1e-12:
            raise ScenarioError("|u1|^2 + |u2|^2 must not exceed 1")
        if not 0.0 <= self.beta < 1.0:
            raise ScenarioError(f"beta must lie in [0, 1), got {self.beta}")
        if self.t_max < 0 or self.t_steps < 1:
            raise ScenarioError("need t_max >= 0 and t_steps >= 1")
        if self.method not in ("auto", "closed", "brute"):
            raise ScenarioError("method must be auto, closed or brute")
        if self.cutoff is not None and self.cutoff < 1:
            raise ScenarioError("cutoff must be >= 1")
        if self.workers < 1:
            raise ScenarioError("workers must be >= 1")
        try:
            InitialQubitState.parse(self.init)
        except ScenarioError:
            raise
        if self.scenario == "jc-excited" and self.N != 1 and self.method == "closed":
            raise ScenarioError("the |1,1> closed form covers N = 1 only")
        if self.scenario == "two-mode":
            b = np.array([self.phi_b1, self.phi_b2], dtype=complex)
            if b.shape != (2, 3):
                raise ScenarioError("phi_b1 and phi_b2 need three amplitudes (phi_1, phi_2, phi_T)")
            if np.max(np.abs(b.conj() @ b.T - np.eye(2))) > 1e-10:
                raise ScenarioError("phi_b1 and phi_b2 must be orthonormal")
        if self.scenario == "mixture":
            parse_distribution(self.distribution)
        if self.scenario == "bogoliubov" and (self.g1 != self.g2):
            raise ScenarioError("bogoliubov scenario assumes g1 = g2")
        return self

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.t_steps)

    def as_dict(self) -> dict:
        d = asdict(self)
        for key in ("u1", "u2"):
            d[key] = [d[key].real, d[key].imag]
        for key in ("phi_b1", "phi_b2"):
            d[key] = [[complex(v).real, complex(v).imag] for v in d[key]]
        return d


@dataclass(frozen=True)
class CurveRow:
    t: float
    rho11: float
    rho22: float
    rho33: float
    rho44: float
    re_rho23: float
    im_rho23: float
    re_rho14: float
    im_rho14: float
    negativity: float
    n23: float
    n14: float

    @classmethod
    def from_state(cls, t: float, state) -> "CurveRow":
        if isinstance(state, XState):
            x, mat = state, state.matrix()
        else:
            mat = state.rho if isinstance(state, TwoQubitState) else np.asarray(state)
            x = XState.from_state(mat)
        trace = x.rho11 + x.rho22 + x.rho33 + x.rho44
        if abs(trace - 1) > ROW_TRACE_TOL:
            raise DomainError(f"row at t={t} has trace {trace!r}")
        rep = negativity(mat)
        return cls(
            float(t), x.rho11, x.rho22, x.rho33, x.rho44,
            x.rho23.real, x.rho23.imag, x.rho14.real, x.rho14.imag,
            rep.negativity, rep.n23, rep.n14,
        )

    def values(self) -> tuple[float, ...]:
        return tuple(getattr(self, name) for name in HEADER)


def format_rows(rows, extra: Optional[tuple[str, str]] = None) -> str:
    """CSV text with the fixed header; ``extra`` prepends a (column, value) pair."""
    head = ([extra[0]] if extra else []) + list(HEADER)
    lines = [",".join(head)]
    for row in rows:
        vals = [format(v, ".17g") for v in row.values()]
        lines.append(",".join(([extra[1]] if extra else []) + vals))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- analytic path


def closed_form_evaluator(cfg: ScenarioConfig) -> Callable[[float], XState]:
    """Analytic XState(t) for the scenario; ScenarioError if there is none."""
    init = InitialQubitState.parse(cfg.init)
    s = cfg.scenario
    if s in ("jc-pure", "m-photon"):
        m = 1 if s == "jc-pure" else cfg.m
        if init is InitialQubitState.A1:
            sc = cf.CondensateScenario(cfg.N, cfg.u1, cfg.u2, cfg.g1, cfg.g2, m)
            return lambda t: cf.rho_condensate(sc, t)
        if init is InitialQubitState.A4 and cfg.N == 1 and m == 1:
            return lambda t: cf.rho_condensate_excited(cfg.u1, cfg.u2, cfg.g1, cfg.g2, t)
        raise ScenarioError(f"no closed form for {s} from {init.name}")
    if s == "jc-excited":
        if cfg.N != 1:
            raise ScenarioError("the |1,1> closed form covers N = 1 only")
        return lambda t: cf.rho_condensate_excited(cfg.u1, cfg.u2, cfg.g1, cfg.g2, t)
    if init is not InitialQubitState.A1:
        raise ScenarioError(f"no closed form for {s} from {init.name}")
    if s == "two-mode":
        amps = cf.product_amplitudes([cfg.phi_b1, cfg.phi_b2], [cfg.N1, cfg.N2], 3)
        return lambda t: cf.rho_occupation(amps, cfg.g1, cfg.g2, t, cfg.m)
    if s == "su2-pair":
        sc = cf.SU2PairScenario(cfg.theta, cfg.eta, cfg.g1, cfg.g2)
        return lambda t: cf.rho_su2_pair(sc, t)
    if s == "mixture":
        dist = parse_distribution(cfg.distribution)
        return lambda t: cf.rho_mixture(dist, cfg.u1, cfg.u2, cfg.g1, cfg.g2, t, cfg.m)
    if s in ("bogoliubov", "beta-mixed"):
        symmetric = (
            abs(cfg.u1 - SYMMETRIC) < 1e-12 and abs(cfg.u2 - SYMMETRIC) < 1e-12 and cfg.g1 == cfg.g2
        )
        if s == "beta-mixed" and not symmetric:
            raise ScenarioError("beta-mixed has a closed form only for u1 = u2 = 1/sqrt2, g1 = g2")
        if s == "bogoliubov" and not symmetric:
            cfg = replace(cfg, u1=SYMMETRIC, u2=SYMMETRIC)
        sc = cf.BogoliubovScenario(cfg.beta, cfg.theta, cfg.g1)
        return lambda t: cf.rho_bogoliubov(sc, t)
    raise ScenarioError(f"no closed form for {s}")


# ---------------------------------------------------------------- brute-force path


def _check_capacity(n_modes: int, cutoff: int) -> None:
    if (cutoff + 1) ** n_modes > MAX_DIM:
        raise CapacityError(f"{n_modes} modes at cutoff {cutoff} exceed {MAX_DIM} basis states")


def build_problem(cfg: ScenarioConfig, cutoff: Optional[int] = None):
    """(F1, F2, rho_B, init) on a basis just large enough to be exact.

    Number-conserving scenarios are exact at cutoff = particles + m; the
    beta scenarios need the cutoff passed in (see ``brute_force_evaluator``).
    """
    s = cfg.scenario
    init = InitialQubitState.parse(cfg.init)
    if s == "jc-excited":
        init = InitialQubitState.A4
    m = cfg.m if s in ("m-photon", "two-mode", "mixture", "perturbative") else 1
    uT2 = 1 - abs(cfg.u1) ** 2 - abs(cfg.u2) ** 2
    n_modes = 3 if uT2 > 1e-14 else 2

    if s in ("jc-pure", "jc-excited", "m-photon", "perturbative"):
        c = cutoff or cfg.N + m
        _check_capacity(n_modes, c)
        basis = make_basis(n_modes, c)
        rho_B = condensate_state(basis, cfg.N, cfg.u1, cfg.u2)
    elif s == "mixture":
        dist = parse_distribution(cfg.distribution)
        c = cutoff or dist.max_n + m
        _check_capacity(n_modes, c)
        basis = make_basis(n_modes, c)
        rho_B = number_mixture(basis, dist, cfg.u1, cfg.u2)
    elif s == "two-mode":
        n_modes = 3
        c = cutoff or cfg.N1 + cfg.N2 + m
        _check_capacity(n_modes, c)
        basis = make_basis(n_modes, c)
        rho_B = occupied_orbitals_state(basis, [cfg.phi_b1, cfg.phi_b2], [cfg.N1, cfg.N2])
    elif s == "su2-pair":
        c = cutoff or 2 + m
        basis = make_basis(2, c)
        rho_B = occupied_orbitals_state(basis, list(cf.SU2PairScenario(cfg.theta, cfg.eta).orbitals()), [1, 1])
    elif s in ("beta-mixed", "bogoliubov"):
        u1, u2 = (SYMMETRIC, SYMMETRIC) if s == "bogoliubov" else (cfg.u1, cfg.u2)
        if s == "bogoliubov":
            n_modes = 2
        c = cutoff or CUTOFF_START
        _check_capacity(n_modes, c)
        basis = make_basis(n_modes, c)
        rho_B = condensate_state(basis, 1, u1, u2)
        g2 = cfg.g1 if s == "bogoliubov" else cfg.g2
        F1 = mixed_coupling(basis, 0, cfg.g1, cfg.beta, cfg.theta)
        F2 = mixed_coupling(basis, 1, g2, cfg.beta, cfg.theta)
        return F1, F2, rho_B, init
    else:
        raise ScenarioError(f"unknown scenario {s!r}")
    F1 = mode_lowering(basis, 0, cfg.g1, m)
    F2 = mode_lowering(basis, 1, cfg.g2, m)
    return F1, F2, rho_B, init


def _sweep(F1, F2, rho_B, init, times, workers: int = 1) -> list[TwoQubitState]:
    def one(t):
        return reduced_density(F1, F2, rho_B, float(t), init)

    if workers == 1:
        return [one(t) for t in times]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map keeps sweep order regardless of completion order
        return list(pool.map(one, times))


def converged_cutoff(cfg: ScenarioConfig, times) -> int:
    """Smallest cutoff in steps of CUTOFF_STEP whose states agree with the next one.

    Agreement is the max abs entry change over ``times`` below cfg.cutoff_tol.
    """
    probe = np.asarray(times)
    prev = None
    c = CUTOFF_START
    while c <= CUTOFF_MAX:
        F1, F2, rho_B, init = build_problem(cfg, c)
        cur = np.array([s.rho for s in _sweep(F1, F2, rho_B, init, probe, cfg.workers)])
        if prev is not None and np.max(np.abs(cur - prev)) < cfg.cutoff_tol:
            return c - CUTOFF_STEP
        prev = cur
        c += CUTOFF_STEP
    raise CapacityError(f"cutoff search did not converge to {cfg.cutoff_tol:g} below cutoff {CUTOFF_MAX}")


def brute_force_states(cfg: ScenarioConfig, times) -> list[TwoQubitState]:
    times = np.asarray(times, dtype=float)
    if cfg.scenario == "perturbative":
        F1, F2, rho_B, _ = build_problem(cfg, cfg.cutoff)
        return [expansion_density(F1, F2, rho_B, float(t)) for t in times]
    cutoff = cfg.cutoff
    if cutoff is None and cfg.scenario in ("beta-mixed", "bogoliubov"):
        cutoff = converged_cutoff(cfg, times)
    F1, F2, rho_B, init = build_problem(cfg, cutoff)
    return _sweep(F1, F2, rho_B, init, times, cfg.workers)


def has_closed_form(cfg: ScenarioConfig) -> bool:
    try:
        closed_form_evaluator(cfg)
    except ScenarioError:
        return False
    return True


def run_rows(cfg: ScenarioConfig, times=None) -> list[CurveRow]:
    """One CurveRow per time point, via the analytic path when available."""
    times = cfg.times() if times is None else np.asarray(times, dtype=float)
    use_closed = cfg.method == "closed" or (
        cfg.method == "auto" and cfg.scenario != "perturbative" and has_closed_form(cfg)
    )
    if use_closed:
        f = closed_form_evaluator(cfg)
        return [CurveRow.from_state(t, f(float(t))) for t in times]
    return [CurveRow.from_state(t, s) for t, s in zip(times, brute_force_states(cfg, times))]


@dataclass(frozen=True)
class CrosscheckReport:
    scenario: str
    max_deviation: float
    worst_t: float
    worst_entry: tuple[int, int]
    tolerance: float
    points: int = field(default=0)

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def summary(self) -> str:
        i, j = self.worst_entry
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"{verdict} {self.scenario}: max |closed - brute| = {self.max_deviation:.3e} "
            f"at t = {self.worst_t:.6g}, entry rho{i}{j} (tolerance {self.tolerance:g}, {self.points} points)"
        )


def crosscheck(cfg: ScenarioConfig, tolerance: float, times=None) -> CrosscheckReport:
    """Worst entrywise deviation between the analytic and brute-force states."""
    f = closed_form_evaluator(cfg)
    times = cfg.times() if times is None else np.asarray(times, dtype=float)
    brute = brute_force_states(cfg, times)
    worst, worst_t, worst_ij = -1.0, 0.0, (1, 1)
    for t, b in zip(times, brute):
        d = np.abs(f(float(t)).matrix() - b.rho)
        k = int(np.argmax(d))
        if d.flat[k] > worst:
            worst, worst_t = float(d.flat[k]), float(t)
            worst_ij = (k // 4 + 1, k % 4 + 1)
    return CrosscheckReport(cfg.scenario, worst, worst_t, worst_ij, tolerance, len(times))
