"""Leading small-t behaviour of the entanglement indicators.

To fourth order in t,

    n23 = t^4 (|<F1† F2>|^2 - <F1† F1 F2† F2>)
    n14 = t^4 (|<F1† F2†>|^2 - <F1† F1><F2† F2>)

so the sign of each t^4 coefficient decides entanglement at short times.
Coefficients are stored without the t^4 factor and with the coupling
strengths folded into the operators.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import Optional, Sequence

import numpy as np

from .channel import TwoQubitState
from .distributions import NumberDistribution
from .errors import DomainError
from .fock import CouplingOperator, apply_local, as_mixture

REAL_TOL = 1e-12
SCHWARZ_TOL = 1e-10


@dataclass(frozen=True)
class CorrelatorSet:
    """Two- and four-point functions entering the fourth-order indicators.

    c12 = <F1† F2>, c12dag = <F1† F2†>, p1 = <F1† F1>, p2 = <F2† F2>,
    p12 = <F1† F1 F2† F2>; ``p12_anti`` = <F1† F1 F2 F2†> is optional.
    """

    c12: complex
    c12dag: complex
    p1: float
    p2: float
    p12: float
    p12_anti: Optional[float] = None

    def __post_init__(self):
        for name in ("p1", "p2", "p12", "p12_anti"):
            val = getattr(self, name)
            if val is None:
                continue
            val = complex(val)
            if abs(val.imag) > REAL_TOL * max(1.0, abs(val)):
                raise DomainError(f"{name} must be real, got {val}")
            if val.real < -REAL_TOL:
                raise DomainError(f"{name} is an expectation of a positive operator, got {val.real}")
            object.__setattr__(self, name, max(float(val.real), 0.0))
        object.__setattr__(self, "c12", complex(self.c12))
        object.__setattr__(self, "c12dag", complex(self.c12dag))
        scale = max(1.0, self.p12)
        # <A A†> >= |<A>|^2 with A = F1† F2†
        if abs(self.c12dag) ** 2 > self.p12 + SCHWARZ_TOL * scale:
            raise DomainError("|<F1† F2†>|^2 exceeds <F1† F1 F2† F2>")
        if self.p12_anti is not None and abs(self.c12) ** 2 > self.p12_anti + SCHWARZ_TOL * max(1.0, self.p12_anti):
            raise DomainError("|<F1† F2>|^2 exceeds <F1† F1 F2 F2†>")


@dataclass(frozen=True)
class FourthOrderResult:
    n23_coeff: float
    n14_coeff: float
    t_reference: Optional[float] = None

    def at(self, t: float) -> tuple[float, float]:
        return self.n23_coeff * t**4, self.n14_coeff * t**4

    @property
    def entangled(self) -> bool:
        return self.n23_coeff > 0 or self.n14_coeff > 0


def fourth_order(c: CorrelatorSet) -> FourthOrderResult:
    return FourthOrderResult(
        n23_coeff=abs(c.c12) ** 2 - c.p12,
        n14_coeff=abs(c.c12dag) ** 2 - c.p1 * c.p2,
    )


def _expect(mix, factors: Sequence[tuple[np.ndarray, int]]) -> complex:
    """<X_1 ... X_k> for single-mode factors (matrix, mode); the last acts first."""
    total = 0j
    for w, state in mix.components:
        psi = state.tensor()
        v = psi
        for mat, mode in reversed(factors):
            v = apply_local(v, mat, mode)
        total += w * np.vdot(psi, v)
    return complex(total)


def correlators_exact(F1: CouplingOperator, F2: CouplingOperator, rho_B) -> CorrelatorSet:
    """Correlators by direct expectation in the truncated space.

    Exact as long as the cutoff leaves room for two ladder steps above the
    occupied part of rho_B.
    """
    mix = as_mixture(rho_B)
    if F1.basis != mix.basis or F2.basis != mix.basis:
        raise DomainError("couplings and field state must share one Fock basis")
    f1, f2 = (F1.local, F1.mode), (F2.local, F2.mode)
    f1d, f2d = (F1.local.conj().T, F1.mode), (F2.local.conj().T, F2.mode)
    return CorrelatorSet(
        c12=_expect(mix, [f1d, f2]),
        c12dag=_expect(mix, [f1d, f2d]),
        p1=_expect(mix, [f1d, f1]),
        p2=_expect(mix, [f2d, f2]),
        p12=_expect(mix, [f1d, f1, f2d, f2]),
        p12_anti=_expect(mix, [f1d, f1, f2, f2d]),
    )


def expansion_density(F1: CouplingOperator, F2: CouplingOperator, rho_B, t: float) -> TwoQubitState:
    """Reduced state with every entry expanded to order t^4 (qubits start in |0,0>).

    Uses K = 1 - P t^2/2 + P^2 t^4/24, N = -i F t (1 - P t^2/6), P = F†F.
    Trace is exactly one; positivity is not guaranteed once t is not small.
    """
    mix = as_mixture(rho_B)
    f1, f2 = (F1.local, F1.mode), (F2.local, F2.mode)
    f1d, f2d = (F1.local.conj().T, F1.mode), (F2.local.conj().T, F2.mode)
    E = lambda *ops: _expect(mix, ops)  # noqa: E731
    P1, P2 = E(f1d, f1).real, E(f2d, f2).real
    P1sq, P2sq = E(f1d, f1, f1d, f1).real, E(f2d, f2, f2d, f2).real
    P12 = E(f1d, f1, f2d, f2).real
    t2, t4 = t * t, t**4
    r11 = 1 - (P1 + P2) * t2 + (P1sq + P2sq) * t4 / 3 + P12 * t4
    r22 = P2 * t2 - P2sq * t4 / 3 - P12 * t4
    r33 = P1 * t2 - P1sq * t4 / 3 - P12 * t4
    r44 = P12 * t4
    r23 = (
        E(f1d, f2) * t2
        - 0.5 * E(f1d, f2d, f2, f2) * t4
        - 0.5 * E(f1d, f1d, f1, f2) * t4
        - E(f1d, f1, f1d, f2) * t4 / 6
        - E(f1d, f2, f2d, f2) * t4 / 6
    )
    r14 = (
        -E(f1d, f2d) * t2
        + 0.5 * E(f1d, f2d, f2d, f2) * t4
        + 0.5 * E(f1d, f1d, f1, f2d) * t4
        + E(f1d, f2d, f2, f2d) * t4 / 6
        + E(f1d, f1, f1d, f2d) * t4 / 6
    )
    rho = np.diag([r11, r22, r33, r44]).astype(complex)
    rho[1, 2], rho[2, 1] = r23, np.conj(r23)
    rho[0, 3], rho[3, 0] = r14, np.conj(r14)
    return TwoQubitState(rho)


def jc_condensate_correlators(N: int, u1: complex, u2: complex, g1: float, g2: float) -> CorrelatorSet:
    """F_i = g_i a_i on N bosons sharing phi_B: <a1† a2> = N u1* u2, <n1 n2> = N(N-1)|u1 u2|^2."""
    a1, a2 = abs(u1) ** 2, abs(u2) ** 2
    return CorrelatorSet(
        c12=g1 * g2 * N * np.conj(u1) * u2,
        c12dag=0.0,
        p1=g1**2 * N * a1,
        p2=g2**2 * N * a2,
        p12=g1**2 * g2**2 * N * (N - 1) * a1 * a2,
    )


def mixed_operator_correlators(
    beta1: float, theta1: float, beta2: float, theta2: float,
    u1: complex, u2: complex, g1: float = 1.0, g2: float = 1.0,
) -> CorrelatorSet:
    """F_i = g_i (a_i + |beta_i| e^{i theta_i} a_i†) on the 1-particle state u1|1,0> + u2|0,1> (+ u_T)."""
    b1 = abs(beta1) * np.exp(1j * theta1)
    b2 = abs(beta2) * np.exp(1j * theta2)
    a1, a2 = abs(u1) ** 2, abs(u2) ** 2
    B1, B2 = abs(b1) ** 2, abs(b2) ** 2
    gg = g1 * g2
    return CorrelatorSet(
        c12=gg * (np.conj(u1) * u2 + np.conj(b1) * b2 * u1 * np.conj(u2)),
        c12dag=gg * (np.conj(b2) * np.conj(u1) * u2 + np.conj(b1) * u1 * np.conj(u2)),
        p1=g1**2 * (a1 + B1 * (1 + a1)),
        p2=g2**2 * (a2 + B2 * (1 + a2)),
        p12=gg**2 * (B1 * B2 + a1 * (1 + B1) * B2 + a2 * (1 + B2) * B1),
    )


def beta_indicator(beta: float) -> float:
    """n23 t^4-coefficient for the symmetric case u1 = u2 = 1/sqrt(2), beta1 = beta2 = beta, g = 1."""
    s = 1 / sqrt(2)
    return fourth_order(mixed_operator_correlators(beta, 0.0, beta, 0.0, s, s)).n23_coeff


def beta_threshold() -> float:
    """Largest |beta| for which the symmetric mixed coupling still gives n23 > 0."""
    return sqrt((2 * sqrt(2) - 1) / 7)


def n23_distribution(p: NumberDistribution, u1: complex, u2: complex, g1: float = 1.0, g2: float = 1.0) -> float:
    """t^4-coefficient of n23 for sum_N p_N |N><N| and F_i = g_i a_i.

    Positive exactly when mean^2 > sum_N p_N N (N-1), i.e. sub-Poissonian.
    """
    if not isinstance(p, NumberDistribution):
        raise DomainError("expected a NumberDistribution")
    pref = g1**2 * g2**2 * abs(u1) ** 2 * abs(u2) ** 2
    return pref * (p.mean**2 - p.factorial_moment2())


def n23_two_mode(N1: int, N2: int, u, g1: float = 1.0, g2: float = 1.0) -> float:
    """t^4-coefficient of n23 for N1 bosons in phi_B1 and N2 in phi_B2 (orthogonal).

    ``u[i, k] = <phi_i|phi_Bk>``.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise DomainError("overlap matrix must be 2x2")
    if np.any(np.sum(np.abs(u) ** 2, axis=0) > 1 + 1e-12):
        raise DomainError("overlaps of a normalized state cannot exceed unit norm")
    return g1**2 * g2**2 * (
        N1 * abs(u[0, 0] * u[1, 0]) ** 2
        + N2 * abs(u[0, 1] * u[1, 1]) ** 2
        - N1 * N2 * (abs(u[1, 0] * u[0, 1]) ** 2 + abs(u[1, 1] * u[0, 0]) ** 2)
    )


def field_constraint(beta1: complex, beta2: complex, overlap_psi1_phi2: complex, overlap_psi2_phi1: complex) -> float:
    """|beta1 <psi1|phi2> - beta2 <psi2|phi1>|; zero is needed for [F1, F2] = 0."""
    return abs(beta1 * overlap_psi1_phi2 - beta2 * overlap_psi2_phi1)


def field_vacuum_correlators(
    beta1: complex, beta2: complex, overlap_psi1_phi2: complex, g1: float = 1.0, g2: float = 1.0
) -> CorrelatorSet:
    """F_i = g_i (a(phi_i) + beta_i* a†(psi_i)) in the particle vacuum."""
    return CorrelatorSet(
        c12=0.0,
        c12dag=g1 * g2 * beta1 * overlap_psi1_phi2,
        p1=g1**2 * abs(beta1) ** 2,
        p2=g2**2 * abs(beta2) ** 2,
        p12=g1**2 * g2**2 * abs(beta1) ** 2 * (abs(beta2) ** 2 + abs(overlap_psi1_phi2) ** 2),
    )
