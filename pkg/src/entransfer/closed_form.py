"""Analytic reduced states for the number-conserving and Bogoliubov scenarios.

Each function evaluates finite (or rapidly convergent) sums over occupation
numbers; none of them touches the eigensolver in :mod:`entransfer.channel`,
which makes them usable as independent references for it and vice versa.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, factorial, lgamma, log, sqrt

import numpy as np

from .channel import InitialQubitState
from .distributions import NumberDistribution, log_multinomial
from .entanglement import XState
from .errors import DomainError

SERIES_CUT = 1e-15


def falling(n: int, m: int) -> float:
    """n!/(n-m)!, zero below the band (n < m)."""
    return factorial(n) / factorial(n - m) if n >= m else 0.0


def rising(n: int, m: int) -> float:
    """(n+m)!/n!."""
    return factorial(n + m) / factorial(n)


def _weight(u2abs: float, k: int) -> float:
    """|u|^(2k) with 0^0 = 1."""
    return 1.0 if k == 0 else u2abs**k


@dataclass(frozen=True)
class CondensateScenario:
    N: int
    u1: complex
    u2: complex
    g1: float = 1.0
    g2: float = 1.0
    m: int = 1
    init: InitialQubitState = InitialQubitState.A1

    def __post_init__(self):
        if self.N < 0:
            raise DomainError("N must be >= 0")
        if self.m < 1:
            raise DomainError("photon order m must be >= 1")
        if abs(self.u1) ** 2 + abs(self.u2) ** 2 > 1 + 1e-12:
            raise DomainError("|u1|^2 + |u2|^2 must not exceed 1")
        object.__setattr__(self, "init", InitialQubitState.parse(self.init))


def rho_condensate(s: CondensateScenario, t: float) -> XState:
    """N bosons in one 1-particle state, F_i = g_i a_i^m, qubits from |0,0>.

    Diagonal entries weight F_kk by the multinomial occupation probabilities
    with the m-photon frequencies sqrt(n!/(n-m)!) g t; rho23 sums over
    configurations with m spare quanta in each coupled mode.
    """
    if s.init is not InitialQubitState.A1:
        raise DomainError("closed form covers the |0,0> preparation; see rho_condensate_excited")
    N, m = s.N, s.m
    a1, a2 = abs(s.u1) ** 2, abs(s.u2) ** 2
    at = max(0.0, 1.0 - a1 - a2)
    if at < 1e-14:
        at = 0.0

    def freq(n: int, g: float) -> float:
        return sqrt(falling(n, m)) * g * t

    diag = np.zeros(4)
    for n1 in range(N + 1):
        for n2 in range(N - n1 + 1):
            nt = N - n1 - n2
            w = exp(log_multinomial(n1, n2, nt)) * _weight(a1, n1) * _weight(a2, n2) * _weight(at, nt)
            if w == 0.0:
                continue
            c1, c2 = np.cos(freq(n1, s.g1)) ** 2, np.cos(freq(n2, s.g2)) ** 2
            diag += w * np.array([c1 * c2, c1 * (1 - c2), (1 - c1) * c2, (1 - c1) * (1 - c2)])

    r23 = 0.0
    for n1 in range(N - m + 1):
        for n2 in range(N - m - n1 + 1):
            nt = N - m - n1 - n2
            w = exp(lgamma(N + 1) - lgamma(n1 + 1) - lgamma(n2 + 1) - lgamma(nt + 1))
            w *= _weight(a1, n1) * _weight(a2, n2) * _weight(at, nt)
            if w == 0.0:
                continue
            f = 1.0
            for n, g in ((n1, s.g1), (n2, s.g2)):
                r = sqrt(rising(n, m))
                f *= np.cos(freq(n, g)) * np.sin(r * g * t) / r
            r23 += w * f
    r23 = (np.conj(s.u1) * s.u2) ** m * r23
    return XState(*map(float, diag), rho14=0j, rho23=complex(r23))


def rho_condensate_excited(u1: complex, u2: complex, g1: float, g2: float, t: float) -> XState:
    """One boson in phi_B, F_i = g_i a_i, qubits prepared in |1,1>.

    Flipping both qubits swaps F_i <-> F_i†, so each coupled mode now sees
    frequencies sqrt(n+1) g; the spectator term carries |u_T|^2.
    """
    a1, a2 = abs(u1) ** 2, abs(u2) ** 2
    if a1 + a2 > 1 + 1e-12:
        raise DomainError("|u1|^2 + |u2|^2 must not exceed 1")
    at = max(0.0, 1.0 - a1 - a2)
    s1, s2 = np.sin(g1 * t) ** 2, np.sin(g2 * t) ** 2
    c1, c2 = 1 - s1, 1 - s2
    S1, S2 = np.sin(sqrt(2) * g1 * t) ** 2, np.sin(sqrt(2) * g2 * t) ** 2
    C1, C2 = 1 - S1, 1 - S2
    # (weight, qubit-1 cos^2, qubit-2 cos^2) for the u1, u2 and u_T branches
    branches = ((a1, C1, c2), (a2, c1, C2), (at, c1, c2))
    r11 = sum(w * (1 - x) * (1 - y) for w, x, y in branches)
    r22 = sum(w * (1 - x) * y for w, x, y in branches)
    r33 = sum(w * x * (1 - y) for w, x, y in branches)
    r44 = sum(w * x * y for w, x, y in branches)
    r23 = (
        np.conj(u1) * u2
        * np.cos(sqrt(2) * g1 * t) * np.cos(sqrt(2) * g2 * t)
        * np.sin(g1 * t) * np.sin(g2 * t)
    )
    return XState(float(r11), float(r22), float(r33), float(r44), 0j, complex(r23))


def excited_peak_pairs(count: int = 3, tol: float = 0.1, max_n: int = 10_000) -> list[tuple[int, int]]:
    """Pairs (n, 2k+1) with |n sqrt(2) - (2k+1)| < tol.

    Each pair puts sqrt(2) g t near n pi and g t near (2k+1) pi/2, where the
    |1,1> preparation ends close to (|01> + |10>)/sqrt(2).
    """
    out = []
    for n in range(1, max_n + 1):
        odd = round(n * sqrt(2))
        if odd % 2 == 1 and abs(odd - n * sqrt(2)) < tol:
            out.append((n, odd))
            if len(out) == count:
                break
    return out


@dataclass(frozen=True)
class BogoliubovScenario:
    beta: float
    theta: float = 0.0
    g: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.beta < 1.0:
            raise DomainError(f"beta must lie in [0, 1), got {self.beta}")

    @property
    def r(self) -> float:
        return float(np.arctanh(self.beta))

    @property
    def g_eff(self) -> float:
        return self.g / np.cosh(self.r)


def squeezed_weights(beta: float, cut: float = SERIES_CUT) -> np.ndarray:
    """|c_n|^2 for the a-vacuum written in b-number states |2n>.

    |c_n|^2 = tanh^(2n) r (2n)! / (cosh r 4^n n!^2), r = artanh(beta).
    Terms stop once (2n+1)|c_n|^2 drops below ``cut``.
    """
    if not 0.0 <= beta < 1.0:
        raise DomainError("beta must lie in [0, 1)")
    if beta == 0.0:
        return np.array([1.0])
    r = float(np.arctanh(beta))
    log_th2 = 2 * log(beta)
    out = []
    n = 0
    while True:
        lw = n * log_th2 + lgamma(2 * n + 1) - 2 * lgamma(n + 1) - n * log(4) - log(np.cosh(r))
        w = exp(lw)
        out.append(w)
        if (2 * n + 1) * w < cut and n > 0:
            break
        n += 1
    return np.array(out)


def bogoliubov_series(s: BogoliubovScenario, t) -> dict[str, np.ndarray]:
    """The six sums A..F, vectorised over ``t``."""
    w = squeezed_weights(s.beta)
    n = np.arange(w.size)[:, None]
    w = w[:, None]
    tt = np.atleast_1d(np.asarray(t, dtype=float))[None, :]
    ch = np.cosh(s.r)
    x = s.g_eff * tt
    odd = np.sqrt(2 * n + 1)
    even = np.sqrt(2 * n)
    nxt = np.sqrt(2 * (n + 1))
    return {
        "A": np.sum((2 * n + 1) / ch**2 * w * np.cos(odd * x) ** 2, axis=0),
        "B": np.sum(w * np.cos(even * x) ** 2, axis=0),
        "C": np.sum((2 * n + 1) / ch**2 * w * np.sin(odd * x) ** 2, axis=0),
        "D": np.sum(w * np.sin(even * x) ** 2, axis=0),
        "E": np.sum(odd / ch * w * np.cos(even * x) * np.sin(odd * x), axis=0),
        "F": np.sinh(s.r) / ch**2
        * np.sum((2 * n + 1) / nxt * w * np.cos(odd * x) * np.sin(nxt * x), axis=0),
    }


def rho_bogoliubov(s: BogoliubovScenario, t: float) -> XState:
    """F_i = g (a_i + beta e^{i theta} a_i†) on (a1† + a2†)|0>/sqrt(2), qubits from |0,0>.

    rho = [[AB, 0, 0, -e^{-i theta} EF], [0, (AD+BC)/2, (E^2+F^2)/2, 0], ..., CD].
    """
    sr = bogoliubov_series(s, t)
    A, B, C, D, E, F = (float(sr[k][0]) for k in "ABCDEF")
    return XState(
        rho11=A * B,
        rho22=0.5 * (A * D + B * C),
        rho33=0.5 * (A * D + B * C),
        rho44=C * D,
        rho14=complex(-np.exp(-1j * s.theta) * E * F),
        rho23=complex(0.5 * (E * E + F * F)),
    )


def _xsum(parts: list[tuple[float, XState]]) -> XState:
    fields = ("rho11", "rho22", "rho33", "rho44", "rho14", "rho23")
    acc = {f: sum(w * getattr(x, f) for w, x in parts) for f in fields}
    return XState(*(float(np.real(acc[f])) for f in fields[:4]), complex(acc["rho14"]), complex(acc["rho23"]))


def rho_mixture(
    p: NumberDistribution, u1: complex, u2: complex, g1: float, g2: float, t: float, m: int = 1
) -> XState:
    """sum_N p_N rho(N) for rho_B = sum_N p_N |N><N|."""
    parts = [
        (float(p.weights[N]), rho_condensate(CondensateScenario(int(N), u1, u2, g1, g2, m), t))
        for N in p.support
    ]
    return _xsum(parts)


def rho_poisson(lam: float, u1: complex, u2: complex, g1: float, g2: float, t: float) -> XState:
    """Poisson number mixture in product form: rho = diag(c1 c2, c1 s2, s1 c2, s1 s2), rho23 = m1* m2."""

    def mode(u: complex, g: float):
        mu = lam * abs(u) ** 2
        c = s = 0.0
        mm = 0j
        n = 0
        log_w = -mu
        while True:
            w = exp(log_w) if mu > 0 else (1.0 if n == 0 else 0.0)
            x = sqrt(n) * g * t
            c += w * np.cos(x) ** 2
            s += w * np.sin(x) ** 2
            mm += w * np.cos(x) * np.sin(sqrt(n + 1) * g * t) / sqrt(n + 1)
            if n > mu and w < 1e-18:
                break
            n += 1
            log_w += log(mu) - log(n) if mu > 0 else 0.0
        return c, s, sqrt(lam) * u * mm

    c1, s1, m1 = mode(u1, g1)
    c2, s2, m2 = mode(u2, g2)
    return XState(c1 * c2, c1 * s2, s1 * c2, s1 * s2, 0j, complex(np.conj(m1) * m2))


@dataclass(frozen=True)
class SU2PairScenario:
    theta: float
    eta: float = 0.0
    g1: float = 1.0
    g2: float = 1.0

    def orbitals(self) -> tuple[np.ndarray, np.ndarray]:
        """phi_B1, phi_B2 as amplitudes over (phi_1, phi_2)."""
        c, s = np.cos(self.theta), np.sin(self.theta)
        return (
            np.array([c, s * np.exp(1j * self.eta)]),
            np.array([-s * np.exp(-1j * self.eta), c]),
        )


def rho_su2_pair(s: SU2PairScenario, t: float) -> XState:
    """One boson in each of two orthonormal states obtained from (phi_1, phi_2) by an SU(2) rotation.

    In occupation numbers the pair reads
    -sin(2th)/sqrt2 e^{-i eta}|2,0> + cos(2th)|1,1> + sin(2th)/sqrt2 e^{i eta}|0,2>.
    """
    g1t, g2t = s.g1 * t, s.g2 * t
    sin2, cos2 = np.sin(2 * s.theta) ** 2, np.cos(2 * s.theta) ** 2
    r2 = sqrt(2)
    r11 = 0.5 * sin2 * (np.cos(r2 * g1t) ** 2 + np.cos(r2 * g2t) ** 2) + cos2 * np.cos(g1t) ** 2 * np.cos(g2t) ** 2
    r22 = 0.5 * sin2 * np.sin(r2 * g2t) ** 2 + cos2 * np.cos(g1t) ** 2 * np.sin(g2t) ** 2
    r33 = 0.5 * sin2 * np.sin(r2 * g1t) ** 2 + cos2 * np.sin(g1t) ** 2 * np.cos(g2t) ** 2
    r44 = cos2 * np.sin(g1t) ** 2 * np.sin(g2t) ** 2
    r23 = (
        np.sin(4 * s.theta) * np.exp(1j * s.eta) / (2 * r2)
        * (np.sin(g1t) * np.sin(r2 * g2t) * np.cos(g2t) - np.sin(g2t) * np.sin(r2 * g1t) * np.cos(g1t))
    )
    return XState(float(r11), float(r22), float(r33), float(r44), 0j, complex(r23))


def product_amplitudes(orbitals, counts, n_modes: int) -> dict[tuple[int, ...], complex]:
    """Occupation amplitudes of prod_k a†(phi_k)^{N_k}|0> / sqrt(prod N_k!) by the multinomial theorem.

    Returns a sparse map occupation-tuple -> amplitude (normalized to the
    state's norm, which is 1 for orthonormal orbitals).
    """
    orbitals = [np.asarray(o, dtype=complex) for o in orbitals]
    if any(o.shape != (n_modes,) for o in orbitals):
        raise DomainError(f"orbitals need {n_modes} mode amplitudes")
    # coefficient of prod_j (a_j†)^{n_j}, accumulated orbital by orbital
    poly: dict[tuple[int, ...], complex] = {(0,) * n_modes: 1.0}
    for orb, Nk in zip(orbitals, counts):
        nxt: dict[tuple[int, ...], complex] = {}
        for split in _compositions(Nk, n_modes):
            coeff = exp(log_multinomial(*split))
            for j, kj in enumerate(split):
                coeff = coeff * orb[j] ** kj
            if coeff == 0:
                continue
            for occ, val in poly.items():
                key = tuple(a + b for a, b in zip(occ, split))
                nxt[key] = nxt.get(key, 0) + val * coeff
        poly = nxt
    norm = sqrt(float(np.prod([factorial(N) for N in counts])))
    return {
        occ: val * sqrt(float(np.prod([factorial(n) for n in occ]))) / norm
        for occ, val in poly.items()
        if val != 0
    }


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def rho_occupation(
    amplitudes: dict[tuple[int, ...], complex], g1: float, g2: float, t: float, m: int = 1
) -> XState:
    """Reduced state for any fixed-number field state given by its occupation amplitudes.

    F_i = g_i a_i^m on modes 0 and 1; other modes are spectators.  Uses
    K|n> = cos(sqrt(n!/(n-m)!) g t)|n> and N|n> = -i sin(sqrt(n!/(n-m)!) g t)|n-m>.
    """

    def cos_(n, g):
        return np.cos(sqrt(falling(n, m)) * g * t)

    diag = np.zeros(4)
    for occ, c in amplitudes.items():
        p = abs(c) ** 2
        k1, k2 = cos_(occ[0], g1) ** 2, cos_(occ[1], g2) ** 2
        diag += p * np.array([k1 * k2, k1 * (1 - k2), (1 - k1) * k2, (1 - k1) * (1 - k2)])
    r23 = 0j
    for occ, c in amplitudes.items():
        n1, n2 = occ[0], occ[1]
        if n2 < m:
            continue
        # ket term: m quanta removed from mode 2 of |occ>; bra term removes m from mode 1
        partner = (n1 + m, n2 - m) + tuple(occ[2:])
        cp = amplitudes.get(partner)
        if cp is None:
            continue
        base1, base2 = n1, n2 - m
        f = (
            cos_(base1, g1) * np.sin(sqrt(rising(base1, m)) * g1 * t)
            * cos_(base2, g2) * np.sin(sqrt(rising(base2, m)) * g2 * t)
        )
        r23 += np.conj(cp) * c * f
    return XState(*map(float, diag), 0j, complex(r23))


def two_mode_orbitals(U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """phi_B1, phi_B2 as the first two columns of a 3x3 unitary over (phi_1, phi_2, phi_T)."""
    U = np.asarray(U, dtype=complex)
    if U.shape != (3, 3) or np.max(np.abs(U.conj().T @ U - np.eye(3))) > 1e-10:
        raise DomainError("expected a 3x3 unitary")
    return U[:, 0].copy(), U[:, 1].copy()


def rho_two_mode(N1: int, N2: int, U: np.ndarray, g1: float, g2: float, t: float, m: int = 1) -> XState:
    """N1 bosons in phi_B1 and N2 in phi_B2 (columns of U), qubits from |0,0>."""
    b1, b2 = two_mode_orbitals(U)
    return rho_occupation(product_amplitudes([b1, b2], [N1, N2], 3), g1, g2, t, m)


def binomial_rescaled(M: int, p: float, u1: complex, u2: complex) -> CondensateScenario:
    """The pure-state scenario equivalent to a binomial(M, p) number mixture."""
    return CondensateScenario(M, sqrt(p) * u1, sqrt(p) * u2)

