"""Exact two-qubit reduced state for commuting couplings H_i = [[0, F_i†], [F_i, 0]].

With U = U_1 U_2 the qubit blocks <0|U_i|0> = cos(sqrt(F†F) t) = K and
<1|U_i|0> = -i F sin(sqrt(F†F) t)/sqrt(F†F) = N are matrix functions of the
Hermitian F†F, evaluated through its eigendecomposition on the single mode
each coupling acts on.  The 4x4 state follows from
rho[a, a'] = sum_w p_w <M_a' psi_w | M_a psi_w> with M_(x,y) = B1[x] B2[y].
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

from .errors import NumericError, ScenarioError
from .fock import CouplingOperator, apply_local, as_mixture, check_commuting

COMMUTE_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = -1e-10
HERMITIAN_TOL = 1e-12
X_TOL = 1e-10

# entries outside the X pattern: (1,2), (1,3), (2,4), (3,4) and transposes
NON_X = [(0, 1), (0, 2), (1, 3), (2, 3), (1, 0), (2, 0), (3, 1), (3, 2)]


def sin_over_sqrt(lam: np.ndarray, t: float, lam_tol: float) -> np.ndarray:
    """sin(sqrt(lam) t)/sqrt(lam), with the removable singularity set to t."""
    root = np.sqrt(lam)
    small = lam <= lam_tol
    safe = np.where(small, 1.0, root)
    return np.where(small, t, np.sin(safe * t) / safe)


def local_kn(F: CouplingOperator, t: float) -> tuple[np.ndarray, np.ndarray]:
    lam, vec = F.spectrum
    lam_tol = 1e-12 * lam.max() if lam.size and lam.max() > 0 else 0.0
    vh = vec.conj().T
    K = (vec * np.cos(np.sqrt(lam) * t)) @ vh
    N = -1j * F.local @ ((vec * sin_over_sqrt(lam, t, lam_tol)) @ vh)
    return K, N


@dataclass(frozen=True, eq=False)
class ChannelOperators:
    local_K: np.ndarray
    local_N: np.ndarray
    t: float
    source: CouplingOperator

    @cached_property
    def K(self) -> np.ndarray:
        return self.source.basis.embed(self.local_K, self.source.mode)

    @cached_property
    def N(self) -> np.ndarray:
        return self.source.basis.embed(self.local_N, self.source.mode)

    def completeness_residual(self) -> float:
        """max |K†K + N†N - I| (checked on the single mode; identity elsewhere)."""
        K, N = self.local_K, self.local_N
        return float(np.max(np.abs(K.conj().T @ K + N.conj().T @ N - np.eye(K.shape[0]))))


def kn_operators(F: CouplingOperator, t: float) -> ChannelOperators:
    K, N = local_kn(F, t)
    return ChannelOperators(K, N, float(t), F)


class InitialQubitState(Enum):
    A1 = (0, 0)
    A2 = (0, 1)
    A3 = (1, 0)
    A4 = (1, 1)

    @classmethod
    def parse(cls, label) -> "InitialQubitState":
        if isinstance(label, cls):
            return label
        key = str(label).strip().upper().replace("|", "").replace(">", "").replace(",", "")
        aliases = {"00": "A1", "01": "A2", "10": "A3", "11": "A4"}
        key = aliases.get(key, key)
        try:
            return cls[key]
        except KeyError:
            raise ScenarioError(f"unknown initial qubit state {label!r}") from None


_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)
FLIP = {
    InitialQubitState.A1: np.eye(4, dtype=complex),
    InitialQubitState.A2: np.kron(_I2, _SX),
    InitialQubitState.A3: np.kron(_SX, _I2),
    InitialQubitState.A4: np.kron(_SX, _SX),
}


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """4x4 density matrix in the basis |00>, |01>, |10>, |11>."""

    rho: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.rho, dtype=complex)
        if r.shape != (4, 4):
            raise ValueError("two-qubit state must be 4x4")
        r.setflags(write=False)
        object.__setattr__(self, "rho", r)

    def entry(self, i: int, j: int) -> complex:
        """1-based access matching the rho_ij labels."""
        return complex(self.rho[i - 1, j - 1])

    @property
    def trace_residual(self) -> float:
        return abs(complex(np.trace(self.rho)) - 1.0)

    @property
    def hermitian_residual(self) -> float:
        return float(np.max(np.abs(self.rho - self.rho.conj().T)))

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(0.5 * (self.rho + self.rho.conj().T)).min())

    @property
    def x_residual(self) -> float:
        return max(abs(self.rho[i, j]) for i, j in NON_X)

    @property
    def schwarz_margins(self) -> tuple[float, float]:
        """(rho11 rho44 - |rho14|^2, rho22 rho33 - |rho23|^2); both >= 0 for a valid X-state."""
        d = np.real(np.diag(self.rho))
        return (
            d[0] * d[3] - abs(self.rho[0, 3]) ** 2,
            d[1] * d[2] - abs(self.rho[1, 2]) ** 2,
        )

    def violations(self) -> list[str]:
        out = []
        if self.hermitian_residual > HERMITIAN_TOL:
            out.append(f"not Hermitian (residual {self.hermitian_residual:.3g})")
        if self.trace_residual > TRACE_TOL:
            out.append(f"trace off by {self.trace_residual:.3g}")
        if self.min_eigenvalue < PSD_TOL:
            out.append(f"negative eigenvalue {self.min_eigenvalue:.3g}")
        return out

    def check(self) -> "TwoQubitState":
        problems = self.violations()
        if problems:
            raise NumericError("invalid two-qubit state: " + "; ".join(problems))
        return self

    def conjugated(self, V: np.ndarray) -> "TwoQubitState":
        return TwoQubitState(V @ self.rho @ V.conj().T)


def trace_check(state: TwoQubitState) -> float:
    return state.trace_residual


def _gram_a1(F1: CouplingOperator, F2: CouplingOperator, rho_B, t: float) -> np.ndarray:
    K1, N1 = local_kn(F1, t)
    K2, N2 = local_kn(F2, t)
    rho = np.zeros((4, 4), dtype=complex)
    for w, state in as_mixture(rho_B).components:
        psi = state.tensor()
        rows = []
        for B1 in (K1, N1):
            for B2 in (K2, N2):
                v = apply_local(apply_local(psi, B2, F2.mode), B1, F1.mode)
                rows.append(v.reshape(-1))
        X = np.array(rows)
        rho += w * (X @ X.conj().T)
    return rho


def reduced_density(
    F1: CouplingOperator,
    F2: CouplingOperator,
    rho_B,
    t: float,
    init: InitialQubitState = InitialQubitState.A1,
    validate: bool = True,
) -> TwoQubitState:
    """Qubit state after time t for qubits prepared in ``init`` and field in ``rho_B``.

    Initial states other than |0,0> are mapped onto it: flipping qubit i
    exchanges F_i with F_i† and conjugates the result with sigma_x on qubit i.
    """
    init = InitialQubitState.parse(init)
    mix = as_mixture(rho_B)
    if F1.basis != mix.basis or F2.basis != mix.basis:
        raise ScenarioError("couplings and field state must share one Fock basis")
    residual = check_commuting(F1, F2)
    if residual > COMMUTE_TOL:
        raise ScenarioError(f"couplings do not commute (residual {residual:.3g})")
    G1 = F1.dagger() if init.value[0] else F1
    G2 = F2.dagger() if init.value[1] else F2
    state = TwoQubitState(_gram_a1(G1, G2, mix, t)).conjugated(FLIP[init])
    if validate:
        state.check()
    return state
