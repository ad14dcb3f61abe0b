"""Partial transpose, negativity and the X-state indicators n23 / n14."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .channel import TwoQubitState
from .errors import DomainError

ENTANGLED_TOL = 1e-10

StateLike = Union[TwoQubitState, np.ndarray]


def _matrix(state: StateLike) -> np.ndarray:
    rho = state.rho if isinstance(state, TwoQubitState) else np.asarray(state, dtype=complex)
    if rho.shape != (4, 4):
        raise DomainError("expected a 4x4 two-qubit matrix")
    return rho


def partial_transpose(state: StateLike) -> np.ndarray:
    """Transpose on qubit 1: <a1 a2|rho^T1|a1' a2'> = <a1' a2|rho|a1 a2'>."""
    r = _matrix(state).reshape(2, 2, 2, 2)
    return r.transpose(2, 1, 0, 3).reshape(4, 4)


@dataclass(frozen=True)
class XState:
    rho11: float
    rho22: float
    rho33: float
    rho44: float
    rho14: complex = 0j
    rho23: complex = 0j

    def matrix(self) -> np.ndarray:
        m = np.diag([self.rho11, self.rho22, self.rho33, self.rho44]).astype(complex)
        m[0, 3], m[3, 0] = self.rho14, np.conj(self.rho14)
        m[1, 2], m[2, 1] = self.rho23, np.conj(self.rho23)
        return m

    def to_state(self) -> TwoQubitState:
        return TwoQubitState(self.matrix())

    @classmethod
    def from_state(cls, state: StateLike) -> "XState":
        r = _matrix(state)
        d = np.real(np.diag(r))
        return cls(float(d[0]), float(d[1]), float(d[2]), float(d[3]), complex(r[0, 3]), complex(r[1, 2]))

    def violations(self, tol: float = 1e-10) -> list[str]:
        out = []
        if abs(self.rho11 + self.rho22 + self.rho33 + self.rho44 - 1) > tol:
            out.append("diagonal does not sum to 1")
        if self.rho11 * self.rho44 < abs(self.rho14) ** 2 - tol:
            out.append("rho11 rho44 < |rho14|^2")
        if self.rho22 * self.rho33 < abs(self.rho23) ** 2 - tol:
            out.append("rho22 rho33 < |rho23|^2")
        return out


def _block_pair(a: float, b: float, c: complex) -> tuple[float, float]:
    """Eigenvalues of [[a, c], [c*, b]] as (minus, plus)."""
    s = a + b
    root = np.sqrt(max(s * s - 4 * (a * b - abs(c) ** 2), 0.0))
    return 0.5 * (s - root), 0.5 * (s + root)


def x_eigenvalues(x: XState) -> tuple[np.ndarray, np.ndarray]:
    """Ascending spectra of rho and of its partial transpose, from the 2x2 blocks.

    The partial transpose exchanges the coherences: rho23 -> rho14*, rho14 -> rho23*.
    """
    rho = [*_block_pair(x.rho11, x.rho44, x.rho14), *_block_pair(x.rho22, x.rho33, x.rho23)]
    pt = [*_block_pair(x.rho11, x.rho44, np.conj(x.rho23)), *_block_pair(x.rho22, x.rho33, np.conj(x.rho14))]
    return np.sort(rho), np.sort(pt)


def indicators(x: Union[XState, StateLike]) -> tuple[float, float]:
    """(n23, n14) = (|rho23|^2 - rho11 rho44, |rho14|^2 - rho22 rho33)."""
    if not isinstance(x, XState):
        x = XState.from_state(x)
    return (
        abs(x.rho23) ** 2 - x.rho11 * x.rho44,
        abs(x.rho14) ** 2 - x.rho22 * x.rho33,
    )


@dataclass(frozen=True)
class NegativityReport:
    negativity: float
    negative_eigenvalue: float
    branch: str
    n23: float
    n14: float

    @property
    def entangled(self) -> bool:
        return self.negativity > ENTANGLED_TOL


def pt_spectrum(state: StateLike) -> np.ndarray:
    pt = partial_transpose(state)
    return np.linalg.eigvalsh(0.5 * (pt + pt.conj().T))


def negativity(state: StateLike) -> NegativityReport:
    """Twice the magnitude of the negative partial-transpose eigenvalue.

    Equal to ||rho^T1||_1 - 1 whenever only one eigenvalue is negative,
    which is always the case for two qubits.
    """
    lam = float(pt_spectrum(state)[0])
    neg = min(lam, 0.0)
    value = abs(2.0 * neg)
    n23, n14 = indicators(state)
    if value <= ENTANGLED_TOL:
        branch = "none"
    else:
        branch = "n23" if n23 >= n14 else "n14"
    return NegativityReport(value, neg, branch, float(n23), float(n14))


def is_ppt(state: StateLike, tol: float = ENTANGLED_TOL) -> bool:
    return negativity(state).negativity <= tol
