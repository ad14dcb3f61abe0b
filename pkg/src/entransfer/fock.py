"""Truncated multimode Fock space.

Modes are laid out as in the rest of the package: mode 0 carries the
1-particle state coupled to qubit 1, mode 1 the state coupled to qubit 2 and
mode 2 (when present) a spectator orthogonal to both.  Basis index order is
row-major over occupation tuples, mode 0 most significant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import factorial, sqrt
from typing import Callable, Sequence, Union

import numpy as np

from .distributions import NumberDistribution, log_multinomial
from .errors import CapacityError, DomainError

MAX_DIM = 1 << 22
ORTHONORMAL_TOL = 1e-10

CoeffTable = Union[float, complex, Sequence[complex], np.ndarray, Callable[[int], complex]]


@dataclass(frozen=True)
class FockBasis:
    n_modes: int
    cutoff: int

    def __post_init__(self):
        if self.n_modes < 1 or self.cutoff < 1:
            raise DomainError("need n_modes >= 1 and cutoff >= 1")
        if (self.cutoff + 1) ** self.n_modes > MAX_DIM:
            raise CapacityError(
                f"(cutoff+1)^n_modes = {self.cutoff + 1}^{self.n_modes} exceeds {MAX_DIM}"
            )

    @property
    def dim(self) -> int:
        return (self.cutoff + 1) ** self.n_modes

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.cutoff + 1,) * self.n_modes

    def index(self, occupation: Sequence[int]) -> int:
        if len(occupation) != self.n_modes:
            raise DomainError(f"occupation tuple needs {self.n_modes} entries")
        if any(n < 0 or n > self.cutoff for n in occupation):
            raise DomainError(f"occupation {tuple(occupation)} outside cutoff {self.cutoff}")
        return int(np.ravel_multi_index(tuple(occupation), self.shape))

    def occupation(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.dim:
            raise DomainError(f"index {index} outside [0, {self.dim})")
        return tuple(int(n) for n in np.unravel_index(index, self.shape))

    def occupations(self) -> np.ndarray:
        """(dim, n_modes) array of occupation tuples in index order."""
        grids = np.indices(self.shape).reshape(self.n_modes, -1)
        return grids.T.copy()

    def embed(self, local: np.ndarray, mode: int) -> np.ndarray:
        """Lift a single-mode matrix to the full space (identity on other modes)."""
        if not 0 <= mode < self.n_modes:
            raise DomainError(f"mode {mode} not in basis with {self.n_modes} modes")
        d = self.cutoff + 1
        left = np.eye(d**mode)
        right = np.eye(d ** (self.n_modes - mode - 1))
        return np.kron(np.kron(left, local), right)


def make_basis(n_modes: int, cutoff: int) -> FockBasis:
    return FockBasis(n_modes, cutoff)


def annihilation(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), k=1).astype(complex)


def creation(cutoff: int) -> np.ndarray:
    return annihilation(cutoff).T.copy()


@dataclass(frozen=True, eq=False)
class StateVector:
    basis: FockBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.basis.dim:
            raise DomainError(f"{amps.size} amplitudes for a basis of dim {self.basis.dim}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.basis.shape)

    def normalized(self) -> "StateVector":
        nrm = self.norm
        if nrm == 0:
            raise DomainError("cannot normalize the zero vector")
        return StateVector(self.basis, self.amplitudes / nrm)

    def amplitude(self, occupation: Sequence[int]) -> complex:
        return complex(self.amplitudes[self.basis.index(occupation)])

    @classmethod
    def fock(cls, basis: FockBasis, occupation: Sequence[int]) -> "StateVector":
        amps = np.zeros(basis.dim, dtype=complex)
        amps[basis.index(occupation)] = 1.0
        return cls(basis, amps)

    @classmethod
    def vacuum(cls, basis: FockBasis) -> "StateVector":
        return cls.fock(basis, (0,) * basis.n_modes)


@dataclass(frozen=True, eq=False)
class MixedBosonState:
    """Convex combination of pure states on one basis."""

    components: tuple[tuple[float, StateVector], ...]

    def __post_init__(self):
        comps = tuple((float(w), s) for w, s in self.components)
        if not comps:
            raise DomainError("a mixture needs at least one component")
        weights = np.array([w for w, _ in comps])
        if np.any(weights < 0):
            raise DomainError("mixture weights must be nonnegative")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise DomainError(f"mixture weights sum to {weights.sum():.15g}, not 1")
        basis = comps[0][1].basis
        if any(s.basis != basis for _, s in comps):
            raise DomainError("all mixture components must share one basis")
        object.__setattr__(self, "components", comps)

    @property
    def basis(self) -> FockBasis:
        return self.components[0][1].basis

    @classmethod
    def pure(cls, state: StateVector) -> "MixedBosonState":
        return cls(((1.0, state),))


def as_mixture(state: Union[StateVector, MixedBosonState]) -> MixedBosonState:
    if isinstance(state, MixedBosonState):
        return state
    if isinstance(state, StateVector):
        return MixedBosonState.pure(state)
    raise TypeError(f"expected a StateVector or MixedBosonState, got {type(state).__name__}")


def _table(coeff: CoeffTable, cutoff: int) -> np.ndarray:
    if callable(coeff):
        return np.array([coeff(k) for k in range(cutoff + 1)], dtype=complex)
    arr = np.asarray(coeff, dtype=complex)
    if arr.ndim == 0:
        return np.full(cutoff + 1, complex(arr))
    if arr.shape != (cutoff + 1,):
        raise DomainError(f"coefficient table must cover occupations 0..{cutoff}")
    return arr


@dataclass(frozen=True, eq=False)
class CouplingOperator:
    """Single-mode operator F acting on ``mode`` of ``basis``.

    ``local`` is the (cutoff+1)-square matrix on that mode, including the
    coupling strength ``g``.  The full-space matrix is built on demand.
    """

    basis: FockBasis
    mode: int
    g: float
    local: np.ndarray
    label: str = field(default="F", compare=False)

    def __post_init__(self):
        d = self.basis.cutoff + 1
        loc = np.asarray(self.local, dtype=complex)
        if loc.shape != (d, d):
            raise DomainError(f"local matrix must be {d}x{d}")
        if not 0 <= self.mode < self.basis.n_modes:
            raise DomainError(f"mode {self.mode} not in basis")
        loc.setflags(write=False)
        object.__setattr__(self, "local", loc)

    @cached_property
    def matrix(self) -> np.ndarray:
        return self.basis.embed(self.local, self.mode)

    @property
    def bands(self) -> list[tuple[int, np.ndarray]]:
        """Nonzero diagonals as (offset, values) with <k+offset|F|k> = values[k]."""
        out = []
        d = self.local.shape[0]
        for off in range(-(d - 1), d):
            vals = np.diagonal(self.local, offset=-off)
            if np.any(vals != 0):
                full = np.zeros(d, dtype=complex)
                start = max(0, -off)
                full[start : start + vals.size] = vals
                out.append((off, full))
        return out

    def dagger(self) -> "CouplingOperator":
        label = self.label[:-1] if self.label.endswith("†") else self.label + "†"
        return CouplingOperator(self.basis, self.mode, self.g, self.local.conj().T, label)

    @cached_property
    def spectrum(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigen-decomposition (eigenvalues clipped at 0, eigenvectors) of local F†F."""
        from .errors import NumericError

        m = self.local.conj().T @ self.local
        m = 0.5 * (m + m.conj().T)
        try:
            lam, vec = np.linalg.eigh(m)
        except np.linalg.LinAlgError as exc:
            raise NumericError(
                f"eigh of F†F failed (dim {m.shape[0]}, cond {np.linalg.cond(m):.3g})"
            ) from exc
        return np.clip(lam, 0.0, None), vec


def build_coupling(
    basis: FockBasis,
    mode: int,
    g: float,
    p_table: CoeffTable = 1.0,
    n: int = 1,
    q_table: CoeffTable = 0.0,
    m: int = 1,
) -> CouplingOperator:
    """g * (p(a†a) a^n + q(a†a) a†^m) on one mode.

    The number-operator functions sit to the left of the ladder powers, so
    they are evaluated at the occupation reached after the jump:
    <k-n|p(a†a) a^n|k> = p(k-n) sqrt(k!/(k-n)!),
    <k+m|q(a†a) a†^m|k> = q(k+m) sqrt((k+m)!/k!).
    Bands reaching past the cutoff are simply empty.
    """
    if n < 1 and m < 1:
        raise DomainError("need n >= 1 or m >= 1")
    c = basis.cutoff
    p = _table(p_table, c)
    q = _table(q_table, c)
    local = np.zeros((c + 1, c + 1), dtype=complex)
    if n >= 1:
        for k in range(n, c + 1):
            local[k - n, k] += p[k - n] * sqrt(factorial(k) / factorial(k - n))
    if m >= 1:
        for k in range(0, c + 1 - m):
            local[k + m, k] += q[k + m] * sqrt(factorial(k + m) / factorial(k))
    return CouplingOperator(basis, mode, float(g), g * local)


def mode_lowering(basis: FockBasis, mode: int, g: float = 1.0, power: int = 1) -> CouplingOperator:
    """g * a^power on ``mode``."""
    return build_coupling(basis, mode, g, 1.0, power, 0.0, 1)


def mixed_coupling(
    basis: FockBasis, mode: int, g: float, beta: float, theta: float = 0.0
) -> CouplingOperator:
    """g * (a + |beta| e^{i theta} a†)."""
    return build_coupling(basis, mode, g, 1.0, 1, abs(beta) * np.exp(1j * theta), 1)


def spectator_amplitude(u1: complex, u2: complex) -> float:
    w = abs(u1) ** 2 + abs(u2) ** 2
    if w > 1 + 1e-12:
        raise DomainError(f"|u1|^2 + |u2|^2 = {w:.15g} exceeds 1")
    # rounding in |u1|^2 + |u2|^2 = 1 would otherwise leave u_T ~ 1e-8
    rest = 1.0 - w
    return sqrt(rest) if rest > 1e-14 else 0.0


def condensate_state(basis: FockBasis, N: int, u1: complex, u2: complex) -> StateVector:
    """N bosons in phi_B = u1 phi_1 + u2 phi_2 + u_T phi_T, in occupation representation.

    The spectator amplitude u_T is real and nonnegative.  A two-mode basis is
    accepted when u_T vanishes.
    """
    u_t = spectator_amplitude(u1, u2)
    if basis.n_modes not in (2, 3):
        raise DomainError("condensate states live on a 2- or 3-mode basis")
    if basis.n_modes == 2 and u_t > 1e-12:
        raise DomainError(f"u_T = {u_t:.3g} needs a spectator mode (3-mode basis)")
    if N < 0 or N > basis.cutoff:
        raise DomainError(f"N = {N} outside 0..cutoff ({basis.cutoff})")
    amps = np.zeros(basis.shape, dtype=complex)
    for n1 in range(N + 1):
        for n2 in range(N - n1 + 1):
            nt = N - n1 - n2
            if basis.n_modes == 2 and nt > 0:
                continue
            coeff = np.exp(0.5 * log_multinomial(n1, n2, nt)) * u1**n1 * u2**n2 * u_t**nt
            idx = (n1, n2, nt) if basis.n_modes == 3 else (n1, n2)
            amps[idx] = coeff
    return StateVector(basis, amps.reshape(-1)).normalized()


def apply_local(tensor: np.ndarray, local: np.ndarray, mode: int) -> np.ndarray:
    """Contract a single-mode matrix into axis ``mode`` of a state tensor."""
    out = np.tensordot(local, tensor, axes=([1], [mode]))
    return np.moveaxis(out, 0, mode)


def orthogonal_product_state(
    basis: FockBasis, one_particle_states: Sequence[Sequence[complex]]
) -> StateVector:
    """prod_k a†(phi_k)|0> for mutually orthonormal 1-particle states phi_k."""
    phis = [np.asarray(p, dtype=complex) for p in one_particle_states]
    if any(p.shape != (basis.n_modes,) for p in phis):
        raise DomainError(f"each 1-particle state needs {basis.n_modes} mode amplitudes")
    if len(phis) > basis.cutoff:
        raise DomainError(f"{len(phis)} particles exceed cutoff {basis.cutoff}")
    if phis:
        gram = np.array([[np.vdot(a, b) for b in phis] for a in phis])
        if np.max(np.abs(gram - np.eye(len(phis)))) > ORTHONORMAL_TOL:
            raise DomainError("1-particle states must satisfy <phi_k|phi_k'> = delta_kk'")
    adag = creation(basis.cutoff)
    psi = StateVector.vacuum(basis).tensor().copy()
    for phi in phis:
        nxt = np.zeros_like(psi)
        for j, amp in enumerate(phi):
            if amp != 0:
                nxt += amp * apply_local(psi, adag, j)
        psi = nxt
    return StateVector(basis, psi.reshape(-1)).normalized()


def occupied_orbitals_state(
    basis: FockBasis, orbitals: Sequence[Sequence[complex]], counts: Sequence[int]
) -> StateVector:
    """prod_k a†(phi_k)^{N_k}|0>, normalized; the phi_k must be orthonormal."""
    if len(orbitals) != len(counts) or any(c < 0 for c in counts):
        raise DomainError("need one nonnegative count per orbital")
    if sum(counts) > basis.cutoff:
        raise DomainError(f"{sum(counts)} particles exceed cutoff {basis.cutoff}")
    phis = [np.asarray(p, dtype=complex) for p in orbitals]
    if any(p.shape != (basis.n_modes,) for p in phis):
        raise DomainError(f"each 1-particle state needs {basis.n_modes} mode amplitudes")
    gram = np.array([[np.vdot(a, b) for b in phis] for a in phis])
    if gram.size and np.max(np.abs(gram - np.eye(len(phis)))) > ORTHONORMAL_TOL:
        raise DomainError("1-particle states must satisfy <phi_k|phi_k'> = delta_kk'")
    adag = creation(basis.cutoff)
    psi = StateVector.vacuum(basis).tensor().copy()
    for phi, count in zip(phis, counts):
        for _ in range(count):
            nxt = np.zeros_like(psi)
            for j, amp in enumerate(phi):
                if amp != 0:
                    nxt += amp * apply_local(psi, adag, j)
            psi = nxt
    return StateVector(basis, psi.reshape(-1)).normalized()


def number_mixture(
    basis: FockBasis, dist: NumberDistribution, u1: complex, u2: complex
) -> MixedBosonState:
    """sum_N p_N |N><N| with |N> the condensate of N bosons in phi_B."""
    comps = tuple(
        (float(dist.weights[N]), condensate_state(basis, int(N), u1, u2)) for N in dist.support
    )
    total = sum(w for w, _ in comps)
    return MixedBosonState(tuple((w / total, s) for w, s in comps))


def _as_matrix(op, basis: FockBasis) -> np.ndarray:
    if isinstance(op, CouplingOperator):
        if op.basis != basis:
            raise DomainError("operator and state live on different bases")
        return op.matrix
    mat = np.asarray(op)
    if mat.shape != (basis.dim, basis.dim):
        raise DomainError(f"operator shape {mat.shape} does not match basis dim {basis.dim}")
    return mat


def expectation(state, operator_product: Sequence) -> complex:
    """Tr(rho_B X_1 X_2 ... X_k); the rightmost operator acts first."""
    mix = as_mixture(state)
    mats = [_as_matrix(op, mix.basis) for op in operator_product]
    total = 0.0j
    for w, s in mix.components:
        v = s.amplitudes
        for mat in reversed(mats):
            v = mat @ v
        total += w * np.vdot(s.amplitudes, v)
    return complex(total)


def _reach(op: CouplingOperator) -> int:
    return max((abs(off) for off, _ in op.bands), default=0)


def check_commuting(F1: CouplingOperator, F2: CouplingOperator) -> float:
    """Largest entry of [F1,F2], [F1,F2†], [F1†,F2†].

    Evaluated on basis states whose occupations stay clear of the cutoff by
    the combined band reach, so truncation artefacts at the edge of the
    space do not register as non-commutation.
    """
    if F1.basis != F2.basis:
        raise DomainError("couplings live on different bases")
    basis = F1.basis
    if F1.mode != F2.mode:
        # kron factors on different tensor slots: every commutator is exactly zero
        return 0.0
    # same mode: the full commutator is the embedded single-mode one
    a, b = F1.local, F2.local
    ad, bd = a.conj().T, b.conj().T
    interior = basis.cutoff + 1 - (_reach(F1) + _reach(F2))
    keep = slice(0, interior if interior > 0 else basis.cutoff + 1)
    res = 0.0
    for x, y in ((a, b), (a, bd), (ad, bd)):
        comm = (x @ y - y @ x)[keep, keep]
        res = max(res, float(np.max(np.abs(comm))))
    return res
