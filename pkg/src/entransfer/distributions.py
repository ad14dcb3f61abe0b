"""Particle-number distributions p_N for mixtures rho_B = sum_N p_N |N><N|."""

from __future__ import annotations

from dataclasses import dataclass
from math import lgamma, log

import numpy as np
from scipy.stats import binom, poisson

from .errors import DomainError

NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class NumberDistribution:
    """Weights over total particle number, ``weights[N] = p_N`` for N = 0..len-1."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise DomainError("weights must be a non-empty 1-d sequence")
        if np.any(w < 0):
            raise DomainError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > NORMALIZATION_TOL:
            raise DomainError(f"weights sum to {w.sum():.15g}, not 1")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def max_n(self) -> int:
        return self.weights.size - 1

    @property
    def support(self) -> np.ndarray:
        return np.nonzero(self.weights)[0]

    def moment(self, k: int) -> float:
        n = np.arange(self.weights.size, dtype=float)
        return float(np.dot(self.weights, n**k))

    @property
    def mean(self) -> float:
        return self.moment(1)

    @property
    def variance(self) -> float:
        return self.moment(2) - self.mean**2

    def factorial_moment2(self) -> float:
        """sum_N p_N N (N - 1)."""
        n = np.arange(self.weights.size, dtype=float)
        return float(np.dot(self.weights, n * (n - 1)))

    @classmethod
    def from_weights(cls, weights, normalize: bool = False) -> "NumberDistribution":
        w = np.asarray(weights, dtype=float)
        if normalize:
            if np.any(w < 0) or w.sum() <= 0:
                raise DomainError("cannot normalize these weights")
            w = w / w.sum()
        return cls(w)

    @classmethod
    def point(cls, n: int) -> "NumberDistribution":
        if n < 0:
            raise DomainError("particle number must be >= 0")
        w = np.zeros(n + 1)
        w[n] = 1.0
        return cls(w)

    @classmethod
    def binomial(cls, M: int, p: float) -> "NumberDistribution":
        if M < 0 or not 0.0 <= p <= 1.0:
            raise DomainError("binomial needs M >= 0 and 0 <= p <= 1")
        w = binom.pmf(np.arange(M + 1), M, p)
        return cls(w / w.sum())

    @classmethod
    def poisson(cls, lam: float, tail: float = 1e-12) -> "NumberDistribution":
        """Poisson(lam) cut where the remaining tail mass drops below ``tail``, renormalized."""
        if lam < 0:
            raise DomainError("Poisson mean must be >= 0")
        if lam == 0:
            return cls.point(0)
        n_max = int(poisson.isf(tail, lam)) + 1
        while poisson.sf(n_max, lam) >= tail:
            n_max += 1
        w = poisson.pmf(np.arange(n_max + 1), lam)
        return cls(w / w.sum())

    @classmethod
    def thermal(cls, z: float, cut: float = 1e-15) -> "NumberDistribution":
        """Geometric weights (1 - z) z^N, truncated where z^N < ``cut``."""
        if not 0.0 <= z < 1.0:
            raise DomainError("thermal parameter z must lie in [0, 1)")
        if z == 0:
            return cls.point(0)
        n_max = int(np.ceil(log(cut) / log(z)))
        w = (1 - z) * z ** np.arange(n_max + 1)
        return cls(w / w.sum())


def log_multinomial(*counts: int) -> float:
    """log of (sum counts)! / prod(counts!)."""
    total = sum(counts)
    return lgamma(total + 1) - sum(lgamma(c + 1) for c in counts)
