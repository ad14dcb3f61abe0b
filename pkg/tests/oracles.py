"""Reference computations that share no code path with the package's channel.

``evolve_dense`` exponentiates the full qubit-field Hamiltonian with
scipy.linalg.expm and traces out the field.
"""

import numpy as np
from scipy.linalg import expm

from entransfer.fock import as_mixture

SM = np.array([[0, 0], [1, 0]], dtype=complex)  # |1><0|
I2 = np.eye(2, dtype=complex)


def evolve_dense(F1, F2, rho_B, t, init=(0, 0)):
    """Tr_B[U (|q><q| x rho_B) U†] with H = sum_i (|1><0|_i F_i + h.c.)."""
    mix = as_mixture(rho_B)
    dB = mix.basis.dim
    f1, f2 = F1.matrix, F2.matrix
    H = (
        np.kron(np.kron(SM, I2), f1)
        + np.kron(np.kron(I2, SM), f2)
    )
    H = H + H.conj().T
    U = expm(-1j * t * H)
    q = np.zeros(4, dtype=complex)
    q[2 * init[0] + init[1]] = 1.0
    rho = np.zeros((4, 4), dtype=complex)
    for w, state in mix.components:
        psi = U @ np.kron(q, state.amplitudes)
        m = psi.reshape(4, dB)
        rho += w * (m @ m.conj().T)
    return rho


def random_unit(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)
