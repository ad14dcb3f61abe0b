"""Partial transpose, negativity and the X-state indicators."""

from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entransfer.entanglement import (
    XState,
    indicators,
    is_ppt,
    negativity,
    partial_transpose,
    pt_spectrum,
    x_eigenvalues,
)
from entransfer.errors import DomainError


def bell_plus():
    psi = np.array([1, 0, 0, 1]) / sqrt(2)
    return np.outer(psi, psi.conj())


def werner(p):
    return p * bell_plus() + (1 - p) * np.eye(4) / 4


def test_partial_transpose_moves_coherence():
    pt = partial_transpose(bell_plus())
    assert pt[1, 2] == pytest.approx(0.5)
    assert pt[0, 3] == pytest.approx(0.0)
    assert np.allclose(partial_transpose(pt), bell_plus())


def test_partial_transpose_of_product_is_transpose_on_first_factor():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    assert np.allclose(partial_transpose(np.kron(a, b)), np.kron(a.T, b))


def test_bell_and_product():
    assert negativity(bell_plus()).negativity == pytest.approx(1.0)
    assert negativity(np.diag([1.0, 0, 0, 0])).negativity == 0.0
    assert is_ppt(np.eye(4) / 4)


@pytest.mark.parametrize("p, entangled", [(0.2, False), (1 / 3, False), (0.34, True), (0.9, True)])
def test_werner_threshold(p, entangled):
    rep = negativity(werner(p))
    assert rep.entangled is entangled
    assert rep.negativity == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-12)


def test_rejects_wrong_shape():
    with pytest.raises(DomainError):
        negativity(np.eye(3))


@st.composite
def x_states(draw):
    """Valid X-states: positive 2x2 blocks, unit trace."""
    a, b, c, d = (draw(st.floats(0.0, 1.0)) for _ in range(4))
    total = a + b + c + d
    if total == 0:
        a, total = 1.0, 1.0
    a, b, c, d = a / total, b / total, c / total, d / total
    r14 = draw(st.floats(0, 1)) * sqrt(a * d) * np.exp(1j * draw(st.floats(0, 6.3)))
    r23 = draw(st.floats(0, 1)) * sqrt(b * c) * np.exp(1j * draw(st.floats(0, 6.3)))
    return XState(a, b, c, d, complex(r14), complex(r23))


@settings(max_examples=200, deadline=None)
@given(x_states())
def test_x_state_spectra_match_dense(x):
    rho_eigs, pt_eigs = x_eigenvalues(x)
    assert np.allclose(rho_eigs, np.linalg.eigvalsh(x.matrix()), atol=1e-12)
    assert np.allclose(pt_eigs, pt_spectrum(x.matrix()), atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(x_states())
def test_indicators_mutually_exclusive_and_decide_ppt(x):
    n23, n14 = indicators(x)
    assert not (n23 > 1e-12 and n14 > 1e-12)
    pt = pt_spectrum(x.matrix())
    assert np.sum(pt < -1e-12) <= 1
    entangled = n23 > 1e-12 or n14 > 1e-12
    assert entangled == (pt[0] < -1e-13) or abs(pt[0]) < 1e-9


@settings(max_examples=100, deadline=None)
@given(x_states())
def test_negativity_equals_trace_norm_minus_one(x):
    pt = pt_spectrum(x.matrix())
    assert negativity(x.matrix()).negativity == pytest.approx(np.sum(np.abs(pt)) - 1, abs=1e-12)


def test_branch_labels():
    x = XState(0.5, 0.0, 0.0, 0.5, 0.5, 0.0)
    assert negativity(x.matrix()).branch == "n14"
    y = XState(0.0, 0.5, 0.5, 0.0, 0.0, 0.5)
    assert negativity(y.matrix()).branch == "n23"
    assert negativity(np.eye(4) / 4).branch == "none"


def test_xstate_roundtrip_and_violations():
    x = XState(0.4, 0.1, 0.2, 0.3, 0.1 + 0.05j, 0.1j)
    assert XState.from_state(x.to_state()) == x
    assert XState(0.5, 0.5, 0, 0, 0, 0.2).violations() == ["rho22 rho33 < |rho23|^2"]
