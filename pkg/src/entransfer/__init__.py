"""Entanglement transfer from bosonic fields to pairs of qubits.

Two qubits couple to a truncated multimode boson field through commuting
operators F_1, F_2.  The package evaluates the reduced two-qubit state
exactly (``channel``), in closed form for the tractable field states
(``closed_form``) and to fourth order in time (``perturbation``).
"""

from .channel import InitialQubitState, TwoQubitState, kn_operators, reduced_density
from .distributions import NumberDistribution
from .entanglement import NegativityReport, XState, indicators, negativity, partial_transpose
from .errors import CapacityError, DomainError, NumericError, ScenarioError
from .fock import (
    CouplingOperator,
    FockBasis,
    MixedBosonState,
    StateVector,
    build_coupling,
    condensate_state,
    make_basis,
    mixed_coupling,
    mode_lowering,
    number_mixture,
    orthogonal_product_state,
)

__version__ = "0.1.0"
