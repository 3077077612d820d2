"""Finite-field gates, orthogonal arrays, generalized Pauli operators and
interrogation of p-ary quantum systems."""

from .fpfield import Felt, FieldError, check_prime, is_prime
from .gates import (
    GateFamily,
    GateTable,
    canonicalize,
    check_restriction1,
    check_restriction2,
    enumerate_gate_classes,
    gate_linear,
    gates_equivalent,
)
from .oarray import OrthogonalArray, combine_gates_to_oa, first_violation, verify_strength
from .pauli import PauliLabel, CompositeLabel, build_X, build_Z, composite_operator, mub_bases
from .structure import (
    CompositeQuestion,
    LocalQuestion,
    QuestionSet,
    composite_QM,
    dof,
    find_commuting_families,
    qm_cardinality,
    single_QM,
    unique_partner,
)
from .interrogation import (
    SystemState,
    init_state,
    interrogate,
    outcome_distribution,
    run_scenario,
)

__all__ = [
    "CompositeLabel",
    "CompositeQuestion",
    "Felt",
    "FieldError",
    "GateFamily",
    "GateTable",
    "LocalQuestion",
    "OrthogonalArray",
    "PauliLabel",
    "QuestionSet",
    "SystemState",
    "build_X",
    "build_Z",
    "canonicalize",
    "check_prime",
    "check_restriction1",
    "check_restriction2",
    "combine_gates_to_oa",
    "composite_QM",
    "composite_operator",
    "dof",
    "enumerate_gate_classes",
    "find_commuting_families",
    "first_violation",
    "gate_linear",
    "gates_equivalent",
    "init_state",
    "interrogate",
    "is_prime",
    "mub_bases",
    "outcome_distribution",
    "qm_cardinality",
    "run_scenario",
    "single_QM",
    "unique_partner",
    "verify_strength",
]

__version__ = "0.1.0"
