"""Diagonal logical phase gates from commuting controlled-phase gates, checked
against extended Knill-Laflamme conditions."""

from .codes import Code, CodeWord, load_code, registry_get, save_code, validate_code
from .kl import Constraint, Family, SandwichSpec, base_kl_check, build_conditions, error_set, sandwich_element
from .pauli import PauliOp, ket, parse_ket, pauli_adjoint, pauli_apply, pauli_compose
from .phase import PhaseExpr, PhasorSum, is_identically_zero, phasor_equal, substitute
from .solver import Assignment, SolveOutcome, Status, check_assignment, propagate, solve
from .synth import ControlledPhaseGate, DiagonalPhases, apply_gates, global_phase_normalize, synthesize
from .template import DiagonalTemplate, constrain, instantiate, verify_logical_action

__version__ = "0.1.0"

__all__ = [
    "Code",
    "CodeWord",
    "load_code",
    "registry_get",
    "save_code",
    "validate_code",
    "Constraint",
    "Family",
    "SandwichSpec",
    "base_kl_check",
    "build_conditions",
    "error_set",
    "sandwich_element",
    "PauliOp",
    "ket",
    "parse_ket",
    "pauli_adjoint",
    "pauli_apply",
    "pauli_compose",
    "PhaseExpr",
    "PhasorSum",
    "is_identically_zero",
    "phasor_equal",
    "substitute",
    "Assignment",
    "SolveOutcome",
    "Status",
    "check_assignment",
    "propagate",
    "solve",
    "ControlledPhaseGate",
    "DiagonalPhases",
    "apply_gates",
    "global_phase_normalize",
    "synthesize",
    "DiagonalTemplate",
    "constrain",
    "instantiate",
    "verify_logical_action",
]
