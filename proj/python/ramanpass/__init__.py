"""Simulator and verifier for matched pump/Stokes stimulated-Raman passages
in three-level Lambda systems.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports its surface. Times are dimensionless (tau = nu * t) and Rabi
frequencies are in units of nu throughout.
"""

from ramanpass._core import (
    ExpressionParseError,
    NumericalError,
    ProtocolSpec,
    ValidationError,
    builtin_spec,
    effective_duration,
    eval_expression,
    evolve,
    expression_spec,
    load_protocol,
    occupancy_report,
    parse_expression,
    parse_protocol_text,
    populations,
    propagate_reference,
    reconstruct,
    sample_schedule,
    table1_report,
    truncation_report,
    verify_protocol,
)

__all__ = [
    "ExpressionParseError",
    "NumericalError",
    "ProtocolSpec",
    "ValidationError",
    "builtin_spec",
    "effective_duration",
    "eval_expression",
    "evolve",
    "expression_spec",
    "load_protocol",
    "occupancy_report",
    "parse_expression",
    "parse_protocol_text",
    "populations",
    "propagate_reference",
    "reconstruct",
    "sample_schedule",
    "table1_report",
    "truncation_report",
    "verify_protocol",
]
