"""Probabilistic voter synthesis and fault-masking analysis for k-modular redundancy."""

__version__ = "0.1.0"

from .logic import TruthTable, parse_expression, parse_table_file, serialize_table
from .voter import (
    ErrorProfile,
    VoterTable,
    error_profile,
    synthesize_majority,
    synthesize_probabilistic,
)
from .analytic import SystemModel, compare_and_crossover, expected_errors, system_availability
from .sim import AvailabilityRecord, SimConfig, run_sweep

__all__ = [
    "TruthTable",
    "parse_expression",
    "parse_table_file",
    "serialize_table",
    "ErrorProfile",
    "VoterTable",
    "error_profile",
    "synthesize_majority",
    "synthesize_probabilistic",
    "SystemModel",
    "system_availability",
    "expected_errors",
    "compare_and_crossover",
    "SimConfig",
    "AvailabilityRecord",
    "run_sweep",
    "__version__",
]
