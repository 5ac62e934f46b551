"""Bounded trace semantics for compensating-CSP models.

Parse `.ccsp` model text, enumerate completed traces of standard and
compensable processes, translate the supported BPEL subset, and run the
algebraic law and compensation-consistency checks.
"""

from ._ccsp import (
    Model,
    check_compensation,
    check_law,
    compare,
    enumerate_traces,
    law_registry,
    parse_model,
    print_model,
    translate_bpel,
)

__all__ = [
    "Model",
    "check_compensation",
    "check_law",
    "compare",
    "enumerate_traces",
    "law_registry",
    "parse_model",
    "print_model",
    "translate_bpel",
]
