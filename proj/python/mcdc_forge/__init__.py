"""MC/DC test data generation for OCL constraints."""

from ._core import (
    Constraint,
    IoError,
    McdcError,
    Model,
    ParseError,
    ReformulationError,
    SemanticError,
    UnsupportedError,
    Variant,
    a12,
    bench,
    fisher_exact,
    parse,
    reduce_ranges,
    reformulate,
    similarity,
    solve,
    variant,
    wilcoxon,
)

__all__ = [
    "Constraint",
    "IoError",
    "McdcError",
    "Model",
    "ParseError",
    "ReformulationError",
    "SemanticError",
    "UnsupportedError",
    "Variant",
    "a12",
    "bench",
    "fisher_exact",
    "parse",
    "reduce_ranges",
    "reformulate",
    "similarity",
    "solve",
    "variant",
    "wilcoxon",
]

__version__ = "0.1.0"
