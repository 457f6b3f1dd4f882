"""Holey Schroder designs: construction, search, verification, catalog."""

from hsd.core import (
    Design,
    FeasibilityReport,
    HoleStructure,
    TypeSpec,
    VerificationReport,
    block_pairs,
    canonical_block,
    expected_block_count,
    is_feasible,
    parse_type,
    relabel,
    uniform_type,
    verify_design,
)
from hsd.development import StarterSet, develop, difference_census, orbit
from hsd.catalog import catalog_get, catalog_list, catalog_verify_all
from hsd.prover import (
    EXISTS,
    INFEASIBLE,
    UNKNOWN_HERE,
    Outcome,
    Prover,
    Recipe,
    prove_type,
    table,
)

__all__ = [
    "Design",
    "FeasibilityReport",
    "HoleStructure",
    "TypeSpec",
    "VerificationReport",
    "block_pairs",
    "canonical_block",
    "expected_block_count",
    "is_feasible",
    "parse_type",
    "relabel",
    "uniform_type",
    "verify_design",
    "StarterSet",
    "develop",
    "difference_census",
    "orbit",
    "catalog_get",
    "catalog_list",
    "catalog_verify_all",
    "EXISTS",
    "INFEASIBLE",
    "UNKNOWN_HERE",
    "Outcome",
    "Prover",
    "Recipe",
    "prove_type",
    "table",
]

__version__ = "0.1.0"
