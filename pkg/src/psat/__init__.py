"""Partial-assignment satisfaction (verification vs. entailment) and AllSAT enumeration."""

from psat.assignment import (
    Assignment,
    TruthValue3,
    cube_of,
    eval3,
    extensions,
    format_assignment,
    parse_assignment,
    residual,
)
from psat.cnf import pg_nnf, plaisted_greenbaum, tseitin
from psat.enumeration import (
    Cube,
    CubeSet,
    check_cover,
    check_disjoint,
    count_models,
    enumerate_brute,
    enumerate_projected,
    enumerate_verification,
    enumerate_with_generalization,
    generalize,
)
from psat.formula import CnfFormula, Formula, Manager, ParseError, QuantifiedFormula, atoms, equivalent, nnf
from psat.satcheck import (
    dual_entails,
    entails,
    entails_exists,
    is_valid,
    shannon_expansion,
    verifies,
    verifies_exists,
    verifies_extended,
)

__version__ = "0.1.0"
