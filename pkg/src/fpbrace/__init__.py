"""Bi-braces from radical algebras over finite fields of odd characteristic.

Finite-field and matrix arithmetic, the algebras defined by a symmetric
defining matrix, brace axiom checkers, the affine-group realization,
isomorphism classification, and brute-force oracles.
"""

from __future__ import annotations

from .algebra import (
    AlgebraSpec,
    DefiningMatrix,
    StructureConstantAlgebra,
    annihilator,
    circle,
    circle_inverse,
    delta,
    gamma,
    nilpotency_check,
    product,
    quotient_by_complement,
    validate_defining_matrix,
)
from .brace import (
    BraceCandidate,
    Verdict,
    check_bibrace,
    check_left_brace,
    check_right_brace,
    gamma_homomorphism_check,
)
from .classify import IsoWitness, canonical_representatives, class_of, count_classes, iso_test
from .errors import FpBraceError
from .gf import GF, FieldElement, SquareClass, find_irreducible, find_nonsquare, is_square, sqrt
from .holomorph import AffineMap, build_T_circ, compose, sigma, tau, verify_subgroup_properties
from .matfp import MatFp, canonical_form, congruent_diagonalize, discriminant

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "AffineMap",
    "AlgebraSpec",
    "annihilator",
    "BraceCandidate",
    "build_T_circ",
    "canonical_form",
    "canonical_representatives",
    "check_bibrace",
    "check_left_brace",
    "check_right_brace",
    "circle",
    "circle_inverse",
    "class_of",
    "compose",
    "congruent_diagonalize",
    "count_classes",
    "DefiningMatrix",
    "delta",
    "discriminant",
    "FieldElement",
    "find_irreducible",
    "find_nonsquare",
    "FpBraceError",
    "gamma",
    "gamma_homomorphism_check",
    "GF",
    "is_square",
    "iso_test",
    "IsoWitness",
    "MatFp",
    "nilpotency_check",
    "product",
    "quotient_by_complement",
    "sigma",
    "sqrt",
    "SquareClass",
    "StructureConstantAlgebra",
    "tau",
    "validate_defining_matrix",
    "Verdict",
    "verify_subgroup_properties",
]
