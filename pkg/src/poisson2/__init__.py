"""Exact computer algebra for Lie and Poisson superalgebras over GF(2^k).

Characteristic-2 super structures carry a squaring map on the odd part
alongside the bracket; this package stores such structures as sparse tables,
checks their defining laws exactly, and computes the derived objects:
derivation spaces, cohomology (with the constrained subcomplex for Poisson
structures), deformations, Kaehler differentials, truncated enveloping
algebras, and the pre-Poisson conversions.
"""

from .core import (AdSquareMismatch, AlgebraBundle, AlgebraError, ArityMismatch,
                   BilinearTable, DifferentialEscapesSubspace, Element,
                   HypothesesFail, InvalidRepresentation, MissingStructure,
                   NoUnit, NotADeformation, NotAHochschildCocycle, NotAnIdeal,
                   NotAssociative, NotEven, NotOddHomogeneous,
                   NotPoissonInput, NotRotaBaxter, NotStrong, ParseError,
                   Report, RoleMismatch, SizeBudgetExceeded, SquaringTable,
                   SuperSpace, UnstableTruncation, ValidationError, Violation,
                   bundle_from_strings, eval_bracket, eval_product,
                   eval_squaring)
from .checks import (assoc_to_lie, build_squaring_from_basis, center,
                     check_associative_supercommutative, check_derivation,
                     check_ideal, check_lie, check_morphism, check_poisson,
                     derivation_space, quotient, twist_squaring)
from .field import (DivisionByZero, Field, GF2, NonIrreducibleModulus,
                    UnsupportedDegree, field_new)
from .linalg import Matrix, NotASubspace, kernel_basis, quotient_dim, rank, rref, solve

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
