"""Exact arithmetic substrate: rationals, prime fields, polynomials, linear algebra."""

from .fields import GF, QQ, Domain, PolyRing, PrimeField, PrimeFieldElement, Rational, domain_of, is_prime
from .linalg import (
    det_cofactor,
    det_fraction_free,
    det_polynomial,
    det_rational,
    nullspace,
    rank_exact,
    rank_fraction_free,
    rank_mod_p,
    rank_mod_p_python,
    rref,
    solve,
    transpose,
)
from .multipoly import MultiPoly
from .parse import ParseError, parse_polynomial
from .quotient import QuotientRingElement, qr_in_prime_field
from .unipoly import (
    UniPoly,
    factor_over_QQ,
    irreducible_factors_mod_p,
    poly_gcd,
    poly_invmod,
    poly_lcm,
    poly_xgcd,
    rational_roots,
    squarefree_factorization,
    squarefree_part,
)

__all__ = [
    "Domain",
    "GF",
    "MultiPoly",
    "ParseError",
    "PolyRing",
    "PrimeField",
    "PrimeFieldElement",
    "QQ",
    "QuotientRingElement",
    "Rational",
    "UniPoly",
    "det_cofactor",
    "det_fraction_free",
    "det_polynomial",
    "det_rational",
    "domain_of",
    "factor_over_QQ",
    "irreducible_factors_mod_p",
    "is_prime",
    "nullspace",
    "parse_polynomial",
    "poly_gcd",
    "poly_invmod",
    "poly_lcm",
    "poly_xgcd",
    "qr_in_prime_field",
    "rank_exact",
    "rank_fraction_free",
    "rank_mod_p",
    "rank_mod_p_python",
    "rational_roots",
    "rref",
    "solve",
    "squarefree_factorization",
    "squarefree_part",
    "transpose",
]
