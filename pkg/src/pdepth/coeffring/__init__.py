"""Exact coefficient rings: F_p, Z, Q, sparse polynomials and rational
functions in K with factored denominators."""

from .poly import BITS, K, N, MultiPoly, PolyRing, R, S, VarId, parse_poly
from .ratfunc import RatFunc
from .reduction import reduce_mod_p
from .scalars import QQ, ZZ, IntegerRing, PrimeField, RationalField, is_prime


def depends_on(q: MultiPoly, v: VarId) -> bool:
    """True iff some monomial of ``q`` has a positive exponent on ``v``."""
    return q.depends_on(v)


def substitute(q: MultiPoly, asg: dict):
    """Substitute values for variables.  A full substitution returns the
    scalar value; a partial one returns the remaining polynomial."""
    res = q.substitute(asg)
    if res.is_constant():
        return res.constant_term()
    return res


def ratfunc_residue(q: RatFunc, c) -> RatFunc:
    """Residue of ``q`` at the simple pole K = c."""
    return q.residue(c)


__all__ = [
    "BITS", "K", "N", "R", "S", "VarId", "MultiPoly", "PolyRing", "parse_poly",
    "RatFunc", "reduce_mod_p", "PrimeField", "IntegerRing", "RationalField",
    "ZZ", "QQ", "is_prime", "depends_on", "substitute", "ratfunc_residue",
]
