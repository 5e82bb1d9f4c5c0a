"""The reduction map Z[K, r_k, ...] -> F_p[r_k, ...] sending K to k."""

from __future__ import annotations

from ..errors import NotReducibleError
from .poly import K, N, MultiPoly
from .ratfunc import RatFunc
from .scalars import PrimeField


def reduce_mod_p(q, p: int, k: int, n: int | None = None) -> MultiPoly:
    """Substitute K -> k (and the symbolic n -> n when given), then reduce
    modulo p.

    Integer denominators are inverted mod p.  An r-variable left in the
    denominator must be cancelled by the reduced numerator, otherwise the
    value does not lie in F_p[r_k, r_{k+1}, ...] and NotReducibleError is
    raised; the same happens for any denominator factor that vanishes mod p.
    """
    F = PrimeField(p)
    asg = {K: k}
    if n is not None:
        asg[N] = n
    if isinstance(q, (int,)):
        return MultiPoly.const(q, F)
    if isinstance(q, MultiPoly):
        try:
            return q.substitute(asg).change_scalars(F)
        except NotReducibleError:
            raise
        except ZeroDivisionError as exc:
            raise NotReducibleError(str(exc)) from exc
    if not isinstance(q, RatFunc):
        raise TypeError(f"cannot reduce {type(q).__name__}")
    den = q.den
    for (u, v), m in q.lin:
        den *= (u * k + v) ** m
    if den % p == 0:
        raise NotReducibleError(f"denominator vanishes mod {p} at K={k}: {q}")
    num = q.num.substitute(asg).change_scalars(F).scale(pow(den, -1, p))
    if not num.terms:
        return num
    for v, m in q.rden:
        if num.min_degree_in(v) < m:
            raise NotReducibleError(f"{v}^{m} in the denominator does not cancel mod {p}")
        num = num.divide_by_var(v, m)
    return num
