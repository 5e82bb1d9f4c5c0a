"""Rational functions in K with a factored denominator.

A :class:`RatFunc` is ``num / (den * prod (u*K + v)^mult * prod r^mult)`` where
``num`` has integer coefficients (it may involve K, n and the r-variables),
``den`` is a positive integer, every linear factor is primitive with ``u > 0``
and the r-variables stand for the inverted r_k of the ring
Q(K)[r_k^{-1}, r_k, r_{k+1}, ...].  The denominator is never expanded, so
membership in a subring described by allowed factors can be read off the
factor multiset directly.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from math import gcd, lcm

from ..errors import HigherOrderPoleError
from .poly import K, MultiPoly, VarId
from .scalars import QQ, ZZ


def _primitive_linear(u: int, v: int) -> tuple[int, tuple[int, int]]:
    """Split ``u*K + v`` (u != 0) into ``scalar * (u'*K + v')`` with the
    linear part primitive and ``u' > 0``."""
    g = gcd(u, v)
    if u < 0:
        g = -g
    return g, (u // g, v // g)


def _linear_poly(u: int, v: int) -> MultiPoly:
    return MultiPoly.var(K, ZZ).scale(u) + v


def _divide_linear(num: MultiPoly, u: int, v: int):
    """Return ``num / (u*K + v)`` if the division is exact, else None."""
    coeffs = num.as_univariate(K)
    deg = max(coeffs)
    if deg == 0:
        return None
    # exact divisibility test: num(-v/u) == 0, scaled by u^deg
    test = MultiPoly.zero(ZZ)
    for d, c in coeffs.items():
        test = test + c.scale((-v) ** d * u ** (deg - d))
    if test:
        return None
    zero = MultiPoly.zero(ZZ)
    q = [zero] * deg
    q[deg - 1] = coeffs.get(deg, zero).exact_div_int(u)
    for d in range(deg - 1, 0, -1):
        q[d - 1] = (coeffs.get(d, zero) - q[d].scale(v)).exact_div_int(u)
    kvar = MultiPoly.var(K, ZZ)
    out = zero
    for d in range(deg - 1, -1, -1):
        out = out * kvar + q[d]
    return out


class RatFunc:
    """Exact element of Q(K)[n, r_k^{-1}, r_k, r_{k+1}, ...] in normalized form."""

    __slots__ = ("num", "den", "lin", "rden")

    def __init__(self, num: MultiPoly, den: int = 1, lin=(), rden=()):
        # use RatFunc.make for normalization; this stores the parts as given
        self.num = num
        self.den = den
        self.lin = tuple(lin)
        self.rden = tuple(rden)

    # -- construction -------------------------------------------------

    @classmethod
    def make(cls, num, den: int = 1, lin=None, rden=None) -> "RatFunc":
        if not isinstance(num, MultiPoly):
            num = MultiPoly.const(Fraction(num), QQ)
        if num.scalars == QQ:
            L = 1
            for c in num.terms.values():
                L = lcm(L, Fraction(c).denominator)
            num = MultiPoly._from_raw({m: int(c * L) for m, c in num.terms.items()}, ZZ)
            den *= L
        elif num.scalars != ZZ:
            raise TypeError("RatFunc numerators must have integer or rational coefficients")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        lin_c: Counter = Counter()
        for (u, v), mult in (dict(lin).items() if lin else ()):
            if mult <= 0:
                continue
            if u == 0:
                if v == 0:
                    raise ZeroDivisionError("zero linear factor")
                if v < 0:
                    num = (-num) if mult % 2 else num
                den *= abs(v) ** mult
                continue
            scalar, key = _primitive_linear(u, v)
            if scalar < 0 and mult % 2:
                num = -num
            den *= abs(scalar) ** mult
            lin_c[key] += mult
        r_c: Counter = Counter({v: m for v, m in (dict(rden).items() if rden else ()) if m > 0})
        return cls._normalize(num, den, lin_c, r_c)

    @classmethod
    def _normalize(cls, num: MultiPoly, den: int, lin_c: Counter, r_c: Counter) -> "RatFunc":
        if not num.terms:
            return cls(num, 1, (), ())
        for v in list(r_c):
            cancel = min(r_c[v], num.min_degree_in(v))
            if cancel:
                num = num.divide_by_var(v, cancel)
                r_c[v] -= cancel
        for key in list(lin_c):
            u, v = key
            while lin_c[key]:
                q = _divide_linear(num, u, v)
                if q is None:
                    break
                num = q
                lin_c[key] -= 1
        g = gcd(num.content(), den)
        if g > 1:
            num = num.exact_div_int(g)
            den //= g
        lin = tuple(sorted((k, m) for k, m in lin_c.items() if m))
        rden = tuple(sorted(((v, m) for v, m in r_c.items() if m), key=lambda t: t[0].sort_key()))
        return cls(num, den, lin, rden)

    @classmethod
    def const(cls, c) -> "RatFunc":
        c = Fraction(c)
        return cls.make(MultiPoly.const(c.numerator, ZZ), c.denominator)

    @classmethod
    def poly(cls, p: MultiPoly) -> "RatFunc":
        return cls.make(p)

    @classmethod
    def var(cls, v: VarId) -> "RatFunc":
        return cls(MultiPoly.var(v, ZZ))

    @classmethod
    def linear(cls, u: int, v: int) -> "RatFunc":
        """The polynomial ``u*K + v``."""
        return cls.make(_linear_poly(u, v))

    # -- queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num.terms

    def __bool__(self):
        return bool(self.num.terms)

    def is_polynomial(self) -> bool:
        return self.den == 1 and not self.lin and not self.rden

    def pole_order(self, c) -> int:
        """Multiplicity of the factor (K - c) in the denominator."""
        c = Fraction(c)
        _, key = _primitive_linear(c.denominator, -c.numerator)
        return dict(self.lin).get(key, 0)

    def denominator_poly(self) -> MultiPoly:
        out = MultiPoly.const(self.den, ZZ)
        for (u, v), m in self.lin:
            out = out * _linear_poly(u, v) ** m
        for v, m in self.rden:
            out = out * MultiPoly.var(v, ZZ, m)
        return out

    def variables(self) -> set[VarId]:
        out = self.num.variables()
        out.update(v for v, _ in self.rden)
        if self.lin:
            out.add(K)
        return out

    # -- arithmetic ---------------------------------------------------

    @staticmethod
    def _lift(x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, MultiPoly):
            return RatFunc.make(x)
        if isinstance(x, (int, Fraction)):
            return RatFunc.const(x)
        return NotImplemented

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num.terms or not other.num.terms:
            return RatFunc(MultiPoly.zero(ZZ))
        lin_c = Counter(dict(self.lin))
        lin_c.update(dict(other.lin))
        r_c = Counter(dict(self.rden))
        r_c.update(dict(other.rden))
        return RatFunc._normalize(self.num * other.num, self.den * other.den, lin_c, r_c)

    __rmul__ = __mul__

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        la, lb = dict(self.lin), dict(other.lin)
        ra, rb = dict(self.rden), dict(other.rden)
        lin_c = Counter({k: max(la.get(k, 0), lb.get(k, 0)) for k in set(la) | set(lb)})
        r_c = Counter({k: max(ra.get(k, 0), rb.get(k, 0)) for k in set(ra) | set(rb)})
        den = lcm(self.den, other.den)

        def lifted(x: "RatFunc", lx: dict, rx: dict) -> MultiPoly:
            out = x.num.scale(den // x.den)
            for key, m in lin_c.items():
                extra = m - lx.get(key, 0)
                if extra:
                    out = out * _linear_poly(*key) ** extra
            for v, m in r_c.items():
                extra = m - rx.get(v, 0)
                if extra:
                    out = out * MultiPoly.var(v, ZZ, extra)
            return out

        num = lifted(self, la, ra) + lifted(other, lb, rb)
        return RatFunc._normalize(num, den, lin_c, r_c)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, self.lin, self.rden)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __truediv__(self, other):
        """Division by a scalar, an r-variable or a RatFunc whose numerator is
        a constant times a product of r-variables (e.g. ``r_k``)."""
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if other == 0:
                raise ZeroDivisionError
            return RatFunc.make(self.num.scale(other.denominator), self.den * other.numerator,
                                dict(self.lin), dict(self.rden))
        if isinstance(other, VarId):
            r_c = Counter(dict(self.rden))
            r_c[other] += 1
            return RatFunc._normalize(self.num, self.den, Counter(dict(self.lin)), r_c)
        return NotImplemented

    def div_linear(self, u: int, v: int) -> "RatFunc":
        """Divide by ``u*K + v``."""
        lin = Counter(dict(self.lin))
        if u == 0:
            return self / v
        scalar, key = _primitive_linear(u, v)
        lin[key] += 1
        num = self.num if scalar > 0 else -self.num
        return RatFunc._normalize(num, self.den * abs(scalar), lin, Counter(dict(self.rden)))

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num * other.denominator_poly() == other.num * self.denominator_poly()

    __hash__ = None

    # -- evaluation ---------------------------------------------------

    def substitute_n(self, n: int) -> "RatFunc":
        from .poly import N
        return RatFunc.make(self.num.substitute({N: n}), self.den, dict(self.lin), dict(self.rden))

    def at_K(self, c) -> "RatFunc":
        """Evaluate at K = c (a rational); fails on a pole."""
        c = Fraction(c)
        num = self.num.change_scalars(QQ).substitute({K: c})
        den = Fraction(self.den)
        for (u, v), m in self.lin:
            val = u * c + v
            if val == 0:
                raise ZeroDivisionError(f"pole at K={c}")
            den *= val ** m
        return RatFunc.make(num * MultiPoly.const(1 / den, QQ), 1, None, dict(self.rden))

    def residue(self, c) -> "RatFunc":
        """Residue at a simple pole K = c, i.e. ((K - c) * self)(c)."""
        c = Fraction(c)
        order = self.pole_order(c)
        if order == 0:
            return RatFunc(MultiPoly.zero(ZZ))
        if order > 1:
            raise HigherOrderPoleError(f"pole of order {order} at K={c}")
        _, key = _primitive_linear(c.denominator, -c.numerator)
        lin = dict(self.lin)
        del lin[key]
        # (K - c) = (b*K - a) / b with c = a/b
        stripped = RatFunc(self.num, self.den * c.denominator, tuple(sorted(lin.items())), self.rden)
        return stripped.at_K(c)

    # -- text ---------------------------------------------------------

    def __str__(self):
        num = str(self.num)
        if self.is_polynomial():
            return num
        parts = []
        if self.den != 1:
            parts.append(str(self.den))
        for (u, v), m in self.lin:
            if u == 1:
                lin = "K" if v == 0 else f"K {'+' if v > 0 else '-'} {abs(v)}"
            else:
                lin = f"{u}*K" if v == 0 else f"{u}*K {'+' if v > 0 else '-'} {abs(v)}"
            parts.append(f"({lin})" + (f"^{m}" if m > 1 else ""))
        for v, m in self.rden:
            parts.append(v.name + (f"^{m}" if m > 1 else ""))
        if len(self.num.terms) > 1:
            num = f"({num})"
        return f"{num}/({'*'.join(parts)})"

    def __repr__(self):
        return f"RatFunc({self})"
