"""Exact identities over Q(K) behind the c_ij sequence.

The coefficients phi_jab express c_ij as a combination of the products
P_a(i) = prod_{h=1}^{i} ((h-2)K + n + a).  They are built from three
recurrences (b = 0, 1 <= b <= a and a < b) plus the value of phi_jj0 fixed
by c_0j, and they are checked against a closed-form generating function, a
denominator profile and a residue formula.  n is a symbolic variable unless a
concrete value is given.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .bounds import ParamSet, e_of
from .coeffring import K, N, R, ZZ, MultiPoly, RatFunc, ratfunc_residue, reduce_mod_p
from .errors import ParameterDomainError
from .matrixcalc import c_value, pi_matrix


def _n_poly(n: int | None) -> MultiPoly:
    return MultiPoly.var(N, ZZ) if n is None else MultiPoly.const(n, ZZ)


@lru_cache(maxsize=None)
def P_poly(a: int, i: int, n: int | None = None) -> MultiPoly:
    """P_a(i) in Z[K] (Z[K, n] when ``n`` is None)."""
    if i < 0:
        raise ValueError("i must be nonnegative")
    Kp, nn = MultiPoly.var(K, ZZ), _n_poly(n)
    out = MultiPoly.const(1, ZZ)
    for h in range(1, i + 1):
        out = out * (Kp.scale(h - 2) + nn + a)
    return out


def _rv(j: int) -> RatFunc:
    return RatFunc.var(R(j))


def q_series(maxdeg: int, k: int) -> list[RatFunc]:
    """[q_0 = 1, q_1, ..., q_maxdeg] with r_k / alpha(x) = sum q_t x^t."""
    if maxdeg < 1:
        raise ValueError("maxdeg must be at least 1")
    rk = R(k)
    q = [RatFunc.const(1)]
    for t in range(1, maxdeg + 1):
        acc = RatFunc.const(0)
        for s in range(1, t + 1):
            acc = acc + _rv(k + s) * q[t - s]
        q.append(-(acc / rk))
    return q


def omega_series(maxdeg: int, k: int) -> list[RatFunc]:
    """Coefficients of omega(x) = sum_{t>=1} q_t x^t / (t - K), index 0..maxdeg."""
    q = q_series(maxdeg, k)
    return [RatFunc.const(0)] + [q[t].div_linear(-1, t) for t in range(1, maxdeg + 1)]


class PhiTable:
    """Lazily filled table of phi_jab for fixed k (labels of the r-variables)
    and n (None for symbolic n)."""

    def __init__(self, k: int, n: int | None = None):
        self.k = k
        self.n = n
        self._t: dict[tuple[int, int, int], RatFunc] = {}
        self._zero = RatFunc.const(0)

    def __call__(self, j: int, a: int, b: int) -> RatFunc:
        return self.phi(j, a, b)

    def phi(self, j: int, a: int, b: int) -> RatFunc:
        if min(j, a, b) < 0 or a > j or b > j:
            return self._zero
        if a == j and b >= 1:
            return self._zero
        key = (j, a, b)
        if key not in self._t:
            # fill lower j first, in a then b order, so recursion stays shallow
            for jj in range(j):
                self._fill(jj)
            self._fill(j)
        return self._t[key]

    def _fill(self, j: int) -> None:
        if (j, j, 0) in self._t:
            return
        if j == 0:
            self._t[(0, 0, 0)] = RatFunc.const(1)
            return
        for a in range(j):
            for b in range(j + 1):
                self._t[(j, a, b)] = self._recur(j, a, b)
        acc = self._zero
        for a in range(j):
            for b in range(j + 1):
                acc = acc + self._t[(j, a, b)] * P_poly(a, b, self.n)
        self._t[(j, j, 0)] = -acc

    def _recur(self, j: int, a: int, b: int) -> RatFunc:
        k, rk, phi = self.k, R(self.k), self.phi
        acc = self._zero
        if b == 0:
            for t in range(j):
                acc = acc + _rv(k + j - t) * phi(t, a, 0) * (2 * t - j - a)
            return (acc / rk) / (a - j)
        start = a if b <= a else b
        if a < b:
            acc = acc + _rv(k + j - b + 1) * phi(b - 1, a, b - 1)
        for t in range(start, j):
            lin = RatFunc.linear(-b, 2 * t - j - a)
            acc = acc + _rv(k + j - t) * (lin * phi(t, a, b) + phi(t, a, b - 1))
        return (acc / rk).div_linear(b, a - j)

    def computed(self):
        return dict(self._t)


@lru_cache(maxsize=None)
def phi_table(k: int, n: int | None = None) -> PhiTable:
    return PhiTable(k, n)


def phi(j: int, a: int, b: int, k: int = 1, n: int | None = None) -> RatFunc:
    return phi_table(k, n).phi(j, a, b)


# -- checks ----------------------------------------------------------------


def phidiff_check(j: int, a: int, b: int, k: int = 1, n: int | None = None) -> bool:
    """sum_t (bK + j - 2t) r_{k+j-t} phi_{t+a,a,b} = sum_{t<j} r_{k+j-t} phi_{t+a,a,b-1}."""
    T = phi_table(k, n)
    lhs = RatFunc.const(0)
    for t in range(j + 1):
        lhs = lhs + _rv(k + j - t) * RatFunc.linear(b, j - 2 * t) * T(t + a, a, b)
    rhs = RatFunc.const(0)
    for t in range(j):
        rhs = rhs + _rv(k + j - t) * T(t + a, a, b - 1)
    return lhs == rhs


def product_law_check(j: int, a: int, b: int, k: int = 1, n: int | None = None) -> bool:
    T = phi_table(k, n)
    return T(j, a, b) == T(a, a, 0) * T(j - a, 0, b)


def csum_check(i: int, j: int, k: int = 1, n: int | None = None) -> bool:
    """c_ij = r_k^i sum_{a,b<=j} phi_jab P_a(i+b)."""
    T = phi_table(k, n)
    acc = RatFunc.const(0)
    for a in range(j + 1):
        for b in range(j + 1):
            acc = acc + T(j, a, b) * P_poly(a, i + b, n)
    rhs = acc * MultiPoly.var(R(k), ZZ, i)
    return rhs == RatFunc.make(c_value(i, j, k, n))


def _series_mul(x: list, y: list, deg: int) -> list:
    out = [RatFunc.const(0)] * (deg + 1)
    for i, xi in enumerate(x[: deg + 1]):
        if not xi:
            continue
        for t, yt in enumerate(y[: deg + 1 - i]):
            if yt:
                out[i + t] = out[i + t] + xi * yt
    return out


def generating_coefficients(a: int, jmax: int, bmax: int, k: int = 1, n: int | None = None) -> dict:
    """Coefficients of x^j y^b (j <= jmax, b <= bmax) in
    phi_aa0 r_k^{-1} x^a alpha(x) exp(omega(x) y)."""
    T = phi_table(k, n)
    lead = T(a, a, 0) / R(k)
    alpha = [_rv(k + s) for s in range(jmax + 1)]
    omega = omega_series(max(jmax, 1), k)
    power = [RatFunc.const(1)] + [RatFunc.const(0)] * jmax  # omega^b
    out = {}
    for b in range(bmax + 1):
        if b:
            power = _series_mul(power, omega, jmax)
        base = _series_mul(alpha, power, jmax)
        for j in range(jmax + 1):
            c = base[j - a] * lead / factorial(b) if j >= a else RatFunc.const(0)
            out[(j, b)] = c
    return out


def generating_check(a: int, jmax: int, bmax: int, k: int = 1, n: int | None = None) -> bool:
    if a < 0:
        raise ParameterDomainError("a must be nonnegative")
    T = phi_table(k, n)
    coeffs = generating_coefficients(a, jmax, bmax, k, n)
    return all(T(j, a, b) == c for (j, b), c in coeffs.items())


def _prime_factors(m: int) -> set[int]:
    out, d = set(), 2
    while d * d <= m:
        while m % d == 0:
            out.add(d)
            m //= d
        d += 1
    if m > 1:
        out.add(m)
    return out


@dataclass(frozen=True)
class DenominatorProfile:
    """Allowed denominators: divisors of powers of l!, K - c for 1 <= c <= m,
    and powers of r_k."""

    l: int
    m: int
    k: int

    def violations(self, q: RatFunc) -> list[str]:
        bad = []
        for prime in _prime_factors(q.den):
            if prime > self.l:
                bad.append(f"integer factor {prime}")
        for (u, v), _ in q.lin:
            if not (u == 1 and 1 <= -v <= self.m):
                bad.append(f"linear factor {u}*K{v:+d}")
        for var, _ in q.rden:
            if var != R(self.k):
                bad.append(f"inverted {var.name}")
        return bad

    def conforms(self, q: RatFunc) -> bool:
        return not self.violations(q)

    def to_json(self):
        return {"l": self.l, "m": self.m}


def slm_profile(j: int, a: int, b: int, k: int = 1) -> DenominatorProfile:
    l = max(a, b)
    m = a if b == 0 else max(a, j + 1 - a - b)
    return DenominatorProfile(l, m, k)


def slm_check(j: int, a: int, b: int, k: int = 1, n: int | None = None) -> tuple[bool, DenominatorProfile]:
    if a + b > j:
        raise ParameterDomainError("requires a + b <= j")
    prof = slm_profile(j, a, b, k)
    return prof.conforms(phi(j, a, b, k, n)), prof


def denominator_factors(q: RatFunc) -> dict:
    """Observed factor multiset, for reporting."""
    return {
        "integer": q.den,
        "linear": [[u, v, m] for (u, v), m in q.lin],
        "r": [[var.name, m] for var, m in q.rden],
    }


def residue_check(j: int, k: int = 1) -> bool:
    """phi_j01 has a simple pole at K = j with residue -q_j."""
    if j < 1:
        raise ParameterDomainError("j must be at least 1")
    f = phi(j, 0, 1, k)
    if f.pole_order(j) != 1:
        return False
    return ratfunc_residue(f, j) == -q_series(j, k)[j]


# -- expansions around K = k0 ----------------------------------------------


def _taylor2(poly: MultiPoly, c: int) -> tuple[int, int]:
    """(value, derivative) at K = c of a polynomial in K with integer coefficients."""
    uni = poly.as_univariate(K)
    val = der = 0
    for d, coef in uni.items():
        cc = coef.constant_term()
        val += cc * c**d
        if d:
            der += d * cc * c ** (d - 1)
    return val, der


@dataclass
class KK0Constants:
    p: int
    k0: int
    n: int
    Q: int
    h0: int
    Q_prime: int

    def to_json(self):
        return {"p": self.p, "k0": self.k0, "n": self.n, "Q": self.Q, "h0": self.h0, "Q_prime": self.Q_prime}


def kk0_constants(p: int, k0: int, n: int) -> KK0Constants:
    if k0 % p == 0 or (n - k0) % p == 0:
        raise ParameterDomainError("requires p not dividing k0 and n not congruent to k0 mod p")
    Q = 1
    for i in range(1, p + 1):
        Q *= (i - 2) * k0 + n
    hs = [h for h in range(p - 1) if (h * k0 + n) % p == 0]
    if len(hs) != 1:
        raise ParameterDomainError(f"no unique h0 for p={p}, k0={k0}, n={n}")
    h0 = hs[0]
    return KK0Constants(p, k0, n, Q, h0, Q // (h0 * k0 + n))


def kk0_expansion_check(p: int, k0: int, n: int) -> bool:
    """Modulo (K - k0)^2: P_0(p) and P_0(1) P_k0(p-1) both start with Q, their
    difference has linear coefficient sum_h Q / (h k0 + n), and Q / (h0 k0 + n)
    is the only summand not divisible by p."""
    c = kk0_constants(p, k0, n)
    Q = c.Q
    A = P_poly(0, p, n)
    B = P_poly(0, 1, n) * P_poly(k0, p - 1, n)
    a0, a1 = _taylor2(A, k0)
    b0, b1 = _taylor2(B, k0)
    if a0 != Q or b0 != Q:
        return False
    ea = Q * (Fraction(-1, n - k0) + sum(Fraction(h, h * k0 + n) for h in range(p - 1)))
    eb = Q * (Fraction(-1, n - k0) + sum(Fraction(h - 1, h * k0 + n) for h in range(p - 1)))
    if a1 != ea or b1 != eb:
        return False
    terms = [Fraction(Q, h * k0 + n) for h in range(p - 1)]
    if a1 - b1 != sum(terms) or any(t.denominator != 1 for t in terms):
        return False
    not_div = [h for h, t in enumerate(terms) if t.numerator % p]
    return not_div == [c.h0] and terms[c.h0] == c.Q_prime


@dataclass
class BridgeReport:
    p: int
    k: int
    n: int
    k0: int
    Q_prime: int
    pi_entry: str
    predicted: str
    vanishing_terms_ok: bool
    pair_matches: bool
    sum_matches: bool

    @property
    def passed(self) -> bool:
        return self.vanishing_terms_ok and self.pair_matches and self.sum_matches

    def to_json(self):
        return dict(self.__dict__, passed=self.passed)


def case3_bridge_check(p: int, k: int, n: int) -> BridgeReport:
    """pi_{p-1,0,k0} from the matrix product against -Q' r_k^{p-1} q_k0, with the
    terms of the c_{p-1,k0} expansion reduced one at a time."""
    ps = ParamSet(p, k, n)
    k0 = ps.k0
    if k0 == 0 or n < (p - 1) * k + p:
        raise ParameterDomainError("requires p not dividing k and n >= (p-1)k+p")
    if e_of(ps) != k0 or any((n - 2 * k + i) % p == 0 for i in range(k0 + 1)):
        raise ParameterDomainError("requires e(k,n) = k0 with n not congruent to 2k-i for 0 <= i <= k0")
    T = phi_table(k, n)
    rk = R(k)
    rk_pow = MultiPoly.var(rk, ZZ, p - 1)
    # extra r_k powers only make the reduction land in a polynomial ring
    lift = MultiPoly.var(rk, ZZ, p + k0 + 1)
    ok_terms = True
    pair = RatFunc.const(0)
    total = RatFunc.const(0)
    for a in range(k0 + 1):
        for b in range(k0 + 1):
            term = T(k0, a, b) * P_poly(a, p - 1 + b, n)
            total = total + term
            if (a, b) in ((0, 1), (k0, 0)):
                pair = pair + term
            elif reduce_mod_p(term * lift, p, k):
                ok_terms = False
    const = kk0_constants(p, k0, n)
    predicted = reduce_mod_p(q_series(k0, k)[k0] * rk_pow * (-const.Q_prime), p, k)
    pi = pi_matrix(p, k, n, p - 1)[0][k0]
    pair_red = reduce_mod_p(pair * rk_pow * lift, p, k)
    pair_expected = reduce_mod_p(q_series(k0, k)[k0] * rk_pow * lift * (-const.Q_prime), p, k)
    return BridgeReport(
        p, k, n, k0, const.Q_prime, str(pi), str(predicted),
        vanishing_terms_ok=ok_terms,
        pair_matches=pair_red == pair_expected,
        sum_matches=reduce_mod_p(total * rk_pow, p, k) == pi and pi == predicted,
    )
