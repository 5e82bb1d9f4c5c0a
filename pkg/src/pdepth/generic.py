"""Generic series with polynomial coefficients, specializations and the
witness search for sharpness of the p-th power bound."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache

from .bounds import ParamSet, theorem_bound
from .coeffring import MultiPoly, PolyRing, PrimeField, R, S, VarId
from .errors import IncompleteSpecializationError, NotFoundError, ParameterDomainError
from .nottingham import Series, compose, depth, group_pow, inverse


@lru_cache(maxsize=None)
def poly_ring(p: int) -> PolyRing:
    """F_p[r_k, r_{k+1}, ..., s_n, s_{n+1}, ...] (one shared instance per p)."""
    return PolyRing(PrimeField(p))


class GenericSeries(Series):
    """A series whose coefficients are independent variables.

    ``role`` is ``"F"`` (coefficients r_j) or ``"U1"`` (coefficients s_j).
    """

    __slots__ = ("role",)

    def __init__(self, ring, coeffs, role: str):
        super().__init__(ring, coeffs)
        self.role = role


def generic_f(p: int, k: int, precision: int) -> GenericSeries:
    """x + r_k x^{k+1} + r_{k+1} x^{k+2} + ... + r_{N-1} x^N."""
    if precision < k + 1:
        raise ParameterDomainError(f"precision {precision} < k+1 = {k + 1}")
    ring = poly_ring(p)
    coeffs = [ring.zero] * (precision - 1)
    for j in range(k, precision):
        coeffs[j - 1] = ring.var(R(j))
    return GenericSeries(ring, coeffs, "F")


def generic_u1(p: int, n: int, precision: int) -> GenericSeries:
    """x + s_n x^{n+1} + s_{n+1} x^{n+2} + ... + s_{N-1} x^N."""
    if precision < n + 1:
        raise ParameterDomainError(f"precision {precision} < n+1 = {n + 1}")
    ring = poly_ring(p)
    coeffs = [ring.zero] * (precision - 1)
    for j in range(n, precision):
        coeffs[j - 1] = ring.var(S(j))
    return GenericSeries(ring, coeffs, "U1")


_POWER_CACHE: dict[tuple[int, int], Series] = {}


def generic_pth_power(p: int, k: int, precision: int) -> Series:
    """f^p for the generic f of depth k, memoized across precisions.

    The coefficient of x^i in f^p only involves coefficients of index <= i,
    so a longer cached result is simply truncated.
    """
    cached = _POWER_CACHE.get((p, k))
    if cached is None or cached.precision < precision:
        cached = group_pow(generic_f(p, k, max(precision, k + 1)), p)
        _POWER_CACHE[(p, k)] = cached
    return cached.truncate(precision) if precision <= cached.precision else cached


# -- independence of the low coefficients ---------------------------------


@dataclass
class IndependenceReport:
    p: int
    k: int
    n: int
    bound: int
    offending: dict[int, list[str]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(not v for v in self.offending.values())

    def to_json(self):
        return {
            "p": self.p, "k": self.k, "n": self.n, "bound": self.bound,
            "passed": self.passed,
            "offending": {str(i): v for i, v in self.offending.items() if v},
        }


def verify_independence(p: int, k: int, n: int) -> IndependenceReport:
    """Check that no coefficient of x^i, i <= bound, in f^p involves an r_j
    with j >= n."""
    ps = ParamSet(p, k, n)
    bound = theorem_bound(ps)
    fp = generic_pth_power(p, k, bound)
    report = IndependenceReport(p, k, n, bound)
    for i in range(2, bound + 1):
        bad = sorted(
            (v for v in fp.coeff(i).variables() if v.kind == "R" and v.j >= n),
            key=VarId.sort_key,
        )
        report.offending[i] = [v.name for v in bad]
    return report


# -- the commutator chain u_1, u_2 = [u_1, f], ... ------------------------


def u_chain(p: int, k: int, n: int, precision: int) -> list[Series]:
    f = generic_f(p, k, precision)
    finv = inverse(f)
    chain = [generic_u1(p, n, precision)]
    for _ in range(p - 1):
        u = chain[-1]
        # [u, f] = u^-1 f^-1 u f
        chain.append(compose(inverse(u), compose(finv, compose(u, f))))
    return chain


@dataclass
class UpCongruenceReport:
    p: int
    k: int
    n: int
    modulus: int
    bound: int
    literal: bool
    with_next: bool
    discrepancy_depth: str
    beyond_bound: bool

    def to_json(self):
        return dict(self.__dict__)


def up_congruence_report(p: int, k: int, n: int) -> UpCongruenceReport:
    """Compare g^p f^-p with the commutator chain modulo x^{M+1},
    M = n + (p-1)k + p, where g = u_1 f.

    ``literal`` is the congruence with u_p alone.  Collecting the
    commutators in (u_1 f)^p leaves u_1^p, u_j^{C(p+1, j)} for j >= 2 and
    u_{p+1}, so the exact congruence is with u_p u_{p+1} (``with_next``);
    u_{p+1} only vanishes mod x^{M+1} when its depth n + pk reaches M.
    ``beyond_bound`` records that the two sides still agree past the
    theorem bound, which is all the depth argument needs.
    """
    if n < (p - 1) * k + p:
        raise ParameterDomainError(f"need n >= (p-1)k+p = {(p - 1) * k + p}, got n={n}")
    prec = n + (p - 1) * k + p
    f = generic_f(p, k, prec)
    g = compose(generic_u1(p, n, prec), f)
    lhs = compose(group_pow(g, p), group_pow(f, -p))
    chain = u_chain(p, k, n, prec)
    up = chain[-1]
    u_next = compose(inverse(up), compose(inverse(f), compose(up, f)))
    gap = depth(compose(lhs, inverse(up)))
    bound = theorem_bound(ParamSet(p, k, n))
    return UpCongruenceReport(
        p, k, n, prec, bound,
        literal=lhs == up,
        with_next=lhs == compose(up, u_next),
        discrepancy_depth=str(gap),
        beyond_bound=gap.value > bound,
    )


def verify_up_congruence(p: int, k: int, n: int) -> bool:
    """g^p f^-p agrees with u_p modulo x^{n+(p-1)k+p+1}, where g = u_1 f.

    See :func:`up_congruence_report` for the variant that also accounts
    for u_{p+1}.
    """
    return up_congruence_report(p, k, n).literal


# -- specializations ----------------------------------------------------


@dataclass(frozen=True)
class Specialization:
    """An assignment of F_p values to the variables r_j, s_j."""

    p: int
    values: dict = field(hash=False)
    seed: int | None = None

    @classmethod
    def random(cls, p: int, variables, seed: int, nonzero=()) -> "Specialization":
        rng = random.Random(seed)
        vals = {}
        for v in sorted(variables, key=VarId.sort_key):
            vals[v] = rng.randrange(1, p) if v in nonzero else rng.randrange(p)
        return cls(p, vals, seed)

    def __call__(self, q: MultiPoly) -> int:
        missing = q.variables() - self.values.keys()
        if missing:
            names = ", ".join(v.name for v in sorted(missing, key=VarId.sort_key))
            raise IncompleteSpecializationError(f"no value assigned to {names}")
        return q.evaluate({v: self.values[v] for v in q.variables()}) % self.p


def specialize_series(s: Series, sigma: Specialization) -> Series:
    F = PrimeField(sigma.p)
    return Series(F, [sigma(c) for c in s.coeffs])


# -- witness search -----------------------------------------------------


@dataclass
class Witness:
    p: int
    k: int
    n: int
    f: Series
    g: Series
    achieved: int
    stage: str
    attempts: int

    def to_json(self):
        return {
            "p": self.p, "k": self.k, "n": self.n,
            "f": str(self.f), "g": str(self.g),
            "achieved_depth": self.achieved, "stage": self.stage, "attempts": self.attempts,
        }


def check_witness(f: Series, g: Series, p: int, k: int, n: int):
    """Return the exact depth of g^p f^-p if f, g satisfy the hypotheses
    D(f) = k and D(g f^-1) = n exactly, else None."""
    if not depth(f).is_exactly(k):
        return None
    if not depth(compose(g, inverse(f))).is_exactly(n):
        return None
    d = depth(compose(group_pow(g, p), group_pow(f, -p)))
    return d.value if d.exact else None


def _monomial(F, terms: dict, prec: int) -> Series:
    return Series.from_dict(F, terms, prec)


def _structured_candidates(p: int, k: int, n: int, prec: int):
    F = PrimeField(p)
    k0 = k % p
    f = _monomial(F, {k + 1: 1}, prec)
    yield "case1", f, compose(_monomial(F, {n + 1: 1}, prec), f)
    if n < k + k0:
        # pairs in the spirit of the shift argument: g of depth gap k+k0,
        # h of depth gap n with respect to f
        g = compose(_monomial(F, {k + k0 + 1: 1}, prec), f)
        h = compose(_monomial(F, {n + 1: 1}, prec), f)
        yield "case1-shift", f, h
        yield "case1-shift", g, h
    for c in range(1, p):
        f2 = _monomial(F, {k + 1: 1, k + k0 + 1: c} if k0 else {k + 1: 1, 2 * k + 1: c}, prec)
        for b in range(1, p):
            yield "case34", f2, compose(_monomial(F, {n + 1: b}, prec), f2)


def witness_search(p: int, k: int, n: int, budget: int = 200, seed: int = 0) -> Witness:
    """Find f, g over F_p with D(f) = k, D(g f^-1) = n and
    D(g^p f^-p) equal to the theorem bound.

    Structured candidates are tried first, then ``budget`` seeded random
    pairs.  Raises NotFoundError when nothing succeeds.
    """
    ps = ParamSet(p, k, n)
    bound = theorem_bound(ps)
    prec = bound + 1 + p
    attempts = 0
    for stage, f, g in _structured_candidates(p, k, n, prec):
        attempts += 1
        if check_witness(f, g, p, k, n) == bound:
            return Witness(p, k, n, f, g, bound, stage, attempts)
    rng = random.Random(f"{seed}:{p}:{k}:{n}")
    F = PrimeField(p)
    for _ in range(budget):
        attempts += 1
        fc = {j + 1: rng.randrange(p) for j in range(k + 1, prec)}
        fc[k + 1] = rng.randrange(1, p)
        uc = {j + 1: rng.randrange(p) for j in range(n + 1, prec)}
        uc[n + 1] = rng.randrange(1, p)
        f = Series.from_dict(F, fc, prec)
        g = compose(Series.from_dict(F, uc, prec), f)
        if check_witness(f, g, p, k, n) == bound:
            return Witness(p, k, n, f, g, bound, "random", attempts)
    raise NotFoundError(f"no witness for p={p}, k={k}, n={n} after {attempts} candidates")


# -- iterated p-th powers -------------------------------------------------


@dataclass
class PowerTrial:
    p: int
    k: int
    n: int
    m: int
    seed: int | None
    bound: int
    f: Series
    g: Series
    hypotheses_ok: bool
    observed: object  # DepthResult of g^(p^m) f^(-p^m)

    @property
    def passed(self) -> bool:
        return self.hypotheses_ok and self.observed.at_least(self.bound)

    @property
    def gap(self) -> int | None:
        return self.observed.value - self.bound if self.observed.exact else None

    def to_json(self):
        return {
            "p": self.p, "k": self.k, "n": self.n, "m": self.m, "seed": self.seed,
            "bound": self.bound, "f": str(self.f), "g": str(self.g),
            "hypotheses_ok": self.hypotheses_ok, "observed": self.observed.to_json(),
            "gap": self.gap, "passed": self.passed,
        }


def power_trial(f: Series, g: Series, p: int, k: int, n: int, m: int, seed=None) -> PowerTrial:
    """Depth of g^(p^m) f^(-p^m) against the iterated bound, with the
    hypotheses D(f) >= k and D(g f^-1) >= n checked at the given precision."""
    from .bounds import corollary_bound

    bound = corollary_bound(ParamSet(p, k, n), m)
    hyp = depth(f).at_least(k) and depth(compose(g, inverse(f))).at_least(n)
    q = p**m
    obs = depth(compose(group_pow(g, q), group_pow(f, -q)))
    return PowerTrial(p, k, n, m, seed, bound, f, g, hyp, obs)


def corollary_trial(p: int, k: int, n: int, m: int, seed: int, precision: int | None = None) -> PowerTrial:
    """Seeded specialization of the generic f and u_1, with g = u_1 f."""
    from .bounds import corollary_bound

    prec = precision or corollary_bound(ParamSet(p, k, n), m) + 2
    f = generic_f(p, k, prec)
    u = generic_u1(p, n, prec)
    variables = set()
    for c in f.coeffs + u.coeffs:
        variables |= c.variables()
    sigma = Specialization.random(p, variables, seed, nonzero=(R(k), S(n)))
    fs, us = specialize_series(f, sigma), specialize_series(u, sigma)
    return power_trial(fs, compose(us, fs), p, k, n, m, seed)
