"""Closed-form depth bounds for p-th powers in the Nottingham group."""

from __future__ import annotations

from dataclasses import dataclass

from .coeffring import is_prime
from .errors import InternalInconsistencyError, ParameterDomainError


@dataclass(frozen=True)
class ParamSet:
    """A prime p and depths n >= k >= 1; ``k0`` is k mod p."""

    p: int
    k: int
    n: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ParameterDomainError(f"p={self.p} is not prime")
        if not 1 <= self.k <= self.n:
            raise ParameterDomainError(f"need n >= k >= 1, got k={self.k}, n={self.n}")

    @property
    def k0(self) -> int:
        return self.k % self.p


def e_of(ps: ParamSet) -> int:
    p, k, n, k0 = ps.p, ps.k, ps.n, ps.k0
    if k % p == 0:
        if n == k:
            return 0
        return 1 if n % p == 0 else 0
    for i in range(k0 + 1):
        if (n - (2 * k - i)) % p == 0:
            return i
    return k0


def theorem_bound(ps: ParamSet) -> int:
    """Lower bound n + (p-1)k + e(k, n) for the depth of g^p f^-p."""
    return ps.n + (ps.p - 1) * ps.k + e_of(ps)


def pth_power_depth(p: int, k: int) -> int:
    """Depth p*k + k0 of the p-th power of a generic element of depth k."""
    return p * k + k % p


def _corollary_recursion(ps: ParamSet, m: int) -> int:
    p, k, k0 = ps.p, ps.k, ps.k0
    d = theorem_bound(ps)
    for i in range(1, m):
        d += (p - 1) * (p**i * k + (p**i - 1) // (p - 1) * k0) + k0
    return d


def corollary_bound(ps: ParamSet, m: int) -> int:
    """Lower bound for the depth of g^(p^m) f^(-p^m).

    The closed form and the step-by-step recursion are both evaluated and
    must agree.
    """
    if m < 1:
        raise ParameterDomainError("m must be >= 1")
    p, k, n, k0 = ps.p, ps.k, ps.n, ps.k0
    closed = n + (p**m - 1) * k + (p**m - p) // (p - 1) * k0 + e_of(ps)
    rec = _corollary_recursion(ps, m)
    if closed != rec:
        raise InternalInconsistencyError(f"closed form {closed} != recursion {rec} for {ps}, m={m}")
    return closed


def bound_congruence_class(ps: ParamSet) -> int:
    """Residue of the theorem bound mod p, read off from e(k, n)."""
    p, k, n, k0 = ps.p, ps.k, ps.n, ps.k0
    e = e_of(ps)
    if k % p == 0 and n % p == 0 and n > k:
        cls = 1 % p
    elif e == k0:
        cls = n % p
    else:
        cls = k % p
    if theorem_bound(ps) % p != cls:
        raise InternalInconsistencyError(f"bound mod p disagrees with class {cls} for {ps}")
    return cls
