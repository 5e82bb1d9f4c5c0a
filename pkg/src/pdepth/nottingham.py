"""Truncated elements of the Nottingham group and its group law.

A :class:`Series` stores ``x + a_2 x^2 + ... + a_N x^N + O(x^{N+1})`` over a
coefficient ring (any object with the duck-typed ring interface of
:mod:`pdepth.coeffring`).  The product of f and g is the substitution
``(f g)(x) = f(g(x))``; every operation returns the smaller of the input
precisions.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .errors import RingMismatchError


@dataclass(frozen=True)
class DepthResult:
    """Depth known exactly (``exact=True``) or only bounded below by the
    precision of the series it came from."""

    value: int
    exact: bool

    def __str__(self):
        return f"{'Exact' if self.exact else 'AtLeast'}({self.value})"

    def at_least(self, d: int) -> bool:
        """True when the depth is certainly >= d."""
        return self.value >= d

    def is_exactly(self, d: int) -> bool:
        return self.exact and self.value == d

    def to_json(self):
        return {"exact": self.exact, "value": self.value}


def Exact(d: int) -> DepthResult:
    return DepthResult(d, True)


def AtLeast(n: int) -> DepthResult:
    return DepthResult(n, False)


class Series:
    """Immutable truncated power series with leading term x."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        # coeffs[i] is the coefficient of x^(i + 2); precision is len + 1
        self.ring = ring
        self.coeffs = tuple(coeffs)

    # -- construction -------------------------------------------------

    @classmethod
    def identity(cls, ring, precision: int) -> "Series":
        if precision < 1:
            raise ValueError("precision must be positive")
        return cls(ring, [ring.zero] * (precision - 1))

    @classmethod
    def from_dict(cls, ring, terms: dict, precision: int) -> "Series":
        """Series ``x + sum c x^e`` for ``{e: c}``; exponents above the
        precision are dropped."""
        if 1 in terms and terms[1] != ring.one:
            raise ValueError("the coefficient of x must be 1")
        c = [ring.zero] * (precision - 1)
        for e, v in terms.items():
            if e < 1:
                raise ValueError("exponents must be positive")
            if 2 <= e <= precision:
                c[e - 2] = ring(v)
        return cls(ring, c)

    @classmethod
    def from_list(cls, ring, full: list) -> "Series":
        """Inverse of :meth:`full`: ``full[i]`` is the coefficient of x^i."""
        return cls(ring, full[2:])

    @property
    def precision(self) -> int:
        return len(self.coeffs) + 1

    def coeff(self, i: int):
        if i == 1:
            return self.ring.one
        if i < 1:
            return self.ring.zero
        if i > self.precision:
            raise IndexError(f"x^{i} is beyond precision {self.precision}")
        return self.coeffs[i - 2]

    def full(self) -> list:
        return [self.ring.zero, self.ring.one, *self.coeffs]

    def truncate(self, precision: int) -> "Series":
        if precision > self.precision:
            raise ValueError("cannot raise precision")
        return Series(self.ring, self.coeffs[: precision - 1])

    def map_coeffs(self, fn, ring) -> "Series":
        return Series(ring, [fn(c) for c in self.coeffs])

    # -- comparison and text -----------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def agrees_with(self, other: "Series", precision: int) -> bool:
        return self.truncate(precision).coeffs == other.truncate(precision).coeffs

    def __str__(self):
        return format_series(self)

    def __repr__(self):
        return f"Series({self}, {self.ring})"

    # -- group operations as methods ---------------------------------

    def __matmul__(self, other):
        return compose(self, other)

    def __pow__(self, m: int):
        return group_pow(self, m)

    def inverse(self) -> "Series":
        return inverse(self)

    def depth(self) -> DepthResult:
        return depth(self)


def _check_same_ring(f: Series, g: Series):
    if f.ring is not g.ring and f.ring != g.ring:
        raise RingMismatchError(f"series over {f.ring} and {g.ring}")


def _nonzero(ring, c: list) -> list[int]:
    is_zero = ring.is_zero
    return [i for i, x in enumerate(c) if not is_zero(x)]


def _mul_trunc(ring, a: list, b: list, n: int) -> list:
    """Product of two coefficient lists truncated after x^n."""
    na = _nonzero(ring, a)
    nb = set(_nonzero(ring, b))
    out = [ring.zero] * (n + 1)
    if not na or not nb:
        return out
    lb = len(b)
    dot = ring.dot
    lo = na[0] + min(nb)
    for m in range(lo, n + 1):
        xs, ys = [], []
        for i in na:
            if i > m:
                break
            j = m - i
            if j < lb and j in nb:
                xs.append(a[i])
                ys.append(b[j])
        if xs:
            out[m] = dot(xs, ys)
    return out


def compose(f: Series, g: Series) -> Series:
    """The group product f g, i.e. x -> f(g(x)).

    Uses the Hasse-derivative expansion f(x + d) = sum_t d^t (D_t f)(x) with
    d = g(x) - x and D_t f = sum_i C(i, t) a_i x^(i - t), which is valid in
    every characteristic.  The number of terms shrinks as the depth of g
    grows.
    """
    _check_same_ring(f, g)
    ring = f.ring
    n = min(f.precision, g.precision)
    a = f.full()[: n + 1]
    delta = g.full()[: n + 1]
    delta[1] = ring.zero
    nz_delta = _nonzero(ring, delta)
    if not nz_delta:
        return Series.from_list(ring, a)
    v = nz_delta[0]
    nz_a = _nonzero(ring, a)
    out = list(a)
    power = None  # delta^t
    t = 1
    while t * v <= n:
        power = delta if power is None else _mul_trunc(ring, power, delta, n)
        vt = t * v
        # (D_t f)(x), only exponents that can land at or below x^n
        dt = [ring.zero] * (n - vt + 1)
        any_term = False
        for i in nz_a:
            if i < t:
                continue
            e = i - t
            if e > n - vt:
                break
            c = comb(i, t)
            if c:
                dt[e] = ring.scale(a[i], c)
                any_term = any_term or not ring.is_zero(dt[e])
        if any_term:
            term = _mul_trunc(ring, power, dt, n)
            for m in range(vt, n + 1):
                if not ring.is_zero(term[m]):
                    out[m] = ring.add(out[m], term[m])
        t += 1
    return Series.from_list(ring, out)


def inverse(f: Series) -> Series:
    """Group inverse by back-substitution.

    Writing h = x + b_2 x^2 + ..., the identity h(f(x)) = x reads
    sum_i b_i [x^m] f^i = 0 for m >= 2, and [x^m] f^m = 1, so each b_m is
    determined by b_1 .. b_{m-1} and the (fixed) powers of f.
    """
    ring = f.ring
    n = f.precision
    a = f.full()
    if not _nonzero(ring, a[2:]):
        return f
    powers = [None, a]
    for i in range(2, n + 1):
        powers.append(_mul_trunc(ring, powers[-1], a, n))
    b = [ring.zero, ring.one] + [ring.zero] * (n - 1)
    for m in range(2, n + 1):
        xs, ys = [], []
        for i in range(1, m):
            if not ring.is_zero(b[i]) and not ring.is_zero(powers[i][m]):
                xs.append(b[i])
                ys.append(powers[i][m])
        b[m] = ring.neg(ring.dot(xs, ys)) if xs else ring.zero
    return Series.from_list(ring, b)


def group_pow(f: Series, m: int) -> Series:
    """f^m by binary powering; negative m inverts first."""
    if m < 0:
        return group_pow(inverse(f), -m)
    result = Series.identity(f.ring, f.precision)
    base = f
    while m:
        if m & 1:
            result = compose(result, base)
        m >>= 1
        if m:
            base = compose(base, base)
    return result


def group_pow_iterated(f: Series, m: int) -> Series:
    """f^m as m successive compositions (cross-check for :func:`group_pow`)."""
    if m < 0:
        return group_pow_iterated(inverse(f), -m)
    result = Series.identity(f.ring, f.precision)
    for _ in range(m):
        result = compose(f, result)
    return result


def commutator(f: Series, g: Series) -> Series:
    """[f, g] = f^-1 g^-1 f g, i.e. x -> f^-1(g^-1(f(g(x))))."""
    _check_same_ring(f, g)
    return compose(inverse(f), compose(inverse(g), compose(f, g)))


def depth(f: Series) -> DepthResult:
    is_zero = f.ring.is_zero
    for idx, c in enumerate(f.coeffs):
        if not is_zero(c):
            return Exact(idx + 1)
    return AtLeast(f.precision)


# -- text form ----------------------------------------------------------


def format_series(f: Series) -> str:
    """``x + c*x^e + ... + O(x^{N+1})`` with zero terms omitted."""
    ring = f.ring
    parts = ["x"]
    for e, c in enumerate(f.coeffs, start=2):
        if ring.is_zero(c):
            continue
        s = ring.format(c)
        if s.startswith("-"):
            s = f"({s})"
        parts.append(f"x^{e}" if s == "1" else f"{s}*x^{e}")
    parts.append(f"O(x^{f.precision + 1})")
    return " + ".join(parts)


def _split_top_level(text: str) -> list[str]:
    out, depth_, cur = [], 0, []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth_ += 1
        elif ch == ")":
            depth_ -= 1
        if ch == "+" and depth_ == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
        i += 1
    out.append("".join(cur).strip())
    return out


def parse_series(text: str, ring) -> Series:
    """Inverse of :func:`format_series`."""
    pieces = _split_top_level(text)
    if not pieces or pieces[0] != "x":
        raise ValueError("series text must start with 'x'")
    last = pieces[-1].replace(" ", "")
    if not (last.startswith("O(x^") and last.endswith(")")):
        raise ValueError("series text must end with O(x^M)")
    precision = int(last[4:-1]) - 1
    terms = {}
    for piece in pieces[1:-1]:
        if piece.startswith("x^"):
            coeff_text, exp_text = "1", piece[2:]
        else:
            head, sep, exp_text = piece.rpartition("*x^")
            if not sep:
                raise ValueError(f"bad series term {piece!r}")
            coeff_text = head
        e = int(exp_text)
        if e in terms:
            raise ValueError(f"repeated exponent {e}")
        terms[e] = ring.parse(coeff_text)
    return Series.from_dict(ring, terms, precision)
