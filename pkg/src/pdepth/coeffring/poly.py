"""Sparse multivariate polynomials in the variables r_j, s_j, K (and n).

A monomial is packed into one Python integer: field 0 holds the total degree
and field ``slot + 1`` holds the exponent of the variable with that slot, each
field ``BITS`` wide.  Multiplying monomials is then a single integer addition
and the total degree can be read off with a mask.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, NamedTuple

from ..errors import RingMismatchError
from .scalars import ZZ, PrimeField, RationalField

BITS = 16
MASK = (1 << BITS) - 1

_KIND_ORDER = {"R": 0, "S": 1, "K": 2, "N": 3}


class VarId(NamedTuple):
    """A polynomial variable: ``R(j)`` is r_j, ``S(j)`` is s_j, ``K`` and ``N``
    are the symbolic stand-ins for k and n."""

    kind: str
    j: int = 0

    @property
    def slot(self) -> int:
        return _slot(self)

    @property
    def name(self) -> str:
        if self.kind == "R":
            return f"r{self.j}"
        if self.kind == "S":
            return f"s{self.j}"
        return "K" if self.kind == "K" else "n"

    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.j)

    def __str__(self):
        return self.name

    def __repr__(self):
        if self.kind in "RS":
            return f"{self.kind}({self.j})"
        return self.kind


def R(j: int) -> VarId:
    if j < 0:
        raise ValueError("variable index must be nonnegative")
    return VarId("R", j)


def S(j: int) -> VarId:
    if j < 0:
        raise ValueError("variable index must be nonnegative")
    return VarId("S", j)


K = VarId("K")
N = VarId("N")


def _slot(v: VarId) -> int:
    kind = v.kind
    if kind == "K":
        return 0
    if kind == "N":
        return 1
    if kind == "R":
        return 2 + 2 * v.j
    if kind == "S":
        return 3 + 2 * v.j
    raise ValueError(f"unknown variable kind {kind!r}")


def _var_of_slot(slot: int) -> VarId:
    if slot == 0:
        return K
    if slot == 1:
        return N
    j, odd = divmod(slot - 2, 2)
    return S(j) if odd else R(j)


def _pack(exps: Iterable[tuple[VarId, int]]) -> int:
    m = 0
    deg = 0
    for v, e in exps:
        if e < 0:
            raise ValueError("negative exponent")
        if e == 0:
            continue
        if e > MASK:
            raise OverflowError("exponent too large")
        m += e << (BITS * (_slot(v) + 1))
        deg += e
    if deg > MASK:
        raise OverflowError("degree too large")
    return m + deg


@lru_cache(maxsize=1 << 16)
def _decode(m: int) -> tuple[tuple[VarId, int], ...]:
    out = []
    m >>= BITS
    slot = 0
    while m:
        e = m & MASK
        if e:
            out.append((_var_of_slot(slot), e))
        m >>= BITS
        slot += 1
    return tuple(out)


def _exp_of(m: int, v: VarId) -> int:
    return (m >> (BITS * (_slot(v) + 1))) & MASK


def _normalizer(scalars):
    if isinstance(scalars, PrimeField):
        p = scalars.p
        return lambda c: c % p
    if isinstance(scalars, RationalField):
        return Fraction
    return None


def _monomial_key(m: int):
    exps = _decode(m)
    return (m & MASK, tuple((v.sort_key(), -e) for v, e in sorted(exps, key=lambda t: t[0].sort_key())))


class MultiPoly:
    """Immutable sparse polynomial with coefficients in ``scalars``.

    ``terms`` maps packed monomials to nonzero coefficients.  Instances must
    not be mutated after construction.
    """

    __slots__ = ("terms", "scalars", "_deg", "_hash")

    def __init__(self, terms: dict, scalars=ZZ):
        self.terms = terms
        self.scalars = scalars
        self._deg = None
        self._hash = None

    # -- construction -------------------------------------------------

    @classmethod
    def _from_raw(cls, raw: dict, scalars) -> "MultiPoly":
        norm = _normalizer(scalars)
        if norm is None:
            terms = {m: c for m, c in raw.items() if c}
        else:
            terms = {}
            for m, c in raw.items():
                c = norm(c)
                if c:
                    terms[m] = c
        return cls(terms, scalars)

    @classmethod
    def zero(cls, scalars=ZZ) -> "MultiPoly":
        return cls({}, scalars)

    @classmethod
    def const(cls, c, scalars=ZZ) -> "MultiPoly":
        c = scalars(c)
        return cls({0: c} if c else {}, scalars)

    @classmethod
    def var(cls, v: VarId, scalars=ZZ, exp: int = 1) -> "MultiPoly":
        return cls._from_raw({_pack([(v, exp)]): scalars.one}, scalars)

    @classmethod
    def from_terms(cls, items, scalars=ZZ) -> "MultiPoly":
        """Build from ``{((VarId, exp), ...): coeff}`` or an iterable of pairs."""
        if isinstance(items, dict):
            items = items.items()
        raw: dict = {}
        for exps, c in items:
            m = _pack(exps)
            raw[m] = raw.get(m, 0) + scalars(c)
        return cls._from_raw(raw, scalars)

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_term(self):
        return self.terms.get(0, self.scalars.zero)

    @property
    def degree(self) -> int:
        """Total degree (-1 for the zero polynomial)."""
        if self._deg is None:
            self._deg = max((m & MASK for m in self.terms), default=-1)
        return self._deg

    def monomials(self):
        """Yield ``(exponents, coeff)`` in canonical graded-lex order."""
        for m in sorted(self.terms, key=_monomial_key):
            yield dict(_decode(m)), self.terms[m]

    def variables(self) -> set[VarId]:
        out: set[VarId] = set()
        for m in self.terms:
            out.update(v for v, _ in _decode(m))
        return out

    def depends_on(self, v: VarId) -> bool:
        shift = BITS * (_slot(v) + 1)
        return any((m >> shift) & MASK for m in self.terms)

    def degree_in(self, v: VarId) -> int:
        return max((_exp_of(m, v) for m in self.terms), default=-1)

    def min_degree_in(self, v: VarId) -> int:
        return min((_exp_of(m, v) for m in self.terms), default=0)

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.scalars is not self.scalars and other.scalars != self.scalars:
                raise RingMismatchError(f"cannot combine polynomials over {self.scalars} and {other.scalars}")
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(other, self.scalars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        raw = dict(self.terms)
        get = raw.get
        for m, c in other.terms.items():
            raw[m] = get(m, 0) + c
        return MultiPoly._from_raw(raw, self.scalars)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._from_raw({m: -c for m, c in self.terms.items()}, self.scalars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms or not other.terms:
            return MultiPoly({}, self.scalars)
        if self.degree + other.degree > MASK:
            raise OverflowError("product degree exceeds packed monomial capacity")
        raw: dict = {}
        get = raw.get
        b = other.terms.items()
        for m1, c1 in self.terms.items():
            for m2, c2 in b:
                m = m1 + m2
                raw[m] = get(m, 0) + c1 * c2
        return MultiPoly._from_raw(raw, self.scalars)

    __rmul__ = __mul__

    def scale(self, n) -> "MultiPoly":
        if not n:
            return MultiPoly({}, self.scalars)
        return MultiPoly._from_raw({m: c * n for m, c in self.terms.items()}, self.scalars)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(1, self.scalars)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other, self.scalars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.scalars == other.scalars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.scalars, frozenset(self.terms.items())))
        return self._hash

    # -- structural operations ---------------------------------------

    def substitute(self, asg: dict) -> "MultiPoly":
        """Substitute scalar values for some or all variables."""
        if not asg:
            return self
        scal = self.scalars
        vals = {_slot(v): scal(x) for v, x in asg.items()}
        raw: dict = {}
        get = raw.get
        for m, c in self.terms.items():
            rest = []
            coeff = c
            for v, e in _decode(m):
                s = _slot(v)
                if s in vals:
                    coeff = coeff * vals[s] ** e
                else:
                    rest.append((v, e))
            if coeff:
                key = _pack(rest)
                raw[key] = get(key, 0) + coeff
        return MultiPoly._from_raw(raw, scal)

    def evaluate(self, asg: dict):
        """Full substitution; returns a scalar.  Raises KeyError if a
        variable is left unassigned."""
        res = self.substitute(asg)
        if not res.is_constant():
            missing = sorted(res.variables(), key=VarId.sort_key)
            raise KeyError(f"unassigned variables: {', '.join(map(str, missing))}")
        return res.constant_term()

    def change_scalars(self, scalars) -> "MultiPoly":
        """Map every coefficient into another scalar domain (e.g. ZZ -> F_p)."""
        return MultiPoly._from_raw({m: scalars(c) for m, c in self.terms.items()}, scalars)

    def coefficient(self, v: VarId, e: int) -> "MultiPoly":
        """The polynomial multiplying ``v**e`` (terms with exactly that exponent)."""
        shift = BITS * (_slot(v) + 1)
        sub = (e << shift) + e
        return MultiPoly(
            {m - sub: c for m, c in self.terms.items() if (m >> shift) & MASK == e},
            self.scalars,
        )

    def as_univariate(self, v: VarId) -> dict[int, "MultiPoly"]:
        shift = BITS * (_slot(v) + 1)
        groups: dict[int, dict] = {}
        for m, c in self.terms.items():
            e = (m >> shift) & MASK
            groups.setdefault(e, {})[m - (e << shift) - e] = c
        return {e: MultiPoly(t, self.scalars) for e, t in groups.items()}

    def divide_by_var(self, v: VarId, e: int = 1) -> "MultiPoly":
        """Exact division by ``v**e``; raises ValueError if not divisible."""
        if e == 0:
            return self
        shift = BITS * (_slot(v) + 1)
        sub = (e << shift) + e
        terms = {}
        for m, c in self.terms.items():
            if (m >> shift) & MASK < e:
                raise ValueError(f"not divisible by {v}^{e}")
            terms[m - sub] = c
        return MultiPoly(terms, self.scalars)

    def content(self) -> int:
        """gcd of the (integer) coefficients."""
        g = 0
        for c in self.terms.values():
            g = gcd(g, int(c))
        return g

    def exact_div_int(self, n: int) -> "MultiPoly":
        terms = {}
        for m, c in self.terms.items():
            q, r = divmod(c, n)
            if r:
                raise ValueError(f"coefficient {c} not divisible by {n}")
            terms[m] = q
        return MultiPoly(terms, self.scalars)

    def filter_terms(self, pred) -> "MultiPoly":
        """Keep the terms whose exponent dict satisfies ``pred``."""
        return MultiPoly(
            {m: c for m, c in self.terms.items() if pred(dict(_decode(m)))}, self.scalars
        )

    # -- text ---------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        fmt = self.scalars.format
        pieces = []
        for exps, c in self.monomials():
            mono = "*".join(v.name if e == 1 else f"{v.name}^{e}" for v, e in sorted(exps.items(), key=lambda t: t[0].sort_key()))
            if isinstance(self.scalars, PrimeField):
                neg = False
                mag = fmt(c)
            else:
                neg = c < 0
                mag = fmt(-c if neg else c)
            if not mono:
                body = mag
            elif mag == "1":
                body = mono
            else:
                body = f"{mag}*{mono}"
            pieces.append(("- " if neg else "+ ", body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "- " else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign}{body}"
        return out

    def __repr__(self):
        return f"MultiPoly({self}, {self.scalars})"


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([rs]\d+|K|n)|(\^)|(\*)|([+-]))")


def parse_poly(text: str, scalars=ZZ) -> MultiPoly:
    """Parse the output of ``str(MultiPoly)`` back into a polynomial."""
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    pos = 0
    raw: dict = {}
    sign = 1
    coeff = None
    exps: list = []
    expect_term = True

    def flush():
        nonlocal coeff, exps, sign
        c = Fraction(1) if coeff is None else coeff
        m = _pack(exps)
        raw[m] = raw.get(m, 0) + scalars(sign * c)
        coeff, exps, sign = None, [], 1

    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ValueError(f"cannot parse polynomial at {text[pos:]!r}")
        pos = mt.end()
        num, name, caret, star, pm = mt.groups()
        if pm:
            if not expect_term:
                flush()
                expect_term = True
            if pm == "-":
                sign = -sign
        elif num:
            coeff = Fraction(num)
            expect_term = False
        elif name:
            v = K if name == "K" else N if name == "n" else (R if name[0] == "r" else S)(int(name[1:]))
            e = 1
            mt2 = re.compile(r"\s*\^\s*(\d+)").match(text, pos)
            if mt2:
                e = int(mt2.group(1))
                pos = mt2.end()
            exps.append((v, e))
            expect_term = False
        elif caret:
            raise ValueError("dangling '^'")
    if not expect_term:
        flush()
    return MultiPoly._from_raw(raw, scalars)


class PolyRing:
    """Ring descriptor whose elements are :class:`MultiPoly` over ``scalars``.

    Used as the coefficient ring of generic series.
    """

    __slots__ = ("scalars", "zero", "one")

    def __init__(self, scalars):
        self.scalars = scalars
        self.zero = MultiPoly.zero(scalars)
        self.one = MultiPoly.const(1, scalars)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and other.scalars == self.scalars

    def __hash__(self):
        return hash(("PolyRing", self.scalars))

    @property
    def characteristic(self) -> int:
        return self.scalars.characteristic

    def __call__(self, x) -> MultiPoly:
        if isinstance(x, MultiPoly):
            if x.scalars != self.scalars:
                raise RingMismatchError(f"{x!r} is not over {self.scalars}")
            return x
        return MultiPoly.const(x, self.scalars)

    def var(self, v: VarId) -> MultiPoly:
        return MultiPoly.var(v, self.scalars)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def scale(self, a, n: int):
        return a.scale(n)

    def is_zero(self, a) -> bool:
        return not a.terms

    def dot(self, xs, ys) -> MultiPoly:
        """Sum of pairwise products, accumulated in a single term table."""
        raw: dict = {}
        get = raw.get
        for x, y in zip(xs, ys):
            if not x.terms or not y.terms:
                continue
            if x.degree + y.degree > MASK:
                raise OverflowError("product degree exceeds packed monomial capacity")
            b = y.terms.items()
            for m1, c1 in x.terms.items():
                for m2, c2 in b:
                    m = m1 + m2
                    raw[m] = get(m, 0) + c1 * c2
        return MultiPoly._from_raw(raw, self.scalars)

    def format(self, a) -> str:
        s = str(a)
        if len(a.terms) == 1 and not s.startswith("-"):
            return s
        return f"({s})"

    def parse(self, text: str) -> MultiPoly:
        return parse_poly(text, self.scalars)

    def __str__(self):
        return f"{self.scalars}[r,s,K]"

    def __repr__(self):
        return f"PolyRing({self.scalars})"
