"""Scalar domains: the prime field F_p, the integers and the rationals.

Elements are plain Python ``int`` (or ``Fraction`` for the rationals); the
domain objects only carry the arithmetic rules.  Every domain exposes the same
small duck-typed ring interface that :class:`pdepth.nottingham.Series` relies
on: ``zero``, ``one``, ``add``, ``sub``, ``mul``, ``neg``, ``scale``,
``is_zero``, ``dot``, ``format`` and ``parse``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import NotReducibleError, ParameterDomainError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field Z/pZ with elements represented by residues 0..p-1."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ParameterDomainError(f"modulus must be prime, got {self.p!r}")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1 % self.p

    def __call__(self, x) -> int:
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise NotReducibleError(f"{x} has denominator divisible by {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def scale(self, a, n: int):
        return a * n % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("0 has no inverse in F_%d" % self.p)
        return pow(a, -1, self.p)

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def dot(self, xs, ys):
        return sum(x * y for x, y in zip(xs, ys)) % self.p

    def format(self, a) -> str:
        return str(a % self.p)

    def parse(self, text: str):
        return self(Fraction(text.strip().strip("()")))

    def __str__(self):
        return f"F_{self.p}"


@dataclass(frozen=True)
class IntegerRing:
    """Arbitrary-precision integers."""

    @property
    def characteristic(self) -> int:
        return 0

    zero = 0
    one = 1

    def __call__(self, x) -> int:
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return x.numerator
        return int(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def scale(self, a, n: int):
        return a * n

    def is_zero(self, a) -> bool:
        return a == 0

    def dot(self, xs, ys):
        return sum(x * y for x, y in zip(xs, ys))

    def format(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        return self(Fraction(text.strip().strip("()")))

    def __str__(self):
        return "ZZ"


@dataclass(frozen=True)
class RationalField:
    """Arbitrary-precision rationals (``fractions.Fraction``)."""

    @property
    def characteristic(self) -> int:
        return 0

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def __call__(self, x) -> Fraction:
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def scale(self, a, n: int):
        return a * n

    def inv(self, a):
        return 1 / Fraction(a)

    def is_zero(self, a) -> bool:
        return a == 0

    def dot(self, xs, ys):
        return Fraction(sum(x * y for x, y in zip(xs, ys)))

    def format(self, a) -> str:
        return str(Fraction(a))

    def parse(self, text: str):
        return Fraction(text.strip().strip("()"))

    def __str__(self):
        return "QQ"


ZZ = IntegerRing()
QQ = RationalField()
