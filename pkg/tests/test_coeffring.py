from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdepth.coeffring import (
    QQ, ZZ, K, MultiPoly, PolyRing, PrimeField, R, RatFunc, S,
    depends_on, parse_poly, ratfunc_residue, reduce_mod_p, substitute,
)
from pdepth.errors import (
    HigherOrderPoleError, NotReducibleError, ParameterDomainError, RingMismatchError,
)

F2, F3, F5 = PrimeField(2), PrimeField(3), PrimeField(5)


def r(j, sc=F2):
    return MultiPoly.var(R(j), sc)


def test_prime_field_basics():
    assert F2.add(1, 1) == 0
    assert F5.mul(3, 4) == 2
    assert F5.inv(2) == 3
    with pytest.raises(ParameterDomainError):
        PrimeField(4)


def test_frobenius_in_char_2():
    assert (r(1) + r(2)) ** 2 == r(1) ** 2 + r(2) ** 2


def test_mixed_rings_rejected():
    with pytest.raises(RingMismatchError):
        r(1, F2) + r(1, F3)


def test_depends_on():
    q = r(1) * r(2) + r(1) ** 3
    assert depends_on(q, R(2))
    assert not depends_on(q, R(3))
    assert not depends_on(MultiPoly.zero(F2), R(1))


def test_substitute():
    q = r(1) * r(2) + r(1) ** 3
    assert substitute(q, {R(1): 1, R(2): 0}) == 1
    assert substitute(q, {R(1): 1, R(2): 1}) == 0
    assert substitute(q, {}) == q
    partial = substitute(q, {R(1): 1})
    assert partial == r(2) + 1


def test_parse_roundtrip():
    ring = PolyRing(F5)
    q = r(1, F5) ** 2 * MultiPoly.var(S(4), F5).scale(3) + r(7, F5) + 2
    assert parse_poly(str(q), F5) == q
    assert ring.parse(ring.format(q)) == q


def test_residue_examples():
    q = RatFunc.var(R(2)).div_linear(1, -1) / R(1)
    assert ratfunc_residue(q, 1) == RatFunc.var(R(2)) / R(1)
    assert ratfunc_residue(RatFunc.var(R(2)), 3) == 0
    double = RatFunc.const(1).div_linear(1, -2).div_linear(1, -2)
    with pytest.raises(HigherOrderPoleError):
        ratfunc_residue(double, 2)


def test_reduce_examples():
    kv, rv = MultiPoly.var(K, ZZ), MultiPoly.var(R(2), ZZ)
    q = (MultiPoly.const(4, ZZ) - kv) * rv  # (n - 1 - K) r_{k+1} with n = 5
    assert reduce_mod_p(q, 3, 1).is_zero()
    assert reduce_mod_p(7, 5, 1) == MultiPoly.const(2, F5)
    with pytest.raises(NotReducibleError):
        reduce_mod_p(RatFunc.const(1).div_linear(1, -1), 7, 1)


def test_ratfunc_normalizes_common_factors():
    q = RatFunc.make(MultiPoly.var(K, ZZ) - 1).div_linear(1, -1)
    assert q.is_polynomial() and q == 1
    half = RatFunc.const(Fraction(1, 2))
    assert half + half == 1


# -- properties ------------------------------------------------------------

VARS = [R(1), R(2), R(3), S(4)]


@st.composite
def polys(draw, sc):
    n = draw(st.integers(0, 4))
    out = MultiPoly.zero(sc)
    for _ in range(n):
        c = draw(st.integers(-6, 6))
        term = MultiPoly.const(sc(c) if sc is not ZZ else c, sc)
        for v in draw(st.lists(st.sampled_from(VARS), max_size=3)):
            term = term * MultiPoly.var(v, sc)
        out = out + term
    return out


@pytest.mark.parametrize("sc", [F3, ZZ, QQ], ids=["F3", "ZZ", "QQ"])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_ring_axioms(sc, data):
    a, b, c = (data.draw(polys(sc)) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert (a + (-a)).is_zero()


@settings(max_examples=60, deadline=None)
@given(data=st.data(), vals=st.lists(st.integers(0, 4), min_size=4, max_size=4))
def test_substitute_is_homomorphism(data, vals):
    a, b = data.draw(polys(F5)), data.draw(polys(F5))
    asg = dict(zip(VARS, vals))
    assert substitute(a * b, asg) == F5.mul(substitute(a, asg), substitute(b, asg))
    assert substitute(a + b, asg) == F5.add(substitute(a, asg), substitute(b, asg))


@settings(max_examples=60, deadline=None)
@given(data=st.data(), u=st.integers(1, 3), v=st.integers(-4, 4))
def test_reduction_commutes_with_arithmetic(data, u, v):
    a = data.draw(polys(ZZ)) + MultiPoly.var(K, ZZ).scale(data.draw(st.integers(-3, 3)))
    b = data.draw(polys(ZZ))
    p, k = 7, 2
    if (u * k + v) % p == 0:
        v += 1
    qa, qb = RatFunc.make(a).div_linear(u, v), RatFunc.make(b)
    assert reduce_mod_p(qa * qb, p, k) == reduce_mod_p(qa, p, k) * reduce_mod_p(qb, p, k)
    assert reduce_mod_p(qa + qb, p, k) == reduce_mod_p(qa, p, k) + reduce_mod_p(qb, p, k)


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_ratfunc_equality_is_an_equivalence(data):
    a = RatFunc.make(data.draw(polys(ZZ)) + 1)
    lin = data.draw(st.tuples(st.integers(1, 3), st.integers(-3, 3)))
    b = (a * RatFunc.linear(*lin)).div_linear(*lin)
    c = (b * 2) / 2
    assert a == a and (a == b) == (b == a)
    assert a == b and b == c and a == c
