from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdepth.coeffring import PrimeField
from pdepth.errors import RingMismatchError
from pdepth.nottingham import (
    AtLeast, Exact, Series, commutator, compose, depth, format_series,
    group_pow, group_pow_iterated, inverse, parse_series,
)

F2, F3, F5 = PrimeField(2), PrimeField(3), PrimeField(5)


def ser(F, terms, N):
    return Series.from_dict(F, terms, N)


def test_compose_examples():
    f = ser(F2, {2: 1}, 5)
    assert compose(f, f) == ser(F2, {4: 1}, 5)
    assert compose(f, Series.identity(F2, 5)) == f
    got = compose(ser(F3, {2: 1}, 6), ser(F3, {3: 1}, 6))
    assert got == ser(F3, {2: 1, 3: 1, 4: 2, 6: 1}, 6)


def test_compose_precision_is_min():
    assert compose(ser(F2, {2: 1}, 5), ser(F2, {3: 1}, 8)).precision == 5


def test_compose_ring_mismatch():
    with pytest.raises(RingMismatchError):
        compose(ser(F2, {2: 1}, 5), ser(F3, {2: 1}, 5))


def test_inverse_examples():
    assert inverse(Series.identity(F2, 6)) == Series.identity(F2, 6)
    assert inverse(ser(F2, {2: 1}, 5)) == ser(F2, {2: 1, 4: 1}, 5)


def test_powers():
    f = ser(F2, {2: 1}, 17)
    assert group_pow(f, 2) == compose(f, f)
    assert group_pow(f, 0) == Series.identity(F2, 17)
    assert group_pow(f, 4) == ser(F2, {16: 1}, 17)
    assert group_pow(f, -3) == inverse(group_pow(f, 3))


def test_commutator_examples():
    f, g = ser(F3, {2: 1}, 8), ser(F3, {3: 1}, 8)
    ident = Series.identity(F3, 8)
    assert commutator(f, ident) == ident
    assert commutator(f, f) == ident
    assert depth(commutator(f, g)) == Exact(3)


def test_depth_examples():
    assert depth(ser(F2, {4: 1}, 5)) == Exact(3)
    assert depth(Series.identity(F2, 12)) == AtLeast(12)
    assert depth(ser(F5, {3: 2}, 4)) == Exact(2)


def test_text_format_roundtrip():
    f = ser(F5, {3: 2, 4: 1, 7: 4}, 9)
    text = format_series(f)
    assert text == "x + 2*x^3 + x^4 + 4*x^7 + O(x^10)"
    assert parse_series(text, F5) == f
    assert parse_series("x + O(x^5)", F5) == Series.identity(F5, 4)


# -- properties ------------------------------------------------------------


@st.composite
def series(draw, F, N, min_depth=1):
    coeffs = draw(st.lists(st.integers(0, F.p - 1), min_size=N - 1, max_size=N - 1))
    terms = {i + 2: c for i, c in enumerate(coeffs) if i + 1 >= min_depth}
    return ser(F, terms, N)


@settings(max_examples=50, deadline=None)
@given(data=st.data(), F=st.sampled_from([F2, F3, F5]))
def test_group_laws(data, F):
    N = 9
    a, b, c = (data.draw(series(F, N)) for _ in range(3))
    ident = Series.identity(F, N)
    assert compose(compose(a, b), c) == compose(a, compose(b, c))
    assert compose(a, ident) == a == compose(ident, a)
    assert compose(a, inverse(a)) == ident == compose(inverse(a), a)


@settings(max_examples=40, deadline=None)
@given(data=st.data(), m=st.integers(-4, 6))
def test_binary_and_iterated_powers_agree(data, m):
    f = data.draw(series(F3, 10))
    assert group_pow(f, m) == group_pow_iterated(f, m)


def _bump(f: Series, j: int) -> Series:
    terms = {e: f.coeff(e) for e in range(2, f.precision + 1)}
    terms[j] = (terms[j] + 1) % f.ring.p
    return ser(f.ring, terms, f.precision)


@settings(max_examples=50, deadline=None)
@given(data=st.data(), j=st.integers(2, 9), which=st.booleans())
def test_compose_only_reads_lower_coefficients(data, j, which):
    f, g = data.draw(series(F5, 9)), data.draw(series(F5, 9))
    lhs = compose(f, g)
    rhs = compose(_bump(f, j), g) if which else compose(f, _bump(g, j))
    assert all(lhs.coeff(e) == rhs.coeff(e) for e in range(2, j))


@settings(max_examples=60, deadline=None)
@given(data=st.data(), df=st.integers(1, 5), dg=st.integers(1, 5))
def test_depth_filtration(data, df, dg):
    N = 2 * (df + dg) + 2
    f, g = data.draw(series(F3, N, df)), data.draw(series(F3, N, dg))
    if not (depth(f).exact and depth(g).exact):
        return
    assert depth(compose(f, g)).at_least(min(depth(f).value, depth(g).value))
    assert depth(inverse(f)) == depth(f)


@settings(max_examples=80, deadline=None)
@given(data=st.data(), F=st.sampled_from([F2, F3, F5]), df=st.integers(1, 6), dg=st.integers(1, 6))
def test_commutator_depth(data, F, df, dg):
    N = df + dg + 2
    f = compose(ser(F, {df + 1: data.draw(st.integers(1, F.p - 1))}, N), data.draw(series(F, N, df + 1)))
    g = compose(ser(F, {dg + 1: data.draw(st.integers(1, F.p - 1))}, N), data.draw(series(F, N, dg + 1)))
    assert depth(f) == Exact(df) and depth(g) == Exact(dg)
    d = depth(commutator(f, g))
    assert d.at_least(df + dg)
    assert d.is_exactly(df + dg) == bool((df - dg) % F.p)
