from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdepth.bounds import ParamSet, theorem_bound
from pdepth.coeffring import PrimeField, R
from pdepth.errors import IncompleteSpecializationError, NotFoundError, ParameterDomainError
from pdepth.generic import (
    Specialization, corollary_trial, generic_f, generic_pth_power, generic_u1,
    specialize_series, u_chain, up_congruence_report, verify_independence,
    verify_up_congruence, witness_search,
)
from pdepth.nottingham import Exact, Series, compose, depth, group_pow, inverse


def test_generic_series_text():
    assert str(generic_f(2, 1, 4)) == "x + r1*x^2 + r2*x^3 + r3*x^4 + O(x^5)"
    assert str(generic_f(3, 2, 3)) == "x + r2*x^3 + O(x^4)"
    assert str(generic_u1(2, 1, 3)) == "x + s1*x^2 + s2*x^3 + O(x^4)"
    assert str(generic_u1(3, 5, 6)) == "x + s5*x^6 + O(x^7)"
    assert depth(generic_f(3, 2, 6)) == Exact(2)
    assert depth(generic_u1(3, 4, 6)) == Exact(4)


def test_generic_square_coefficient():
    assert str(generic_pth_power(2, 1, 4).coeff(4)) == "r1*r2 + r1^3"


def test_independence_examples():
    rep = verify_independence(2, 1, 3)
    assert rep.passed and rep.bound == 5
    assert verify_independence(2, 1, 2).passed
    assert all(verify_independence(3, 1, n).passed for n in range(1, 9))


def test_u_chain_depths():
    chain = u_chain(3, 1, 5, 12)
    assert chain[0] == generic_u1(3, 5, 12)
    assert depth(chain[1]) == Exact(6)
    chain = u_chain(3, 3, 6, 14)
    assert depth(chain[1]).at_least(10)


def test_up_congruence_small_case():
    assert verify_up_congruence(2, 1, 3)
    with pytest.raises(ParameterDomainError):
        verify_up_congruence(3, 1, 4)


@pytest.mark.xfail(strict=True, reason="the congruence also needs the u_{p+1} factor when D(u_{p+1}) < n+(p-1)k+p")
def test_up_congruence_literal_3_1_5():
    assert verify_up_congruence(3, 1, 5)


def test_up_congruence_corrected_form():
    for p, k, n in [(3, 1, 5), (3, 1, 6), (3, 2, 7), (5, 1, 9), (5, 2, 13)]:
        rep = up_congruence_report(p, k, n)
        assert rep.with_next
        assert rep.beyond_bound


def test_specialization_examples():
    f = generic_f(2, 1, 4)
    F2 = PrimeField(2)
    sigma = Specialization(2, {R(1): 1, R(2): 0, R(3): 0})
    assert specialize_series(f, sigma) == Series.from_dict(F2, {2: 1}, 4)
    sigma = Specialization(2, {R(1): 1, R(2): 1, R(3): 0})
    assert specialize_series(f, sigma) == Series.from_dict(F2, {2: 1, 3: 1}, 4)
    with pytest.raises(IncompleteSpecializationError):
        specialize_series(f, Specialization(2, {R(1): 1}))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), p=st.sampled_from([2, 3, 5]))
def test_specialization_is_homomorphism(seed, p):
    f, u = generic_f(p, 1, 7), generic_u1(p, 2, 7)
    variables = set()
    for c in f.coeffs + u.coeffs:
        variables |= c.variables()
    sigma = Specialization.random(p, variables, seed)
    fs, us = specialize_series(f, sigma), specialize_series(u, sigma)
    assert specialize_series(compose(u, f), sigma) == compose(us, fs)
    assert specialize_series(group_pow(f, p), sigma) == group_pow(fs, p)
    assert specialize_series(inverse(u), sigma) == inverse(us)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), p=st.sampled_from([2, 3]), k=st.integers(1, 3), extra=st.integers(0, 4))
def test_specialized_theorem_bound(seed, p, k, extra):
    n = k + extra
    trial = corollary_trial(p, k, n, 1, seed)
    assert trial.hypotheses_ok
    assert trial.observed.at_least(theorem_bound(ParamSet(p, k, n)))


def test_witness_examples():
    w = witness_search(2, 1, 1)
    F2 = PrimeField(2)
    assert w.f == Series.from_dict(F2, {2: 1}, w.f.precision)
    assert w.g == Series.from_dict(F2, {4: 1}, w.g.precision)
    assert w.achieved == 3
    assert witness_search(2, 1, 2).achieved == 3
    for p, k in [(2, 3), (3, 2), (5, 2)]:
        w = witness_search(p, k, k + k % p)
        assert w.stage == "case1" and w.achieved == p * k + k % p


def test_witness_search_budget_exhausted():
    with pytest.raises(NotFoundError):
        witness_search(2, 2, 4, budget=0)
    assert witness_search(2, 2, 4, budget=50).stage == "random"


def test_witness_search_deterministic():
    a, b = witness_search(3, 2, 6, seed=11), witness_search(3, 2, 6, seed=11)
    assert (a.f, a.g, a.attempts) == (b.f, b.g, b.attempts)
