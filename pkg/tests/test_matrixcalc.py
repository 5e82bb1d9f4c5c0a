from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdepth.bounds import ParamSet, e_of
from pdepth.coeffring import K, N, R, S, ZZ, MultiPoly, PrimeField
from pdepth.errors import ParameterDomainError
from pdepth.generic import generic_pth_power
from pdepth.matrixcalc import (
    binomial_vanishing_check, build_A, build_A_prime, c_value, ens_decompose,
    ens_periodicity_check, expand_split, m_entry, m_entry_enumerated, m_power_row,
    modp_periodicity_check, pi_equals_cbar_check, pi_shift_check, pi_structure_check,
    propagate_v, u_window,
)
from pdepth.nottingham import depth


def rv(j, p):
    return MultiPoly.var(R(j), PrimeField(p))


def test_build_A_example():
    A = build_A(5, 1, 9, 1, 1)
    assert [[str(x) for x in row] for row in A.entries] == [["3*r1", "2*r2"], ["0", "4*r1"]]
    assert A.n_h == 8


def test_A_diagonal():
    p, k, n, e, h = 5, 2, 13, 3, 3
    A = build_A(p, k, n, e, h)
    for i in range(e + 1):
        assert A[i, i] == rv(k, p).scale((h - 2) * k + n + i)


def test_A_prime_differs_only_at_corner():
    p, k, n = 3, 1, 6
    assert e_of(ParamSet(p, k, n)) == k == k % p
    for h in (1, 2):
        A, Ap = build_A(p, k, n, k, h), build_A_prime(p, k, n, h)
        for i in range(k + 1):
            for j in range(k + 1):
                want = A[i, j]
                if (i, j) == (0, k):
                    want = want + (rv(k, p) ** 2).scale(((h - 1) * k + n + 1) * ((h - 1) * k + n) // 2)
                assert Ap[i, j] == want
    with pytest.raises(ParameterDomainError):
        build_A_prime(3, 1, 5, 1)


def test_propagate_v_examples():
    p, k, n = 3, 2, 9
    e = e_of(ParamSet(p, k, n))
    assert propagate_v(p, k, n) == u_window(p, k, n, e + 1)
    # e = 0: a single diagonal product
    p, k, n = 3, 1, 5
    assert e_of(ParamSet(p, k, n)) == 0
    want = MultiPoly.var(S(n), PrimeField(p))
    for h in range(1, p):
        want = want * rv(k, p).scale((h - 2) * k + n)
    assert propagate_v(p, k, n) == [want]
    with pytest.raises(ParameterDomainError):
        propagate_v(3, 1, 6)


def test_pi_structure_examples():
    rep = pi_structure_check(3, 1, 7)
    assert rep.passed and not rep.nonzero_in_zero_columns
    rep = pi_structure_check(3, 1, 5)
    assert rep.e == 0 and rep.passed
    with pytest.raises(ParameterDomainError):
        pi_structure_check(3, 3, 12)


def test_c_values():
    assert c_value(0, 0, 1) == MultiPoly.const(1, ZZ)
    n, kk = MultiPoly.var(N, ZZ), MultiPoly.var(K, ZZ)
    r1, r2 = MultiPoly.var(R(1), ZZ), MultiPoly.var(R(2), ZZ)
    assert c_value(1, 1, 1) == (n - 1 - kk) * r2
    assert c_value(2, 0, 1) == r1 * r1 * (n - kk) * n


def test_pi_equals_cbar_examples():
    assert pi_equals_cbar_check(3, 1, 7, 1, 0)
    assert pi_equals_cbar_check(5, 2, 13, 2, 1)
    assert pi_equals_cbar_check(3, 1, 7, 0, 0)


def test_m_entry_examples():
    for k in (1, 2, 3):
        for i in range(1, 5):
            for d in range(k):
                assert m_entry(i, i + d, k, 5) == (MultiPoly.const(1, PrimeField(5)) if d == 0 else 0 * rv(k, 5))
        for d in range(k, 7):
            assert m_entry(1, 1 + d, k, 5) == rv(d, 5)
        assert m_entry(2, 2 + k, k, 5) == rv(k, 5).scale(2)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_m_entry_matches_enumeration(k):
    for i in range(1, 6):
        for j in range(i, i + 9):
            assert m_entry(i, j, k) == m_entry_enumerated(i, j, k)
            assert m_entry(i, j, k, 3) == m_entry_enumerated(i, j, k, 3)


def test_m_power_row_examples():
    row = m_power_row(2, 1, 6)
    assert str(row[4]) == "r1*r2 + r1^3"
    assert str(row[5]) == "r2^2 + r1^2*r2"
    for p, k in [(2, 1), (3, 1), (3, 2), (5, 1)]:
        d = p * k + k % p
        row = m_power_row(p, k, d + 1)
        assert all(row[j].is_zero() for j in range(2, d + 1))
        assert not row[d + 1].is_zero()


def test_binomial_vanishing():
    for p, k in [(2, 1), (3, 1), (3, 2)]:
        assert binomial_vanishing_check(p, k, 9)


def test_modp_examples():
    assert modp_periodicity_check(1, 2, 1, 1)
    assert modp_periodicity_check(2, 3, 3, 1)
    with pytest.raises(ParameterDomainError):
        modp_periodicity_check(1, 2, 2, 1)


def test_expand_split_examples():
    k, n, p = 2, 5, 3
    for i in range(2, 5):
        for t in range(n):
            sp = expand_split(i, t, k, n, p)
            lead = sp.linear.get(t, MultiPoly.zero(PrimeField(p)))
            assert lead == MultiPoly.const(i, PrimeField(p))
            if t < k:
                assert set(sp.linear) <= {t}


def test_ens_examples():
    dec = ens_decompose(2, 1, 3, 0)
    assert str(dec.C) == "r2^2 + r1^2*r2"
    assert all(x.is_zero() for x in dec.E)
    assert ens_periodicity_check(2, 1, 3, 0)
    assert ens_periodicity_check(3, 1, 4, 1)
    with pytest.raises(ParameterDomainError):
        ens_decompose(2, 1, 2, 1)


def test_pi_shift():
    for p, k, n in [(3, 2, 9), (5, 2, 13), (5, 3, 19)]:
        for h in range(p):
            assert pi_shift_check(p, k, n, h)


@settings(max_examples=15, deadline=None)
@given(p=st.sampled_from([2, 3]), k=st.integers(1, 2), s=st.integers(0, 2), n=st.integers(3, 9))
def test_ens_E_vanishes_below_e(p, k, s, n):
    if not (n > k + s and p * k > k + s) or s >= e_of(ParamSet(p, k, n)):
        return
    assert all(x.is_zero() for x in ens_decompose(p, k, n, s).E)


def test_three_routes_small():
    row = m_power_row(3, 1, 10, check=False)
    fp = generic_pth_power(3, 1, 10)
    assert all(row[j] == fp.coeff(j) for j in range(2, 11))
    assert depth(fp).value == 4


@pytest.mark.parametrize("p,k,n", [(3, 1, 6), (3, 1, 7), (5, 1, 9), (5, 2, 15), (5, 2, 17), (5, 3, 17)])
def test_primed_propagation_against_chain(p, k, n):
    """v_1 Pi'_{p-1} matches u_p except possibly in the last entry, where the
    gap is a scalar multiple of r_k^p s_n; the true entry stays nonzero at the
    structure witness."""
    from pdepth.generic import Specialization
    from pdepth.matrixcalc import propagate_v_prime

    assert e_of(ParamSet(p, k, n)) == k == k % p
    v, w = propagate_v_prime(p, k, n), u_window(p, k, n, k + 1)
    assert v[:-1] == w[:-1]
    F = PrimeField(p)
    gap = w[-1] - v[-1]
    base = MultiPoly.var(R(k), F, p) * MultiPoly.var(S(n), F)
    assert any(gap == base.scale(c) for c in range(p))
    rep = pi_structure_check(p, k, n)
    vals = {R(int(name[1:])): x for name, x in rep.witness.items()}
    for var in w[-1].variables():
        vals.setdefault(var, 1 if var == S(n) else 0)
    assert Specialization(p, vals)(w[-1]) != 0
