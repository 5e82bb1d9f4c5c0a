from __future__ import annotations

import pytest

from pdepth.coeffring import K, N, R, ZZ, MultiPoly, RatFunc
from pdepth.errors import ParameterDomainError
from pdepth.identities import (
    P_poly, case3_bridge_check, csum_check, generating_check, generating_coefficients,
    kk0_constants, kk0_expansion_check, omega_series, phi, phi_table, phidiff_check,
    product_law_check, q_series, residue_check, slm_check,
)

kk, nn = MultiPoly.var(K, ZZ), MultiPoly.var(N, ZZ)


def rf(j):
    return RatFunc.var(R(j))


def test_P_examples():
    assert P_poly(3, 0) == MultiPoly.const(1, ZZ)
    assert P_poly(0, 1) == nn - kk
    assert P_poly(0, 2) == (nn - kk) * nn
    assert P_poly(2, 2, 7) == (MultiPoly.const(9, ZZ) - kk) * 9


def test_q_examples():
    q = q_series(4, 1)
    assert q[1] == -(rf(2) / R(1))
    assert q[2] == (rf(2) * rf(2) - rf(1) * rf(3)) / R(1) / R(1)
    # alpha(x) * (r_k / alpha(x)) = r_k
    for t in range(1, 5):
        acc = RatFunc.const(0)
        for s in range(t + 1):
            acc = acc + rf(1 + s) * q[t - s]
        assert acc == 0


def test_phi_examples():
    assert phi(0, 0, 0) == 1
    assert phi(1, 0, 1) == (rf(2) / R(1)).div_linear(1, -1)
    assert phi(2, 1, 2) == 0
    assert phi(3, 2, 2) == 0


def test_phi_zero_convention():
    T = phi_table(1)
    for j in range(5):
        for a in range(j + 1):
            for b in range(j + 1):
                if a + b > j:
                    assert T(j, a, b) == 0


def test_phidiff_and_product_law():
    for j in range(5):
        for a in range(5):
            for b in range(5):
                assert phidiff_check(j, a, b)
    for j in range(5):
        for a in range(j + 1):
            for b in range(j + 1):
                assert product_law_check(j, a, b)


def test_phi_with_concrete_n():
    assert phi(3, 1, 1, n=7) == phi(3, 1, 1).substitute_n(7)
    assert csum_check(4, 3, 2, 11)


@pytest.mark.parametrize("i,j", [(0, 0), (3, 0), (3, 1), (5, 3), (6, 4)])
def test_csum_examples(i, j):
    assert csum_check(i, j)


def test_generating_function():
    coeffs = generating_coefficients(0, 3, 2)
    assert coeffs[(0, 0)] == 1
    q = q_series(3, 1)
    # x^j y^1 coefficient for a = 0 is r_k^-1 sum_s r_{k+j-s} q_s / (s - K)
    for j in range(1, 4):
        acc = RatFunc.const(0)
        for s in range(1, j + 1):
            acc = acc + (rf(1 + j - s) * q[s]).div_linear(-1, s)
        assert coeffs[(j, 1)] == acc / R(1)
    assert generating_check(1, 4, 3)
    assert len(omega_series(3, 1)) == 4


def test_slm_examples():
    for j in range(5):
        assert slm_check(j, 0, 0)[0]
        assert slm_check(j, j, 0)[0]
        for b in range(1, j + 1):
            ok, prof = slm_check(j, 0, b)
            assert ok and (prof.l, prof.m) == (b, j + 1 - b)
    with pytest.raises(ParameterDomainError):
        slm_check(2, 2, 1)


def test_profile_rejects_foreign_factor():
    ok, prof = slm_check(2, 0, 1)
    bad = phi(2, 0, 1).div_linear(1, -5)
    assert not prof.conforms(bad)


def test_residue_examples():
    assert residue_check(1)
    assert residue_check(2)
    assert residue_check(4)
    assert phi(1, 0, 1).residue(1) == rf(2) / R(1)


def test_kk0_examples():
    assert kk0_expansion_check(3, 1, 5)
    c = kk0_constants(3, 1, 5)
    assert c.h0 == 1 and (c.h0 + 5) % 3 == 0
    c = kk0_constants(5, 2, 9)
    assert c.Q_prime % 5 != 0
    assert kk0_expansion_check(5, 2, 9)
    with pytest.raises(ParameterDomainError):
        kk0_expansion_check(3, 1, 4)


@pytest.mark.parametrize("p,k,n", [(3, 1, 6), (3, 4, 12), (5, 1, 9), (5, 2, 15), (5, 3, 17)])
def test_case3_bridge(p, k, n):
    rep = case3_bridge_check(p, k, n)
    assert rep.passed, rep.to_json()
