"""Matrix calculus for the commutator chain and the composition matrix.

Two families of matrices appear here.  The small upper-triangular matrices
A_h (and the corrected A'_h) propagate a window of coefficients along
u_{h+1} = [u_h, f].  The truncated composition matrix I + M of the generic f
acts on coefficient vectors by substitution; row 1 of (I + M)^p = I + M^p
holds the coefficients of f^p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial

from .bounds import ParamSet, e_of
from .coeffring import MultiPoly, PrimeField, R, S, ZZ, K, N, VarId, reduce_mod_p
from .errors import InternalInconsistencyError, ParameterDomainError
from .generic import Specialization, generic_pth_power, u_chain

Matrix = list  # list of rows of MultiPoly


def _fp(p: int) -> PrimeField:
    return PrimeField(p)


def _r(j: int, scalars) -> MultiPoly:
    return MultiPoly.var(R(j), scalars)


def mat_mul(A: Matrix, B: Matrix, scalars) -> Matrix:
    n, m, l = len(A), len(B), len(B[0])
    zero = MultiPoly.zero(scalars)
    out = [[zero] * l for _ in range(n)]
    for i in range(n):
        for j in range(l):
            acc = zero
            for t in range(m):
                if A[i][t] and B[t][j]:
                    acc = acc + A[i][t] * B[t][j]
            out[i][j] = acc
    return out


def identity_matrix(size: int, scalars) -> Matrix:
    zero, one = MultiPoly.zero(scalars), MultiPoly.const(1, scalars)
    return [[one if i == j else zero for j in range(size)] for i in range(size)]


# -- A_h, A'_h and Pi_h ---------------------------------------------------


@dataclass
class DepthMatrix:
    p: int
    k: int
    n: int
    h: int
    entries: Matrix
    primed: bool = False

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def n_h(self) -> int:
        return (self.h - 2) * self.k + self.n

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]


def build_A(p: int, k: int, n: int, e: int, h: int) -> DepthMatrix:
    """(e+1)x(e+1) upper triangular, entry (i, j) = ((h-2)k + n + 2i - j) r_{k+j-i}."""
    F = _fp(p)
    zero = MultiPoly.zero(F)
    rows = []
    for i in range(e + 1):
        row = []
        for j in range(e + 1):
            row.append(_r(k + j - i, F).scale((h - 2) * k + n + 2 * i - j) if i <= j else zero)
        rows.append(row)
    return DepthMatrix(p, k, n, h, rows)


def build_A_prime(p: int, k: int, n: int, h: int) -> DepthMatrix:
    """A_h of size k+1 with C((h-1)k+n+1, 2) r_k^2 added at entry (0, k).

    Only defined when e(k, n) = k = k0.
    """
    e = e_of(ParamSet(p, k, n))
    if not (e == k == k % p):
        raise ParameterDomainError(f"A' needs e(k,n) = k = k0, got e={e}, k={k}, k0={k % p}")
    A = build_A(p, k, n, k, h)
    F = _fp(p)
    rows = [list(r) for r in A.entries]
    rows[0][k] = rows[0][k] + (_r(k, F) * _r(k, F)).scale(comb((h - 1) * k + n + 1, 2))
    return DepthMatrix(p, k, n, h, rows, primed=True)


def pi_matrix(p: int, k: int, n: int, h: int, e: int | None = None, primed: bool = False) -> Matrix:
    """Pi_h = A_1 A_2 ... A_h (Pi_0 is the identity)."""
    F = _fp(p)
    if e is None:
        e = e_of(ParamSet(p, k, n))
    if primed:
        e = k
    P = identity_matrix(e + 1, F)
    for step in range(1, h + 1):
        A = build_A_prime(p, k, n, step) if primed else build_A(p, k, n, e, step)
        P = mat_mul(P, A.entries, F)
    return P


def _check_lemma_linear(p: int, k: int, n: int) -> int:
    e = e_of(ParamSet(p, k, n))
    if e >= k:
        raise ParameterDomainError(f"requires e(k,n) < k, got e={e}, k={k}")
    return e


def propagate_v(p: int, k: int, n: int) -> list[MultiPoly]:
    """v_p = (s_n, ..., s_{n+e}) Pi_{p-1} with symbolic s-variables."""
    e = _check_lemma_linear(p, k, n)
    F = _fp(p)
    v1 = [[MultiPoly.var(S(n + i), F) for i in range(e + 1)]]
    return mat_mul(v1, pi_matrix(p, k, n, p - 1, e), F)[0]


def propagate_v_prime(p: int, k: int, n: int) -> list[MultiPoly]:
    """v_p = v_1 Pi'_{p-1} in the e(k, n) = k = k0 regime."""
    F = _fp(p)
    v1 = [[MultiPoly.var(S(n + i), F) for i in range(k + 1)]]
    return mat_mul(v1, pi_matrix(p, k, n, p - 1, primed=True), F)[0]


def u_window(p: int, k: int, n: int, width: int) -> list[MultiPoly]:
    """Coefficients of x^{(p-1)k+n+1} .. x^{(p-1)k+n+width} in u_p."""
    start = (p - 1) * k + n + 1
    up = u_chain(p, k, n, start + width - 1)[-1]
    return [up.coeff(start + i) for i in range(width)]


@dataclass
class PiStructureReport:
    p: int
    k: int
    n: int
    e: int
    primed: bool
    nonzero_in_zero_columns: list = field(default_factory=list)
    witness: dict | None = None
    witness_entry: tuple | None = None
    case4_m: int | None = None

    @property
    def passed(self) -> bool:
        return not self.nonzero_in_zero_columns and self.witness is not None

    def to_json(self):
        return {
            "p": self.p, "k": self.k, "n": self.n, "e": self.e, "primed": self.primed,
            "passed": self.passed,
            "nonzero_in_zero_columns": self.nonzero_in_zero_columns,
            "witness": self.witness, "witness_entry": self.witness_entry,
            "case4_m": self.case4_m,
        }


def _case4_m(p: int, k: int, n: int, P: Matrix, Pp: Matrix) -> int:
    """The scalar m with Pi'_{p-1} - Pi_{p-1} = m r_k^p at (0, k), zero elsewhere."""
    F = _fp(p)
    for i in range(k + 1):
        for j in range(k + 1):
            if (i, j) != (0, k) and P[i][j] != Pp[i][j]:
                raise InternalInconsistencyError(f"Pi' differs from Pi at ({i}, {j})")
    diff = Pp[0][k] - P[0][k]
    rk_p = MultiPoly.var(R(k), F, p)
    for m in range(p):
        if diff == rk_p.scale(m):
            return m
    raise InternalInconsistencyError(f"Pi' - Pi at (0, k) is not a multiple of r_k^p: {diff}")


def pi_structure_check(p: int, k: int, n: int) -> PiStructureReport:
    """First e columns of Pi_{p-1} (Pi'_{p-1} when e = k) vanish, and some
    specialization makes the last column nonzero."""
    ps = ParamSet(p, k, n)
    if k % p == 0 or n < (p - 1) * k + p:
        raise ParameterDomainError("requires p does not divide k and n >= (p-1)k+p")
    e = e_of(ps)
    k0 = k % p
    primed = e == k
    P = pi_matrix(p, k, n, p - 1, e)
    rep = PiStructureReport(p, k, n, e, primed)
    if primed:
        Pp = pi_matrix(p, k, n, p - 1, primed=True)
        rep.case4_m = _case4_m(p, k, n, P, Pp)
        P = Pp
    for j in range(e):
        for i in range(j + 1):
            if P[i][j]:
                rep.nonzero_in_zero_columns.append([i, j, str(P[i][j])])
    variables = set()
    for i in range(e + 1):
        variables |= P[i][e].variables()
    # r_k = r_{k+k0} = 1, r_i = 0 for k < i < k+k0; r_{2k} tried at 0 and 1
    free = sorted((v for v in variables if v not in (R(k), R(k + k0))), key=VarId.sort_key)
    for extra in (0, 1):
        vals = {v: 0 for v in free}
        vals[R(k)] = 1
        vals[R(k + k0)] = 1
        if primed and R(2 * k) in vals:
            vals[R(2 * k)] = extra
        sigma = Specialization(p, vals)
        for i in range(e + 1):
            if sigma(P[i][e]):
                rep.witness = {v.name: x for v, x in sorted(vals.items(), key=lambda t: t[0].sort_key())}
                rep.witness_entry = (i, e)
                return rep
    return rep


def pi_shift_check(p: int, k: int, n: int, h: int) -> bool:
    """pi_{h,i,j}(n) = pi_{h,0,j-i}(n+i) for 0 <= i <= j <= e(k, n)."""
    e = e_of(ParamSet(p, k, n))
    P = pi_matrix(p, k, n, h, e)
    for i in range(e + 1):
        Q = pi_matrix(p, k, n + i, h, e - i)
        for j in range(i, e + 1):
            if P[i][j] != Q[0][j - i]:
                return False
    return True


# -- the sequence c_ij -------------------------------------------------------


@lru_cache(maxsize=None)
def c_value(i: int, j: int, k: int, n: int | None = None) -> MultiPoly:
    """c_ij in Z[K, r_k, r_{k+1}, ...] (n symbolic when ``n`` is None)."""
    if i < 0 or j < 0:
        raise ValueError("indices must be nonnegative")
    if i == 0:
        return MultiPoly.const(1 if j == 0 else 0, ZZ)
    Kp = MultiPoly.var(K, ZZ)
    nn = MultiPoly.var(N, ZZ) if n is None else MultiPoly.const(n, ZZ)
    acc = MultiPoly.zero(ZZ)
    for t in range(j + 1):
        prev = c_value(i - 1, t, k, n)
        if not prev:
            continue
        lin = Kp.scale(i - 2) + nn + (2 * t - j)
        acc = acc + lin * MultiPoly.var(R(k + j - t), ZZ) * prev
    return acc


def pi_equals_cbar_check(p: int, k: int, n: int, h: int, j: int) -> bool:
    """Entry (0, j) of Pi_h equals c_hj reduced with K -> k, mod p."""
    e = e_of(ParamSet(p, k, n))
    if not 0 <= j <= e:
        raise ParameterDomainError(f"need 0 <= j <= e(k,n) = {e}")
    P = pi_matrix(p, k, n, h, e)
    return P[0][j] == reduce_mod_p(c_value(h, j, k, n), p, k)


# -- entries of the composition matrix ---------------------------------------


def _scalars(p):
    return ZZ if p is None else PrimeField(p)


def _partitions(d: int, smallest: int, max_parts: int):
    """Partitions of d into parts >= smallest with at most max_parts parts,
    as dicts {part: multiplicity}."""
    if d == 0:
        yield {}
        return
    if max_parts == 0 or smallest > d:
        return
    for part in range(smallest, d + 1):
        for mult in range(1, min(d // part, max_parts) + 1):
            for rest in _partitions(d - part * mult, part + 1, max_parts - mult):
                out = dict(rest)
                out[part] = mult
                yield out


@lru_cache(maxsize=None)
def m_entry(i: int, j: int, k: int, p: int | None = None) -> MultiPoly:
    """(i, j) entry of I + M via the multinomial formula.

    Sum over n_0 + n_k + ... = i and k n_k + (k+1) n_{k+1} + ... = j - i of
    multinomial(i; n_0, n_k, ...) r_k^{n_k} r_{k+1}^{n_{k+1}} ...
    Gives 1 on the diagonal and 0 below it.
    """
    sc = _scalars(p)
    if j < i or i < 1:
        return MultiPoly.zero(sc)
    d = j - i
    raw = {}
    for part in _partitions(d, k, i):
        n0 = i - sum(part.values())
        coeff = factorial(i) // factorial(n0)
        for mult in part.values():
            coeff //= factorial(mult)
        raw[tuple((R(l), m) for l, m in part.items())] = coeff
    return MultiPoly.from_terms(raw, sc)


def _compositions(total: int, parts: int, k: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in [0, *range(k, total + 1)]:
        if first > total:
            break
        for rest in _compositions(total - first, parts - 1, k):
            yield (first, *rest)


def m_entry_enumerated(i: int, j: int, k: int, p: int | None = None) -> MultiPoly:
    """Same entry by summing r_{l_1} ... r_{l_i} over ordered compositions
    l_1 + ... + l_i = j - i with r_0 = 1 and r_l = 0 for 0 < l < k."""
    sc = _scalars(p)
    if j < i or i < 1:
        return MultiPoly.zero(sc)
    raw: dict = {}
    for comp in _compositions(j - i, i, k):
        exps: dict = {}
        for l in comp:
            if l:
                exps[R(l)] = exps.get(R(l), 0) + 1
        key = tuple(sorted(exps.items()))
        raw[key] = raw.get(key, 0) + 1
    return MultiPoly.from_terms(raw, sc)


def composition_matrix(k: int, size: int, p: int | None = None) -> Matrix:
    """Strictly upper triangular M indexed 1..size (stored 0-based)."""
    sc = _scalars(p)
    zero = MultiPoly.zero(sc)
    return [[m_entry(i, j, k, p) if j > i else zero for j in range(1, size + 1)] for i in range(1, size + 1)]


@lru_cache(maxsize=None)
def _m_power_row(p: int, k: int, size: int) -> tuple:
    F = PrimeField(p)
    row = [m_entry(1, j, k, p) if j > 1 else MultiPoly.zero(F) for j in range(1, size + 1)]
    for _ in range(p - 1):
        new = []
        for j in range(1, size + 1):
            acc = MultiPoly.zero(F)
            for i in range(1, j):
                if row[i - 1]:
                    m = m_entry(i, j, k, p)
                    if m:
                        acc = acc + row[i - 1] * m
            new.append(acc)
        row = new
    return tuple(row)


def m_power_row(p: int, k: int, size: int, check: bool = True) -> dict[int, MultiPoly]:
    """Row 1 of M^p: {j: m^(p)_{1j}} for 2 <= j <= size.

    With ``check`` the row is compared with the coefficients of f^p computed
    by composition.
    """
    row = _m_power_row(p, k, size)
    out = {j: row[j - 1] for j in range(2, size + 1)}
    if check:
        fp = generic_pth_power(p, k, size)
        for j, v in out.items():
            if fp.coeff(j) != v:
                raise InternalInconsistencyError(f"m^(p)_(1,{j}) differs from the x^{j} coefficient of f^p")
    return out


def binomial_vanishing_check(p: int, k: int, size: int) -> bool:
    """(I + M)^p == I + M^p entrywise on the size x size truncation."""
    F = PrimeField(p)
    M = composition_matrix(k, size, p)
    I = identity_matrix(size, F)
    IM = [[I[i][j] + M[i][j] for j in range(size)] for i in range(size)]
    lhs, Mp = IM, M
    for _ in range(p - 1):
        lhs = mat_mul(lhs, IM, F)
        Mp = mat_mul(Mp, M, F)
    return all(lhs[i][j] == I[i][j] + Mp[i][j] for i in range(size) for j in range(size))


def modp_periodicity_check(k: int, p: int, d: int, i: int) -> bool:
    """m_{i,i+d} == m_{i+p,i+p+d} over F_p."""
    if not (0 < d < p * k) or i < 1 or i * k < d + 1 - k:
        raise ParameterDomainError(f"need 0 < d < pk and i >= (d+1-k)/k; got d={d}, i={i}")
    return m_entry(i, i + d, k, p) == m_entry(i + p, i + p + d, k, p)


# -- splitting off the high variables ---------------------------------------


def _high_vars(q: MultiPoly, n: int) -> set[VarId]:
    return {v for v in q.variables() if v.kind == "R" and v.j >= n}


@dataclass
class ExpandSplit:
    low: MultiPoly  # the part in r_k .. r_{n-1}
    linear: dict  # w -> coefficient of r_{n+w}


def _split_linear(q: MultiPoly, n: int, top: int) -> tuple[MultiPoly, dict]:
    low = q.filter_terms(lambda ex: all(not (v.kind == "R" and v.j >= n) for v in ex))
    linear = {}
    rest = q - low
    for w in range(top + 1):
        c = rest.coefficient(R(n + w), 1)
        if c:
            if _high_vars(c, n):
                raise InternalInconsistencyError(f"term quadratic in the high variables (r_{n + w})")
            linear[w] = c
            rest = rest - c * MultiPoly.var(R(n + w), q.scalars)
    if rest:
        raise InternalInconsistencyError(f"unexpected high-variable terms: {rest}")
    return low, linear


def expand_split(i: int, t: int, k: int, n: int, p: int) -> ExpandSplit:
    """Split m_{i,i+n+t} into its part free of r_j (j >= n) plus linear
    terms, and check the predicted linear coefficients:
    i for r_{n+t} and i m_{i-1,i-1+t-w} for r_{n+w}, w <= t-k."""
    if not (0 <= t < n) or i < 2 or n < k:
        raise ParameterDomainError(f"need 0 <= t < n, n >= k and i >= 2; got i={i}, t={t}, n={n}")
    F = PrimeField(p)
    q = m_entry(i, i + n + t, k, p)
    low, linear = _split_linear(q, n, t)
    predicted = {t: MultiPoly.const(i, F)}
    for w in range(0, t - k + 1):
        predicted[w] = predicted.get(w, MultiPoly.zero(F)) + m_entry(i - 1, i - 1 + t - w, k, p).scale(i)
    predicted = {w: c for w, c in predicted.items() if c}
    if predicted != linear:
        raise InternalInconsistencyError(f"linear part of m_({i},{i + n + t}) disagrees with the expansion")
    bad = {v for v in low.variables() if v.j >= n}
    if bad:
        raise InternalInconsistencyError("low part involves high variables")
    rebuilt = low
    for w, c in linear.items():
        rebuilt = rebuilt + c * MultiPoly.var(R(n + w), F)
    if rebuilt != q:
        raise InternalInconsistencyError("reconstruction differs from m_entry")
    return ExpandSplit(low, linear)


@dataclass
class EnsDecomposition:
    p: int
    k: int
    n: int
    s: int
    C: MultiPoly
    E: list  # E[w] for 0 <= w <= s

    def degree_constraints_hold(self) -> bool:
        if any(v.kind != "R" or not self.k <= v.j <= self.n - 1 for v in self.C.variables()):
            return False
        for w, e in enumerate(self.E):
            if any(v.kind != "R" or not self.k <= v.j <= self.k + self.s - w for v in e.variables()):
                return False
        return True


def ens_decompose(p: int, k: int, n: int, s: int) -> EnsDecomposition:
    """Write m^(p)_{1,1+s+n+(p-1)k} = C + sum_w E^(w) r_{n+w}."""
    if s < 0 or not (n > k + s and p * k > k + s):
        raise ParameterDomainError(f"need n > k+s and pk > k+s; got p={p}, k={k}, n={n}, s={s}")
    j = 1 + s + n + (p - 1) * k
    q = m_power_row(p, k, j, check=False)[j]
    C, linear = _split_linear(q, n, s)
    F = PrimeField(p)
    E = [linear.get(w, MultiPoly.zero(F)) for w in range(s + 1)]
    return EnsDecomposition(p, k, n, s, C, E)


def ens_periodicity_check(p: int, k: int, n: int, s: int) -> bool:
    """E-parts of the decompositions at n and n + p coincide."""
    return ens_decompose(p, k, n, s).E == ens_decompose(p, k, n + p, s).E
