"""Verification suites shared by the command line and the acceptance tests.

Each suite maps a parameter grid to a list of :class:`Item` records.  Grids
default to the desk-scale ranges used for acceptance; every randomized suite
takes an explicit seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .bounds import ParamSet, e_of, pth_power_depth, theorem_bound
from .coeffring import PrimeField
from .errors import PDepthError
from .generic import (
    corollary_trial,
    generic_f,
    generic_pth_power,
    power_trial,
    up_congruence_report,
    verify_independence,
)
from .identities import (
    case3_bridge_check,
    csum_check,
    denominator_factors,
    generating_check,
    kk0_constants,
    kk0_expansion_check,
    phi,
    q_series,
    residue_check,
    slm_check,
)
from .matrixcalc import (
    ens_decompose,
    ens_periodicity_check,
    m_power_row,
    modp_periodicity_check,
    pi_equals_cbar_check,
    pi_structure_check,
    propagate_v,
    u_window,
)
from .nottingham import Series, commutator, depth, group_pow, group_pow_iterated


@dataclass
class Item:
    params: dict
    verdict: str  # "pass", "fail" or "error"
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {"params": self.params, "verdict": self.verdict, "details": self.details}


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


@dataclass
class Grid:
    """Parameter choices; ``None`` means the suite default."""

    p: list | None = None
    k: list | None = None
    n: object = None  # callable k -> list of n, or None
    m: int | None = None
    seed: int = 0
    budget: int | None = None
    jmax: int | None = None
    precision: int | None = None

    def ns(self, k: int, default):
        return self.n(k) if self.n is not None else list(default)


def _guard(params: dict, fn) -> Item:
    try:
        return fn()
    except PDepthError as exc:
        return Item(params, "error", {"error": type(exc).__name__, "message": str(exc)})


# -- theorem (a) ----------------------------------------------------------

THEOREM_A_DEFAULT = {2: range(1, 5), 3: range(1, 4), 5: range(1, 3)}


def suite_theorem_a(g: Grid) -> list[Item]:
    out = []
    for p in g.p or THEOREM_A_DEFAULT:
        for k in g.k or THEOREM_A_DEFAULT.get(p, range(1, 3)):
            for n in g.ns(k, range(k, 13)):
                if n < k:
                    continue
                params = {"p": p, "k": k, "n": n}

                def run(p=p, k=k, n=n, params=params):
                    rep = verify_independence(p, k, n)
                    return Item(params, _verdict(rep.passed), rep.to_json())

                out.append(_guard(params, run))
    return out


# -- depth of the generic p-th power --------------------------------------


def suite_lemma_powers(g: Grid) -> list[Item]:
    out = []
    for p in g.p or (2, 3, 5):
        for k in g.k or range(1, 7):
            params = {"p": p, "k": k}
            want = pth_power_depth(p, k)
            fp = generic_pth_power(p, k, g.precision or want + 1)
            d = depth(fp)
            details = {"expected": want, "depth": d.to_json()}
            ok = d.is_exactly(want)
            if p == 2 and k == 1:
                c = str(fp.coeff(4))
                details["coeff_x4"] = c
                ok = ok and c == "r1*r2 + r1^3"
            if p == 2 and k % 2 == 1 and k > 1:
                c = str(fp.coeff(2 * k + 2))
                details[f"coeff_x{2 * k + 2}"] = c
                ok = ok and c == f"r{k}*r{k + 1}"
            out.append(Item(params, _verdict(ok), details))
    return out


# -- commutator depth ------------------------------------------------------


def random_series_of_depth(F: PrimeField, d: int, precision: int, rng: random.Random) -> Series:
    p = F.p
    terms = {i: rng.randrange(p) for i in range(d + 2, precision + 1)}
    terms[d + 1] = rng.randrange(1, p)
    return Series.from_dict(F, terms, precision)


def lemma_basic_trial(p: int, rng: random.Random, max_depth: int = 8, precision: int | None = None) -> Item:
    F = PrimeField(p)
    df, dg = rng.randint(1, max_depth), rng.randint(1, max_depth)
    prec = precision or df + dg + 2
    f = random_series_of_depth(F, df, prec, rng)
    gg = random_series_of_depth(F, dg, prec, rng)
    dc = depth(commutator(f, gg))
    details = {"D(f)": df, "D(g)": dg, "f": str(f), "g": str(gg), "D([f,g])": dc.to_json()}
    params = {"p": p, "df": df, "dg": dg}
    if not (depth(f).is_exactly(df) and depth(gg).is_exactly(dg)):
        return Item(params, "error", dict(details, error="hypothesis depths not exact"))
    lower = dc.at_least(df + dg)
    if (df - dg) % p:
        ok = lower and dc.is_exactly(df + dg)
    else:
        ok = lower and dc.at_least(df + dg + 1)
    return Item(params, _verdict(ok), details)


def suite_lemma_basic(g: Grid) -> list[Item]:
    out = []
    count = 500 if g.budget is None else g.budget
    for p in g.p or (2, 3, 5):
        rng = random.Random(f"{g.seed}:lemma-basic:{p}")
        for _ in range(count):
            out.append(lemma_basic_trial(p, rng, precision=g.precision))
    return out


# -- u_p congruence --------------------------------------------------------


def _regime_ns(p, k, g: Grid, width: int):
    start = (p - 1) * k + p
    return [n for n in g.ns(k, range(start, start + width)) if n >= start]


def suite_up_congruence(g: Grid) -> list[Item]:
    out = []
    for p in g.p or (3,):
        for k in g.k or (1, 2, 3):
            for n in _regime_ns(p, k, g, p):
                params = {"p": p, "k": k, "n": n}

                def run(p=p, k=k, n=n, params=params):
                    rep = up_congruence_report(p, k, n)
                    return Item(params, _verdict(rep.literal), rep.to_json())

                out.append(_guard(params, run))
    return out


# -- matrices --------------------------------------------------------------

MATRIX_DEFAULT_K = {3: (1, 2, 4, 5), 5: (1, 2, 3, 4, 6)}


def linear_regime_grid(g: Grid):
    """(p, k, n) with n >= (p-1)k+p, p not dividing k and e(k, n) < k."""
    for p in g.p or (3, 5):
        for k in g.k or MATRIX_DEFAULT_K.get(p, (1, 2)):
            if k % p == 0:
                continue
            for n in _regime_ns(p, k, g, 2 * p):
                if e_of(ParamSet(p, k, n)) < k:
                    yield p, k, n


def suite_matrix_vs_direct(g: Grid) -> list[Item]:
    out = []
    for p, k, n in linear_regime_grid(g):
        params = {"p": p, "k": k, "n": n}

        def run(p=p, k=k, n=n, params=params):
            e = e_of(ParamSet(p, k, n))
            v = propagate_v(p, k, n)
            w = u_window(p, k, n, e + 1)
            rep = pi_structure_check(p, k, n)
            details = {
                "e": e,
                "window_matches": v == w,
                "v_p": [str(x) for x in v],
                "structure": rep.to_json(),
            }
            return Item(params, _verdict(v == w and rep.passed), details)

        out.append(_guard(params, run))
    return out


def suite_c_vs_pi(g: Grid) -> list[Item]:
    out = []
    for p, k, n in linear_regime_grid(g):
        params = {"p": p, "k": k, "n": n}

        def run(p=p, k=k, n=n, params=params):
            e = e_of(ParamSet(p, k, n))
            bad = [[h, j] for h in range(p) for j in range(e + 1) if not pi_equals_cbar_check(p, k, n, h, j)]
            details = {"e": e, "mismatches": bad}
            ok = not bad
            k0 = k % p
            if e == k0 and all((n - 2 * k + i) % p for i in range(k0 + 1)):
                bridge = case3_bridge_check(p, k, n)
                details["bridge"] = bridge.to_json()
                ok = ok and bridge.passed
            return Item(params, _verdict(ok), details)

        out.append(_guard(params, run))
    return out


def suite_mp_row(g: Grid) -> list[Item]:
    out = []
    for p in g.p or (2, 3):
        for k in g.k or (1, 2):
            size = g.precision or 2 + theorem_bound(ParamSet(p, k, k + 2 * p))
            params = {"p": p, "k": k, "N": size}
            f = generic_f(p, k, size)
            it = group_pow_iterated(f, p)
            bp = group_pow(f, p)
            row = m_power_row(p, k, size, check=False)
            diffs = [j for j in range(2, size + 1) if not (it.coeff(j) == bp.coeff(j) == row[j])]
            out.append(Item(params, _verdict(not diffs), {"differing_exponents": diffs}))
    return out


def suite_modp(g: Grid) -> list[Item]:
    out = []
    imax = g.jmax or 6
    for p in g.p or (2, 3, 5):
        for k in g.k or (1, 2, 3):
            bad, count = [], 0
            for d in range(1, p * k):
                for i in range(1, imax + 1):
                    if i * k < d + 1 - k:
                        continue
                    count += 1
                    if not modp_periodicity_check(k, p, d, i):
                        bad.append([d, i])
            out.append(Item({"p": p, "k": k}, _verdict(not bad), {"checked": count, "failures": bad}))
    return out


def suite_ens(g: Grid) -> list[Item]:
    out = []
    smax = 2 if g.m is None else g.m
    for p in g.p or (2, 3):
        for k in g.k or (1, 2):
            for s in range(smax + 1):
                if p * k <= k + s:
                    continue
                for n in g.ns(k, range(k + s + 1, 13)):
                    if n <= k + s:
                        continue
                    params = {"p": p, "k": k, "n": n, "s": s}

                    def run(p=p, k=k, n=n, s=s, params=params):
                        dec = ens_decompose(p, k, n, s)
                        e = e_of(ParamSet(p, k, n))
                        periodic = ens_periodicity_check(p, k, n, s)
                        constraints = dec.degree_constraints_hold()
                        vanishing = s >= e or all(not x for x in dec.E)
                        details = {
                            "e": e,
                            "C": str(dec.C),
                            "E": [str(x) for x in dec.E],
                            "degree_constraints": constraints,
                            "periodic": periodic,
                            "E_vanish_below_e": vanishing,
                        }
                        return Item(params, _verdict(periodic and constraints and vanishing), details)

                    out.append(_guard(params, run))
    return out


# -- identities ------------------------------------------------------------


def suite_csum(g: Grid) -> list[Item]:
    out = []
    jmax = 4 if g.jmax is None else g.jmax
    for k in g.k or (1,):
        for i in range(7):
            for j in range(jmax + 1):
                out.append(Item({"k": k, "i": i, "j": j, "n": "symbolic"}, _verdict(csum_check(i, j, k))))
    return out


def suite_genfun(g: Grid) -> list[Item]:
    jmax = 4 if g.jmax is None else g.jmax
    amax = 2 if g.m is None else g.m
    return [
        Item({"a": a, "jmax": jmax, "bmax": 3}, _verdict(generating_check(a, jmax, 3)))
        for a in range(amax + 1)
    ]


def suite_slm(g: Grid) -> list[Item]:
    out = []
    jmax = 4 if g.jmax is None else g.jmax
    for j in range(jmax + 1):
        for a in range(j + 1):
            for b in range(j + 1 - a):
                ok, prof = slm_check(j, a, b)
                details = {"profile": prof.to_json(), "denominator": denominator_factors(phi(j, a, b))}
                out.append(Item({"j": j, "a": a, "b": b}, _verdict(ok), details))
    return out


def suite_residue(g: Grid) -> list[Item]:
    jmax = 4 if g.jmax is None else g.jmax
    return [
        Item({"j": j}, _verdict(residue_check(j)), {"minus_q_j": str(-q_series(j, 1)[j])})
        for j in range(1, jmax + 1)
    ]


KK0_DEFAULT = [
    (3, 1, 5), (3, 1, 6), (3, 2, 7), (3, 2, 9),
    (5, 1, 9), (5, 2, 9), (5, 3, 11), (5, 4, 13),
    (7, 2, 10), (7, 3, 12),
]


def suite_kk0(g: Grid) -> list[Item]:
    if g.p or g.k or g.n:
        triples = []
        for p in g.p or (3, 5):
            for k0 in g.k or range(1, p):
                for n in g.ns(k0, range(k0 + 1, k0 + 2 * p)):
                    if k0 % p and (n - k0) % p:
                        triples.append((p, k0, n))
    else:
        triples = KK0_DEFAULT
    out = []
    for p, k0, n in triples:
        params = {"p": p, "k0": k0, "n": n}

        def run(p=p, k0=k0, n=n, params=params):
            ok = kk0_expansion_check(p, k0, n)
            return Item(params, _verdict(ok), kk0_constants(p, k0, n).to_json())

        out.append(_guard(params, run))
    return out


# -- iterated powers -------------------------------------------------------

COROLLARY_GRID = [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (2, 4), (3, 3), (3, 5)]


def worked_instance(precision: int = 20):
    F = PrimeField(2)
    f = Series.from_dict(F, {2: 1}, precision)
    gg = Series.from_dict(F, {4: 1}, precision)
    return power_trial(f, gg, 2, 1, 1, 2)


def suite_corollary_pm(g: Grid) -> list[Item]:
    out = []
    m = g.m or 2
    count = 100 if g.budget is None else g.budget
    for p in g.p or (2, 3):
        if g.k or g.n:
            pairs = [(k, n) for k in (g.k or (1, 2)) for n in g.ns(k, range(k, k + 3)) if n >= k]
        else:
            pairs = COROLLARY_GRID
        rng = random.Random(f"{g.seed}:corollary-pm:{p}")
        for t in range(count):
            k, n = pairs[t % len(pairs)]
            seed = rng.randrange(2**31)
            trial = corollary_trial(p, k, n, m, seed, g.precision)
            out.append(Item({"p": p, "k": k, "n": n, "m": m, "seed": seed}, _verdict(trial.passed), trial.to_json()))
    if m == 2 and (g.p is None or 2 in g.p):
        w = worked_instance()
        out.append(Item({"p": 2, "k": 1, "n": 1, "m": 2, "instance": "x+x^2, x+x^4"}, _verdict(w.passed), w.to_json()))
    return out


SUITES = {
    "theorem-a": suite_theorem_a,
    "lemma-powers": suite_lemma_powers,
    "lemma-basic": suite_lemma_basic,
    "up-congruence": suite_up_congruence,
    "matrix-vs-direct": suite_matrix_vs_direct,
    "c-vs-pi": suite_c_vs_pi,
    "mp-row": suite_mp_row,
    "modp": suite_modp,
    "ens": suite_ens,
    "csum": suite_csum,
    "genfun": suite_genfun,
    "slm": suite_slm,
    "residue": suite_residue,
    "kk0": suite_kk0,
    "corollary-pm": suite_corollary_pm,
}


def run_suite(name: str, grid: Grid | None = None) -> list[Item]:
    return SUITES[name](grid or Grid())
