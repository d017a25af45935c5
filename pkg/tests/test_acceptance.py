"""Acceptance criteria 1-9; each test prints one PASS/FAIL line."""

import random
import time

import pytest

from conftest import X, pt, sys_of
from skewdml.algebra import Poly, ProjPoint, RatFunc, RFMatrix, matrix_det, smith_normal_form
from skewdml.base import iterate_base
from skewdml.errors import CoefficientPole, HitIndeterminacy
from skewdml.padic import (
    ALL_ZEROS,
    FINITELY_MANY,
    MEETS_LOCUS,
    Attuned,
    NoneFound,
    PadicContext,
    attuned_iterate,
    dml_classify,
    mahler_profile,
    select_prime,
)
from skewdml.seqring import Seq, find_linear_recurrence, fundamental_matrix, shift_product
from skewdml.skew import eval_matrix, image_filtration, iterate_skew
from skewdml.sml import (
    Recurrence,
    certify_progression,
    companion_system,
    decompose_progressions,
    sequence_terms,
)


@pytest.fixture
def report(capsys):
    def emit(number, title, failures, extra=""):
        status = "PASS" if not failures else "FAIL"
        with capsys.disabled():
            print(f"\n[criterion {number}] {status}: {title}{' ' + extra if extra else ''}")
            for f in failures[:10]:
                print(f"    {f}")
        assert not failures, failures[:10]

    return emit


# ---------------------------------------------------------------- 1


def random_ratfunc(rng):
    num = Poly([rng.randint(-9, 9) for _ in range(rng.randint(0, 4))])
    while True:
        den = Poly([rng.randint(-9, 9) for _ in range(rng.randint(1, 4))])
        if den:
            return RatFunc(num, den)


BASES = [
    (X**2, [0, 1, -1, "inf"]),
    (X**2 + 1, ["inf"]),
    (X**3 - X + 1, [0, 1, -1, "inf"]),
]


def point_of(a):
    return ProjPoint.infinity() if a == "inf" else ProjPoint.of(a)


def random_recurrence(rng, g, alphas, n_max):
    """Redraw until the terms are computable (alpha avoids the poles that matter)."""
    while True:
        l = rng.randint(1, 4)
        h = [random_ratfunc(rng) for _ in range(l)]
        init = [rng.randint(-9, 9) for _ in range(l)]
        rec = Recurrence.make(h, g, point_of(rng.choice(alphas)), init)
        try:
            return rec, sequence_terms(rec, n_max + l)
        except CoefficientPole:
            continue


def companion_mismatches(rec, terms, n_max):
    sys, start = companion_system(rec)
    l = rec.order
    cur = start
    for n in range(n_max + 1):
        if list(cur.fiber) != terms[n:n + l]:
            return n
        cur = iterate_skew(sys, cur, 1)
    return None


def test_criterion_1_companion_consistency(report):
    rng = random.Random(20261015)
    t0 = time.perf_counter()
    failures = []
    # orbits of preperiodic base points stay small, so n <= 200 is exact and cheap
    for k in range(50):
        g, alphas = BASES[k % 3]
        rec, terms = random_recurrence(rng, g, alphas, 200)
        try:
            bad = companion_mismatches(rec, terms, 200)
        except HitIndeterminacy as exc:
            bad = f"indeterminacy {exc}"
        if bad is not None:
            failures.append(f"recurrence {k}: first mismatch at n={bad}")
    # wandering base points: heights grow like deg(g)^n, so a shorter horizon
    for k in range(50):
        g, pre = BASES[k % 3]
        wander = [a for a in range(-9, 10) if a not in pre]
        rec, terms = random_recurrence(rng, g, wander, 8)
        try:
            bad = companion_mismatches(rec, terms, 8)
        except HitIndeterminacy as exc:
            bad = f"indeterminacy {exc}"
        if bad is not None:
            failures.append(f"wandering recurrence {k}: first mismatch at n={bad}")
    elapsed = time.perf_counter() - t0
    if elapsed >= 30:
        failures.append(f"runtime {elapsed:.1f}s exceeds 30s")
    report(1, "companion fiber equals (a_n..a_{n+l-1})", failures, f"({elapsed:.2f}s)")


# ---------------------------------------------------------------- 2 and 7

R = Recurrence.make
SML_FIXTURES = {
    "pole-cancel": R([(X - 4) / X], X**2, 2, [1]),
    "period-two": R([1, 0], X**2, 2, [0, 1]),
    "period-three": R([1, 0, 0], X**2, 3, [0, 1, 0]),
    "fibonacci-0": R([1, 1], X**2, 2, [0, 1]),
    "fibonacci-1": R([1, 1], X**2, 2, [1, 1]),
    "linear-first-order": R([X - 4], X + 1, 0, [1]),
    "linear-second-order": R([X - 7, 0], X + 1, 0, [1, 1]),
}


def certified_progressions(n_max):
    out = {}
    failures = []
    for name, rec in SML_FIXTURES.items():
        terms = sequence_terms(rec, n_max)
        zeros = [n for n, a in enumerate(terms) if not a]
        ps = decompose_progressions(zeros, n_max)
        if len(ps.progressions) > 3:
            failures.append(f"{name}: {len(ps.progressions)} progressions")
        if ps.members() != zeros:
            failures.append(f"{name}: progressions do not reproduce the zero set")
        for c, d in ps.progressions:
            if d == 0:
                continue
            cert = certify_progression(rec, (c, d))
            if not cert.certified:
                failures.append(f"{name}: ({c}, {d}) not certified: {cert.reason}")
                continue
            bad = [n for n in range(c, n_max + 1, d) if terms[n]]
            if bad:
                failures.append(f"{name}: certified ({c}, {d}) but a_{bad[0]} != 0")
            out.setdefault(name, []).append((c, d))
    return out, failures


def test_criterion_2_sml_dichotomy(report):
    found, failures = certified_progressions(5000)
    if "pole-cancel" not in found or "period-two" not in found:
        failures.append("core fixtures produced no certified progression")
    report(2, "zero sets on [0, 5000] are <= 3 certified progressions", failures, str(found))


def test_criterion_7_zero_divisor_witness(report):
    found, failures = certified_progressions(2000)
    checked = 0
    for name, progs in found.items():
        s = Seq(0, sequence_terms(SML_FIXTURES[name], 2000), name)
        for c, d in progs:
            prod = shift_product(s, d)
            bad = [n for n in range(c, prod.T + 1) if prod[n]]
            if bad:
                failures.append(f"{name}: product nonzero at n={bad[0]}")
            checked += 1
    report(7, "a*sigma(a)*...*sigma^d(a) vanishes on [c, 2000]", failures, f"({checked} progressions)")


# ---------------------------------------------------------------- 3 and 4

PADIC_FIXTURES = {
    "pole-cancel": (sys_of(X**2, [[(X - 4) / X]]), pt(2, [1]), [0, 1]),
    "fibonacci": (sys_of(X**2, [[0, 1], [1, 1]]), pt(2, [1, 1]), [0, 1, 0]),
    "swap": (sys_of(X**2, [[0, 1], [1, 0]]), pt(2, [0, 1]), [0, 1, 0]),
    "arithmetic": (sys_of(X**2, [[0, 1], [-1, 2]]), pt(2, [-7, -6]), [0, 1, 0]),
    "affine-fiber": (sys_of(X**2, [[X, 1], [0, 1]]), pt(2, [1, 1]), [0, 1, 0]),
    "scalar": (sys_of(X**2, [[X]]), pt(2, [1]), [0, 1]),
    "constant-form": (sys_of(X**2, [[0, 1], [1, 1]]), pt(2, [1, 1]), [1, 0, 0]),
}


def test_criterion_3_mahler_decay(report):
    failures, passed = [], 0
    for name, (sys, start, _) in PADIC_FIXTURES.items():
        choice = select_prime(sys, start)
        if isinstance(choice, NoneFound):
            continue
        ctx = PadicContext(choice.p, 40)
        att = attuned_iterate(sys, ctx, start, choice=choice)
        if not isinstance(att, Attuned):
            continue
        passed += 1
        for c in range(att.m, att.m + att.ell):
            rep = mahler_profile(sys, ctx, start, (c, att.ell), 20, choice)
            for i, k in rep.violations():
                failures.append(f"{name} class {c}: coordinate {i} has v_p(Delta^{k}) < {k}")
    if passed == 0:
        failures.append("no fixture reached the Mahler stage")
    report(3, "v_p(Delta^k s(0)) >= k for k <= 20 at K = 40", failures, f"({passed} fixtures)")


def test_criterion_4_strassmann_consistency(report):
    failures, classes = [], 0
    for name, (sys, start, form) in PADIC_FIXTURES.items():
        choice = select_prime(sys, start)
        rep = dml_classify(sys, start, form, PadicContext(choice.p, 40), 5000)
        if rep.reason:
            failures.append(f"{name}: {rep.reason}")
        for c in rep.classes:
            classes += 1
            if c.kind == FINITELY_MANY and len(c.observed) > c.bound:
                failures.append(f"{name} class {c.c}: {len(c.observed)} zeros exceed bound {c.bound}")
            elif c.kind == ALL_ZEROS and not c.cross_checked:
                failures.append(f"{name} class {c.c}: all-zero class has a nonzero term")
            elif c.kind not in (FINITELY_MANY, ALL_ZEROS):
                failures.append(f"{name} class {c.c}: unclassified ({c.reason})")
    report(4, "observed zeros in [0, 5000] respect Strassmann bounds", failures, f"({classes} classes)")


# ---------------------------------------------------------------- 5


def test_criterion_5_snf(report):
    rng = random.Random(5)
    t0 = time.perf_counter()
    failures = []
    for k in range(100):
        n, m = rng.randint(1, 4), rng.randint(1, 4)
        rows = [[Poly([rng.randint(-9, 9) for _ in range(rng.randint(0, 4))]) for _ in range(m)] for _ in range(n)]
        res = smith_normal_form(rows)
        M = RFMatrix([[RatFunc(p) for p in r] for r in rows])
        if res.U @ M @ res.V != res.D:
            failures.append(f"matrix {k}: U M V != D")
        for nm, T in (("U", res.U), ("V", res.V)):
            d = matrix_det(T)
            if not (d and d.is_constant()):
                failures.append(f"matrix {k}: {nm} is not unimodular")
        D = res.D
        if any(D[i, j] for i in range(D.rows) for j in range(D.cols) if i != j):
            failures.append(f"matrix {k}: D is not diagonal")
        diag = [D[i, i].num for i in range(min(D.rows, D.cols))]
        for a, b in zip(diag, diag[1:]):
            if (a and not a.divides(b)) or (not a and b):
                failures.append(f"matrix {k}: divisibility chain broken")
    elapsed = time.perf_counter() - t0
    if elapsed >= 10:
        failures.append(f"runtime {elapsed:.1f}s exceeds 10s")
    report(5, "U M V = D, U and V unimodular, d_i | d_{i+1}", failures, f"({elapsed:.2f}s)")


# ---------------------------------------------------------------- 6

PV_FIXTURES = {
    "fibonacci": (sys_of(X**2, [[0, 1], [1, 1]]), 2, 0),
    "cat-map": (sys_of(X**2, [[2, 1], [1, 1]]), 3, 0),
    "companion-x": (sys_of(X + 1, [[0, 1], [X, 1]]), 1, 1),
    "affine-fiber": (sys_of(X + 1, [[X, 1], [0, 1]]), 1, 1),
    "pole-cancel": (sys_of(X + 1, [[(X - 4) / X]]), 1, 1),
}


def test_criterion_6_fundamental_matrix(report):
    T = 1000
    failures = []
    for name, (sys, alpha, D) in PV_FIXTURES.items():
        Y = fundamental_matrix(sys, alpha, T)
        N = sys.N
        const = sys.A.is_constant()
        A = eval_matrix(sys.A, ProjPoint.of(alpha)) if const else None
        base = None if const else iterate_base(sys.g, ProjPoint.of(alpha), Y.n0)
        for n in range(Y.n0, T):
            if not const:
                A = eval_matrix(sys.A, base)
                base = sys.g(base)
            Yn, Yn1 = Y.at(n), Y.at(n + 1)
            if Yn1 != [[sum(A[i][k] * Yn[k][j] for k in range(N)) for j in range(N)] for i in range(N)]:
                failures.append(f"{name}: sigma(Y) != A Y at n={n}")
                break
        if not all(Y.dets):
            failures.append(f"{name}: det Y vanishes")
        for i in range(N):
            for j in range(N):
                s = Y.entry(i, j)
                rec = find_linear_recurrence(s, sys.g, alpha, N, D, min_holdout=500)
                if rec is None:
                    failures.append(f"{name}: no recurrence for Y[{i},{j}] with 500 held-out terms")
                elif sequence_terms(rec, len(s) - 1) != list(s.values):
                    failures.append(f"{name}: recurrence for Y[{i},{j}] fails re-verification")
    report(6, "sigma(Y) = A Y, det Y != 0 on n <= 1000, entry recurrences hold out", failures)


# ---------------------------------------------------------------- 8


def test_criterion_8_negative_fixture(report):
    sys = sys_of(X + 1, [[X]])
    primes = [p for p in range(2, 101) if all(p % q for q in range(2, p))]
    got = select_prime(sys, pt(0, [0]), primes, horizon=500)
    failures = []
    if not isinstance(got, NoneFound):
        failures.append(f"selected {got}")
    else:
        if sorted(got.reasons) != primes:
            failures.append("some primes have no rejection reason")
        odd = {p: r for p, r in got.reasons.items() if r != MEETS_LOCUS}
        if odd:
            failures.append(f"unexpected reasons: {odd}")
    report(8, "no prime <= 100 avoids the singular locus", failures, f"({len(primes)} primes)")


# ---------------------------------------------------------------- 9


def test_criterion_9_filtration(report):
    rng = random.Random(9)
    bases = [X + 1, 2 * X + 1, X - 3, X**2, X**2 + 1]
    failures = []
    for k in range(50):
        g = bases[k % len(bases)]
        N = rng.randint(1, 3)
        A = [[Poly([rng.randint(-9, 9) for _ in range(rng.randint(0, 3))]) for _ in range(N)] for _ in range(N)]
        if k % 4 == 0:
            # force a rank drop so stabilization is exercised
            A[-1] = [Poly()] * N
        sys = sys_of(g, [[RatFunc(p) for p in r] for r in A])
        f = image_filtration(sys)
        ranks = f.ranks + [f.rank]
        if any(a < b for a, b in zip(ranks, ranks[1:])):
            failures.append(f"system {k}: ranks increase {ranks}")
        if f.step > N:
            failures.append(f"system {k}: stabilized only at step {f.step} > N={N}")
        if sys.g.degree == 1 and not f.invariant:
            failures.append(f"system {k}: basis over an invertible base is not invariant")
    report(9, "ranks non-increasing, stable within N steps, invariant for invertible g", failures)
