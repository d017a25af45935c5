from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import X, pt, sys_of
from skewdml.algebra import ProjPoint
from skewdml.errors import AnalyticityFailed, DomainError
from skewdml.padic import (
    ALL_ZEROS,
    FINITELY_MANY,
    MEETS_LOCUS,
    Attuned,
    IdenticallyZeroAtPrecision,
    MahlerReport,
    MaxZeros,
    ModMap,
    NoneFound,
    NotFound,
    PadicContext,
    PadicOrbit,
    PrimeChoice,
    attune,
    attuned_iterate,
    base_residue_orbit,
    default_candidates,
    dml_classify,
    forward_differences,
    mahler_profile,
    reduce_rat,
    residue_orbit,
    select_prime,
    stirling_first,
    strassmann_bound,
    strassmann_zero_bound,
    vp,
)
from skewdml.base import BaseMap
from skewdml.skew import SkewOrbit

FIXTURES = {
    "h": (sys_of(X**2, [[(X - 4) / X]]), pt(2, [1]), [0, 1]),
    "fib11": (sys_of(X**2, [[0, 1], [1, 1]]), pt(2, [1, 1]), [0, 1, 0]),
    "swap": (sys_of(X**2, [[0, 1], [1, 0]]), pt(2, [0, 1]), [0, 1, 0]),
    "nm7": (sys_of(X**2, [[0, 1], [-1, 2]]), pt(2, [-7, -6]), [0, 1, 0]),
    "xy": (sys_of(X**2, [[X, 1], [0, 1]]), pt(2, [1, 1]), [0, 1, 0]),
    "one": (sys_of(X**2, [[0, 1], [1, 1]]), pt(2, [1, 1]), [1, 0, 0]),
}


def test_context_validation():
    assert PadicContext(5).modulus == 5**40
    with pytest.raises(ValueError):
        PadicContext(9)
    with pytest.raises(ValueError):
        PadicContext(3, 3)


def test_candidates_skip_two():
    c = default_candidates()
    assert c[0] == 3 and c[-1] == 199 and 2 not in c


def test_valuations():
    assert vp(0, 3, 40) == 40
    assert vp(18, 3, 40) == 2
    assert reduce_rat(Fraction(1, 2), 9) * 2 % 9 == 1


# ---------------------------------------------------------------- prime selection


def test_select_prime_examples():
    s = sys_of(X**2, [[X, 1], [0, 1]])
    assert select_prime(s, pt(2, [1, 1]), [3]) == PrimeChoice(3, 0)
    got = select_prime(s, pt(2, [1, 1]), [2])
    assert isinstance(got, NoneFound) and got.reasons[2] == MEETS_LOCUS
    assert isinstance(select_prime(sys_of(X**2, [[2, 1], [1, 1]]), pt(2, [1, 0]), [5]), PrimeChoice)


def test_select_prime_rejects_bad_reduction():
    s = sys_of(X**2 / 3 + 1, [[1]])
    got = select_prime(s, pt(1, [1]), [3, 5])
    assert got == PrimeChoice(5, 0)
    got = select_prime(sys_of(X**2, [[3]]), pt(1, [1]), [3])
    assert isinstance(got, NoneFound) and 3 in got.reasons


def test_negative_fixture_rejected_everywhere():
    s = sys_of(X + 1, [[X]])
    primes = [p for p in range(2, 101) if all(p % q for q in range(2, p))]
    got = select_prime(s, pt(0, [0]), primes, horizon=500)
    assert isinstance(got, NoneFound)
    assert set(got.reasons) == set(primes)
    assert set(got.reasons.values()) == {MEETS_LOCUS}


def test_eventual_avoidance_uses_shift():
    # (x - 4)/x: 2 -> 4 -> 16 -> ... mod 5 is 2, 4, 1, 1, ... so the locus {0, 4} is left after step 1
    s, start, _ = FIXTURES["h"]
    assert select_prime(s, start, [5]) == PrimeChoice(5, 2)


# ---------------------------------------------------------------- residues


def test_base_residue_orbit():
    r = base_residue_orbit(BaseMap(X**2), ProjPoint.of(2), 3)
    assert (r.preperiod, r.period) == (1, 1)
    r = base_residue_orbit(BaseMap(X**2), ProjPoint.of(1), 3)
    assert (r.preperiod, r.period) == (0, 1)


@given(st.sampled_from([3, 5, 7, 11]), st.sampled_from([X**2, X**2 + 1, X**3 - X + 1, X + 1]), st.integers(-20, 20))
def test_residue_orbit_fits_projective_line(p, g, a):
    r = base_residue_orbit(BaseMap(g), ProjPoint.of(a), p)
    assert r.preperiod + r.period <= p + 1


def brute_force_cycle(s, start, p):
    mp = ModMap(s, p)
    st0 = mp.reduce_point(start, p)
    seen, seq = {}, []
    cur = st0
    while cur not in seen:
        seen[cur] = len(seq)
        seq.append(cur)
        cur = mp.step(cur, p)
    return seen[cur], len(seq) - seen[cur]


def test_residue_orbit_matches_brute_force():
    s = sys_of(X**2, [[X]])
    r = residue_orbit(s, PadicContext(3), pt(2, [1]))
    assert (r.preperiod, r.period) == (1, 1)
    assert (r.preperiod, r.period) == brute_force_cycle(s, pt(2, [1]), 3)
    # state space is at most (p + 1) * p^N
    assert r.preperiod + r.period <= 4 * 3


@pytest.mark.parametrize("name", ["fib11", "swap", "nm7", "xy"])
def test_reduction_commutes(name):
    s, start, _ = FIXTURES[name]
    p = 3
    mp = ModMap(s, p)
    modular = PadicOrbit(s, start, p, 1, 0)
    exact = SkewOrbit(s, start)
    residue = mp.reduce_point(start, p)
    for n in range(12):  # exact base points grow doubly exponentially
        assert modular.state(n) == residue
        assert modular.state(n) == mp.reduce_point(exact.point(n), p)
        residue = mp.step(residue, p)


def test_reduction_commutes_long_for_constant_fibers():
    # fiber coordinates of constant systems stay small; compare them for n <= 200
    s, start, _ = FIXTURES["fib11"]
    modular = PadicOrbit(s, start, 3, 1, 0)
    exact = SkewOrbit(s, start)
    for n in range(201):
        assert modular.state(n)[2:] == tuple(reduce_rat(v, 3) for v in exact.fiber_at(n))


# ---------------------------------------------------------------- attuned iterate


def test_attune_translation_and_identity():
    p = 3
    assert attune(lambda w, q: ((w[0] + p) % q,), (0,), p, 1, 40) == (3, 3)
    assert attune(lambda w, q: w, (0, 0), p, 1, 40) == (1, 9)


def test_attune_cap():
    p = 3
    got = attune(lambda w, q: ((w[0] + 1) % q,), (0,), p, 1, 40, cap=5)
    assert isinstance(got, NotFound)


def test_attuned_iterate_fixture():
    s = sys_of(X**2, [[X]])
    got = attuned_iterate(s, PadicContext(3), pt(2, [1]))
    assert got == Attuned(1, 2, 9)


def test_attuned_iterate_is_identity_mod_p2_on_full_residue_disc():
    s = sys_of(X**2, [[X]])
    ctx = PadicContext(3)
    att = attuned_iterate(s, ctx, pt(2, [1]))
    mp = ModMap(s, 3)
    q = 3**ctx.K
    center = PadicOrbit(s, pt(2, [1]), 3, 2, 0).state(att.m)
    for off in product(range(3), repeat=2):
        w = (center[0], (center[1] + 3 * off[0]) % 9, (center[2] + 3 * off[1]) % 9)
        cur = w
        for _ in range(att.ell):
            cur = mp.step(cur, q)
        assert all((a - b) % 9 == 0 for a, b in zip(cur[1:], w[1:]))


# ---------------------------------------------------------------- Mahler / Strassmann


def test_forward_differences_examples():
    p, q = 5, 5**20
    d = forward_differences([(1 + p) ** j for j in range(10)], q)
    assert [vp(x, p, 20) for x in d] == list(range(10))
    d = forward_differences([7] * 6, q)
    assert d[0] == 7 and d[1:] == [0] * 5


def test_stirling_numbers():
    s = stirling_first(5)
    assert s[4][1:5] == [-6, 11, -6, 1]
    # sum_m s(k, m) x^m = x (x - 1) ... (x - k + 1); at x = k this is k!
    assert sum(s[5][m] * 5**m for m in range(6)) == 120


def test_strassmann_examples():
    p = 3
    assert strassmann_bound([p, 1, 0, 0], p, 10) == MaxZeros(1, 10)
    assert strassmann_bound([0, 0, p**12], p, 10) == IdenticallyZeroAtPrecision(10)
    assert strassmann_bound([1, p, p**2, p**3], p, 10) == MaxZeros(0, 10)


def test_strassmann_requires_decay():
    rep = MahlerReport(0, 1, 3, 10, [[0, 0, 0]], [[1, 1, 1]])
    with pytest.raises(AnalyticityFailed):
        strassmann_zero_bound(rep, [0, 1])


def classify(name, n_max=400):
    s, start, form = FIXTURES[name]
    choice = select_prime(s, start)
    return dml_classify(s, start, form, PadicContext(choice.p), n_max)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_mahler_decay_on_fixtures(name):
    s, start, _ = FIXTURES[name]
    choice = select_prime(s, start)
    ctx = PadicContext(choice.p, 40)
    att = attuned_iterate(s, ctx, start, choice=choice)
    assert isinstance(att, Attuned)
    for c in range(att.m, att.m + att.ell):
        rep = mahler_profile(s, ctx, start, (c, att.ell), 20, choice)
        assert rep.decay_ok, rep.violations()


def test_h_fixture_all_zero_classes():
    rep = classify("h")
    assert (rep.p, rep.shift, rep.ell) == (5, 2, 4)
    assert all(c.kind == ALL_ZEROS and c.cross_checked for c in rep.classes)


def test_fibonacci_classes_have_no_zeros():
    rep = classify("fib11")
    assert rep.classes and all(c.kind == FINITELY_MANY and c.observed == [] for c in rep.classes)


def test_nm7_single_zero():
    rep = classify("nm7")
    (hit,) = [c for c in rep.classes if c.observed]
    assert hit.c == 7 and hit.observed == [7] and hit.bound == 1


def test_constant_form_never_vanishes():
    rep = classify("one")
    assert all(c.kind == FINITELY_MANY and c.bound == 0 and c.observed == [] for c in rep.classes)


def test_swap_prefix_and_class():
    rep = classify("swap")
    assert rep.ell == 2 and rep.prefix_zeros == [0]
    kinds = {c.c: c.kind for c in rep.classes}
    assert kinds[2] == ALL_ZEROS


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_observed_zeros_within_bound(name):
    for c in classify(name).classes:
        if c.kind == FINITELY_MANY:
            assert len(c.observed) <= c.bound
        elif c.kind == ALL_ZEROS:
            assert c.cross_checked


def test_classify_checks_form_length():
    s, start, _ = FIXTURES["fib11"]
    with pytest.raises(ValueError):
        dml_classify(s, start, [0, 1], PadicContext(3), 10)


def test_classify_rejected_prime():
    s = sys_of(X + 1, [[X]])
    with pytest.raises(DomainError):
        dml_classify(s, pt(0, [0]), [0, 1], PadicContext(3), 10)
