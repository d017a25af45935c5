"""p-adic machinery for skew-linear orbits, at fixed precision p^K.

Pipeline: pick a prime of good reduction whose residue base orbit eventually
avoids the singular locus, find the residue cycle, find an iterate f^l that
is the identity mod p^2 on the residue polydisc, check the decay of finite
differences along each class n = c + j l, and bound zeros per class with
Strassmann's theorem.

States mod p^k are tuples ``(chart, coord, y_1, ..., y_N)`` where chart 0
means coord = x and chart 1 means coord = t = 1/x (used on the residue disc
at infinity).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb, factorial, lcm
from typing import Callable, Sequence

from .algebra import Poly, ProjPoint, as_rat, homogeneous_resultant, matrix_det
from .base import BaseMap, eval_form
from .errors import AnalyticityFailed, DomainError, ExactComputationTooLarge
from .skew import SingularLocus, SkewOrbit, SkewPoint, SkewSystem, singular_locus

log = logging.getLogger(__name__)

DEFAULT_PRECISION = 40
DEFAULT_K_MAX = 20
DEFAULT_ELL_CAP = 10_000
EXACT_BIT_BUDGET = 1 << 16
MAX_FULL_GRID = 729


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def default_candidates() -> list[int]:
    return [q for q in range(3, 201) if is_prime(q)]


def vp(n: int, p: int, cap: int) -> int:
    """p-adic valuation of n, with 0 mapped to ``cap``."""
    if n == 0:
        return cap
    v = 0
    while n % p == 0 and v < cap:
        n //= p
        v += 1
    return v


def vp_rat(r: Fraction, p: int) -> int | None:
    if not r:
        return None
    return vp(abs(r.numerator), p, 10**9) - vp(r.denominator, p, 10**9)


def reduce_rat(r, q: int) -> int:
    r = as_rat(r)
    return r.numerator * pow(r.denominator, -1, q) % q


@dataclass(frozen=True)
class PadicContext:
    p: int
    K: int = DEFAULT_PRECISION

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.K < 4:
            raise ValueError("precision K must be >= 4")

    @property
    def modulus(self) -> int:
        return self.p**self.K


# --------------------------------------------------------------------------
# reduction of the system
# --------------------------------------------------------------------------


def _denominators(sys: SkewSystem, start: SkewPoint) -> list[int]:
    ds = [c.denominator for c in sys.g.h.num.coeffs + sys.g.h.den.coeffs]
    for row in sys.A.entries:
        for e in row:
            ds += [c.denominator for c in e.num.coeffs + e.den.coeffs]
    ds += [v.denominator for v in start.fiber]
    return ds


def _int_poly_mod(p: Poly, q: int) -> list[int]:
    return [reduce_rat(c, q) for c in p.coeffs]


def _horner(coeffs: Sequence[int], x: int, q: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % q
    return acc


class SingularResidue(DomainError):
    """A modular step needed to divide by a non-unit."""


class ModMap:
    """The skew map acting on states modulo p^k (k arbitrary, p fixed)."""

    def __init__(self, sys: SkewSystem, p: int):
        self.sys = sys
        self.p = p
        self.d, self.F, self.G = sys.g.forms
        self._cache: dict[int, tuple] = {}

    def _entries(self, q: int):
        got = self._cache.get(q)
        if got is None:
            aff, inf = [], []
            for row in self.sys.A.entries:
                ra, ri = [], []
                for e in row:
                    num, den = _int_poly_mod(e.num, q), _int_poly_mod(e.den, q)
                    ra.append((num, den))
                    dn, dd = e.num.degree, e.den.degree
                    if not e:
                        ri.append(None)
                    elif dn > dd:
                        ri.append("pole")
                    else:
                        ri.append((dd - dn, num[::-1], den[::-1]))
                aff.append(ra)
                inf.append(ri)
            got = self._cache[q] = (aff, inf)
        return got

    def base_step(self, chart: int, u: int, q: int) -> tuple[int, int]:
        X, Y = (u, 1) if chart == 0 else (1, u)
        Fv = eval_form(self.F, X, Y, self.d) % q
        Gv = eval_form(self.G, X, Y, self.d) % q
        p = self.p
        if Gv % p:
            return 0, Fv * pow(Gv, -1, q) % q
        if Fv % p:
            return 1, Gv * pow(Fv, -1, q) % q
        raise SingularResidue("base map has bad reduction at this residue")

    def entry_values(self, chart: int, u: int, q: int) -> list[list[int]]:
        aff, inf = self._entries(q)
        p = self.p
        out = []
        for i in range(self.sys.N):
            row = []
            for j in range(self.sys.N):
                if chart == 0:
                    num, den = aff[i][j]
                    dv = _horner(den, u, q)
                    if dv % p == 0:
                        raise SingularResidue("entry denominator vanishes mod p")
                    row.append(_horner(num, u, q) * pow(dv, -1, q) % q)
                else:
                    how = inf[i][j]
                    if how is None:
                        row.append(0)
                    elif how == "pole":
                        raise SingularResidue("entry has a pole at infinity")
                    else:
                        shift, rnum, rden = how
                        dv = _horner(rden, u, q)
                        if dv % p == 0:
                            raise SingularResidue("entry denominator vanishes at infinity mod p")
                        row.append(pow(u, shift, q) * _horner(rnum, u, q) * pow(dv, -1, q) % q)
            out.append(row)
        return out

    def step(self, state: tuple, q: int) -> tuple:
        chart, u, *y = state
        M = self.entry_values(chart, u, q)
        ny = tuple(sum(M[i][j] * y[j] for j in range(len(y))) % q for i in range(len(y)))
        return self.base_step(chart, u, q) + ny

    def reduce_base(self, pt: ProjPoint, q: int) -> tuple[int, int]:
        if pt.b % self.p:
            return 0, pt.a * pow(pt.b, -1, q) % q
        return 1, pt.b * pow(pt.a, -1, q) % q

    def reduce_point(self, pt: SkewPoint, q: int) -> tuple:
        return self.reduce_base(pt.base, q) + tuple(reduce_rat(v, q) for v in pt.fiber)


# --------------------------------------------------------------------------
# prime selection
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PrimeChoice:
    p: int
    shift: int  # residue base orbit avoids the singular locus from this index on


@dataclass(frozen=True)
class NoneFound:
    reasons: dict[int, str]


MEETS_LOCUS = "residue orbit meets singular locus"


def _bad_residues(sys: SkewSystem, loc: SingularLocus, p: int) -> tuple[set[int], bool]:
    """Affine residues of the singular locus mod p, and whether infinity is bad."""
    bad = set()
    det = matrix_det(sys.A)
    num_red = [c % p for c in det.num.integer_coeffs()[1]]
    den_polys = [e.den for row in sys.A.entries for e in row]
    for r in range(p):
        if _horner(num_red, r, p) == 0:
            bad.add(r)
            continue
        for dp in den_polys + [det.den]:
            if dp.degree > 0 and _horner(_int_poly_mod(dp, p), r, p) == 0:
                bad.add(r)
                break
    inf_bad = loc.includes_infinity
    if not inf_bad:
        # the reduction may still degenerate at infinity (leading terms divisible by p)
        try:
            M = ModMap(sys, p).entry_values(1, 0, p)
            inf_bad = _det_mod(M, p) == 0
        except SingularResidue:
            inf_bad = True
    return bad, inf_bad


def _det_mod(M: list[list[int]], p: int) -> int:
    n = len(M)
    m = [row[:] for row in M]
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c] % p
        inv = pow(m[c][c], -1, p)
        for r in range(c + 1, n):
            f = m[r][c] * inv % p
            if f:
                m[r] = [(a - f * b) % p for a, b in zip(m[r], m[c])]
    return det % p


@dataclass(frozen=True)
class ResidueOrbit:
    preperiod: int
    period: int
    cycle: tuple
    shift: int = 0


def base_residue_orbit(g: BaseMap, alpha: ProjPoint, p: int) -> ResidueOrbit:
    """Cycle structure of alpha under g mod p on P^1(F_p); infinity is the residue 'inf'."""
    d, F, G = g.forms
    if alpha.b % p:
        cur = ("aff", alpha.a * pow(alpha.b, -1, p) % p)
    else:
        cur = ("inf",)
    seen: dict = {}
    seq = []
    while cur not in seen:
        seen[cur] = len(seq)
        seq.append(cur)
        X, Y = (cur[1], 1) if cur[0] == "aff" else (1, 0)
        Fv, Gv = eval_form(F, X, Y, d) % p, eval_form(G, X, Y, d) % p
        if Gv:
            cur = ("aff", Fv * pow(Gv, -1, p) % p)
        elif Fv:
            cur = ("inf",)
        else:
            raise SingularResidue("base map has bad reduction")
    m = seen[cur]
    return ResidueOrbit(m, len(seq) - m, tuple(seq[m:]))


def _check_prime(sys: SkewSystem, start: SkewPoint, loc: SingularLocus, p: int):
    """Return the avoidance shift for p, or a rejection reason string."""
    if any(dn % p == 0 for dn in _denominators(sys, start)):
        return "p divides a denominator of the data"
    d, F, G = sys.g.forms
    if homogeneous_resultant(F, G, d) % p == 0:
        return "base map has bad reduction"
    if not loc.det_numerator:
        return "det A vanishes identically"
    det = matrix_det(sys.A)
    content = min(vp_rat(c, p) for c in det.num.coeffs if c) - min(vp_rat(c, p) for c in det.den.coeffs if c)
    if content > 0:
        return "det A reduces to zero"
    if content < 0:
        return "det A has a pole everywhere mod p"
    bad, inf_bad = _bad_residues(sys, loc, p)
    orb = base_residue_orbit(sys.g, start.base, p)
    first = _residue_prefix(sys.g, start.base, p, orb.preperiod)

    def is_bad(r):
        return inf_bad if r[0] == "inf" else r[1] in bad

    if any(is_bad(r) for r in orb.cycle):
        return MEETS_LOCUS
    shift = 0
    for i, r in enumerate(first):
        if is_bad(r):
            shift = i + 1
    return shift


def _residue_prefix(g: BaseMap, alpha: ProjPoint, p: int, n: int) -> list:
    d, F, G = g.forms
    cur = ("aff", alpha.a * pow(alpha.b, -1, p) % p) if alpha.b % p else ("inf",)
    out = []
    for _ in range(n):
        out.append(cur)
        X, Y = (cur[1], 1) if cur[0] == "aff" else (1, 0)
        Fv, Gv = eval_form(F, X, Y, d) % p, eval_form(G, X, Y, d) % p
        cur = ("aff", Fv * pow(Gv, -1, p) % p) if Gv else ("inf",)
    return out


def select_prime(
    sys: SkewSystem,
    start: SkewPoint,
    candidates: Sequence[int] | None = None,
    horizon: int = 500,
) -> PrimeChoice | NoneFound:
    """First candidate prime of good reduction whose residue base orbit eventually avoids the singular locus.

    The residue orbit is eventually periodic, so avoidance is decided on its
    cycle; ``horizon`` only bounds how long the preperiodic part may be.
    """
    if candidates is None:
        candidates = default_candidates()
    loc = singular_locus(sys)
    reasons: dict[int, str] = {}
    for p in candidates:
        if not is_prime(p):
            reasons[p] = "not a prime"
            continue
        got = _check_prime(sys, start, loc, p)
        if isinstance(got, str):
            reasons[p] = got
        elif got > horizon:
            reasons[p] = f"residue orbit leaves the singular locus only after step {got}"
        else:
            return PrimeChoice(p, got)
    return NoneFound(reasons)


def prime_choice_for(sys: SkewSystem, start: SkewPoint, p: int) -> PrimeChoice:
    got = select_prime(sys, start, [p])
    if isinstance(got, NoneFound):
        raise DomainError(f"prime {p} rejected: {got.reasons[p]}")
    return got


# --------------------------------------------------------------------------
# orbits mod p^K
# --------------------------------------------------------------------------


class PadicOrbit:
    """States f^n(start) mod p^k for n >= shift.

    The fiber at ``shift`` comes from the exact orbit; if it is not p-integral
    it is multiplied by p^e (``scale_exp``), which does not change which
    linear forms vanish along the orbit once the constant term is scaled too.
    """

    def __init__(self, sys: SkewSystem, start: SkewPoint, p: int, k: int, shift: int):
        self.sys = sys
        self.map = ModMap(sys, p)
        self.p, self.k, self.q = p, k, p**k
        self.shift = shift
        exact = SkewOrbit(sys, start, bit_budget=EXACT_BIT_BUDGET)
        y = exact.fiber_at(shift)
        e = max([0] + [-(vp_rat(v, p) or 0) for v in y if v])
        self.scale_exp = e
        y = tuple(v * p**e for v in y)
        base = self._base_mod(start.base, shift)
        self._states = [base + tuple(reduce_rat(v, self.q) for v in y)]

    def _base_mod(self, alpha: ProjPoint, n: int) -> tuple[int, int]:
        st = self.map.reduce_base(alpha, self.q)
        for _ in range(n):
            st = self.map.base_step(*st, self.q)
        return st

    def state(self, n: int) -> tuple:
        if n < self.shift:
            raise ValueError(f"modular states start at index {self.shift}")
        states = self._states
        while len(states) <= n - self.shift:
            states.append(self.map.step(states[-1], self.q))
        return states[n - self.shift]


def residue_orbit(sys: SkewSystem, ctx: PadicContext, start: SkewPoint, choice: PrimeChoice | None = None) -> ResidueOrbit:
    """Preperiod and period of the full residue state (base and fiber), counted from index 0."""
    choice = choice or prime_choice_for(sys, start, ctx.p)
    orb = PadicOrbit(sys, start, ctx.p, 1, choice.shift)
    seen: dict = {}
    n = choice.shift
    limit = choice.shift + (ctx.p + 1) * ctx.p**sys.N + 1
    while n <= limit:
        s = orb.state(n)
        if s in seen:
            m = seen[s]
            return ResidueOrbit(m, n - m, tuple(orb.state(i) for i in range(m, n)), choice.shift)
        seen[s] = n
        n += 1
    raise DomainError("residue orbit did not cycle within the state-space bound")


# --------------------------------------------------------------------------
# attuned iterate
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Attuned:
    m: int
    ell: int
    samples: int


@dataclass(frozen=True)
class NotFound:
    reason: str


def attune(
    step: Callable[[tuple, int], tuple],
    center: Sequence[int],
    p: int,
    period: int,
    K: int,
    cap: int = DEFAULT_ELL_CAP,
) -> tuple[int, int] | NotFound:
    """Smallest multiple l of ``period`` with f^l = id mod p^2 on the residue polydisc of ``center``.

    ``step(w, q)`` applies f to a coordinate tuple mod q.  The polydisc is
    sampled completely mod p^2 when it has at most 729 points, else on the
    grid center + p * {0,1,2}^dim.  Returns (l, number of samples).
    """
    dim = len(center)
    q2 = p * p
    base = [c % p for c in center]
    digits = range(p) if p**dim <= MAX_FULL_GRID else range(3)
    samples = [tuple((b + p * o) % q2 for b, o in zip(base, offs)) for offs in product(digits, repeat=dim)]

    def F(w, q):
        for _ in range(period):
            w = step(w, q)
        return w

    L = 1
    for w in samples:
        cur = F(w, q2)
        length = 1
        seen = {cur}
        while cur != w:
            cur = F(cur, q2)
            length += 1
            if cur in seen or period * length > cap:
                why = "not injective mod p^2" if cur in seen else f"cycle exceeds cap {cap}"
                return NotFound(f"iterate search failed: {why}")
            seen.add(cur)
        L = lcm(L, length)
        if period * L > cap:
            return NotFound(f"attuned iterate exceeds cap {cap}")
    qK = p**K
    for w in samples:
        cur = w
        for _ in range(L):
            cur = F(cur, qK)
        if any((a - b) % q2 for a, b in zip(cur, w)):
            return NotFound("verification at full precision failed")
    return period * L, len(samples)


def attuned_iterate(
    sys: SkewSystem,
    ctx: PadicContext,
    start: SkewPoint,
    cap: int = DEFAULT_ELL_CAP,
    choice: PrimeChoice | None = None,
) -> Attuned | NotFound:
    choice = choice or prime_choice_for(sys, start, ctx.p)
    try:
        res = residue_orbit(sys, ctx, start, choice)
    except DomainError as exc:
        return NotFound(str(exc))
    m = max(res.preperiod, choice.shift)
    orb = PadicOrbit(sys, start, ctx.p, 2, choice.shift)
    center = orb.state(m)
    chart = center[0]
    mp = ModMap(sys, ctx.p)

    def step(w, q):
        out = mp.step((chart,) + tuple(w), q)
        if out[0] != chart:
            raise SingularResidue("polydisc leaves its chart")
        return out[1:]

    try:
        got = attune(step, center[1:], ctx.p, res.period, ctx.K, cap)
    except SingularResidue as exc:
        return NotFound(str(exc))
    if isinstance(got, NotFound):
        return got
    return Attuned(m, got[0], got[1])


# --------------------------------------------------------------------------
# Mahler differences and Strassmann bounds
# --------------------------------------------------------------------------


@dataclass
class MahlerReport:
    """Valuations v_p(Delta^k s_i(0)) along n = c + j*ell; the value K marks a zero difference."""

    c: int
    ell: int
    p: int
    K: int
    valuations: list[list[int]]
    differences: list[list[int]]
    scale_exp: int = 0
    slopes: list[float | None] = field(default_factory=list)

    @property
    def k_max(self) -> int:
        return len(self.valuations[0]) - 1 if self.valuations else 0

    @property
    def precision_exhausted(self) -> bool:
        return self.k_max >= self.K - 1

    def violations(self) -> list[tuple[int, int]]:
        """(coordinate, k) pairs with v_p(Delta^k) < k."""
        return [(i, k) for i, vs in enumerate(self.valuations) for k, v in enumerate(vs) if v < k]

    @property
    def decay_ok(self) -> bool:
        return not self.violations()


def forward_differences(seq: Sequence[int], q: int) -> list[int]:
    """Delta^k s(0) mod q for k = 0..len(seq)-1."""
    return [sum((-1) ** (k - j) * comb(k, j) * seq[j] for j in range(k + 1)) % q for k in range(len(seq))]


def mahler_profile(
    sys: SkewSystem,
    ctx: PadicContext,
    start: SkewPoint,
    cls: tuple[int, int],
    k_max: int = DEFAULT_K_MAX,
    choice: PrimeChoice | None = None,
    orbit: PadicOrbit | None = None,
) -> MahlerReport:
    c, ell = cls
    choice = choice or prime_choice_for(sys, start, ctx.p)
    if c < choice.shift:
        raise ValueError(f"class offset {c} precedes the avoidance shift {choice.shift}")
    orb = orbit or PadicOrbit(sys, start, ctx.p, ctx.K, choice.shift)
    q = ctx.modulus
    states = [orb.state(c + j * ell) for j in range(k_max + 1)]
    vals, diffs, slopes = [], [], []
    for i in range(sys.N):
        d = forward_differences([s[2 + i] for s in states], q)
        v = [vp(x, ctx.p, ctx.K) for x in d]
        diffs.append(d)
        vals.append(v)
        ratios = [v[k] / k for k in range(1, len(v)) if v[k] < ctx.K]
        slopes.append(min(ratios) if ratios else None)
    return MahlerReport(c, ell, ctx.p, ctx.K, vals, diffs, orb.scale_exp, slopes)


@dataclass(frozen=True)
class IdenticallyZeroAtPrecision:
    precision: int


@dataclass(frozen=True)
class MaxZeros:
    bound: int
    precision: int = 0


def stirling_first(n: int) -> list[list[int]]:
    """Signed Stirling numbers s(k, m) for 0 <= m <= k <= n."""
    s = [[0] * (n + 1) for _ in range(n + 1)]
    s[0][0] = 1
    for k in range(1, n + 1):
        for m in range(1, k + 1):
            s[k][m] = s[k - 1][m - 1] - (k - 1) * s[k - 1][m]
    return s


def strassmann_bound(coeffs: Sequence, p: int, precision: int) -> IdenticallyZeroAtPrecision | MaxZeros:
    """Strassmann bound for sum a_m t^m whose omitted tail has valuation >= precision."""
    vals = []
    for a in coeffs:
        a = as_rat(a)
        v = vp_rat(a, p)
        vals.append(precision if v is None else min(v, precision))
    mu = min(vals) if vals else precision
    if mu >= precision:
        return IdenticallyZeroAtPrecision(precision)
    t = max(i for i, v in enumerate(vals) if v == mu)
    return MaxZeros(t, precision)


def _tau(k: int, p: int) -> int:
    # lower bound for k - v_p(k!) from Legendre's formula
    return k - (k - 1) // (p - 1)


def _scaled_form(form: Sequence, p: int) -> list[Fraction]:
    lam = [as_rat(v) for v in form]
    vs = [vp_rat(v, p) for v in lam if v]
    if not vs:
        return lam
    return [v / Fraction(p) ** min(vs) for v in lam]


def strassmann_zero_bound(report: MahlerReport, form: Sequence) -> IdenticallyZeroAtPrecision | MaxZeros:
    """Zero bound in Z_p for j -> form(f^{c + j l}(start)), form = (lambda_0, lambda_1..lambda_N)."""
    p, K = report.p, report.K
    bad = report.violations()
    if bad:
        raise AnalyticityFailed(f"finite differences decay too slowly at (coordinate, k) = {bad[:5]}")
    lam = _scaled_form(form, p)
    lam0 = lam[0] * p**report.scale_exp
    q = p**K
    lam_mod = [reduce_rat(v, q) for v in [lam0] + lam[1:]]
    kmax = report.k_max
    b = []
    for k in range(kmax + 1):
        acc = lam_mod[0] if k == 0 else 0
        for i, diffs in enumerate(report.differences):
            acc += lam_mod[i + 1] * diffs[k]
        b.append(acc % q)
    K_eff = min(K - kmax, _tau(kmax + 1, p))
    if K_eff < 1:
        raise AnalyticityFailed("precision too low for the requested number of differences")
    s = stirling_first(kmax)
    coeffs = []
    for m in range(kmax + 1):
        acc = Fraction(0)
        for k in range(m, kmax + 1):
            if s[k][m] and b[k]:
                acc += Fraction(b[k] * s[k][m], factorial(k))
        coeffs.append(acc)
    return strassmann_bound(coeffs, p, K_eff)


# --------------------------------------------------------------------------
# classification per residue class
# --------------------------------------------------------------------------


ALL_ZEROS = "AllZerosAtPrecision"
FINITELY_MANY = "FinitelyMany"
UNCLASSIFIED = "Unclassified"


@dataclass
class ClassResult:
    c: int
    ell: int
    kind: str
    bound: int | None = None
    observed: list[int] = field(default_factory=list)
    reason: str = ""
    cross_checked: bool = False
    mahler: MahlerReport | None = None


@dataclass
class DMLReport:
    p: int
    K: int
    shift: int
    m: int
    ell: int
    prefix_zeros: list[int]
    classes: list[ClassResult]
    reason: str = ""


def _exact_form(form: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    return form[0] + sum((a * b for a, b in zip(form[1:], y) if a and b), Fraction(0))


def dml_classify(
    sys: SkewSystem,
    start: SkewPoint,
    form: Sequence,
    ctx: PadicContext,
    n_max: int,
    k_max: int = DEFAULT_K_MAX,
    cap: int = DEFAULT_ELL_CAP,
) -> DMLReport:
    """Classify the indices n <= n_max with form(f^n(start)) = 0, one residue class mod l at a time."""
    form = [as_rat(v) for v in form]
    if len(form) != sys.N + 1:
        raise ValueError(f"form needs {sys.N + 1} coefficients (constant term first)")
    choice = prime_choice_for(sys, start, ctx.p)
    att = attuned_iterate(sys, ctx, start, cap, choice)
    exact = SkewOrbit(sys, start, bit_budget=EXACT_BIT_BUDGET)

    def exactly_zero(n: int) -> bool:
        return not _exact_form(form, exact.fiber_at(n))

    if isinstance(att, NotFound):
        return DMLReport(ctx.p, ctx.K, choice.shift, -1, 0, [], [], reason=att.reason)
    m, ell = att.m, att.ell
    prefix = []
    for n in range(min(m, n_max + 1)):
        if exactly_zero(n):
            prefix.append(n)
    orb = PadicOrbit(sys, start, ctx.p, ctx.K, choice.shift)
    q = ctx.modulus
    lam = _scaled_form(form, ctx.p)
    lam_mod = [reduce_rat(lam[0] * ctx.p**orb.scale_exp, q)] + [reduce_rat(v, q) for v in lam[1:]]

    classes = []
    for c in range(m, m + ell):
        res = ClassResult(c, ell, UNCLASSIFIED)
        try:
            rep = mahler_profile(sys, ctx, start, (c, ell), k_max, choice, orb)
            res.mahler = rep
            verdict = strassmann_zero_bound(rep, form)
        except DomainError as exc:
            res.reason = str(exc)
            classes.append(res)
            continue
        try:
            candidates = []
            for n in range(c, n_max + 1, ell):
                s = orb.state(n)
                if (lam_mod[0] + sum(a * v for a, v in zip(lam_mod[1:], s[2:]))) % q == 0:
                    candidates.append(n)
            observed = [n for n in candidates if exactly_zero(n)]
        except ExactComputationTooLarge as exc:
            res.reason = str(exc)
            classes.append(res)
            continue
        res.observed = observed
        if isinstance(verdict, IdenticallyZeroAtPrecision):
            res.kind = ALL_ZEROS
            res.cross_checked = observed == list(range(c, n_max + 1, ell))
            if not res.cross_checked:
                res.reason = "exact evaluation found a nonzero term in an all-zero class"
        else:
            res.kind = FINITELY_MANY
            res.bound = verdict.bound
        classes.append(res)
    return DMLReport(ctx.p, ctx.K, choice.shift, m, ell, prefix, classes)
