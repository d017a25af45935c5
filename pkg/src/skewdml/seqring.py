"""Sequences modulo eventual equality, at finite truncation.

A :class:`Seq` stores exact values on a window [n0, T].  Two sequences are
equal when they agree wherever both are defined; the shift drops one term.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import linalg
from .algebra import Poly, ProjPoint, RatFunc, as_rat, bareiss_det, mat_mul
from .base import BaseMap, weil_height
from .errors import (
    DomainError,
    ExactComputationTooLarge,
    NotIdempotentSystem,
    OrbitFinite,
    PoleError,
    SingularTail,
)
from .skew import SkewSystem, eval_matrix, identity
from .sml import Certificate, Recurrence, certify_progression, decompose_progressions

log = logging.getLogger(__name__)

DEFAULT_TRUNCATION = 2000
ORBIT_BIT_BUDGET = 1 << 20


class Seq:
    __slots__ = ("n0", "values", "provenance")

    def __init__(self, n0: int, values: Sequence, provenance: str = ""):
        if n0 < 0:
            raise ValueError("n0 must be >= 0")
        self.n0 = n0
        self.values = tuple(as_rat(v) for v in values)
        self.provenance = provenance

    @property
    def T(self) -> int:
        return self.n0 + len(self.values) - 1

    def __getitem__(self, n: int) -> Fraction:
        if not self.n0 <= n <= self.T:
            raise IndexError(f"index {n} outside window [{self.n0}, {self.T}]")
        return self.values[n - self.n0]

    def __len__(self) -> int:
        return len(self.values)

    def window(self, other: "Seq") -> range:
        return range(max(self.n0, other.n0), min(self.T, other.T) + 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Seq):
            return NotImplemented
        return all(self[n] == other[n] for n in self.window(other))

    __hash__ = None

    def __repr__(self) -> str:
        head = ", ".join(str(v) for v in self.values[:6])
        more = ", ..." if len(self.values) > 6 else ""
        return f"Seq(n0={self.n0}, T={self.T}, [{head}{more}], {self.provenance!r})"

    def _combine(self, other, op: Callable, sym: str) -> "Seq":
        if not isinstance(other, Seq):
            c = as_rat(other)
            return Seq(self.n0, [op(v, c) for v in self.values], f"({self.provenance} {sym} {c})")
        w = self.window(other)
        return Seq(w.start, [op(self[n], other[n]) for n in w], f"({self.provenance} {sym} {other.provenance})")

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b, "+")

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b, "-")

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b, "*")

    __rmul__ = __mul__

    def __neg__(self):
        return Seq(self.n0, [-v for v in self.values], f"-{self.provenance}")

    def zeros(self) -> list[int]:
        return [self.n0 + i for i, v in enumerate(self.values) if not v]

    @classmethod
    def constant(cls, c, T: int = DEFAULT_TRUNCATION) -> "Seq":
        return cls(0, [as_rat(c)] * (T + 1), f"const({as_rat(c)})")


def shift_sigma(s: Seq) -> Seq:
    """(sigma s)(n) = s(n + 1)."""
    if s.n0 >= 1:
        return Seq(s.n0 - 1, s.values, f"sigma({s.provenance})")
    return Seq(0, s.values[1:], f"sigma({s.provenance})")


def shift_by(s: Seq, k: int) -> Seq:
    for _ in range(k):
        s = shift_sigma(s)
    return s


def _base_points(g: BaseMap, alpha: ProjPoint, T: int, budget: int = ORBIT_BIT_BUDGET) -> list[ProjPoint]:
    pts = [alpha]
    for n in range(T):
        nxt = g(pts[-1])
        if weil_height(nxt).bit_length() > budget:
            raise ExactComputationTooLarge(f"base orbit point {n + 1} exceeds {budget} bits")
        pts.append(nxt)
    return pts


def embed_ratfunc(h, g: BaseMap, alpha, T: int = DEFAULT_TRUNCATION) -> Seq:
    """The sequence n -> h(g^n(alpha)), defined after its last pole in the window."""
    h = RatFunc(h) if isinstance(h, Poly) else h if isinstance(h, RatFunc) else RatFunc.const(h)
    alpha = ProjPoint.of(alpha) if not isinstance(alpha, ProjPoint) else alpha
    if h.is_constant():
        return Seq(0, [h.constant_value()] * (T + 1), f"embed({h})")
    pts = _base_points(g, alpha, T)
    if len(set(pts)) < len(pts):
        raise OrbitFinite(f"base orbit of {alpha} repeats within {T} steps")
    vals: list[Fraction | None] = []
    last_pole = -1
    for n, pt in enumerate(pts):
        try:
            vals.append(h.at(pt))
        except PoleError:
            vals.append(None)
            last_pole = n
    n0 = last_pole + 1
    if n0 > T:
        raise OrbitFinite("no defined values in the window")
    return Seq(n0, vals[n0:], f"embed({h})")


# --------------------------------------------------------------------------
# fundamental matrices
# --------------------------------------------------------------------------


@dataclass
class FundMatrix:
    n0: int
    values: list[list[list[Fraction]]]
    dets: list[Fraction]

    @property
    def T(self) -> int:
        return self.n0 + len(self.values) - 1

    def at(self, n: int) -> list[list[Fraction]]:
        return self.values[n - self.n0]

    def entry(self, i: int, j: int) -> Seq:
        return Seq(self.n0, [Y[i][j] for Y in self.values], f"Y[{i},{j}]")

    def inverse_det(self) -> Seq:
        return Seq(self.n0, [1 / d for d in self.dets], "1/det Y")


def _det(M: list[list[Fraction]]) -> Fraction:
    return as_rat(bareiss_det([row[:] for row in M]))


def fundamental_matrix(sys: SkewSystem, alpha, T: int = DEFAULT_TRUNCATION) -> FundMatrix:
    """Y(n0) = I and Y(n + 1) = A(g^n alpha) Y(n) on [n0, T], with n0 past every singular visit."""
    alpha = ProjPoint.of(alpha) if not isinstance(alpha, ProjPoint) else alpha
    N = sys.N
    if sys.A.is_constant():
        A = eval_matrix(sys.A, alpha)
        dA = _det(A)
        if not dA:
            raise SingularTail("constant A is singular")
        mats = [A] * T
        n0 = 0
    else:
        pts = _base_points(sys.g, alpha, T)
        mats, bad = [], []
        for n, pt in enumerate(pts[:T]):
            try:
                M = sys.A.at(pt)
            except PoleError:
                mats.append(None)
                bad.append(n)
                continue
            if not _det(M):
                bad.append(n)
            mats.append(M)
        seen: dict[ProjPoint, int] = {}
        for n, pt in enumerate(pts):
            if pt in seen:
                m = seen[pt]
                if any(m <= b for b in bad):
                    raise SingularTail(f"base orbit cycles through a singular point (cycle from step {m})")
                break
            seen[pt] = n
        n0 = (max(bad) + 1) if bad else 0
        if n0 >= T:
            raise SingularTail(f"orbit is singular at step {n0 - 1}; no invertible tail in [0, {T}]")
    Y = identity(N)
    values, dets = [Y], [Fraction(1)]
    for n in range(n0, T):
        M = mats[n]
        Y = mat_mul(M, Y)
        d = dets[-1] * _det(M)
        if not d:
            raise SingularTail(f"det Y vanishes at {n + 1}")
        values.append(Y)
        dets.append(d)
    return FundMatrix(n0, values, dets)


# --------------------------------------------------------------------------
# recurrence discovery
# --------------------------------------------------------------------------


def min_window(max_order: int, degree_bound: int) -> int:
    return (max_order + 1) * (degree_bound + 1) + max_order + 5


def find_linear_recurrence(
    s: Seq,
    g: BaseMap,
    alpha,
    max_order: int,
    degree_bound: int,
    min_holdout: int = 0,
) -> Recurrence | None:
    """Smallest-order recurrence s(n + r) = sum_i h_i(g^n alpha) s(n + i), deg h_i <= D.

    The coefficients are written h_i = P_i / Q and the linearized system
    sum P_i(x_n) s(n+i) - Q(x_n) s(n+r) = 0 is solved exactly on a training
    prefix, then checked on every remaining index of the window.
    """
    alpha = ProjPoint.of(alpha) if not isinstance(alpha, ProjPoint) else alpha
    D = degree_bound
    if len(s) < min_window(max_order, D):
        raise ValueError(f"window of {len(s)} terms is too short (need {min_window(max_order, D)})")
    xs: list[Fraction] | None = None
    if D > 0:
        pts = _base_points(g, alpha, s.T)
        if any(pt.is_infinity for pt in pts[s.n0:]):
            return None
        xs = [Fraction(pt.a, pt.b) for pt in pts]
    for r in range(1, max_order + 1):
        idx = list(range(s.n0, s.T - r + 1))
        unknowns = (r + 1) * (D + 1)
        train = idx[: unknowns + 5]
        held = idx[unknowns + 5:]
        if len(train) < unknowns + 5 or len(held) < min_holdout:
            continue

        def row(n):
            xp = [Fraction(1)]
            for _ in range(D):
                xp.append(xp[-1] * xs[n])
            # unknown order: Q then P_0..P_{r-1}, each D+1 coefficients
            out = [-s[n + r] * c for c in xp]
            for i in range(r):
                out += [s[n + i] * c for c in xp]
            return out

        kernel = linalg.nullspace([row(n) for n in train], unknowns)
        best = None
        for v in kernel:
            Q = Poly(v[: D + 1])
            if Q and (best is None or Q.degree < best[0].degree):
                best = (Q, v)
        if best is None:
            continue
        Q, v = best
        h = [RatFunc(Poly(v[(i + 1) * (D + 1):(i + 2) * (D + 1)]), Q) for i in range(r)]
        if _verifies(s, h, xs, r, idx):
            n0 = s.n0
            a0 = ProjPoint.of(xs[n0]) if xs is not None else _iterate(g, alpha, n0)
            return Recurrence(r, tuple(h), g, a0, tuple(s[n0 + i] for i in range(r)))
    return None


def _iterate(g: BaseMap, alpha: ProjPoint, n: int) -> ProjPoint:
    for _ in range(n):
        alpha = g(alpha)
    return alpha


def _verifies(s: Seq, h: list[RatFunc], xs, r: int, idx: Sequence[int]) -> bool:
    for n in idx:
        acc = Fraction(0)
        for i, hi in enumerate(h):
            if not hi or not s[n + i]:
                continue
            try:
                c = hi.constant_value() if hi.is_constant() else hi(xs[n])
            except PoleError:
                return False
            acc += c * s[n + i]
        if acc != s[n + r]:
            return False
    return True


# --------------------------------------------------------------------------
# units and zero divisors
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class UnitCandidate:
    zeros: tuple[int, ...]


@dataclass(frozen=True)
class ZeroDivisor:
    d: int
    certificate: Certificate
    witness_window: tuple[int, int]


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    zeros: tuple[int, ...] = ()


def shift_product(s: Seq, d: int) -> Seq:
    """a * sigma(a) * ... * sigma^d(a)."""
    out = s
    cur = s
    for _ in range(d):
        cur = shift_sigma(cur)
        out = out * cur
    return out


def classify_element(
    s: Seq,
    rec: Recurrence | None = None,
    g: BaseMap | None = None,
    alpha=None,
    max_order: int = 2,
    degree_bound: int = 0,
    period_cap: int | None = None,
    margin: int = 3,
) -> UnitCandidate | ZeroDivisor | Inconclusive:
    """Decide whether ``s`` looks like a unit or is a certified zero divisor.

    Finitely many zeros on the window give a unit candidate.  Otherwise the
    periodic progressions are certified with ``rec``, which must generate s
    from index s.n0 on; without it one is searched for along (g, alpha).
    """
    zeros = s.zeros()
    local = [z - s.n0 for z in zeros]
    n_max = len(s) - 1
    ps = decompose_progressions(local, n_max, period_cap, margin)
    periodic = [(c, d) for c, d in ps.progressions if d >= 1]
    if not periodic:
        return UnitCandidate(tuple(zeros))
    if rec is None:
        if g is None or alpha is None:
            raise ValueError("need a recurrence or a base map and point to search for one")
        rec = find_linear_recurrence(s, g, alpha, max_order, degree_bound)
        if rec is None:
            return Inconclusive("no recurrence found", tuple(zeros))
    for c, d in periodic:
        try:
            cert = certify_progression(rec, (c, d))
        except DomainError as exc:
            log.info("certification of (%d, %d) failed: %s", c, d, exc)
            continue
        if cert.certified:
            c_abs = c + s.n0
            prod = shift_product(s, d)
            window = range(c_abs, prod.T + 1)
            if any(prod[n] for n in window):
                raise AssertionError("certified progression but the shift product is nonzero")
            return ZeroDivisor(d, cert, (c_abs, prod.T))
    return Inconclusive("zeros look periodic but no progression could be certified", tuple(zeros))


def idempotent_cycle_check(indicators: Sequence[Seq]) -> bool:
    """True iff sigma permutes the indicator sequences in a single cycle."""
    r = len(indicators)
    if r == 0:
        raise NotIdempotentSystem("no indicators")
    lo = max(e.n0 for e in indicators)
    hi = min(e.T for e in indicators)
    if hi - lo < 2 * r:
        raise NotIdempotentSystem("shared window too short")
    for n in range(lo, hi + 1):
        vals = [e[n] for e in indicators]
        if any(v not in (0, 1) for v in vals):
            raise NotIdempotentSystem(f"indicator value outside {{0, 1}} at n={n}")
        if sum(vals) != 1:
            # pairwise products vanish and the sum is 1 iff exactly one value is 1
            raise NotIdempotentSystem(f"indicators are not orthogonal with sum 1 at n={n}")
    image = []
    for e in indicators:
        se = shift_sigma(e)
        hits = [j for j, f in enumerate(indicators) if se == f]
        if len(hits) != 1:
            return False
        image.append(hits[0])
    if sorted(image) != list(range(r)):
        return False
    # a single cycle: following sigma from 0 visits everything
    seen, i = set(), 0
    while i not in seen:
        seen.add(i)
        i = image[i]
    if len(seen) != r:
        return False
    total = indicators[0]
    for e in indicators[1:]:
        total = total + e
    return all(v == 1 for v in total.values)
