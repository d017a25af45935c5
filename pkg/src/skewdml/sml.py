"""Non-autonomous linear recurrences a_{n+l} = sum_i h_i(g^n(alpha)) a_{n+i} and their zero sets."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .algebra import ProjPoint, RatFunc, RFMatrix, as_rat, to_ratfunc
from .base import DEFAULT_DEGREE_CAP, BaseMap
from .errors import CoefficientPole, DomainError, ExactComputationTooLarge, PoleError
from .skew import (
    LinearFamily,
    Relation,
    SkewOrbit,
    SkewPoint,
    SkewSystem,
    composed_system,
    invariance_certificate,
    kernel_family,
    min_sample_size,
    relations_from_rows,
)

log = logging.getLogger(__name__)

# base points above this many bits are not used for relation search
SAMPLE_BIT_BUDGET = 4096


@dataclass(frozen=True)
class Recurrence:
    order: int
    h: tuple[RatFunc, ...]
    g: BaseMap
    alpha: ProjPoint
    init: tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")
        if len(self.h) != self.order or len(self.init) != self.order:
            raise ValueError(
                f"order {self.order} needs {self.order} coefficients and initial terms, "
                f"got {len(self.h)} and {len(self.init)}"
            )

    @classmethod
    def make(cls, h: Sequence, g, alpha, init: Sequence) -> "Recurrence":
        g = g if isinstance(g, BaseMap) else BaseMap(g)
        return cls(len(h), tuple(to_ratfunc(c) for c in h), g, ProjPoint.of(alpha), tuple(as_rat(v) for v in init))


def companion_system(rec: Recurrence) -> tuple[SkewSystem, SkewPoint]:
    l = rec.order
    one, zero = RatFunc.const(1), RatFunc.const(0)
    rows = [[one if j == i + 1 else zero for j in range(l)] for i in range(l - 1)]
    rows.append(list(rec.h))
    return SkewSystem(rec.g, RFMatrix(rows)), SkewPoint(rec.alpha, rec.init)


def sequence_terms(rec: Recurrence, n_max: int) -> list[Fraction]:
    """a_0..a_{n_max} exactly.

    A coefficient is only evaluated when the term it multiplies is nonzero,
    so a pole against a zero term is harmless; otherwise it raises
    :class:`CoefficientPole`.
    """
    l = rec.order
    terms = list(rec.init[: n_max + 1])
    consts = [h.constant_value() if h.is_constant() else None for h in rec.h]
    bases = [rec.alpha]
    for n in range(0, n_max - l + 1):
        acc = Fraction(0)
        for i in range(l):
            a = terms[n + i]
            if not a:
                continue
            c = consts[i]
            if c is None:
                while len(bases) <= n:
                    bases.append(rec.g(bases[-1]))
                try:
                    c = rec.h[i].at(bases[n])
                except PoleError:
                    raise CoefficientPole(n, i) from None
            acc += c * a
        terms.append(acc)
    return terms


def zero_set(rec: Recurrence, n_max: int) -> list[int]:
    return [n for n, a in enumerate(sequence_terms(rec, n_max)) if not a]


# --------------------------------------------------------------------------
# progressions
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Consistent:
    preperiod: int
    period: int


@dataclass(frozen=True)
class Inconclusive:
    pass


@dataclass
class ProgressionSet:
    """Progressions (c, d) meaning {c + d n : n >= 0}; d = 0 is the singleton {c}."""

    progressions: list[tuple[int, int]]
    n_max: int
    verdict: Consistent | Inconclusive

    def members(self, n_max: int | None = None) -> list[int]:
        top = self.n_max if n_max is None else n_max
        out = set()
        for c, d in self.progressions:
            if d == 0:
                if c <= top:
                    out.add(c)
            else:
                out.update(range(c, top + 1, d))
        return sorted(out)


def _minimal_preperiod(ind: list[bool], n_max: int, P: int) -> int:
    for n in range(n_max - P, -1, -1):
        if ind[n] != ind[n + P]:
            return n + 1
    return 0


def decompose_progressions(
    zeros: Sequence[int], n_max: int, period_cap: int | None = None, margin: int = 3
) -> ProgressionSet:
    """Fit the zero indicator on [0, n_max] by an eventually periodic pattern.

    Takes the smallest period P <= period_cap (default n_max // 10) whose
    minimal preperiod M leaves at least ``margin`` full periods in the window.
    The periodic tail must also cover half the window; otherwise a short run
    of nonzero terms at the end would always fit P = 1.
    """
    if any(z < 0 or z > n_max for z in zeros):
        raise ValueError("zeros must lie in [0, n_max]")
    P_max = max(1, n_max // 10) if period_cap is None else period_cap
    ind = [False] * (n_max + 1)
    for z in zeros:
        ind[z] = True
    for P in range(1, P_max + 1):
        if P > n_max:
            break
        M = _minimal_preperiod(ind, n_max, P)
        if n_max - M < max(margin * P, n_max // 2):
            continue
        progs = [(z, 0) for z in sorted(set(zeros)) if z < M]
        progs += [(c, P) for c in range(M, M + P) if ind[c]]
        return ProgressionSet(progs, n_max, Consistent(M, P))
    return ProgressionSet([(z, 0) for z in sorted(set(zeros))], n_max, Inconclusive())


# --------------------------------------------------------------------------
# certification
# --------------------------------------------------------------------------


CERTIFIED = "Certified"
UNKNOWN = "Unknown"


@dataclass
class Certificate:
    progression: tuple[int, int]
    status: str
    relations: list[Relation] = field(default_factory=list)
    family: LinearFamily | None = None
    degree: int | None = None
    reason: str = ""

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED


def _contains_first_coordinate(relations: Sequence[Relation], N: int) -> bool:
    rows = [[RatFunc(c) for c in r.coeffs[1:]] for r in relations]
    if not rows:
        return False
    # y_1 = sum lambda_k R_k  <=>  R^T lambda = e_1
    RT = [[rows[k][j] for k in range(len(rows))] for j in range(N)]
    e1 = [[RatFunc.const(1 if j == 0 else 0)] for j in range(N)]
    return linalg.solve(RT, e1) is not None


def certify_progression(
    rec: Recurrence,
    prog: tuple[int, int],
    sample_len: int | None = None,
    degree_bound: int = 1,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> Certificate:
    """Try to prove a_{c + d n} = 0 for every n >= 0.

    Searches for homogeneous linear relations (degree <= D in x) on the
    sub-orbit f^{c + d j}(start), then checks that the subspace family they cut
    out contains the start point, lies in {y_1 = 0} and is invariant under
    the composed map f^d.
    """
    c, d = prog
    if d < 1:
        raise ValueError("singletons need no certificate")
    sys, start = companion_system(rec)
    N = sys.N
    need = min_sample_size(N, degree_bound)
    if sample_len is None:
        sample_len = max(20, need)
    orbit = SkewOrbit(sys, start, bit_budget=SAMPLE_BIT_BUDGET)
    try:
        fibers = [orbit.fiber_at(c + d * j) for j in range(sample_len + 1)]
    except DomainError as exc:
        return Certificate(prog, UNKNOWN, reason=f"sub-orbit not computable: {exc}")
    if any(f[0] for f in fibers):
        return Certificate(prog, UNKNOWN, reason="a sampled term is nonzero")
    try:
        comp = composed_system(sys, d, degree_cap)
    except DomainError as exc:
        return Certificate(prog, UNKNOWN, reason=f"composed system unavailable: {exc}")

    last = "no relation family contains y_1"
    for D in range(degree_bound + 1):
        if D == 0:
            rows = [(None, f) for f in fibers]
        else:
            try:
                xs = [orbit.base_at(c + d * j) for j in range(sample_len + 1)]
            except ExactComputationTooLarge as exc:
                last = f"base points too large for degree {D}: {exc}"
                break
            if any(x.is_infinity for x in xs):
                last = "sub-orbit passes through infinity"
                break
            rows = [(Fraction(x.a, x.b), f) for x, f in zip(xs, fibers)]
        rels = relations_from_rows(rows, N, D, constant_term=False)
        if not _contains_first_coordinate(rels, N):
            continue
        fam = kernel_family(rels, N)
        if not invariance_certificate(comp, fam):
            last = f"family from degree-{D} relations is not invariant under f^{d}"
            continue
        x0 = rows[0][0]
        if any(r(x0, fibers[0]) for r in rels):
            last = "start point violates the relations"
            continue
        return Certificate(prog, CERTIFIED, rels, fam, D)
    return Certificate(prog, UNKNOWN, reason=last)
