"""Skew-linear systems f(x, y) = (g(x), A(x) y) over P^1 x A^N."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .algebra import Poly, ProjPoint, RatFunc, RFMatrix, as_rat, matrix_det, mat_mul, poly_gcd
from .base import DEFAULT_DEGREE_CAP, BaseMap, weil_height
from .errors import DegreeOverflow, ExactComputationTooLarge, HitIndeterminacy, PoleError

log = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class SkewSystem:
    g: BaseMap
    A: RFMatrix

    def __post_init__(self):
        if self.A.rows != self.A.cols:
            raise ValueError(f"A must be square, got {self.A.rows}x{self.A.cols}")

    @property
    def N(self) -> int:
        return self.A.rows


@dataclass(frozen=True)
class SkewPoint:
    base: ProjPoint
    fiber: tuple[Fraction, ...]

    @classmethod
    def of(cls, base, fiber: Iterable) -> "SkewPoint":
        return cls(ProjPoint.of(base), tuple(as_rat(v) for v in fiber))

    def __str__(self) -> str:
        return f"({self.base}, [{', '.join(str(v) for v in self.fiber)}])"


# --------------------------------------------------------------------------
# singular locus
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SingularLocus:
    """Base points where the fiber map is not an isomorphism, kept as polynomials.

    ``det_numerator`` is the zero polynomial when det A vanishes identically,
    in which case every base point is singular.
    """

    det_numerator: Poly
    pole_locus: Poly
    includes_infinity: bool

    def contains(self, pt: ProjPoint) -> bool:
        if pt.is_infinity:
            return self.includes_infinity
        x = Fraction(pt.a, pt.b)
        if not self.det_numerator:
            return True
        return not self.det_numerator(x) or not self.pole_locus(x)


def singular_locus(sys: SkewSystem) -> SingularLocus:
    det = matrix_det(sys.A)
    det_num = det.num.squarefree_part() if det else Poly()
    pole = Poly.const(1)
    at_inf = False
    for row in sys.A.entries:
        for e in row:
            if e.den.degree > 0:
                pole = pole * e.den.exact_div(poly_gcd(pole, e.den))
            if e.num.degree > e.den.degree:
                at_inf = True
    if not det or det.num.degree < det.den.degree or det.num.degree > det.den.degree:
        # det has a zero or a pole at infinity (or vanishes identically)
        at_inf = True
    return SingularLocus(det_num, pole.squarefree_part(), at_inf)


# --------------------------------------------------------------------------
# lazy exact orbits
# --------------------------------------------------------------------------


class SkewOrbit:
    """Exact forward orbit, computed lazily.

    Base points are only computed when a nonconstant entry of A has to be
    evaluated, i.e. when it multiplies a nonzero fiber coordinate.  A pole
    that multiplies a zero coordinate is cancelled (the product is 0); a pole
    that multiplies a nonzero coordinate raises :class:`HitIndeterminacy`.

    ``bit_budget`` caps the size of base points; exceeding it raises
    :class:`ExactComputationTooLarge` instead of stalling.
    """

    def __init__(self, sys: SkewSystem, start: SkewPoint, bit_budget: int | None = None):
        if len(start.fiber) != sys.N:
            raise ValueError(f"fiber has {len(start.fiber)} coordinates, system has N={sys.N}")
        self.sys = sys
        self.bit_budget = bit_budget
        self._bases: list[ProjPoint] = [start.base]
        self._fibers: list[tuple[Fraction, ...]] = [start.fiber]
        self._columns = []
        for j in range(sys.N):
            col = []
            for i in range(sys.N):
                e = sys.A[i, j]
                if e:
                    col.append((i, e, e.constant_value() if e.is_constant() else None))
            self._columns.append(col)

    def base_at(self, n: int) -> ProjPoint:
        bases = self._bases
        while len(bases) <= n:
            nxt = self.sys.g(bases[-1])
            if self.bit_budget is not None and weil_height(nxt).bit_length() > self.bit_budget:
                raise ExactComputationTooLarge(
                    f"base point g^{len(bases)}(alpha) exceeds {self.bit_budget} bits"
                )
            bases.append(nxt)
        return bases[n]

    def fiber_at(self, n: int) -> tuple[Fraction, ...]:
        fibers = self._fibers
        while len(fibers) <= n:
            fibers.append(self._step(len(fibers) - 1))
        return fibers[n]

    def point(self, n: int) -> SkewPoint:
        return SkewPoint(self.base_at(n), self.fiber_at(n))

    def _step(self, k: int) -> tuple[Fraction, ...]:
        y = self._fibers[k]
        out = [ZERO] * self.sys.N
        for j, yj in enumerate(y):
            if not yj:
                continue
            for i, e, c in self._columns[j]:
                if c is None:
                    try:
                        c = e.at(self.base_at(k))
                    except PoleError as exc:
                        raise HitIndeterminacy(k, str(exc)) from None
                out[i] += c * yj
        return tuple(out)


def iterate_skew(sys: SkewSystem, pt: SkewPoint, n: int) -> SkewPoint:
    return SkewOrbit(sys, pt).point(n)


def eval_matrix(A: RFMatrix, pt: ProjPoint, step: int = 0) -> list[list[Fraction]]:
    try:
        return A.at(pt)
    except PoleError as exc:
        raise HitIndeterminacy(step, str(exc)) from None


def identity(n: int) -> list[list[Fraction]]:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def cocycle(sys: SkewSystem, alpha: ProjPoint, n: int) -> list[list[Fraction]]:
    """A(g^{n-1} alpha) ... A(alpha) as an exact rational matrix."""
    P = identity(sys.N)
    x = alpha
    const = sys.A.is_constant()
    for k in range(n):
        P = mat_mul(eval_matrix(sys.A, x, k), P)
        if k + 1 < n and not const:
            x = sys.g(x)
    return P


def symbolic_cocycle(sys: SkewSystem, n: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> RFMatrix:
    """P_n(x) = A(g^{n-1}(x)) ... A(x) over Q(x)."""
    P = RFMatrix.identity(sys.N)
    if sys.A.is_constant():
        for _ in range(n):
            P = sys.A @ P
        return P
    gk = RatFunc.x()
    for k in range(n):
        if gk.degree * max(sys.A.max_degree(), 1) > degree_cap:
            raise DegreeOverflow(f"A(g^{k}(x)) has degree above cap {degree_cap}")
        Ak = sys.A if k == 0 else sys.A.compose(gk)
        P = Ak @ P
        if P.max_degree() > degree_cap:
            raise DegreeOverflow(f"cocycle P_{k + 1} has entry degree {P.max_degree()} > {degree_cap}")
        gk = sys.g.h.compose(gk)
    return P


def composed_system(sys: SkewSystem, d: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> SkewSystem:
    """The d-th iterate f^d as a skew system (g^d, P_d)."""
    return SkewSystem(BaseMap(sys.g.power(d, degree_cap)), symbolic_cocycle(sys, d, degree_cap))


# --------------------------------------------------------------------------
# orbit ∩ variety
# --------------------------------------------------------------------------


class MPoly:
    """Polynomial in x, y_1..y_N over Q; keys are exponent tuples (e_x, e_y1, ..., e_yN)."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms: Mapping[tuple[int, ...], object], nvars: int):
        self.nvars = nvars
        clean = {}
        for k, c in terms.items():
            if len(k) != nvars + 1:
                raise ValueError(f"exponent {k} does not have {nvars + 1} entries")
            c = as_rat(c)
            if c:
                clean[tuple(k)] = clean.get(tuple(k), ZERO) + c
        self.terms = {k: c for k, c in clean.items() if c}

    @classmethod
    def constant(cls, c, nvars: int) -> "MPoly":
        return cls({(0,) * (nvars + 1): c}, nvars)

    @classmethod
    def coordinate(cls, j: int, nvars: int) -> "MPoly":
        """The coordinate function y_j (1-based)."""
        e = [0] * (nvars + 1)
        e[j] = 1
        return cls({tuple(e): 1}, nvars)

    def involves_x(self) -> bool:
        return any(k[0] for k in self.terms)

    def __call__(self, x: Fraction | None, y: Sequence[Fraction]) -> Fraction:
        total = ZERO
        for k, c in self.terms.items():
            v = c
            if k[0]:
                v *= x ** k[0]
            for e, yj in zip(k[1:], y):
                if e:
                    v *= yj**e
            total += v
        return total

    def __eq__(self, other) -> bool:
        return isinstance(other, MPoly) and self.nvars == other.nvars and self.terms == other.terms

    __hash__ = None

    def __repr__(self) -> str:
        return f"MPoly({self.terms!r}, {self.nvars})"


@dataclass
class OrbitHits:
    indices: list[int]
    truncated_at: int | None = None
    reason: str = ""


def orbit_intersection(sys: SkewSystem, start: SkewPoint, variety: Sequence[MPoly], n_max: int) -> OrbitHits:
    """Indices n <= n_max with every polynomial of ``variety`` vanishing at f^n(start)."""
    orbit = SkewOrbit(sys, start)
    needs_x = any(p.involves_x() for p in variety)
    hits = []
    for n in range(n_max + 1):
        try:
            y = orbit.fiber_at(n)
            pt = orbit.base_at(n) if needs_x else None
        except HitIndeterminacy as exc:
            log.warning("orbit truncated at step %d: %s", n, exc)
            return OrbitHits(hits, truncated_at=n, reason=str(exc))
        if pt is not None and pt.is_infinity:
            continue
        x = Fraction(pt.a, pt.b) if pt is not None else None
        if all(not p(x, y) for p in variety):
            hits.append(n)
    return OrbitHits(hits)


# --------------------------------------------------------------------------
# families of linear subspaces
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearFamily:
    """Subspace family V(x) spanned by the given columns over Q(x); may be zero-dimensional."""

    N: int
    columns: tuple[tuple[RatFunc, ...], ...] = ()

    @property
    def rank(self) -> int:
        return len(self.columns)

    def matrix_rows(self) -> list[list[RatFunc]]:
        return [[c[i] for c in self.columns] for i in range(self.N)]

    def compose(self, inner: RatFunc) -> "LinearFamily":
        return LinearFamily(self.N, tuple(tuple(e.compose(inner) for e in c) for c in self.columns))

    def at(self, pt: ProjPoint) -> list[list[Fraction]]:
        """Columns evaluated at a base point (N x r rows)."""
        return [[c[i].at(pt) for c in self.columns] for i in range(self.N)]

    def contains(self, pt: SkewPoint) -> bool:
        """Exact membership of ``pt.fiber`` in V(pt.base) by a linear solve over Q."""
        if not any(pt.fiber):
            return True
        if not self.columns:
            return False
        B = self.at(pt.base)
        return linalg.solve(B, [[v] for v in pt.fiber]) is not None

    @classmethod
    def from_matrix_columns(cls, M: RFMatrix, cols: Sequence[int]) -> "LinearFamily":
        return cls(M.rows, tuple(M.column(j) for j in cols))


@dataclass(frozen=True)
class InvarianceCertificate:
    holds: bool
    T: tuple[tuple[RatFunc, ...], ...] | None = None

    def __bool__(self) -> bool:
        return self.holds


def invariance_certificate(sys: SkewSystem, fam: LinearFamily) -> InvarianceCertificate:
    """Decide A(x) V(x) ⊆ V(g(x)) by solving A(x) B(x) = B(g(x)) T(x) over Q(x)."""
    if fam.rank == 0:
        return InvarianceCertificate(True, ())
    B = fam.matrix_rows()
    AB = [[sum((sys.A[i, t] * B[t][j] for t in range(sys.N)), RatFunc.const(0)) for j in range(fam.rank)]
          for i in range(sys.N)]
    Bg = fam.compose(sys.g.h).matrix_rows()
    T = linalg.solve(Bg, AB)
    if T is None:
        return InvarianceCertificate(False)
    return InvarianceCertificate(True, tuple(tuple(r) for r in T))


@dataclass
class Filtration:
    step: int
    rank: int
    basis: LinearFamily
    invariant: InvarianceCertificate
    ranks: list[int]
    basis_certified: bool  # False when deg g >= 2: only the rank is certified


def image_filtration(sys: SkewSystem, degree_cap: int = DEFAULT_DEGREE_CAP) -> Filtration:
    """Ranks of the cocycles P_n over Q(x) until they stabilize, plus a basis of the limit.

    For invertible g the basis is transported back along g^{-step}, so that it
    describes the image subbundle over the base point it actually lies over.
    """
    N = sys.N
    P = RFMatrix.identity(N)
    ranks = [N]
    n = 0
    gk = RatFunc.x()
    while True:
        if n > 0 and not sys.A.is_constant():
            gk = sys.g.h.compose(gk)
        Ak = sys.A if (n == 0 or sys.A.is_constant()) else sys.A.compose(gk)
        Pn = Ak @ P
        if Pn.max_degree() > degree_cap:
            raise DegreeOverflow(f"cocycle degree {Pn.max_degree()} exceeds cap {degree_cap}")
        r = Pn.rank()
        ranks.append(r)
        if r == ranks[-2]:
            break
        P = Pn
        n += 1
    step = n
    rk = ranks[-1]
    if sys.g.degree == 1 and step > 0:
        inv = sys.g.inverse().power(step, degree_cap) if step else RatFunc.x()
        Pt = P.compose(inv)
        certified = True
    else:
        Pt = P
        certified = sys.g.degree == 1 or step == 0
    cols = linalg.column_basis([list(r) for r in Pt.entries])
    fam = LinearFamily.from_matrix_columns(Pt, cols)
    return Filtration(step, rk, fam, invariance_certificate(sys, fam), ranks[:-1], certified)


# --------------------------------------------------------------------------
# linear relations on samples
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Relation:
    """c_0(x) + sum_j c_j(x) y_j; ``coeffs[0]`` is the constant term c_0."""

    coeffs: tuple[Poly, ...]

    def __call__(self, x: Fraction | None, y: Sequence[Fraction]) -> Fraction:
        def ev(p: Poly) -> Fraction:
            if p.degree <= 0:
                return p.constant_value()
            return p(x)

        total = ev(self.coeffs[0])
        for c, v in zip(self.coeffs[1:], y):
            if v and c:
                total += ev(c) * v
        return total

    @property
    def is_homogeneous(self) -> bool:
        return not self.coeffs[0]

    def __str__(self) -> str:
        parts = []
        for j, c in enumerate(self.coeffs):
            if c:
                parts.append(f"({c})" + (f"*y{j}" if j else ""))
        return " + ".join(parts) or "0"


def min_sample_size(N: int, degree_bound: int) -> int:
    return (degree_bound + 1) * (N + 1) + 5


def relations_from_rows(
    rows: Sequence[tuple[Fraction | None, Sequence[Fraction]]],
    N: int,
    degree_bound: int,
    constant_term: bool = True,
) -> list[Relation]:
    """Kernel of the evaluation map on (x, y) samples; x may be None when degree_bound = 0."""
    D = degree_bound
    first = 0 if constant_term else 1
    mat = []
    for x, y in rows:
        if D > 0 and x is None:
            raise ValueError("positive degree bound needs affine base coordinates")
        xp = [ONE]
        for _ in range(D):
            xp.append(xp[-1] * x)
        vals = [ONE] + list(y)
        mat.append([vals[j] * xp[k] for j in range(first, N + 1) for k in range(D + 1)])
    ncols = (N + 1 - first) * (D + 1)
    kernel = linalg.nullspace(mat, ncols)
    if kernel:
        kernel, _ = linalg.rref(kernel)
    rels = []
    for v in kernel:
        cs = [Poly()] * first
        for j in range(N + 1 - first):
            cs.append(Poly(v[j * (D + 1):(j + 1) * (D + 1)]))
        rels.append(Relation(tuple(cs)))
    return rels


def discover_linear_relations(sample: Sequence[SkewPoint], degree_bound: int, constant_term: bool = True) -> list[Relation]:
    """Reduced-echelon basis of the relations c_0(x) + sum c_j(x) y_j (deg c_j <= D) vanishing on ``sample``."""
    if not sample:
        raise ValueError("empty sample")
    N = len(sample[0].fiber)
    if len(sample) < min_sample_size(N, degree_bound):
        log.warning("relation search on %d points is below the oversampling margin (%d)",
                    len(sample), min_sample_size(N, degree_bound))
    rows = []
    for pt in sample:
        if pt.base.is_infinity:
            raise ValueError("relation discovery needs affine base points")
        rows.append((Fraction(pt.base.a, pt.base.b), pt.fiber))
    return relations_from_rows(rows, N, degree_bound, constant_term)


def kernel_family(relations: Sequence[Relation], N: int) -> LinearFamily:
    """The subspace family cut out by homogeneous relations, as a column basis over Q(x)."""
    rows = [[RatFunc(c) for c in rel.coeffs[1:]] for rel in relations if rel.is_homogeneous]
    if not rows:
        return LinearFamily(N, tuple(tuple(RatFunc.const(1 if i == j else 0) for i in range(N)) for j in range(N)))
    basis = linalg.nullspace(rows, N, zero=RatFunc.const(0), one=RatFunc.const(1))
    return LinearFamily(N, tuple(tuple(v) for v in basis))
