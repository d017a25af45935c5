"""Dynamics of a rational map g on P^1(Q)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator

from .algebra import Poly, ProjPoint, RatFunc, homogeneous_resultant, lcm, ratfunc_eval, to_ratfunc
from .errors import DegreeOverflow, DegreeTooHigh

DEFAULT_HEIGHT_CAP = 10**100
DEFAULT_STEP_CAP = 2000
DEFAULT_DEGREE_CAP = 512


def homogeneous_forms(h: RatFunc) -> tuple[int, list[int], list[int]]:
    """Integer binary forms (F, G) of degree d with h = F(X,Y)/G(X,Y), jointly primitive."""
    d = h.degree
    den = 1
    for c in h.num.coeffs + h.den.coeffs:
        den = lcm(den, c.denominator)
    F = [int(c * den) for c in h.num.coeffs]
    G = [int(c * den) for c in h.den.coeffs]
    content = 0
    for v in F + G:
        content = gcd(content, v)
    F = [v // content for v in F] + [0] * (d + 1 - len(F))
    G = [v // content for v in G] + [0] * (d + 1 - len(G))
    return d, F, G


def eval_form(coeffs: list[int], a: int, b: int, d: int) -> int:
    """sum_i c_i a^i b^(d-i)."""
    total = 0
    apow = 1
    bpows = [1]
    for _ in range(d):
        bpows.append(bpows[-1] * b)
    for i, c in enumerate(coeffs):
        if c:
            total += c * apow * bpows[d - i]
        apow *= a
    return total


class BaseMap:
    """A rational self-map g of P^1 of degree >= 1 with coprime num/den."""

    __slots__ = ("h", "degree", "_F", "_G")

    def __init__(self, h):
        h = to_ratfunc(h)
        d, F, G = homogeneous_forms(h)
        if d < 1:
            raise ValueError(f"base map must have degree >= 1, got constant {h}")
        if homogeneous_resultant(F, G, d) == 0:
            raise ValueError(f"numerator and denominator of {h} share a root")
        self.h = h
        self.degree = d
        self._F, self._G = F, G

    @classmethod
    def polynomial(cls, coeffs) -> "BaseMap":
        return cls(RatFunc(Poly(coeffs)))

    def __eq__(self, other) -> bool:
        return isinstance(other, BaseMap) and self.h == other.h

    def __hash__(self) -> int:
        return hash(("BaseMap", self.h))

    def __repr__(self) -> str:
        return f"BaseMap({self.h})"

    @property
    def forms(self) -> tuple[int, list[int], list[int]]:
        return self.degree, self._F, self._G

    def __call__(self, pt: ProjPoint) -> ProjPoint:
        d = self.degree
        return ProjPoint(eval_form(self._F, pt.a, pt.b, d), eval_form(self._G, pt.a, pt.b, d))

    def power(self, n: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> RatFunc:
        """Symbolic n-th iterate g∘...∘g as a rational function."""
        if self.degree**n > degree_cap:
            raise DegreeOverflow(f"deg g^{n} = {self.degree}^{n} exceeds cap {degree_cap}")
        result = RatFunc.x()
        for _ in range(n):
            result = self.h.compose(result)
        return result

    def inverse(self) -> "BaseMap":
        """Inverse Möbius transformation; only for degree 1."""
        if self.degree != 1:
            raise DegreeTooHigh("only degree-1 maps are invertible")
        # g = (a x + b) / (c x + d)
        b, a = (list(self.h.num.coeffs) + [Fraction(0)] * 2)[:2]
        d, c = (list(self.h.den.coeffs) + [Fraction(0)] * 2)[:2]
        return BaseMap(RatFunc(Poly([-b, d]), Poly([a, -c])))


def map_degree(g: BaseMap) -> int:
    return g.degree


def iterate_base(g: BaseMap, alpha: ProjPoint, n: int) -> ProjPoint:
    pt = alpha
    for _ in range(n):
        pt = g(pt)
    return pt


def base_orbit(g: BaseMap, alpha: ProjPoint) -> Iterator[ProjPoint]:
    pt = alpha
    while True:
        yield pt
        pt = g(pt)


def weil_height(pt: ProjPoint) -> int:
    return max(abs(pt.a), abs(pt.b))


def compose_eval(g: BaseMap, n: int, alpha: ProjPoint) -> ProjPoint:
    """Evaluate the symbolically composed g^n at alpha (independent of iterate_base)."""
    return ratfunc_eval(g.power(n), alpha)


@dataclass(frozen=True)
class FixedPoints:
    """Affine fixed points of a degree-1 map.

    ``identity`` is set when every point is fixed.  ``irrational`` holds the
    factor of the fixed-point equation without rational roots (1 if none);
    those points are never enumerated.
    """

    points: frozenset
    identity: bool = False
    irrational: Poly = Poly.const(1)


def fixed_points_linear(g: BaseMap) -> FixedPoints:
    if g.degree != 1:
        raise DegreeTooHigh(f"fixed_points_linear needs degree 1, got {g.degree}")
    b, a = (list(g.h.num.coeffs) + [Fraction(0)] * 2)[:2]
    d, c = (list(g.h.den.coeffs) + [Fraction(0)] * 2)[:2]
    # x (c x + d) = a x + b
    eq = Poly([-b, d - a, c])
    if not eq:
        return FixedPoints(frozenset(), identity=True)
    if eq.degree == 0:
        return FixedPoints(frozenset())
    if eq.degree == 1:
        return FixedPoints(frozenset({ProjPoint.of(-eq.coeffs[0] / eq.coeffs[1])}))
    c0, c1, c2 = eq.coeffs
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0 or not _is_square(disc):
        return FixedPoints(frozenset(), irrational=eq.monic())
    r = _frac_sqrt(disc)
    roots = {(-c1 + r) / (2 * c2), (-c1 - r) / (2 * c2)}
    return FixedPoints(frozenset(ProjPoint.of(q) for q in roots))


def _is_square(q: Fraction) -> bool:
    n, d = q.numerator, q.denominator
    return isqrt(n) ** 2 == n and isqrt(d) ** 2 == d


def _frac_sqrt(q: Fraction) -> Fraction:
    return Fraction(isqrt(q.numerator), isqrt(q.denominator))


@dataclass(frozen=True)
class Preperiodic:
    preperiod: int
    period: int


@dataclass(frozen=True)
class NotDetected:
    """No repetition within the caps; callers treat the point as not preperiodic."""

    max_height: int
    steps: int


def detect_preperiodic(
    g: BaseMap,
    alpha: ProjPoint,
    height_cap: int = DEFAULT_HEIGHT_CAP,
    step_cap: int = DEFAULT_STEP_CAP,
):
    """Semi-decide preperiodicity by exact repetition within the caps."""
    seen: dict[ProjPoint, int] = {}
    pt = alpha
    height = weil_height(pt)
    for step in range(step_cap + 1):
        if pt in seen:
            m = seen[pt]
            return Preperiodic(m, step - m)
        seen[pt] = step
        if height > height_cap:
            return NotDetected(height, step)
        if step == step_cap:
            break
        pt = g(pt)
        height = weil_height(pt)
    return NotDetected(height, step_cap)
