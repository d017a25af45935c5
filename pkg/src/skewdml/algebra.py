"""Exact arithmetic over Q, Q[x] and Q(x).

Scalars are :class:`fractions.Fraction`.  Polynomials are dense, immutable,
ascending-degree coefficient tuples.  Rational functions are normalized
eagerly (coprime, monic denominator) so that equality is structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

from .errors import IndeterminateValue, NonSquare, PoleError

Rat = Fraction
Scalar = Union[int, Fraction]


def as_rat(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b if a and b else 0


# --------------------------------------------------------------------------
# Poly
# --------------------------------------------------------------------------


class Poly:
    """Univariate polynomial over Q with ascending coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [as_rat(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: list) -> "Poly":
        # coeffs already Fractions; only trailing zeros stripped
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        p = object.__new__(cls)
        p.coeffs = tuple(coeffs)
        p._hash = None
        return p

    @classmethod
    def x(cls) -> "Poly":
        return cls._raw([Fraction(0), Fraction(1)])

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls._raw([as_rat(c)])

    @classmethod
    def monomial(cls, degree: int, c: Scalar = 1) -> "Poly":
        return cls._raw([Fraction(0)] * degree + [as_rat(c)])

    # -- basic queries -----------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_value(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("Poly", self.coeffs))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and c == 1:
                s = mono
            elif mono and c == -1:
                s = "-" + mono
            else:
                s = str(c) if c.denominator == 1 else (f"-({-c})" if c < 0 else f"({c})")
                if mono:
                    s += "*" + mono
            terms.append(s)
        return " + ".join(terms).replace("+ -", "- ")

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly()
            return Poly._raw([c * other for c in self.coeffs])
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return Poly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative exponent")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        if len(rem) - 1 < db:
            return Poly(), self
        inv_lead = 1 / other.lead
        quot = [Fraction(0)] * (len(rem) - db)
        bc = other.coeffs
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] * inv_lead
            quot[k] = c
            if c:
                for j in range(db + 1):
                    rem[k + j] -= c * bc[j]
        return Poly._raw(quot), Poly._raw(rem[:db] if db > 0 else [])

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def divides(self, other: "Poly") -> bool:
        """True if ``self`` divides ``other`` (0 divides only 0)."""
        if not self:
            return not other
        return not (other % self)

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def monic(self) -> "Poly":
        if not self.coeffs or self.lead == 1:
            return self
        inv = 1 / self.lead
        return Poly._raw([c * inv for c in self.coeffs])

    def derivative(self) -> "Poly":
        return Poly._raw([c * i for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, value):
        """Horner evaluation; works for any ring element supporting + and *."""
        if not self.coeffs:
            return Fraction(0)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * value + c
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def homogeneous_eval(self, a: int, b: int, degree: int) -> Fraction:
        """Value of ``b^degree * p(a/b)`` for ``degree >= deg p``."""
        total = Fraction(0)
        apow = 1
        for i, c in enumerate(self.coeffs):
            if c:
                total += c * apow * b ** (degree - i)
            apow *= a
        return total

    def integer_coeffs(self) -> tuple[int, list[int]]:
        """Return ``(scale, ints)`` with ``scale * p`` having integer coefficients ``ints``.

        The integer polynomial is primitive and has positive leading
        coefficient; ``scale`` is a nonzero Fraction.
        """
        if not self.coeffs:
            return Fraction(1), []
        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        content = 0
        for v in ints:
            content = gcd(content, v)
        if ints[-1] < 0:
            content = -content
        ints = [v // content for v in ints]
        return Fraction(den, content), ints

    def squarefree_part(self) -> "Poly":
        if self.degree <= 0:
            return self.monic()
        return self.exact_div(poly_gcd(self, self.derivative())).monic()


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd via the Euclidean algorithm; gcd(0, 0) = 0."""
    while b:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return (g, s, t) with s*a + t*b = g, g monic (or zero)."""
    r0, r1 = a, b
    s0, s1 = Poly.const(1), Poly()
    t0, t1 = Poly(), Poly.const(1)
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0:
        inv = 1 / r0.lead
        return r0 * inv, s0 * inv, t0 * inv
    return r0, s0, t0


# --------------------------------------------------------------------------
# Projective points
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjPoint:
    """Point [a : b] of P^1(Q), normalized: coprime, b >= 0, infinity = [1 : 0]."""

    a: int
    b: int

    def __post_init__(self):
        a, b = self.a, self.b
        if a == 0 and b == 0:
            raise ValueError("[0 : 0] is not a point of P^1")
        g = gcd(a, b)
        a, b = a // g, b // g
        if b < 0 or (b == 0 and a < 0):
            a, b = -a, -b
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def infinity(cls) -> "ProjPoint":
        return cls(1, 0)

    @classmethod
    def of(cls, value) -> "ProjPoint":
        if isinstance(value, ProjPoint):
            return value
        if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "∞"):
            return cls.infinity()
        q = as_rat(value)
        return cls(q.numerator, q.denominator)

    @property
    def is_infinity(self) -> bool:
        return self.b == 0

    @property
    def value(self) -> Fraction:
        if self.b == 0:
            raise ValueError("point at infinity has no affine coordinate")
        return Fraction(self.a, self.b)

    def __str__(self) -> str:
        if self.b == 0:
            return "inf"
        return str(Fraction(self.a, self.b))


# --------------------------------------------------------------------------
# RatFunc
# --------------------------------------------------------------------------


class RatFunc:
    """Element of Q(x) as coprime num/den with monic den."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        num = _to_poly(num)
        den = Poly.const(1) if den is None else _to_poly(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            num, den = Poly(), Poly.const(1)
        elif den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
        if den.lead != 1:
            inv = 1 / den.lead
            num, den = num * inv, den * inv
        self.num: Poly = num
        self.den: Poly = den
        self._hash = None

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RatFunc":
        r = object.__new__(cls)
        r.num, r.den, r._hash = num, den, None
        return r

    @classmethod
    def x(cls) -> "RatFunc":
        return cls._raw(Poly.x(), Poly.const(1))

    @classmethod
    def const(cls, c: Scalar) -> "RatFunc":
        return cls._raw(Poly.const(c), Poly.const(1))

    # -- queries -----------------------------------------------------------

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree, 0)

    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.constant_value()

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, Poly)):
            return self == RatFunc(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("RatFunc", self.num.coeffs, self.den.coeffs))
        return self._hash

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def __str__(self) -> str:
        if self.den.degree == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(other)
        if isinstance(other, Poly):
            return RatFunc._raw(other, Poly.const(1))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.degree == 0 and other.den.degree == 0:
            return RatFunc._raw(self.num + other.num, Poly.const(1))
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatFunc._raw(Poly(), Poly.const(1))
            return RatFunc._raw(self.num * other, self.den)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.degree == 0 and other.den.degree == 0:
            return RatFunc._raw(self.num * other.num, Poly.const(1))
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc._raw(self.num ** n, self.den ** n)

    # -- evaluation --------------------------------------------------------

    def at(self, pt: ProjPoint) -> Fraction:
        """Affine value at ``pt``; raises :class:`PoleError` at a pole."""
        if pt.is_infinity:
            dn, dd = self.num.degree, self.den.degree
            if dn > dd:
                raise PoleError(f"{self} has a pole at infinity")
            if dn < dd:
                return Fraction(0)
            return self.num.lead / self.den.lead
        if self.den.degree == 0:
            return self.num(Fraction(pt.a, pt.b)) if pt.b != 1 else self.num(pt.a)
        d = self.degree
        den = self.den.homogeneous_eval(pt.a, pt.b, d)
        if not den:
            raise PoleError(f"{self} has a pole at {pt}")
        return self.num.homogeneous_eval(pt.a, pt.b, d) / den

    def __call__(self, value):
        return self.at(ProjPoint.of(value))

    def compose(self, inner: "RatFunc") -> "RatFunc":
        """Return ``self(inner(x))``."""
        if self.is_constant():
            return self
        d = self.degree
        pn, pd = inner.num, inner.den
        # b^d * num(a/b) with a = pn, b = pd
        def hom(p: Poly) -> Poly:
            acc = Poly()
            apow = Poly.const(1)
            bpows = [Poly.const(1)]
            for _ in range(d):
                bpows.append(bpows[-1] * pd)
            for i, c in enumerate(p.coeffs):
                if c:
                    acc = acc + apow * bpows[d - i] * c
                apow = apow * pn
            return acc

        return RatFunc(hom(self.num), hom(self.den))


def _to_poly(value) -> Poly:
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction)):
        return Poly.const(value)
    if isinstance(value, (list, tuple)):
        return Poly(value)
    raise TypeError(f"cannot interpret {value!r} as a polynomial")


def to_ratfunc(value) -> RatFunc:
    if isinstance(value, RatFunc):
        return value
    if isinstance(value, Poly):
        return RatFunc._raw(value, Poly.const(1))
    if isinstance(value, (int, Fraction)):
        return RatFunc.const(value)
    raise TypeError(f"cannot interpret {value!r} as a rational function")


def ratfunc_eval(h: RatFunc, pt: ProjPoint) -> ProjPoint:
    """Homogeneous evaluation of ``h`` at ``pt`` on P^1; poles go to infinity."""
    d = h.degree
    num = h.num.homogeneous_eval(pt.a, pt.b, d)
    den = h.den.homogeneous_eval(pt.a, pt.b, d)
    if not num and not den:
        raise IndeterminateValue(f"{h} is indeterminate at {pt}")
    if not den:
        return ProjPoint.infinity()
    q = num / den
    return ProjPoint(q.numerator, q.denominator)


# --------------------------------------------------------------------------
# Matrices over Q(x)
# --------------------------------------------------------------------------


class RFMatrix:
    """Dense matrix over Q(x), immutable."""

    __slots__ = ("entries",)

    def __init__(self, entries: Sequence[Sequence]):
        rows = tuple(tuple(to_ratfunc(e) for e in row) for row in entries)
        if not rows or not rows[0]:
            raise ValueError("matrix dimensions must be at least 1")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged matrix")
        self.entries: tuple[tuple[RatFunc, ...], ...] = rows

    @classmethod
    def identity(cls, n: int) -> "RFMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, RFMatrix) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return "RFMatrix([" + ", ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.entries) + "])"

    def __matmul__(self, other: "RFMatrix") -> "RFMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        return RFMatrix(_matmul(self.entries, other.entries, RatFunc.const(0)))

    __mul__ = __matmul__

    def __add__(self, other: "RFMatrix") -> "RFMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in matrix sum")
        return RFMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def transpose(self) -> "RFMatrix":
        return RFMatrix(list(zip(*self.entries)))

    def column(self, j: int) -> tuple[RatFunc, ...]:
        return tuple(r[j] for r in self.entries)

    def is_constant(self) -> bool:
        return all(e.is_constant() for r in self.entries for e in r)

    def max_degree(self) -> int:
        return max(e.degree for r in self.entries for e in r)

    def compose(self, inner: RatFunc) -> "RFMatrix":
        """Substitute ``x -> inner(x)`` in every entry."""
        return RFMatrix([[e.compose(inner) for e in r] for r in self.entries])

    def at(self, pt: ProjPoint) -> list[list[Fraction]]:
        return [[e.at(pt) for e in r] for r in self.entries]

    def det(self) -> RatFunc:
        return matrix_det(self)

    def rank(self) -> int:
        from .linalg import rank

        return rank([list(r) for r in self.entries])


def _matmul(a, b, zero):
    n, m, k = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for j in range(k):
            acc = zero
            for t in range(m):
                x = ai[t]
                if x:
                    y = b[t][j]
                    if y:
                        acc = acc + x * y
            row.append(acc)
        out.append(row)
    return out


def mat_mul(a, b):
    """Product of two list-of-lists matrices with Fraction (or compatible) entries."""
    return _matmul(a, b, Fraction(0))


def bareiss_det(rows: list[list]):
    """Fraction-free (Bareiss) determinant over an integral domain with exact division.

    Works for ints, Fractions, Polys and RatFuncs.  Division steps are
    exact in the domain, so no intermediate fractions are produced when the
    entries are ints or polynomials.
    """
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    one = m[0][0] * 0 + 1
    sign = 1
    prev = one
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return m[0][0] * 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = _exact_div(v, prev)
        prev = m[k][k]
    return m[n - 1][n - 1] * sign


def _exact_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        assert r == 0
        return q
    if isinstance(a, Poly):
        if isinstance(b, Poly):
            return a.exact_div(b)
        return a * (1 / as_rat(b))
    return a / b


def matrix_det(M: RFMatrix) -> RatFunc:
    """Exact determinant of a square matrix over Q(x).

    Denominators are cleared row by row so that elimination runs fraction-free
    over Q[x]; the common factor is divided back out at the end.
    """
    if M.rows != M.cols:
        raise NonSquare(f"determinant of a {M.rows}x{M.cols} matrix")
    rows = []
    scale = Poly.const(1)
    for r in M.entries:
        den = Poly.const(1)
        for e in r:
            if e.den.degree > 0:
                den = den * e.den.exact_div(poly_gcd(den, e.den))
        rows.append([e.num * den.exact_div(e.den) for e in r])
        scale = scale * den
    d = bareiss_det(rows)
    return RatFunc(d, scale)


# --------------------------------------------------------------------------
# Smith normal form over Q[x]
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SNFResult:
    """``U @ M @ V == D`` with U, V unimodular and D in Smith form."""

    U: RFMatrix
    D: RFMatrix
    V: RFMatrix

    @property
    def invariant_factors(self) -> list[Poly]:
        n = min(self.D.rows, self.D.cols)
        return [self.D[i, i].num for i in range(n)]


def smith_normal_form(M) -> SNFResult:
    """Smith normal form over the PID Q[x].

    Pivot choice: the nonzero entry of least degree in the active block, ties
    broken in row-major order.  Diagonal entries are made monic.
    """
    if isinstance(M, RFMatrix):
        for r in M.entries:
            for e in r:
                if not e.is_polynomial():
                    raise ValueError("Smith normal form needs polynomial entries")
        A = [[e.num for e in r] for r in M.entries]
    else:
        A = [[_to_poly(e) for e in r] for r in M]
    nr, nc = len(A), len(A[0])
    one, zero = Poly.const(1), Poly()
    U = [[one if i == j else zero for j in range(nr)] for i in range(nr)]
    V = [[one if i == j else zero for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst -= q * row_src
        A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] = row[dst] - q * row[src]
        for row in V:
            row[dst] = row[dst] - q * row[src]

    for t in range(min(nr, nc)):
        while True:
            best = None
            for i in range(t, nr):
                for j in range(t, nc):
                    e = A[i][j]
                    if e and (best is None or e.degree < A[best[0]][best[1]].degree):
                        best = (i, j)
            if best is None:
                break
            i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if A[i][t]:
                    q = A[i][t] // piv
                    add_row(i, t, q)
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, nc):
                if A[t][j]:
                    q = A[t][j] // piv
                    add_col(j, t, q)
                    if A[t][j]:
                        dirty = True
            if dirty:
                continue
            bad = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if A[i][j] and not piv.divides(A[i][j]):
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is not None:
                # row_t += row_bad, then re-reduce
                add_row(t, bad, Poly.const(-1))
                continue
            break
        if t < nr and t < nc and A[t][t]:
            lc = A[t][t].lead
            if lc != 1:
                inv = 1 / lc
                A[t] = [a * inv for a in A[t]]
                U[t] = [a * inv for a in U[t]]
    return SNFResult(RFMatrix(U), RFMatrix(A), RFMatrix(V))


# --------------------------------------------------------------------------
# Resultants
# --------------------------------------------------------------------------


def homogeneous_resultant(f: Sequence[int], g: Sequence[int], d: int) -> int:
    """Resultant of two binary forms of degree ``d`` given by ascending coefficients.

    Coefficient lists may be shorter than ``d + 1`` (missing leading terms are
    zero); the Sylvester matrix is built for formal degree ``d``.
    """
    if d == 0:
        return 1
    fa = list(f) + [0] * (d + 1 - len(f))
    ga = list(g) + [0] * (d + 1 - len(g))
    fd, gd = fa[::-1], ga[::-1]
    size = 2 * d
    rows = []
    for i in range(d):
        rows.append([0] * i + fd + [0] * (size - d - 1 - i))
    for i in range(d):
        rows.append([0] * i + gd + [0] * (size - d - 1 - i))
    return bareiss_det(rows)


def resultant(a: Poly, b: Poly) -> Fraction:
    """Resultant of two polynomials over Q (Sylvester determinant)."""
    m, n = a.degree, b.degree
    if m < 0 or n < 0:
        return Fraction(0)
    if m == 0 and n == 0:
        return Fraction(1)
    ad, bd = list(a.coeffs[::-1]), list(b.coeffs[::-1])
    size = m + n
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + ad + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + bd + [Fraction(0)] * (size - n - 1 - i))
    return Fraction(bareiss_det(rows))
