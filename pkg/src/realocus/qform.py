"""Binary quadratic forms, exact quadratic irrationals and the GL2 action.

A form [A, B, C] stands for A X^2 + B X Y + C Y^2.  Matrices act by

    M o Q = Q(adj(M) (X, Y)) / det(M)

so that the roots of M o Q are the Mobius images under M of the roots of Q,
and T^t o [A, B, C] = [A, B - 2At, At^2 - Bt + C] moves the geodesic by +t.
Everything here is exact: no floating point is used to decide anything.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Union

Rational = Union[int, Fraction]


def sign(x: Rational) -> int:
    """Sign with the convention sign(0) = 1."""
    return -1 if x < 0 else 1


def _sgn(x: Rational) -> int:
    return (x > 0) - (x < 0)


def _sign_rad(a: Fraction, b: Fraction, d: int) -> int:
    """Exact sign of a + b*sqrt(d), d >= 0."""
    sa, sb = _sgn(a), _sgn(b)
    if sb == 0 or d == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    diff = a * a - b * b * d
    if diff > 0:
        return sa
    if diff < 0:
        return sb
    return 0


@dataclass(frozen=True)
class Form:
    """Integral binary quadratic form [a, b, c]."""

    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        if self.a == 0 and self.b == 0 and self.c == 0:
            raise ValueError("zero form")

    def __iter__(self):
        yield self.a
        yield self.b
        yield self.c

    def __repr__(self) -> str:
        return f"[{self.a}, {self.b}, {self.c}]"

    def __neg__(self) -> Form:
        return Form(-self.a, -self.b, -self.c)

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def content(self) -> int:
        return gcd(gcd(self.a, self.b), self.c)

    def is_primitive(self) -> bool:
        return self.content == 1

    def primitive(self) -> Form:
        g = self.content
        return Form(self.a // g, self.b // g, self.c // g)

    def evaluate(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def tolist(self) -> list[int]:
        return [self.a, self.b, self.c]


def disc(q: Form) -> int:
    return q.disc


def inner(q1: Form, q2: Form) -> int:
    """Bilinear form with inner(q, q) = disc(q)."""
    return q1.b * q2.b - 2 * (q1.a * q2.c + q2.a * q1.c)


@dataclass(frozen=True)
class QuadNum:
    """Exact number x + y*sqrt(d) with rational x, y and an integer d >= 0."""

    x: Fraction
    y: Fraction
    d: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))
        if self.d < 0:
            raise ValueError("QuadNum needs d >= 0")

    @classmethod
    def rational(cls, x: Rational, d: int = 0) -> QuadNum:
        return cls(Fraction(x), Fraction(0), d)

    @property
    def is_rational(self) -> bool:
        return self.y == 0 or self.d == 0

    def _coerce(self, other) -> QuadNum:
        if isinstance(other, QuadNum):
            if other.d == self.d or other.is_rational:
                return QuadNum(other.x, other.y if other.d == self.d else 0, self.d)
            if self.is_rational:
                return other
            raise ValueError(f"mixed radicals sqrt({self.d}) and sqrt({other.d})")
        if isinstance(other, (int, Fraction)):
            return QuadNum(Fraction(other), Fraction(0), self.d)
        return NotImplemented

    def _common(self, other) -> tuple[QuadNum, QuadNum]:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented, NotImplemented
        if o.d != self.d:
            return QuadNum(self.x, 0, o.d), o
        return self, o

    def __add__(self, other):
        s, o = self._common(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadNum(s.x + o.x, s.y + o.y, s.d)

    __radd__ = __add__

    def __neg__(self) -> QuadNum:
        return QuadNum(-self.x, -self.y, self.d)

    def __sub__(self, other):
        s, o = self._common(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadNum(s.x - o.x, s.y - o.y, s.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        s, o = self._common(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadNum(s.x * o.x + s.y * o.y * s.d, s.x * o.y + s.y * o.x, s.d)

    __rmul__ = __mul__

    def conj(self) -> QuadNum:
        return QuadNum(self.x, -self.y, self.d)

    def norm(self) -> Fraction:
        return self.x * self.x - self.d * self.y * self.y

    def inverse(self) -> QuadNum:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadNum of norm zero")
        c = self.conj()
        return QuadNum(c.x / n, c.y / n, self.d)

    def __truediv__(self, other):
        s, o = self._common(other)
        if o is NotImplemented:
            return NotImplemented
        return s * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def sign(self) -> int:
        """Exact sign in {-1, 0, 1}."""
        return _sign_rad(self.x, self.y, self.d)

    def compare(self, other) -> int:
        """Exact sign of self - other, also across different radicands."""
        if isinstance(other, (int, Fraction)):
            return _sign_rad(self.x - other, self.y, self.d)
        if other.d == self.d or other.is_rational or self.is_rational:
            return (self - other).sign()
        a = self.x - other.x
        sa = _sign_rad(a, self.y, self.d)
        sb = _sgn(-other.y)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # |alpha| versus |beta| where alpha = a + y1 sqrt(d1), beta = -y2 sqrt(d2)
        t = _sign_rad(a * a + self.y * self.y * self.d - other.y * other.y * other.d,
                      2 * a * self.y, self.d)
        if t == 0:
            return 0
        return sa if t > 0 else sb

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, QuadNum)):
            return self.compare(other) == 0
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational:
            return hash(self.x)
        r = isqrt(self.d)
        if r * r == self.d:
            return hash(self.x + self.y * r)
        return hash((self.x, self.y, self.d))

    def __lt__(self, other) -> bool:
        return self.compare(other) < 0

    def __le__(self, other) -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other) -> bool:
        return self.compare(other) > 0

    def __ge__(self, other) -> bool:
        return self.compare(other) >= 0

    def __float__(self) -> float:
        return float(self.x) + float(self.y) * self.d ** 0.5

    def __repr__(self) -> str:
        if self.is_rational:
            return f"QuadNum({self.x})"
        return f"QuadNum({self.x} + {self.y}*sqrt({self.d}))"


class _Infinity:
    """The cusp i*infinity, treated as larger than every real number."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "oo"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
Extended = Union[QuadNum, _Infinity]


def ext_compare(u: Extended, v: Extended) -> int:
    if u is INF:
        return 0 if v is INF else 1
    if v is INF:
        return -1
    return u.compare(v)


@dataclass(frozen=True)
class IntMatrix:
    """Integer 2x2 matrix (a b; c d)."""

    a: int
    b: int
    c: int
    d: int

    def __iter__(self):
        yield self.a
        yield self.b
        yield self.c
        yield self.d

    def __repr__(self) -> str:
        return f"({self.a}, {self.b}; {self.c}, {self.d})"

    def __matmul__(self, o: IntMatrix) -> IntMatrix:
        return IntMatrix(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                         self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def __neg__(self) -> IntMatrix:
        return IntMatrix(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, n: int) -> IntMatrix:
        if n < 0:
            return self.inverse() ** (-n)
        out, base = IDENTITY, self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def adj(self) -> IntMatrix:
        return IntMatrix(self.d, -self.b, -self.c, self.a)

    def inverse(self) -> IntMatrix:
        if self.det not in (1, -1):
            raise ValueError(f"{self} is not invertible over Z")
        m = self.adj()
        return m if self.det == 1 else -m

    def is_hyperbolic(self) -> bool:
        """|trace| > 2 after scaling to determinant 1."""
        return self.trace ** 2 > 4 * self.det

    def in_gamma_upper(self, n: int) -> bool:
        """Membership in Gamma^0(n): det 1 and upper-right entry divisible by n."""
        return self.det == 1 and self.b % n == 0

    def in_gamma_lower(self, n: int) -> bool:
        """Membership in Gamma_0(n): det 1 and lower-left entry divisible by n."""
        return self.det == 1 and self.c % n == 0

    def mobius(self, z: Extended) -> Extended:
        """Action on the extended real line."""
        if z is INF:
            return INF if self.c == 0 else QuadNum.rational(Fraction(self.a, self.c))
        den = z * self.c + self.d
        if den.sign() == 0:
            return INF
        return (z * self.a + self.b) / den

    def tolist(self) -> list[int]:
        return [self.a, self.b, self.c, self.d]


IDENTITY = IntMatrix(1, 0, 0, 1)
S = IntMatrix(0, -1, 1, 0)


def T(t: int = 1) -> IntMatrix:
    return IntMatrix(1, t, 0, 1)


def _act_coeffs(m, q: Form):
    a, b, c, d = m
    A, B, C = q.a, q.b, q.c
    A2 = A * d * d - B * d * c + C * c * c
    B2 = -2 * A * d * b + B * (d * a + b * c) - 2 * C * c * a
    C2 = A * b * b - B * b * a + C * a * a
    return A2, B2, C2


def act(m: IntMatrix, q: Form) -> Form:
    """The left action M o Q for det(M) = +-1."""
    det = m.det
    if det not in (1, -1):
        raise ValueError(f"act needs a unimodular matrix, got det {det}")
    A2, B2, C2 = _act_coeffs(m, q)
    return Form(A2 * det, B2 * det, C2 * det)


def act_projective(m: IntMatrix, q: Form) -> Form:
    """Action of the scalar class of m: the form Q(adj(m)(X,Y))/det(m).

    Used for matrices such as (1 1; -1 1) = sqrt(2) S^(1/2) whose action
    agrees with the action of a real matrix of determinant one.
    """
    det = m.det
    if det <= 0:
        raise ValueError("act_projective needs det > 0")
    coeffs = _act_coeffs(m, q)
    if any(v % det for v in coeffs):
        raise ValueError(f"{m} does not map {q} to an integral form")
    return Form(*(v // det for v in coeffs))


@dataclass(frozen=True)
class QuadMatrix:
    """2x2 matrix over Q(sqrt(d))."""

    a: QuadNum
    b: QuadNum
    c: QuadNum
    d: QuadNum

    def __iter__(self):
        yield self.a
        yield self.b
        yield self.c
        yield self.d

    @classmethod
    def from_int(cls, m: IntMatrix, d: int) -> QuadMatrix:
        return cls(*(QuadNum.rational(v, d) for v in m))

    def __matmul__(self, o):
        if isinstance(o, IntMatrix):
            o = QuadMatrix.from_int(o, self.a.d)
        return QuadMatrix(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                          self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def __rmatmul__(self, o):
        if isinstance(o, IntMatrix):
            return QuadMatrix.from_int(o, self.a.d) @ self
        return NotImplemented

    def __pow__(self, n: int) -> QuadMatrix:
        if n < 0:
            return self.inverse() ** (-n)
        out = QuadMatrix.from_int(IDENTITY, self.a.d)
        base = self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    @property
    def det(self) -> QuadNum:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> QuadNum:
        return self.a + self.d

    def inverse(self) -> QuadMatrix:
        det = self.det
        return QuadMatrix(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def square(self) -> QuadMatrix:
        return self @ self

    def to_int(self) -> IntMatrix:
        """The matrix as an IntMatrix, when all entries are integers."""
        vals = []
        for e in self:
            if not e.is_rational or e.x.denominator != 1:
                raise ValueError("matrix entries are not integers")
            vals.append(int(e.x))
        return IntMatrix(*vals)

    def __eq__(self, other) -> bool:
        if isinstance(other, IntMatrix):
            other = QuadMatrix.from_int(other, self.a.d)
        if not isinstance(other, QuadMatrix):
            return NotImplemented
        return all(u == v for u, v in zip(self, other))

    __hash__ = None  # type: ignore[assignment]

    def mobius(self, z: Extended) -> Extended:
        if z is INF:
            return INF if self.c.sign() == 0 else self.a / self.c
        den = self.c * z + self.d
        if den.sign() == 0:
            return INF
        return (self.a * z + self.b) / den


def act_quad(m: QuadMatrix, q: Form) -> Form:
    """Action of a real quadratic matrix; the result must be integral."""
    det = m.det
    if det.sign() == 0:
        raise ValueError("singular matrix")
    coeffs = [v / det for v in _act_coeffs(m, q)]
    out = []
    for v in coeffs:
        if not v.is_rational or v.x.denominator != 1:
            raise ValueError(f"{q} is not mapped to an integral form")
        out.append(int(v.x))
    return Form(*out)


@dataclass(frozen=True)
class Geodesic:
    """Oriented geodesic between two points of the extended real line."""

    start: Extended
    end: Extended

    def __post_init__(self) -> None:
        if ext_compare(self.start, self.end) == 0:
            raise ValueError("degenerate geodesic")

    def reversed(self) -> Geodesic:
        return Geodesic(self.end, self.start)


def geodesic(q: Form) -> Geodesic:
    D = q.disc
    if D <= 0:
        raise ValueError(f"{q} is not indefinite")
    if q.a == 0:
        foot = QuadNum.rational(Fraction(-q.c, q.b), D)
        return Geodesic(INF, foot) if q.b > 0 else Geodesic(foot, INF)
    x = Fraction(-q.b, 2 * q.a)
    y = Fraction(1, 2 * q.a)
    return Geodesic(QuadNum(x, -y, D), QuadNum(x, y, D))


def root_point(p: Form) -> tuple[Fraction, Fraction]:
    """(x, y^2) for the root x + iy in the upper half plane of a definite form."""
    if p.disc >= 0:
        raise ValueError(f"{p} is not definite")
    return Fraction(-p.b, 2 * p.a), Fraction(-p.disc, 4 * p.a * p.a)


def point_form(x: Fraction, y2: Fraction) -> Form:
    """Primitive positive definite form whose root is x + i*sqrt(y2)."""
    x, y2 = Fraction(x), Fraction(y2)
    if y2 <= 0:
        raise ValueError("point must lie in the upper half plane")
    coeffs = [Fraction(1), -2 * x, x * x + y2]
    den = 1
    for v in coeffs:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in coeffs]
    return Form(*ints).primitive()


def tip(q: Form) -> Form:
    """Positive definite form whose root is the top point of the geodesic."""
    if q.a == 0:
        raise ValueError("geodesic ends at a cusp and has no tip")
    if q.disc <= 0:
        raise ValueError(f"{q} is not indefinite")
    A, B, C = q
    return Form(2 * A * A, 2 * A * B, B * B - 2 * A * C).primitive()


def _cyc(u: Extended, v: Extended, w: Extended) -> int:
    """Cyclic order of three distinct points of the boundary circle."""
    s1, s2, s3 = ext_compare(u, v), ext_compare(v, w), ext_compare(w, u)
    return 1 if (s1 < 0) + (s2 < 0) + (s3 < 0) == 2 else -1


def intersection_number(g1: Geodesic, g2: Geodesic) -> int:
    """Oriented intersection number of two complete geodesics.

    Geodesics sharing an endpoint, or equal, get 0.
    """
    pts = [g1.start, g1.end, g2.start, g2.end]
    for i in range(4):
        for j in range(i + 1, 4):
            if ext_compare(pts[i], pts[j]) == 0:
                return 0
    o1 = _cyc(g1.start, g2.start, g1.end)
    o2 = _cyc(g1.start, g2.end, g1.end)
    if o1 == o2:
        return 0
    return o1


RHO_MINUS = (Fraction(-1, 2), Fraction(3, 4))
RHO_PLUS = (Fraction(1, 2), Fraction(3, 4))
UNIT_GEODESIC = Geodesic(QuadNum.rational(-1), QuadNum.rational(1))


def _unit_circle_crossing(q: Form) -> Fraction | None:
    """Real part of the point where the geodesic of q meets |tau| = 1."""
    A, B, C = q
    if A == 0:
        x = Fraction(-C, B)
    elif B == 0:
        return None
    else:
        # circles x^2+y^2=1 and A(x^2+y^2)+Bx+C=0 meet where A+Bx+C=0
        x = Fraction(-(A + C), B)
    return x if x * x < 1 else None


def intersection_sigma(q: Form) -> int:
    """Intersection number of the geodesic of q with the arc from rho_-1 to rho_+1."""
    x = _unit_circle_crossing(q)
    if x is None or abs(x) > Fraction(1, 2):
        return 0
    return intersection_number(geodesic(q), UNIT_GEODESIC)


def _meets_region(q: Form, left: Fraction, right: Fraction, strict: bool) -> bool:
    """Whether the geodesic of q meets {left < x < right, |tau| > 1}.

    With strict=False the closures are used instead.
    """
    A, B, C = q
    D = q.disc
    if A == 0:
        x = Fraction(-C, B)
        return left < x < right if strict else left <= x <= right
    c = Fraction(-B, 2 * A)
    r = QuadNum(0, Fraction(1, 2 * abs(A)), D)
    lo = max(r * -1 + c, QuadNum.rational(left, D))
    hi = min(r + c, QuadNum.rational(right, D))
    if lo >= hi:
        return False
    # on the geodesic |tau|^2 = r^2 - c^2 + 2cx, so |tau|^2 > 1 iff 2cx > 1 + c^2 - r^2
    k = 1 + c * c - Fraction(D, 4 * A * A)
    if c == 0:
        return k < 0 if strict else k <= 0
    bound = k / (2 * c)
    if c > 0:
        return hi > bound if strict else hi >= bound
    return lo < bound if strict else lo <= bound


def meets_f_interior(q: Form) -> bool:
    """Whether the geodesic of q meets the interior of the standard domain F."""
    return _meets_region(q, Fraction(-1, 2), Fraction(1, 2), strict=True)


def is_reduced_indefinite(q: Form) -> bool:
    if q.disc <= 0:
        raise ValueError(f"{q} is not indefinite")
    A, B, C = q
    if B <= 0:
        return False
    return 2 * abs(A + C) < B or 2 * (A + C) == -sign(A) * B


def is_nearly_reduced(q: Form) -> bool:
    return 3 * q.a * q.a <= q.disc


def j_interval(q: Form) -> tuple[QuadNum, QuadNum]:
    """Closed interval of translations t with T^t o q crossing the arc sigma."""
    if not is_nearly_reduced(q):
        raise ValueError(f"{q} is not nearly reduced")
    A, B, _ = q
    D = q.disc
    e = D - 3 * A * A
    root = QuadNum(0, 1, e)

    def t(s: int, primed: bool) -> QuadNum:
        rad = root * -1 if primed else root
        return (rad + B) / (2 * A) + Fraction(s, 2)

    if D > 4 * A * A:
        lo, hi = t(-1, True), t(1, True)
    else:
        s = -sign(A)
        lo, hi = t(s, False), t(s, True)
    return (lo, hi) if lo <= hi else (hi, lo)


def normalize(q: Form) -> tuple[Form, int]:
    """Return (T^delta o q, delta) with T^delta o q reduced."""
    if q.a == 0 or not is_nearly_reduced(q):
        raise ValueError(f"{q} is not normalisable")
    lo, hi = j_interval(q)
    t0 = int(lo.x + lo.y * isqrt(lo.d)) - 2
    found = []
    t = t0
    while QuadNum.rational(t, lo.d) <= hi:
        if t >= lo:
            cand = act(T(t), q)
            if is_reduced_indefinite(cand):
                found.append((cand, t))
        t += 1
    if len(found) != 1:
        raise ValueError(f"{q} is not normalisable ({len(found)} candidates)")
    return found[0]


def reduce_definite(p: Form) -> tuple[Form, IntMatrix]:
    """Gauss reduction of a positive definite form, with a witness matrix."""
    if p.disc >= 0 or p.a <= 0:
        raise ValueError(f"{p} is not positive definite")
    m = IDENTITY
    q = p
    while True:
        t = -((q.a - q.b) // (2 * q.a))
        if t:
            q = act(T(t), q)
            m = T(t) @ m
        if q.a > q.c or (q.a == q.c and q.b < 0):
            q = act(S, q)
            m = S @ m
            continue
        return q, m


def reduce_indefinite(q: Form) -> tuple[Form, IntMatrix]:
    """Level one reduction: move the tip into F, then normalise."""
    _, m = reduce_definite(tip(q))
    q1 = act(m, q)
    if not meets_f_interior(q1):
        q1 = act(S, q1)
        m = S @ m
    q2, t = normalize(q1)
    return q2, T(t) @ m
