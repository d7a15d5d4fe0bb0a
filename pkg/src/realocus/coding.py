"""Geodesic coding at level N.

The fundamental domain used for Gamma^0(N), N an odd prime, is

    F_N = { tau : |Re tau| <= N/2 and |tau - k| >= 1 for every integer k != 0 },

the union of the translates T^k F (k in C(N)) and the flap S F below i.
Its sides are paired by elements of Gamma^0(N):

* the vertical sides Re tau = -N/2 and Re tau = N/2 by T^N;
* the arc |tau - k| = 1 outside the flap by T^((-k)*) S T^(-k);
* the flap arcs |tau -+ 1| = 1, |Re tau| < 1/2, by (1, 0; -+1, 1).

Here s* is the inverse of s mod N taken in C(N) = {-(N-1)/2, ..., (N-1)/2}.
A form is N-reduced when its geodesic meets F_N in a segment of positive
length.  One step of the N-cycle takes the point where the oriented
geodesic leaves F_N and applies the pairing of that side; the elliptic
points k + i (k^2 = -1 mod N) on the arcs get the half turn
T^k S^(a/2) T^(-k) instead.  Consecutive cusp steps are merged into one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import ceil, gcd, isqrt

from .classgroup import (
    FormClass,
    HeegnerContext,
    heegner_forms,
    inverse_class,
    kappa,
    negate_class,
    principal_class,
)
from .pell import automorph, automorph_sqrt, fundamental_unit, level_automorph
from .qform import (
    IDENTITY,
    Form,
    Geodesic,
    IntMatrix,
    QuadNum,
    S,
    T,
    _act_coeffs,
    act,
    inner,
    reduce_definite,
    root_point,
    sign,
    tip,
)

DEFAULT_MAX_STEPS = 10**6


class CaseTag(Enum):
    CASE1 = "1"
    CASE2 = "2"
    CASE3 = "3"
    CASE4 = "4"
    CASE5 = "5"
    CUSP_ZERO = "0"
    CUSP_INF = "inf"

    @property
    def is_cusp(self) -> bool:
        return self in (CaseTag.CUSP_ZERO, CaseTag.CUSP_INF)

    @property
    def symbol(self) -> str:
        return "∞" if self is CaseTag.CUSP_INF else self.value


def star(s: int, N: int) -> int:
    """Inverse of s modulo N, represented in C(N)."""
    x = pow(s % N, -1, N)
    return x - N if x > (N - 1) // 2 else x


def centered(s: int, N: int) -> int:
    """Representative of s modulo N in C(N)."""
    x = s % N
    return x - N if x > (N - 1) // 2 else x


def arc_pairing(k: int, N: int) -> IntMatrix:
    """T^((-k)*) S T^(-k), the element of Gamma^0(N) pairing the arc |tau - k| = 1."""
    return T(star(-k, N)) @ S @ T(-k)


def half_turn(k: int, a: int) -> IntMatrix:
    """sqrt(2) T^k S^(a/2) T^(-k) as an integer matrix of determinant 2."""
    return T(k) @ IntMatrix(1, a, -a, 1) @ T(-k)


def _check_level(N: int) -> None:
    if N < 5 or N % 2 == 0 or any(N % p == 0 for p in range(3, isqrt(N) + 1, 2)):
        raise ValueError(f"N={N} must be a prime >= 5")


@dataclass(frozen=True)
class Segment:
    """Part of a geodesic inside F_N: real parts lo < hi and the sides at each end."""

    lo: Fraction
    hi: Fraction
    lo_sides: tuple[tuple[str, int], ...]
    hi_sides: tuple[tuple[str, int], ...]
    center: Fraction
    radius2: Fraction

    def height2(self, x: Fraction) -> Fraction:
        return self.radius2 - (x - self.center) ** 2


def segment(N: int, q: Form) -> Segment | None:
    """Intersection of the geodesic of q with F_N, or None if it has no length.

    Sides are tagged ('v', +-1) for the vertical sides and ('c', k) for arcs.
    """
    A, B, _ = q
    D = q.disc
    if A == 0:
        raise ValueError("geodesics ending at a cusp are not coded")
    c = Fraction(-B, 2 * A)
    r2 = Fraction(D, 4 * A * A)
    rr = isqrt(D) // (2 * abs(A)) + 1
    lo, hi = Fraction(-N, 2), Fraction(N, 2)
    lo_sides: list[tuple[str, int]] = [("v", -1)]
    hi_sides: list[tuple[str, int]] = [("v", 1)]
    kmin = max(int(c) - rr - 2, -(N + 1) // 2)
    kmax = min(int(c) + rr + 2, (N + 1) // 2)
    for k in range(kmin, kmax + 1):
        if k == 0:
            continue
        # |tau - k|^2 >= 1 on the geodesic is linear in x
        coef = 2 * (c - k)
        rhs = (c - k) * (c + k) - (r2 - 1)
        if coef == 0:
            if r2 < 1:
                return None
            continue
        bound = rhs / coef
        if coef > 0:
            if bound > lo:
                lo, lo_sides = bound, [("c", k)]
            elif bound == lo:
                lo_sides.append(("c", k))
        else:
            if bound < hi:
                hi, hi_sides = bound, [("c", k)]
            elif bound == hi:
                hi_sides.append(("c", k))
    if lo >= hi or (lo - c) ** 2 >= r2 or (hi - c) ** 2 >= r2:
        return None
    return Segment(lo, hi, tuple(lo_sides), tuple(hi_sides), c, r2)


def is_n_reduced(N: int, q: Form) -> bool:
    return q.a != 0 and segment(N, q) is not None


def _form_of_geodesic(g: Geodesic) -> Form:
    if not isinstance(g.start, QuadNum) or not isinstance(g.end, QuadNum):
        raise ValueError("geodesics ending at i*infinity are not coded")
    s, e = g.start, g.end
    if s.d != e.d or s.x != e.x or s.y != -e.y:
        raise ValueError("endpoints are not conjugate quadratic irrationals")
    # A (X - s)(X - e) = A X^2 - 2 A x X + A (x^2 - d y^2)
    x, y, d = s.x, s.y, s.d
    coeffs = [Fraction(1), -2 * x, x * x - d * y * y]
    den = 1
    for v in coeffs:
        den = den * v.denominator // gcd(den, v.denominator)
    q = Form(*(int(v * den) for v in coeffs)).primitive()
    return q if s < e else -q


def fundamental_domain_meets(N: int, g: Geodesic | Form) -> tuple[bool, Segment | None]:
    """Whether the geodesic meets F_N in a segment of positive length, with that segment."""
    q = g if isinstance(g, Form) else _form_of_geodesic(g)
    seg = segment(N, q)
    return seg is not None, seg


# points of the upper half plane are handled as (x, y^2) with rational coordinates

def _in_circle(x: Fraction, y2: Fraction, k: int) -> bool:
    return (x - k) ** 2 + y2 < 1


def _mobius_point(m: IntMatrix, x: Fraction, y2: Fraction) -> tuple[Fraction, Fraction]:
    a, b, c, d = m
    n2 = x * x + y2
    den = c * c * n2 + 2 * c * d * x + d * d
    det = m.det
    return (a * c * n2 + (a * d + b * c) * x + b * d) / den, det * det * y2 / (den * den)


def locate(N: int, x: Fraction, y2: Fraction) -> tuple[IntMatrix, Fraction, Fraction]:
    """g in Gamma^0(N) with g(x + iy) in F_N; returns (g, x', y'^2)."""
    g = IDENTITY
    x, y2 = Fraction(x), Fraction(y2)
    while True:
        m = (2 * x + N) // (2 * N)  # x - mN in [-N/2, N/2)
        if m:
            g = T(-m * N) @ g
            x = x - m * N
        moved = False
        k0 = round(x)
        for k in (k0 - 1, k0, k0 + 1):
            if k != 0 and _in_circle(x, y2, k):
                p = arc_pairing(k, N)
                x, y2 = _mobius_point(p, x, y2)
                g = p @ g
                moved = True
                break
        if not moved:
            return g, x, y2


def _sample_points(q: Form):
    A, B, _ = q
    D = q.disc
    c = Fraction(-B, 2 * A)
    r2 = Fraction(D, 4 * A * A)
    r_lo = Fraction(isqrt(64 * D), 16 * abs(A))
    for t in (Fraction(1, 2), Fraction(-1, 2), Fraction(1, 4), Fraction(-1, 4),
              Fraction(3, 4), Fraction(-3, 4), Fraction(1, 8), Fraction(-1, 8)):
        x = c + t * r_lo
        yield x, r2 - (x - c) ** 2


def n_reduce(N: int, q: Form) -> Form:
    """A Gamma^0(N)-equivalent form whose geodesic meets F_N; q itself if it already does."""
    _check_level(N)
    if q.disc <= 0 or isqrt(q.disc) ** 2 == q.disc:
        raise ValueError(f"{q} must have positive nonsquare discriminant")
    if segment(N, q) is not None:
        return q
    c, y2 = root_point(tip(q))
    candidates = [(c, y2), *_sample_points(q)]
    for x, h2 in candidates:
        g, _, _ = locate(N, x, h2)
        q2 = act(g, q)
        if segment(N, q2) is not None:
            return q2
    raise AssertionError(f"could not reduce {q} at level {N}")


def _exit(seg: Segment, a: int):
    return (seg.hi, seg.hi_sides) if a == 1 else (seg.lo, seg.lo_sides)


def _step(N: int, q: Form) -> tuple[IntMatrix, CaseTag]:
    seg = segment(N, q)
    if seg is None:
        raise ValueError(f"{q} is not N-reduced for N={N}")
    a = sign(q.a)
    x, sides = _exit(seg, a)
    y2 = seg.height2(x)
    half = x - Fraction(1, 2)
    if y2 == Fraction(3, 4) and half.denominator == 1 and int(half) not in (0, -1):
        j = int(half)
        k = j + 1 if a == 1 else j
        if k == 2 * a:
            return T(-a * (N + 1) // 2) @ S @ T(-k), CaseTag.CASE2
        return arc_pairing(k, N), CaseTag.CASE3
    if any(s[0] == "v" for s in sides):
        return T(-a * N), CaseTag.CUSP_INF
    ks = [s[1] for s in sides]
    if len(ks) != 1:
        raise AssertionError(f"ambiguous exit for {q}: {sides}")
    k = ks[0]
    if x == k and (k * k + 1) % N == 0:
        return half_turn(k, a), CaseTag.CASE4
    if abs(k) == 1 and abs(x) < Fraction(1, 2):
        return IntMatrix(1, 0, -k, 1), CaseTag.CUSP_ZERO
    return arc_pairing(k, N), CaseTag.CASE5


def apply_code_matrix(m: IntMatrix, q: Form) -> Form:
    """Action of a code matrix.

    Determinant 2 matrices act as the half turns they scale; the image is
    rescaled to a primitive form, so its discriminant may change by 4.
    """
    return act(m, q) if m.det == 1 else _act_scaled(m, q)


def is_near_cusp(N: int, q: Form) -> bool:
    return _step(N, q)[1].is_cusp


def s_matrix(N: int, q: Form) -> tuple[IntMatrix, CaseTag]:
    """The matrix S_{N,Q} and its case for an N-reduced form away from the cusps.

    For case 4 the returned integer matrix has determinant 2 and stands for
    its quotient by sqrt(2).
    """
    m, tag = _step(N, q)
    if tag.is_cusp:
        raise ValueError(f"{q} is near the cusp {tag.symbol}")
    return m, tag


@dataclass(frozen=True)
class NCycle:
    N: int
    forms: tuple[Form, ...]
    matrices: tuple[IntMatrix, ...]
    tags: tuple[CaseTag, ...]

    def __len__(self) -> int:
        return len(self.forms)

    def apply(self, n: int) -> Form:
        return apply_code_matrix(self.matrices[n], self.forms[n])

    def rows(self):
        return zip(range(len(self.forms)), self.forms, self.matrices, self.tags)


def _advance(N: int, q: Form) -> tuple[IntMatrix, CaseTag, Form]:
    m, tag = _step(N, q)
    nxt = apply_code_matrix(m, q)
    if tag.is_cusp:
        while True:
            m2, t2 = _step(N, nxt)
            if t2 is not tag:
                break
            m = m2 @ m
            nxt = act(m2, nxt)
    return m, tag, nxt


def n_cycle(N: int, q: Form, max_steps: int = DEFAULT_MAX_STEPS) -> NCycle:
    """The N-cycle of q (after N-reduction) with its code matrices and case tags.

    The cycle starts at the N-reduction of q.  When that form lies inside a
    run of merged cusp steps it never comes back as a row, and the cycle
    starts at the first row that does.
    """
    cur = n_reduce(N, q)
    forms, mats, tags = [], [], []
    seen: dict[Form, int] = {}
    while cur not in seen:
        if len(forms) >= max_steps:
            raise RuntimeError(f"N-cycle of {q} exceeded {max_steps} steps")
        seen[cur] = len(forms)
        m, tag, nxt = _advance(N, cur)
        forms.append(cur)
        mats.append(m)
        tags.append(tag)
        cur = nxt
    j = seen[cur]
    return NCycle(N, tuple(forms[j:]), tuple(mats[j:]), tuple(tags[j:]))


def n_code(c: NCycle) -> list[IntMatrix]:
    return list(c.matrices)


# regular paths

@dataclass(frozen=True)
class Arc:
    """Geodesic arc from one CM point to another, carried by the geodesic of `form`."""

    start: Form
    end: Form
    form: Form


def act_point(m: IntMatrix, p: Form) -> Form:
    """Image of the CM point of p under a real matrix of positive determinant."""
    if m.det <= 0:
        raise ValueError("need positive determinant")
    a, b, c, d = m.adj()
    A, B, C = p
    coeffs = (A * a * a + B * a * c + C * c * c,
              2 * A * a * b + B * (a * d + b * c) + 2 * C * c * d,
              A * b * b + B * b * d + C * d * d)
    out = Form(*coeffs).primitive()
    return out if out.a > 0 else -out


def _scaled_sqrt(q: Form) -> IntMatrix:
    """2 sqrt(D) M_Q^(1/2) as an integer matrix."""
    m = automorph_sqrt(q)
    D = q.disc
    vals = [2 * e.y * D for e in m]
    if any(v.denominator != 1 for v in vals):
        raise AssertionError("unexpected denominators")
    return IntMatrix(*(int(v) for v in vals))


def _point_key(q: Form, p: Form) -> Fraction:
    x, _ = root_point(p)
    return x * sign(q.a)


def _norm_solutions(D: int, m: int, ymax: int) -> list[tuple[int, int]]:
    """Solutions (s, y) of s^2 - D y^2 = -m with 0 < y <= ymax, for m > 0."""
    eps = fundamental_unit(D).eps
    # up to units, beta = s + y sqrt(D) has |beta|, |beta'| < sqrt(m eps) and eps < 4x + 2
    ybound = isqrt(ceil(m * (4 * eps.x + 2) / D)) + 1
    base = []
    for y in range(-ybound, ybound + 1):
        for sgn in (1, -1):
            s2 = D * y * y + sgn * m
            if s2 >= 0 and isqrt(s2) ** 2 == s2:
                r = isqrt(s2)
                base += [QuadNum(r, y, D), QuadNum(-r, y, D)]
    cap = max(ymax, ybound) + 1
    out = set()
    for beta in base:
        for unit in (eps, eps.inverse()):
            cur = beta
            while abs(cur.y) <= cap:
                if cur.x.denominator == 1 and cur.y.denominator == 1 and cur.norm() == -m \
                        and 0 < cur.y <= ymax:
                    out.add((int(cur.x), int(cur.y)))
                cur = cur * unit
    return sorted(out, key=lambda t: (t[1], t[0]))


def _elliptic_points(N: int, q: Form, lo: Form, hi: Form) -> list[Form]:
    """Order 2 elliptic points for Gamma^0(N) on the geodesic of q strictly between two points."""
    A, B, _ = q
    D = q.disc
    _, h0 = root_point(lo)
    _, h1 = root_point(hi)
    # a point of discriminant -4 with leading coefficient al has height 1/al
    amax = isqrt(int(1 / min(h0, h1))) + 1
    k0, k1 = sorted((_point_key(q, lo), _point_key(q, hi)))
    out = set()
    for s, al in _norm_solutions(D, 4 * A * A, amax):
        num = al * B + s
        if num % A:
            continue
        be = num // A
        if (be * be + 4) % (4 * al):
            continue
        p = Form(al, be, (be * be + 4) // (4 * al))
        if p.is_primitive() and p.c % N == 0 and k0 < _point_key(q, p) < k1:
            out.add(p)
    return sorted(out, key=lambda p: _point_key(q, p))


def first_elliptic_point(N: int, q: Form, tau0: Form,
                         max_steps: int = DEFAULT_MAX_STEPS) -> Form | None:
    """First order 2 elliptic point on the geodesic of q after tau0, within one period.

    Moves tau0 into F_N and follows the coding from there: elliptic points
    on the geodesic show up exactly as case 4 exits, and the accumulated
    matrix carries the exit point k + i back to the geodesic of q.
    """
    x, y2 = root_point(tau0)
    g, _, _ = locate(N, x, y2)
    start = act(g, q)
    if segment(N, start) is None:
        raise ValueError("tau0 maps to a corner of F_N; choose another base point")
    cur, total = start, g
    for _ in range(max_steps):
        m, tag = _step(N, cur)
        if tag is CaseTag.CASE4:
            k = int(_exit(segment(N, cur), sign(cur.a))[0])
            return act_point(total.inverse(), Form(1, -2 * k, k * k + 1))
        cur = act(m, cur)
        total = m @ total
        if cur == start:
            return None
    raise RuntimeError(f"no return to {start} within {max_steps} steps")


def _half_turn_at(N: int, p: Form, a: int) -> IntMatrix:
    """sqrt(2) times the quarter rotation S^(a/2) conjugated to the elliptic point of p."""
    if N == 1:
        _, g = reduce_definite(p)
        k = 0
    else:
        x, y2 = root_point(p)
        g, xk, _ = locate(N, x, y2)
        k = int(xk)
    return g.inverse() @ half_turn(k, a) @ g


def regular_path(N: int, q: Form, tau0: Form) -> list[Arc]:
    """The regular path of level N through tau0 as a list of arcs.

    N = 1 gives the level one construction.  With no order 2 elliptic point
    on the way the path is the single arc from tau0 to M_{N,Q} tau0.
    """
    if N != 1:
        _check_level(N)
    if inner(tau0, q) != 0:
        raise ValueError("tau0 does not lie on the geodesic of q")
    m, n = (automorph(q), 1) if N == 1 else level_automorph(N, q)
    end = act_point(m, tau0)
    if N == 1:
        ell = _elliptic_points(N, q, tau0, end)
        b = ell[0] if ell else None
    else:
        b = first_elliptic_point(N, q, tau0)
    if b is None:
        return [Arc(tau0, end, q)]
    if fundamental_unit(q.disc).norm != -1:
        raise ValueError("elliptic point on the geodesic but the fundamental unit has norm +1")
    a = sign(q.a)
    half = _scaled_sqrt(q) ** n
    b1 = act_point(half.adj(), b)
    rot = _half_turn_at(N, b, a)
    qs_p = _act_scaled(rot, q)
    b2 = act_point(_scaled_sqrt(qs_p) ** n, b)
    return [Arc(tau0, b, q), Arc(b, b2, qs_p), Arc(b1, tau0, q)]


def _act_scaled(m: IntMatrix, q: Form) -> Form:
    """Primitive form of the geodesic m(gamma_q), orientation kept (det m > 0)."""
    if m.det <= 0:
        raise ValueError("need positive determinant")
    A, B, C = _act_coeffs(m, q)
    g = gcd(gcd(A, B), C)
    return Form(A // g, B // g, C // g)


def antipode(N: int, q: Form, tau0: Form) -> Form:
    """End point of the first half of the regular path, as a CM point."""
    _check_level(N)
    if fundamental_unit(q.disc).norm != -1:
        raise ValueError("the first half needs a unit of norm -1")
    _, n = level_automorph(N, q)
    half = _scaled_sqrt(q) ** n
    pt = act_point(half, tau0)
    b = first_elliptic_point(N, q, tau0)
    if b is not None:
        pt = act_point(_half_turn_at(N, b, sign(q.a)), pt)
    return pt


def canonical_point(N: int, p: Form) -> tuple[Fraction, Fraction]:
    """Representative in F_N of the Gamma^0(N)-orbit of the CM point of p."""
    x, y2 = root_point(p)
    _, x, y2 = locate(N, x, y2)
    cands = [(x, y2)]
    if abs(x) == Fraction(N, 2):
        cands.append((-x, y2))
    for k in (round(x) - 1, round(x), round(x) + 1):
        if k != 0 and (x - k) ** 2 + y2 == 1:
            pair = IntMatrix(1, 0, -k, 1) if abs(k) == 1 and abs(x) < Fraction(1, 2) else arc_pairing(k, N)
            cands.append(_mobius_point(pair, x, y2))
    return min(cands)


def same_orbit(N: int, p1: Form, p2: Form) -> bool:
    return canonical_point(N, p1) == canonical_point(N, p2)


# components

def _centred_at_half(N: int, q: Form) -> bool:
    return abs(q.b) == N * abs(q.a) and q.b != 0


def antipode_index(c: NCycle) -> int:
    """Row index of the first form after row 0 whose geodesic is centred at +-N/2."""
    for i, q in enumerate(c.forms):
        if i and _centred_at_half(c.N, q):
            return i
    raise ValueError("no antipodal row in the cycle")


@dataclass(frozen=True)
class Component:
    N: int
    kind: str  # "cusp" or "noncusp"
    generator: Form
    cls: FormClass | None
    cycle: NCycle
    halfcycle: bool
    rows: int = field(default=0)  # rows of the cycle making up the component class
    doubled: bool = False  # the rows give twice the class of the component

    @property
    def code(self) -> list[IntMatrix]:
        return list(self.cycle.matrices[: self.rows])


def _key(q: Form) -> tuple[int, int, int]:
    return (abs(q.a), q.a, q.b)


def cusp_component(N: int, max_steps: int = DEFAULT_MAX_STEPS) -> Component:
    q0 = Form(1, 0, -N)
    cyc = n_cycle(N, q0, max_steps)
    return Component(N, "cusp", q0, principal_class(4 * N), cyc, False,
                     rows=antipode_index(cyc))


def _orbit(c: FormClass) -> frozenset[FormClass]:
    out = {c, inverse_class(c)}
    out |= {negate_class(x) for x in out}
    return frozenset(out)


def noncusp_components(N: int, max_steps: int = DEFAULT_MAX_STEPS) -> list[Component]:
    ctxs = [HeegnerContext(N, 4 * N, 0)]
    if N % 4 == 1:
        ctxs.append(HeegnerContext(N, N, N))
    comps = []
    for ctx in ctxs:
        forms = heegner_forms(ctx)
        trivial = _orbit(principal_class(ctx.D))
        seen: set[FormClass] = set(trivial)
        for q in sorted(forms, key=lambda f: _key(f)):
            cls = FormClass.of(q)
            if cls in seen:
                continue
            orbit = _orbit(cls)
            seen |= orbit
            # generator: positive Heegner form in the orbit, smallest A, then largest B
            gen = min((f for f in forms if FormClass.of(f) in orbit and f.a > 0),
                      key=lambda f: (f.a, -f.b), default=q)
            cyc = n_cycle(N, gen, max_steps)
            half = N % 4 == 1
            comps.append(Component(N, "noncusp", cyc.forms[0], cls, cyc, half,
                                   rows=len(cyc), doubled=half))
    return comps


def components(N: int, max_steps: int = DEFAULT_MAX_STEPS) -> list[Component]:
    """The connected components of the real locus of X_0^+(N)."""
    _check_level(N)
    comps = [cusp_component(N, max_steps), *noncusp_components(N, max_steps)]
    expected = kappa(N)
    if len(comps) != expected:
        raise ArithmeticError(f"found {len(comps)} components at N={N}, expected {expected}")
    return comps
