"""Pell equations, units of real quadratic orders and automorphs of forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .qform import Form, IntMatrix, QuadMatrix, QuadNum


@dataclass(frozen=True)
class PellSolution:
    x: int
    y: int
    kind: int  # +1 for x^2 - D y^2 = 1, -1 for the negative equation


@dataclass(frozen=True)
class FundamentalUnit:
    """Fundamental unit eps = x + y sqrt(D) > 1 of the order of discriminant D."""

    eps: QuadNum
    norm: int

    @property
    def x(self) -> Fraction:
        return self.eps.x

    @property
    def y(self) -> Fraction:
        return self.eps.y


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def _pqa(p0: int, q0: int, d: int):
    """Continued fraction of (p0 + sqrt(d))/q0.

    Yields (G_i, B_i, Q_{i+1}, i) where G_i^2 - d B_i^2 = (-1)^(i+1) Q_{i+1} q0.
    """
    if (d - p0 * p0) % q0:
        raise ValueError("q0 must divide d - p0^2")
    s = isqrt(d)
    g2, g1 = -p0, q0
    b2, b1 = 1, 0
    p, q = p0, q0
    i = 0
    while True:
        if q > 0:
            a = (p + s) // q
        else:
            a = -((p + s) // (-q)) - 1
        g2, g1 = g1, a * g1 + g2
        b2, b1 = b1, a * b1 + b2
        p = a * q - p
        q = (d - p * p) // q
        yield g1, b1, q, i
        i += 1


def _unit_solution(d: int, q0: int = 1, p0: int = 0) -> tuple[int, int, int]:
    """Least solution of G^2 - d B^2 = +-q0^2 read off the expansion."""
    for g, b, q, i in _pqa(p0, q0, d):
        if q == q0:
            return g, b, (-1) ** (i + 1)
    raise AssertionError("unreachable")


def _check_nonsquare(D: int) -> None:
    if D <= 0 or _is_square(D):
        raise ValueError(f"D={D} must be a positive nonsquare")


def pell_fundamental(D: int) -> PellSolution:
    """Minimal positive solution of x^2 - D y^2 = 1."""
    _check_nonsquare(D)
    x, y, n = _unit_solution(D)
    if n == -1:
        x, y = x * x + D * y * y, 2 * x * y
    return PellSolution(x, y, 1)


def negative_pell(D: int) -> PellSolution | None:
    """Minimal positive solution of x^2 - D y^2 = -1, or None."""
    _check_nonsquare(D)
    x, y, n = _unit_solution(D)
    return PellSolution(x, y, -1) if n == -1 else None


def legendre_criterion(p: int) -> bool:
    """For a prime p the negative Pell equation is solvable iff p = 2 or p = 1 mod 4."""
    return p == 2 or p % 4 == 1


def fundamental_unit(D: int) -> FundamentalUnit:
    """Fundamental unit of the real quadratic order of discriminant D."""
    _check_nonsquare(D)
    if D % 4 == 0:
        x, y, n = _unit_solution(D // 4)
        return FundamentalUnit(QuadNum(x, Fraction(y, 2), D), n)
    if D % 4 == 1:
        g, b, n = _unit_solution(D, 2, 1)
        return FundamentalUnit(QuadNum(Fraction(g, 2), Fraction(b, 2), D), n)
    raise ValueError(f"{D} is not a discriminant")


def norm_one_unit(D: int) -> QuadNum:
    """Generator lambda > 1 of the units of norm 1 in the order of discriminant D."""
    u = fundamental_unit(D)
    return u.eps * u.eps if u.norm == -1 else u.eps


def _check_form(q: Form) -> None:
    if not q.is_primitive():
        raise ValueError(f"{q} is not primitive")
    _check_nonsquare(q.disc)


def automorph(q: Form) -> IntMatrix:
    """The generator M_Q of the proper automorphs of q with eigenvalue lambda_Q > 1."""
    _check_form(q)
    lam = norm_one_unit(q.disc)
    x, y = lam.x, lam.y
    A, B, C = q
    m = [x - B * y, -2 * C * y, 2 * A * y, x + B * y]
    if any(v.denominator != 1 for v in m):
        raise AssertionError(f"non-integral automorph for {q}")
    return IntMatrix(*(int(v) for v in m))


def automorph_sqrt(q: Form) -> QuadMatrix:
    """Square root of automorph(q) over Q(sqrt(D)), from a unit of norm -1."""
    _check_form(q)
    D = q.disc
    u = fundamental_unit(D)
    if u.norm != -1:
        raise ValueError(f"fundamental unit of discriminant {D} has norm +1")
    xp, yp = u.x, u.y
    A, B, C = q

    def e(v: Fraction) -> QuadNum:
        return QuadNum(0, Fraction(v) / D, D)

    return QuadMatrix(e(D * yp - B * xp), e(-2 * C * xp), e(2 * A * xp), e(D * yp + B * xp))


def s_half() -> QuadMatrix:
    """(1/sqrt 2)(1 1; -1 1), a square root of (0 1; -1 0)."""
    h = QuadNum(0, Fraction(1, 2), 2)
    return QuadMatrix(h, h, -h, h)


def level_automorph(N: int, q: Form) -> tuple[IntMatrix, int]:
    """(M_Q^n, n) with n >= 1 minimal such that M_Q^n lies in Gamma^0(N)."""
    m = automorph(q)
    a, b, c, d = (v % N for v in m)
    pa, pb, pc, pd = a, b, c, d
    n = 1
    while pb % N:
        pa, pb, pc, pd = ((pa * a + pb * c) % N, (pa * b + pb * d) % N,
                          (pc * a + pd * c) % N, (pc * b + pd * d) % N)
        n += 1
    return m ** n, n
