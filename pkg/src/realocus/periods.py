"""Periods of modular elliptic curves along real components.

The newform f of an elliptic curve E of conductor N is built from point
counts, and the integral of 2*pi*i f(tau) dtau from i*inf to tau is

    Phi(tau) = sum_n a_n / n * q^n,  q = exp(2 pi i tau).

A symbol (r:1) at level N is the path {inf, r/N} for Gamma_0(N), and for
g = (r, b; N, d) in Gamma_0(N) its integral is Phi(g tau) - Phi(tau) for
any tau.  The base point -d/N + i/N keeps both ends at height 1/N.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .coding import Component, centered
from .homology import MSymbol, component_symbols
from .qform import IntMatrix

CURVES_ENV = "REALOCUS_CURVES"


@dataclass(frozen=True)
class EllipticCurveData:
    label: str
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    conductor: int

    @property
    def coefficients(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b_invariants(self) -> tuple[int, int, int, int]:
        a1, a2, a3, a4, a6 = self.coefficients
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def c4(self) -> int:
        b2, b4, _, _ = self.b_invariants
        return b2 * b2 - 24 * b4

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def _radical(n: int) -> int:
    n = abs(n)
    r, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            r *= p
            while n % p == 0:
                n //= p
        p += 1
    return r * n if n > 1 else r


def semistable_conductor(a: tuple[int, int, int, int, int]) -> int:
    """Conductor of a curve whose c4 is prime to its discriminant.

    Such a model is minimal with multiplicative reduction at every bad
    prime, so the conductor is the radical of the discriminant.
    """
    tmp = EllipticCurveData("", *a, conductor=0)
    disc = tmp.discriminant
    if disc == 0:
        raise ValueError(f"{a} is singular")
    if math.gcd(tmp.c4, disc) != 1:
        raise ValueError(f"{a}: cannot certify the conductor (c4 and discriminant share a factor)")
    return _radical(disc)


def make_curve(label: str, a: tuple[int, ...]) -> EllipticCurveData:
    prefix = label[: len(label) - len(label.lstrip("0123456789"))]
    if not prefix:
        raise ValueError(f"label {label!r} does not start with the conductor")
    if len(a) != 5:
        raise ValueError(f"{label}: expected 5 coefficients")
    N = semistable_conductor(tuple(a))
    if N != int(prefix):
        raise ValueError(f"{label}: computed conductor {N} does not match the label")
    return EllipticCurveData(label, *a, conductor=N)


def parse_curves(text: str) -> dict[str, EllipticCurveData]:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 6:
            raise ValueError(f"line {lineno}: expected 'label a1 a2 a3 a4 a6'")
        try:
            coeffs = tuple(int(v) for v in parts[1:])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        out[parts[0].upper()] = make_curve(parts[0].upper(), coeffs)
    return out


def load_curves(path: str | os.PathLike | None = None) -> dict[str, EllipticCurveData]:
    """Curves from `path`, else $REALOCUS_CURVES, else the bundled file."""
    path = path or os.environ.get(CURVES_ENV)
    if path:
        return parse_curves(Path(path).read_text())
    return parse_curves(resources.files("realocus").joinpath("data/curves.txt").read_text())


def get_curve(label: str, path: str | os.PathLike | None = None) -> EllipticCurveData:
    curves = load_curves(path)
    try:
        return curves[label.upper()]
    except KeyError:
        raise KeyError(f"unknown curve {label!r}; known: {', '.join(sorted(curves))}") from None


# coefficients of the newform

def _primes_upto(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i::i] = False
    return np.nonzero(sieve)[0]


def affine_points(curve: EllipticCurveData, p: int) -> int:
    """Number of affine solutions of the Weierstrass equation over F_p."""
    a1, a2, a3, a4, a6 = curve.coefficients
    x = np.arange(p, dtype=np.int64)
    if p == 2:
        return sum(1 for xx in range(2) for y in range(2)
                   if (y * y + a1 * xx * y + a3 * y - (xx ** 3 + a2 * xx * xx + a4 * xx + a6)) % 2 == 0)
    # completing the square: (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    b2, b4, b6, _ = curve.b_invariants
    rhs = (((4 * x + b2 % p) % p * x % p + (2 * b4) % p) % p * x % p + b6 % p) % p
    is_sq = np.zeros(p, dtype=np.int64)
    is_sq[(x * x) % p] = 1
    chi = np.where(rhs == 0, 0, 2 * is_sq[rhs] - 1)
    return int(p + chi.sum())


def ap(curve: EllipticCurveData, p: int) -> int:
    """a_p = p - #affine points; at bad primes this is the local value 1, -1 or 0."""
    return p - affine_points(curve, p)


_AN_CACHE: dict[EllipticCurveData, np.ndarray] = {}


def _an_compute(curve: EllipticCurveData, M: int) -> np.ndarray:
    N = curve.conductor
    spf = np.zeros(M + 1, dtype=np.int64)
    for p in _primes_upto(M):
        block = spf[p::p]
        block[block == 0] = p
    an = np.zeros(M + 1, dtype=np.float64)
    if M >= 1:
        an[1] = 1.0
    apv: dict[int, int] = {}
    for n in range(2, M + 1):
        p = int(spf[n])
        m, pk = n, 1
        while m % p == 0:
            m //= p
            pk *= p
        if m > 1:
            an[n] = an[pk] * an[m]
            continue
        if p not in apv:
            apv[p] = ap(curve, p)
        if n == p:
            an[n] = apv[p]
        elif N % p == 0:
            an[n] = an[n // p] * apv[p]
        else:
            an[n] = apv[p] * an[n // p] - p * an[n // (p * p)]
    an.setflags(write=False)
    return an


def an_list(curve: EllipticCurveData, M: int) -> np.ndarray:
    """a_0, ..., a_M of the newform (a_0 = 0)."""
    have = _AN_CACHE.get(curve)
    if have is None or len(have) <= M:
        have = _an_compute(curve, max(M, 2 * (len(have) if have is not None else 0)))
        _AN_CACHE[curve] = have
    return have[: M + 1]


def _terms_for(height: float, tol: float) -> int:
    # |a_n / n q^n| <= d(n) e^{-2 pi n h}; a small margin covers the divisor bound
    return int(math.ceil((-math.log(tol) + 10) / (2 * math.pi * height))) + 10


def phi(curve: EllipticCurveData, tau: complex, tol: float = 1e-15) -> complex:
    """sum a_n/n q^n at tau."""
    h = tau.imag
    if h <= 0:
        raise ValueError("tau must lie in the upper half plane")
    M = _terms_for(h, tol)
    if M > 5_000_000:
        raise RuntimeError(f"height {h} needs {M} terms")
    an = an_list(curve, M)
    n = np.arange(1, M + 1)
    q = np.exp(2j * np.pi * n * tau)
    return complex(np.sum(an[1:] / n * q))


def fricke_sign(curve: EllipticCurveData) -> int:
    """Eigenvalue w of f under tau -> -1/(N tau), from f(-1/(N tau)) = w N tau^2 f(tau)."""
    N = curve.conductor
    t = 1.25

    def f(tau: complex) -> complex:
        M = _terms_for(tau.imag, 1e-15)
        an = an_list(curve, M)
        n = np.arange(1, M + 1)
        return complex(np.sum(an[1:] * np.exp(2j * np.pi * n * tau)))

    tau = 1j * t / math.sqrt(N)
    ratio = f(-1 / (N * tau)) / (N * tau * tau * f(tau))
    w = round(ratio.real)
    if w not in (1, -1) or abs(ratio - w) > 1e-6:
        raise ArithmeticError(f"Fricke eigenvalue not +-1: {ratio}")
    return w


def phi_fricke(curve: EllipticCurveData, tau: complex, w: int | None = None) -> complex:
    """Phi(tau) evaluated as w Phi(W tau) + (1 - w) Phi(i/sqrt N)."""
    N = curve.conductor
    w = fricke_sign(curve) if w is None else w
    wtau = -1 / (N * tau)
    return w * phi(curve, wtau) + (1 - w) * phi(curve, 1j / math.sqrt(N))


def integrate_msymbol(N: int, curve: EllipticCurveData, r: int, fricke: bool = False) -> complex:
    """Integral of 2 pi i f(tau) dtau along the path of the symbol (r:1)."""
    if curve.conductor != N:
        raise ValueError(f"curve {curve.label} has conductor {curve.conductor}, not {N}")
    r = centered(r, N)
    if r == 0:
        raise ValueError("(0:1) is not a closed path")
    d = pow(r, -1, N)
    d = centered(d, N)
    b = (r * d - 1) // N
    tau0 = complex(-d, 1) / N
    gtau = (r * tau0 + b) / (N * tau0 + d)
    ev = (lambda t: phi_fricke(curve, t)) if fricke else (lambda t: phi(curve, t))
    return ev(gtau) - ev(tau0)


def matrix_integral(curve: EllipticCurveData, m: IntMatrix) -> complex:
    """Integral of 2 pi i f(tau) dtau over {tau, m tau} for m in Gamma^0(N).

    The value does not depend on tau.  After tau -> tau/N the matrix is
    (a, b/N; N c, d) in Gamma_0(N), and the base point is chosen so both
    ends sit at the same height.
    """
    N = curve.conductor
    if not m.in_gamma_upper(N):
        raise ValueError(f"{m} is not in Gamma^0({N})")
    a, b, c, d = m.a, m.b // N, m.c * N, m.d
    if c == 0:
        return 0j
    tau = complex(-d, 1) / c
    return phi(curve, (a * tau + b) / (c * tau + d)) - phi(curve, tau)


# the real period

def _agm(a: float, b: float) -> float:
    for _ in range(100):
        if abs(a - b) <= 1e-16 * abs(a):
            break
        a, b = (a + b) / 2, math.sqrt(a * b)
    return a


def real_period(curve: EllipticCurveData) -> float:
    """Least positive real period of the Neron differential dx/(2y + a1 x + a3)."""
    b2, b4, b6, _ = curve.b_invariants
    roots = np.roots([4.0, float(b2), 2.0 * b4, float(b6)])
    if curve.discriminant > 0:
        e3, e2, e1 = sorted(r.real for r in roots)
        return math.pi / _agm(math.sqrt(e1 - e3), math.sqrt(e1 - e2))
    e1 = max(roots, key=lambda r: -abs(r.imag)).real
    e2 = next(r for r in roots if r.imag > 0)
    z = abs(complex(e1) - e2)  # |e1 - e2|
    return 2 * math.pi / _agm(2 * math.sqrt(z), math.sqrt(2 * z + 3 * e1 + b2 / 4))


@dataclass(frozen=True)
class PeriodResult:
    omega_E: float
    omega_EQ: float
    alpha: int
    residual: float
    imaginary: float

    def to_dict(self) -> dict[str, float | int]:
        return {"omega_E": self.omega_E, "omega_EQ": self.omega_EQ,
                "alpha": self.alpha, "residual": self.residual}


def symbols_integral(N: int, curve: EllipticCurveData, symbols: list[MSymbol]) -> complex:
    return sum((integrate_msymbol(N, curve, s.c) for s in symbols), 0j)


def alpha(N: int, curve: EllipticCurveData, comp: Component | list[MSymbol], tol: float = 1e-5) -> PeriodResult:
    """Omega_{E,Q} of a component and the integer alpha with Omega_{E,Q} = alpha Omega_E.

    The orientation of a component is not canonical, so alpha is reported
    as a nonnegative integer.  For a half-cycle component whose symbols give
    twice its class, the integral is halved.
    """
    symbols = comp if isinstance(comp, list) else component_symbols(comp)
    total = symbols_integral(N, curve, symbols)
    if isinstance(comp, Component) and comp.doubled:
        total /= 2
    omega = real_period(curve)
    value = abs(total.real)
    a = round(value / omega)
    residual = abs(value - a * omega)
    if residual >= tol * omega:
        raise ArithmeticError(f"Omega_EQ/Omega_E = {value / omega} is not an integer within {tol}")
    return PeriodResult(omega, value, a, residual, total.imag)
