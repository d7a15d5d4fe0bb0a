"""Form class groups, class numbers, Heegner forms and the component count."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from math import gcd, isqrt

from .qform import Form, reduce_definite


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_fundamental(d: int) -> bool:
    if d == 1 or d == 0:
        return False
    if d % 4 == 1:
        return _squarefree(abs(d))
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(abs(m))
    return False


def _squarefree(n: int) -> bool:
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


def _check_disc(D: int) -> None:
    if D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a discriminant")
    if D >= 0 and isqrt(D) ** 2 == D:
        raise ValueError(f"{D} is a square")


# indefinite reduction in the sense of Gauss

def is_gauss_reduced(q: Form) -> bool:
    A, B, _ = q
    D = q.disc
    t = 2 * abs(A) - B
    return B > 0 and B * B < D and (2 * abs(A) + B) ** 2 > D and (t < 0 or t * t < D)


def rho(q: Form) -> Form:
    """One step of the reduction operator; an SL2(Z)-equivalent form."""
    _, B, C = q
    D = q.disc
    s = isqrt(D)
    m = 2 * abs(C)
    if abs(C) > s:
        b = (-B) % m
        if b > abs(C):
            b -= m
    else:
        b = s - ((s + B) % m)
    return Form(C, b, (b * b - D) // (4 * C))


def reduced_cycle(q: Form) -> list[Form]:
    """The rho-cycle of Gauss-reduced forms in the class of q (D > 0)."""
    while not is_gauss_reduced(q):
        q = rho(q)
    cyc = [q]
    r = rho(q)
    while r != q:
        cyc.append(r)
        r = rho(r)
    return cyc


def _key(q: Form) -> tuple[int, int, int]:
    return (abs(q.a), q.a, q.b)


def canonical_form(q: Form) -> Form:
    """Canonical representative of the SL2(Z) class of a primitive form."""
    D = q.disc
    if D < 0:
        if q.a < 0:
            raise ValueError("negative definite forms are not handled")
        return reduce_definite(q)[0]
    return min(reduced_cycle(q), key=_key)


@dataclass(frozen=True)
class FormClass:
    """Proper equivalence class, stored through its canonical representative."""

    rep: Form

    @classmethod
    def of(cls, q: Form) -> FormClass:
        return cls(canonical_form(q))

    @property
    def disc(self) -> int:
        return self.rep.disc

    def __repr__(self) -> str:
        return f"FormClass({self.rep})"


def principal_form(D: int) -> Form:
    if D % 4 == 0:
        return Form(1, 0, -D // 4)
    return Form(1, 1, (1 - D) // 4)


def _definite_reduced(D: int) -> list[Form]:
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) == 1:
                out.append(Form(a, b, c))
        a += 1
    return out


def _indefinite_reduced(D: int) -> list[Form]:
    s = isqrt(D)
    out = []
    for B in range(1, s + 1):
        if (B - D) % 2:
            continue
        n = (B * B - D) // 4  # = A*C, negative
        m = -n
        for a in range(1, m + 1):
            if m % a:
                continue
            for A in (a, -a):
                q = Form(A, B, n // A)
                if q.is_primitive() and is_gauss_reduced(q):
                    out.append(q)
    return out


@cache
def narrow_classes(D: int) -> tuple[FormClass, ...]:
    """All proper classes of primitive forms of discriminant D (positive definite if D < 0)."""
    _check_disc(D)
    if D < 0:
        return tuple(FormClass(q) for q in _definite_reduced(D))
    seen: set[Form] = set()
    out = []
    for q in _indefinite_reduced(D):
        if q in seen:
            continue
        cyc = reduced_cycle(q)
        seen.update(cyc)
        out.append(FormClass(min(cyc, key=_key)))
    return tuple(sorted(out, key=lambda c: _key(c.rep)))


def negate_class(c: FormClass) -> FormClass:
    """[A, B, C] -> [-A, B, -C], multiplication by the class of the norm -1 ideal."""
    A, B, C = c.rep
    return FormClass.of(Form(-A, B, -C))


def class_number(D: int, narrow: bool = False) -> int:
    """h(D); for D > 0 the wide class number unless narrow=True."""
    classes = narrow_classes(D)
    if D < 0 or narrow:
        return len(classes)
    orbits = {frozenset((c, negate_class(c))) for c in classes}
    return len(orbits)


def kappa(N: int) -> int:
    """Number of connected components of the real locus of X_0^+(N)."""
    if N < 5 or not _is_prime(N):
        raise ValueError(f"N={N} must be a prime >= 5")
    h4 = class_number(4 * N)
    total = h4 + class_number(N) if N % 4 == 1 else h4 + 1
    if total % 2:
        raise ArithmeticError(f"class number formula not integral at N={N}")
    return total // 2


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1
    return True


# composition

def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """(u, v, g) with u*a + v*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -x0, -y0, -a
    return x0, y0, a


def _positive_rep(c: FormClass) -> Form:
    q = c.rep
    if q.a > 0:
        return q
    for r in reduced_cycle(q):
        if r.a > 0:
            return r
    raise AssertionError("reduced cycle without positive leading coefficient")


def compose_forms(f1: Form, f2: Form) -> Form:
    """Dirichlet composition of two forms of equal discriminant with positive a."""
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    if f1.disc != f2.disc:
        raise ValueError("discriminants differ")
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        u, _, d = _egcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        u, v, d1 = _egcd(s, d)
        x2, y2 = u, -v
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return Form(a3, b3, c3)


def compose(c1: FormClass, c2: FormClass) -> FormClass:
    if c1.disc != c2.disc:
        raise ValueError("discriminants differ")
    return FormClass.of(compose_forms(_positive_rep(c1), _positive_rep(c2)))


def inverse_class(c: FormClass) -> FormClass:
    A, B, C = c.rep
    return FormClass.of(Form(A, -B, C))


def principal_class(D: int) -> FormClass:
    return FormClass.of(principal_form(D))


def ambiguous_classes(D: int) -> list[FormClass]:
    one = principal_class(D)
    return [c for c in narrow_classes(D) if compose(c, c) == one]


# Heegner forms

@dataclass(frozen=True)
class HeegnerContext:
    N: int
    D: int
    r: int

    def __post_init__(self) -> None:
        _check_disc(self.D)
        object.__setattr__(self, "r", self.r % (2 * self.N))
        if (self.r * self.r - self.D) % (4 * self.N):
            raise ValueError(f"r^2 != D mod 4N for {self}")
        if self.conductor % self.N == 0:
            raise ValueError("conductor must be prime to N")

    @property
    def conductor(self) -> int:
        D = abs(self.D)
        f = 1
        p = 2
        while p * p <= D:
            while D % (p * p) == 0:
                cand = self.D // (f * f * p * p)
                if cand % 4 in (0, 1):
                    f *= p
                    D //= p * p
                else:
                    break
            p += 1
        return f


def heegner_forms(ctx: HeegnerContext) -> list[Form]:
    """One form of Q_{N,D,r} for each proper class of discriminant D.

    The returned form of each class has the smallest |A| (then A, then B)
    among those found by scanning A = +-1, +-2, ...
    """
    N, D, r = ctx.N, ctx.D, ctx.r
    targets = set(narrow_classes(D))
    found: dict[FormClass, Form] = {}
    a = 1
    while len(found) < len(targets):
        for A in ((a, -a) if D > 0 else (a,)):
            for B in range(r, r + 2 * N * a, 2 * N):
                for b in sorted({B, B - 2 * N * a}, key=lambda t: (abs(t), t)):
                    num = b * b - D
                    if num % (4 * A * N):
                        continue
                    q = Form(A, b, num // (4 * A))
                    if not q.is_primitive():
                        continue
                    c = FormClass.of(q)
                    if c not in found:
                        found[c] = q
        a += 1
        if a > 10 * abs(D) + 10 * N:
            raise RuntimeError(f"Heegner search did not terminate for {ctx}")
    return sorted(found.values(), key=lambda q: (abs(q.a), q.a, abs(q.b), q.b))


def frobenius_form(ctx: HeegnerContext) -> Form:
    return Form(ctx.N, ctx.r, (ctx.r * ctx.r - ctx.D) // (4 * ctx.N))


def genus_character(delta0: int, ctx: HeegnerContext) -> int:
    """Value of the genus character attached to delta0 on the class of F_N."""
    if not is_fundamental(delta0):
        raise ValueError(f"{delta0} is not a fundamental discriminant")
    if ctx.D % delta0:
        raise ValueError(f"{delta0} does not divide {ctx.D}")
    if delta0 % ctx.N:
        return kronecker(delta0, ctx.N)
    d1 = ctx.D // delta0
    return kronecker(d1, ctx.N)


def class_character(delta0: int, c: FormClass) -> int:
    """Genus character of delta0 evaluated on a class via a represented integer."""
    q = c.rep
    D = q.disc
    if D % delta0:
        raise ValueError(f"{delta0} does not divide {D}")
    bound = 1
    while True:
        for x in range(-bound, bound + 1):
            for y in range(-bound, bound + 1):
                if gcd(x, y) != 1:
                    continue
                m = q.evaluate(x, y)
                if m and gcd(m, delta0) == 1:
                    return kronecker(delta0, m)
        bound += 1
