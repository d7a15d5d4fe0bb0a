"""M-symbols, M-cycles and the rational homology of X_0(N) for prime N.

Symbols printed as (r:1) follow the Gamma^0(N) picture, where (r:1) is the
path {i*inf, r}.  Conjugating by tau -> tau/N turns Gamma^0(N) into
Gamma_0(N) and this path into the modular symbol {inf, r/N}, which is then
written in terms of Manin symbols (c:d) = g{0, inf} in the usual way.
The homology is the quotient of Q[P^1(Z/N)] by the two and three term
relations, and H_1(X_0(N), Q) is the kernel of the boundary map on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cache

from .classgroup import kronecker
from .coding import (
    Component,
    NCycle,
    arc_pairing,
    centered,
    components,
    half_turn,
    star,
)
from .qform import INF, Form, IntMatrix, T, act, act_projective, sign


@dataclass(frozen=True, order=True)
class MSymbol:
    """Element (c:d) of P^1(Z/N), normalized to (c:1) with c in C(N), or (1:0)."""

    c: int
    d: int
    N: int

    @classmethod
    def of(cls, c: int, d: int, N: int) -> MSymbol:
        c, d = c % N, d % N
        if d:
            return cls(centered(c * pow(d, -1, N), N), 1, N)
        if c == 0:
            raise ValueError("(0:0) is not a point of P^1")
        return cls(1, 0, N)

    def __repr__(self) -> str:
        return f"({self.c}:{self.d})"


def format_symbols(symbols: list[MSymbol]) -> str:
    """The sum in the notation (r:1) + (s:1) + ...; the empty sum is 0."""
    return " + ".join(repr(s) for s in symbols) if symbols else "0"


def component_class(code: list[IntMatrix] | NCycle, N: int | None = None) -> list[MSymbol]:
    """Symbols (r_n:1) with r_n = -(M_n)_22 for the hyperbolic matrices of a code.

    A matrix counts as hyperbolic when tr^2 > 4 det, i.e. |tr| > 2 in
    determinant one; the others contribute nothing.
    """
    if isinstance(code, NCycle):
        N, mats = code.N, list(code.matrices)
    else:
        mats = list(code)
    if N is None:
        raise ValueError("level required")
    return [MSymbol.of(-m.d, 1, N) for m in mats if m.is_hyperbolic()]


def component_symbols(comp: Component) -> list[MSymbol]:
    return component_class(comp.code, comp.N)


# M-cycles

@dataclass(frozen=True)
class MCycle:
    """Four geodesic segments, each a pair of points (x, y^2) or INF."""

    case: int
    s: int
    segments: tuple[tuple[object, object], ...]
    image: Form  # Q' in the first case, M_s o Q in the second
    matrix: IntMatrix  # integer multiple of M_s (determinant 2 in the first case)

    def symbol(self, N: int) -> MSymbol | None:
        """Homology class: zero in the first case, (s:1) in the second."""
        return None if self.case == 1 else MSymbol.of(self.s, 1, N)


def top_point(q: Form) -> tuple[Fraction, Fraction]:
    """Highest point of the geodesic of q."""
    A, B, _ = q
    return Fraction(-B, 2 * A), Fraction(q.disc, 4 * A * A)


def circle_meet(q: Form, s: int) -> tuple[Fraction, Fraction] | None:
    """Intersection of the geodesic of q with the unit semicircle centred at s."""
    A, B, _ = q
    c = Fraction(-B, 2 * A)
    r2 = Fraction(q.disc, 4 * A * A)
    if c == s:
        return None
    # (x - c)^2 - (x - s)^2 = r^2 - 1
    x = (r2 - 1 - c * c + s * s) / (2 * (s - c))
    y2 = 1 - (x - s) ** 2
    return (x, y2) if y2 > 0 else None


def _map_point(m: IntMatrix, pt: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    x, y2 = pt
    a, b, c, d = m
    n2 = x * x + y2
    den = c * c * n2 + 2 * c * d * x + d * d
    return (a * c * n2 + (a * d + b * c) * x + b * d) / den, m.det ** 2 * y2 / den ** 2


def m_cycle(N: int, q: Form, s: int) -> MCycle:
    """The M-cycle of the geodesic of q for the caller-supplied integer s."""
    if q.disc <= 0 or q.a == 0:
        raise ValueError(f"{q} must be indefinite with A != 0")
    s = centered(s, N)
    s1 = star(-s, N)
    top = top_point(q)
    shifted = act(T(-s), q)
    if s == s1 and shifted.a + shifted.c == 0:
        m = half_turn(s, sign(q.a))
        q1 = act_projective(m, q)
        centre = (Fraction(s), Fraction(1))
        segs = ((INF, top), (top, centre), (centre, top_point(q1)), (top_point(q1), INF))
        return MCycle(1, s, segs, q1, m)
    p = circle_meet(q, s)
    if p is None:
        raise ValueError(f"the geodesic of {q} does not meet the circle at {s}")
    m = arc_pairing(s, N)
    q1 = act(m, q)
    mp = _map_point(m, p)
    segs = ((INF, top), (top, p), (mp, top_point(q1)), (top_point(q1), INF))
    return MCycle(2, s, segs, q1, m)


# Manin symbols for Gamma_0(N)

def genus(N: int) -> int:
    """Genus of X_0(N) for N prime."""
    nu2 = 1 + kronecker(-4, N)
    nu3 = 1 + kronecker(-3, N)
    g = 1 + Fraction(N + 1, 12) - Fraction(nu2, 4) - Fraction(nu3, 3) - 1
    if g.denominator != 1:
        raise ArithmeticError(f"non-integral genus at N={N}")
    return int(g)


def _index(c: int, d: int, N: int) -> int:
    c, d = c % N, d % N
    if d:
        return c * pow(d, -1, N) % N
    return N


def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    mat = [r[:] for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(vectors: list[list[Fraction]]) -> int:
    if not vectors:
        return 0
    return len(_rref([list(map(Fraction, v)) for v in vectors], len(vectors[0]))[1])


@dataclass(frozen=True)
class ManinBasis:
    """Manin symbol space modulo relations, with its cuspidal part.

    Symbol (c:1) has index c mod N and (1:0) has index N.  Coordinates of a
    class are its entries at the free (non-pivot) indices after reduction.
    """

    N: int
    relations: tuple[tuple[Fraction, ...], ...]
    pivots: tuple[int, ...]
    free: tuple[int, ...]
    cuspidal: tuple[tuple[Fraction, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.cuspidal)

    def reduce(self, v: list[Fraction]) -> tuple[Fraction, ...]:
        v = list(v)
        for row, p in zip(self.relations, self.pivots):
            f = v[p]
            if f:
                v = [a - f * b for a, b in zip(v, row)]
        return tuple(v[i] for i in self.free)


def _relation_rows(N: int) -> list[list[Fraction]]:
    n = N + 1
    pts = [(c, 1) for c in range(N)] + [(1, 0)]
    rows = []
    for c, d in pts:
        r = [Fraction(0)] * n
        r[_index(c, d, N)] += 1
        r[_index(-d, c, N)] += 1
        rows.append(r)
        r = [Fraction(0)] * n
        r[_index(c, d, N)] += 1
        r[_index(c + d, -c, N)] += 1
        r[_index(d, -c - d, N)] += 1
        rows.append(r)
    return rows


def _boundary(N: int, idx: int) -> tuple[int, int]:
    """Boundary of the symbol at index idx on the cusps (inf, 0) of X_0(N)."""
    c, d = (1, 0) if idx == N else (idx, 1)
    # g{0, inf} = {b/d, a/c}: end cusp is inf iff N | c, start cusp inf iff N | d
    end = (1, 0) if c % N == 0 else (0, 1)
    start = (1, 0) if d % N == 0 else (0, 1)
    return end[0] - start[0], end[1] - start[1]


@cache
def manin_basis(N: int) -> ManinBasis:
    """Manin symbol presentation of H_1(X_0(N), Q) for N prime."""
    rows, pivots = _rref(_relation_rows(N), N + 1)
    free = [i for i in range(N + 1) if i not in set(pivots)]
    # boundary of a free basis element after reduction is the boundary of the symbol
    bmat = [list(map(Fraction, _boundary(N, i))) for i in free]
    # kernel of v -> sum v_i * boundary(free_i)
    cols = len(free)
    trans = [[bmat[j][k] for j in range(cols)] for k in range(2)]
    red, piv = _rref(trans, cols)
    kernel = []
    for f in (j for j in range(cols) if j not in piv):
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for row, p in zip(red, piv):
            v[p] = -row[f]
        kernel.append(tuple(v))
    basis = ManinBasis(N, tuple(tuple(r) for r in rows), tuple(pivots), tuple(free), tuple(kernel))
    if basis.dimension != 2 * genus(N):
        raise ArithmeticError(f"homology of X_0({N}) has dimension {basis.dimension}")
    return basis


def _convergents(a: int, b: int) -> list[tuple[int, int]]:
    """Convergents p/q of a/b, preceded by 1/0."""
    out = [(1, 0)]
    p0, q0, p1, q1 = 0, 1, 1, 0
    while b:
        t, r = divmod(a, b)
        p0, q0, p1, q1 = p1, q1, t * p1 + p0, t * q1 + q0
        out.append((p1, q1))
        a, b = b, r
    return out


def modular_symbol(a: int, b: int, N: int) -> dict[int, int]:
    """Manin symbol expansion of {inf, a/b} for Gamma_0(N), as index -> multiplicity."""
    out: dict[int, int] = {}

    def add(c: int, d: int, e: int) -> None:
        i = _index(c, d, N)
        out[i] = out.get(i, 0) + e

    # {inf, a/b} is the sum of {p_{k-1}/q_{k-1}, p_k/q_k} over the convergents from 1/0
    cf = _convergents(a, b)
    prev = cf[0]
    for p, q in cf[1:]:
        # g(0) = prev, g(inf) = p/q
        det = p * prev[1] - prev[0] * q
        if det == 1:
            add(q, prev[1], 1)
        elif det == -1:
            add(-q, prev[1], 1)
        else:
            raise AssertionError("convergents not adjacent")
        prev = (p, q)
    return out


def symbol_vector(sym: MSymbol, basis: ManinBasis) -> tuple[Fraction, ...]:
    """Quotient coordinates of the path {i*inf, r} of the symbol (r:1)."""
    N = basis.N
    if sym.d != 1:
        raise ValueError("only symbols (r:1) are paths from the cusp")
    v = [Fraction(0)] * (N + 1)
    for i, e in modular_symbol(sym.c, N, N).items():
        v[i] += e
    return basis.reduce(v)


def class_vector(symbols: list[MSymbol], basis: ManinBasis) -> tuple[Fraction, ...]:
    total = [Fraction(0)] * len(basis.free)
    for s in symbols:
        total = [a + b for a, b in zip(total, symbol_vector(s, basis))]
    return tuple(total)


def symbol_relation_images(N: int) -> list[tuple[Fraction, ...]]:
    """Quotient images of x + xS and x + xU + xU^2 for every symbol x; all should vanish."""
    basis = manin_basis(N)
    out = []
    for row in _relation_rows(N):
        out.append(basis.reduce(row))
    return out


def component_vectors(N: int) -> list[tuple[Fraction, ...]]:
    basis = manin_basis(N)
    return [class_vector(component_symbols(c), basis) for c in components(N)]


def component_rank(N: int) -> int:
    """Rank over Q of the span of the homology classes of the real components."""
    return rank([list(v) for v in component_vectors(N)])
