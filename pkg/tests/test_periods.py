from __future__ import annotations

import math

import numpy as np
import pytest

from realocus.coding import components
from realocus.homology import component_symbols
from realocus.periods import (
    CURVES_ENV,
    affine_points,
    alpha,
    an_list,
    ap,
    fricke_sign,
    get_curve,
    integrate_msymbol,
    load_curves,
    make_curve,
    matrix_integral,
    parse_curves,
    phi,
    phi_fricke,
    real_period,
    semistable_conductor,
)
from realocus.qform import IntMatrix

scipy_integrate = pytest.importorskip("scipy.integrate")


@pytest.fixture(scope="module")
def curves():
    return load_curves()


def brute_affine(curve, p):
    a1, a2, a3, a4, a6 = curve.coefficients
    return sum(1 for x in range(p) for y in range(p)
               if (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % p == 0)


def quad_period(curve) -> float:
    """2 * integral over [e1, inf) of dx / sqrt(4x^3 + b2 x^2 + 2 b4 x + b6), with x = e1 + t^2."""
    b2, b4, b6, _ = curve.b_invariants
    e1 = max(r.real for r in np.roots([4, b2, 2 * b4, b6]) if abs(r.imag) < 1e-12)
    # f(x) = (x - e1) h(x)
    h = np.polydiv([4.0, b2, 2.0 * b4, b6], [1.0, -e1])[0]
    val, _ = scipy_integrate.quad(lambda t: 2.0 / math.sqrt(np.polyval(h, e1 + t * t)), 0, np.inf,
                                    epsabs=1e-14, epsrel=1e-13, limit=200)
    return 2 * val


def test_bundled_curves(curves):
    assert set(curves) >= {"37A1", "79A1", "163A1"}
    assert [curves[k].conductor for k in ("37A1", "79A1", "163A1")] == [37, 79, 163]
    assert curves["37A1"].discriminant == 37
    assert curves["163A1"].discriminant == -163


def test_conductor_checks():
    assert semistable_conductor((0, 0, 1, -1, 0)) == 37
    with pytest.raises(ValueError):
        make_curve("38A1", (0, 0, 1, -1, 0))
    with pytest.raises(ValueError):
        semistable_conductor((0, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        parse_curves("37A1 0 0 1 -1\n")


def test_env_override(tmp_path, monkeypatch):
    f = tmp_path / "c.txt"
    f.write_text("# one curve\n37A1 0 0 1 -1 0\n")
    monkeypatch.setenv(CURVES_ENV, str(f))
    assert list(load_curves()) == ["37A1"]
    with pytest.raises(KeyError):
        get_curve("79A1")


@pytest.mark.parametrize("label", ["37A1", "79A1", "163A1"])
def test_point_counts(curves, label):
    c = curves[label]
    for p in (2, 3, 5, 7, 11, 13, 37, 41, 79, 97):
        assert affine_points(c, p) == brute_affine(c, p)
        if c.conductor % p:
            assert abs(ap(c, p)) <= 2 * math.sqrt(p)


def test_37a1_coefficients(curves):
    an = an_list(curves["37A1"], 12)
    assert list(an[1:12].astype(int)) == [1, -2, -3, 2, -2, 6, -1, 0, 6, 4, -5]


def test_an_multiplicative(curves):
    an = an_list(curves["79A1"], 400)
    for m, n in [(2, 3), (5, 7), (4, 9), (11, 13), (3, 79)]:
        assert an[m * n] == an[m] * an[n]


@pytest.mark.parametrize("label", ["37A1", "79A1", "163A1"])
def test_real_period_against_quadrature(curves, label):
    assert real_period(curves[label]) == pytest.approx(quad_period(curves[label]), rel=1e-10)


def test_real_period_constants(curves):
    assert abs(real_period(curves["37A1"]) - 2.9934586462319) < 1e-9
    assert abs(real_period(curves["163A1"]) - 5.518073071224596) < 1e-12


def test_fricke_sign(curves):
    for label in ("37A1", "79A1", "163A1"):
        assert fricke_sign(curves[label]) == 1


def test_phi_fricke_agrees(curves):
    c = curves["37A1"]
    for tau in (complex(0.1, 0.3), complex(-2.0, 0.05), complex(0.4, 0.02)):
        assert abs(phi(c, tau) - phi_fricke(c, tau)) < 1e-9


def test_symbol_integral_fricke_variant(curves):
    c = curves["37A1"]
    a = integrate_msymbol(37, c, 7)
    b = integrate_msymbol(37, c, 7, fricke=True)
    assert abs(a - b) < 1e-9


def test_parabolic_integral_vanishes(curves):
    c = curves["37A1"]
    assert matrix_integral(c, IntMatrix(1, 37, 0, 1)) == 0
    with pytest.raises(ValueError):
        matrix_integral(c, IntMatrix(1, 1, 0, 1))


@pytest.mark.parametrize("N,label,kind", [(37, "37A1", "cusp"), (79, "79A1", "noncusp"), (163, "163A1", "cusp")])
def test_code_matrix_integrals(curves, N, label, kind):
    """Integrals over {tau, M tau} for the code matrices give the symbol sum, reversed."""
    c = curves[label]
    comp = next(x for x in components(N) if x.kind == kind)
    over_matrices = sum(matrix_integral(c, m) for m in comp.code if m.det == 1 and m.is_hyperbolic())
    over_symbols = sum(integrate_msymbol(N, c, s.c) for s in component_symbols(comp))
    assert abs(over_matrices + over_symbols) < 1e-9
    assert abs(over_symbols.real) == pytest.approx(real_period(c), rel=1e-9)


@pytest.mark.parametrize("N,label,kind", [(37, "37A1", "cusp"), (79, "79A1", "noncusp"),
                                          (163, "163A1", "cusp"), (37, "37A1", "noncusp")])
def test_alpha(curves, N, label, kind):
    c = curves[label]
    comp = next(x for x in components(N) if x.kind == kind)
    res = alpha(N, c, comp)
    assert res.alpha == 1 and res.residual < 1e-5 * res.omega_E
    assert set(res.to_dict()) == {"omega_E", "omega_EQ", "alpha", "residual"}


def test_wrong_level_rejected(curves):
    with pytest.raises(ValueError):
        integrate_msymbol(79, curves["37A1"], 7)
