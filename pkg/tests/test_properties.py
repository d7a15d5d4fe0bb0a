"""Property tests with hypothesis."""

from __future__ import annotations

from math import isqrt

from conftest import golden_rows
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from realocus.coding import CaseTag, components, n_cycle, n_reduce
from realocus.qform import (
    Form,
    IntMatrix,
    S,
    T,
    act,
    intersection_sigma,
    is_reduced_indefinite,
    meets_f_interior,
)

coef = st.integers(-60, 60)
forms = st.tuples(coef, coef, coef).filter(any).map(lambda t: Form(*t))


@st.composite
def sl2z(draw) -> IntMatrix:
    m = IntMatrix(1, 0, 0, 1)
    for t in draw(st.lists(st.integers(-6, 6), max_size=6)):
        m = m @ T(t) @ S
    return m


def _indefinite(q: Form) -> bool:
    return q.disc > 0 and isqrt(q.disc) ** 2 != q.disc


@settings(max_examples=1000, deadline=None)
@given(sl2z(), forms)
def test_act_preserves_discriminant(m, q):
    assert act(m, q).disc == q.disc


@settings(max_examples=200, deadline=None)
@given(sl2z(), sl2z(), forms)
def test_act_composes(m1, m2, q):
    assert act(m1 @ m2, q) == act(m1, act(m2, q))


def test_golden_code_matrices_in_level():
    for N in (13, 5):
        for _, m, case in golden_rows(N):
            if case != "4":
                assert m.det == 1 and m.in_gamma_upper(N)
    for N in (37, 79, 163):
        for comp in components(N):
            for m, tag in zip(comp.cycle.matrices, comp.cycle.tags):
                if tag is not CaseTag.CASE4:
                    assert m.det == 1 and m.in_gamma_upper(N)


@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(st.sampled_from([5, 7, 11, 13, 17, 37]), st.integers(1, 8), coef, st.integers(-20, 20))
def test_cycle_closes(N, A, B, k):
    q = Form(A, B, k * N)
    assume(_indefinite(q) and q.content == 1)
    c = n_cycle(N, q)
    cur = c.forms[0]
    for n in range(len(c)):
        cur = c.apply(n)
        if c.tags[n] is not CaseTag.CASE4:
            assert c.matrices[n].det == 1 and c.matrices[n].in_gamma_upper(N)
        assert cur == c.forms[(n + 1) % len(c)]
    assert cur == c.forms[0]


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([5, 13, 37]), forms)
def test_n_reduce_is_idempotent(N, q):
    assume(_indefinite(q))
    r = n_reduce(N, q)
    assert r.disc == q.disc and n_reduce(N, r) == r


def test_reduced_characterization_box_20():
    n = 0
    for A in range(-20, 21):
        for B in range(-20, 21):
            for C in range(-20, 21):
                D = B * B - 4 * A * C
                if D <= 0 or isqrt(D) ** 2 == D:
                    continue
                q = Form(A, B, C)
                if q.content != 1:
                    continue
                geometric = intersection_sigma(q) == 1 and meets_f_interior(q)
                assert is_reduced_indefinite(q) == geometric, q
                n += 1
    assert n == 30428
