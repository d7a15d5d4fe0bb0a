from __future__ import annotations

from itertools import product

import pytest
from conftest import analytic_class_number

from realocus.classgroup import (
    FormClass,
    HeegnerContext,
    ambiguous_classes,
    class_number,
    compose,
    heegner_forms,
    inverse_class,
    kappa,
    kronecker,
    narrow_classes,
    negate_class,
    principal_class,
    reduced_cycle,
)
from realocus.pell import fundamental_unit
from realocus.qform import Form


def test_kronecker_against_euler():
    for p in (3, 5, 7, 13, 37):
        for a in range(-40, 40):
            e = pow(a % p, (p - 1) // 2, p)
            assert kronecker(a, p) == (0 if a % p == 0 else (1 if e == 1 else -1))
    assert kronecker(5, 2) == -1 and kronecker(-7, 2) == 1 and kronecker(-4, 2) == 0


@pytest.mark.parametrize("D", [-3, -4, -7, -15, -20, -23, -56, -84, -148, -164, -231, -420])
def test_definite_class_numbers(D):
    assert class_number(D) == analytic_class_number(D)


def test_h_minus_148():
    # reduced forms [1,0,37] and [2,2,19]
    assert class_number(-148) == 2


@pytest.mark.parametrize("D", [5, 8, 12, 13, 20, 37, 40, 60, 79 * 4, 85, 136, 148, 229, 316, 401, 577, 652])
def test_indefinite_class_numbers(D):
    assert class_number(D) == analytic_class_number(D)


def test_narrow_vs_wide():
    for D in (12, 60, 136, 148, 316):
        unit = fundamental_unit(D)
        ratio = class_number(D, narrow=True) // class_number(D)
        assert ratio == (1 if unit.norm == -1 else 2)


def test_reduced_cycle_is_a_cycle():
    for q in (Form(1, 4, -1), Form(3, 7, -1), Form(2, 10, -3)):
        cyc = reduced_cycle(q)
        assert len(set(cyc)) == len(cyc) and all(r.disc == q.disc for r in cyc)


@pytest.mark.parametrize("D", [-56, -84, -231, 136, 229, 316, 4 * 163])
def test_group_laws(D):
    classes = narrow_classes(D)
    one = principal_class(D)
    for c in classes:
        assert compose(c, one) == c
        assert compose(c, inverse_class(c)) == one
    for a, b in product(classes[:4], repeat=2):
        assert compose(a, b) == compose(b, a)
        assert compose(a, b) in classes
    for a, b, c in product(classes[:3], repeat=3):
        assert compose(compose(a, b), c) == compose(a, compose(b, c))


def test_ambiguous_classes_are_two_torsion():
    for D in (-84, -420, 136):
        amb = ambiguous_classes(D)
        assert all(inverse_class(c) == c for c in amb)
        # 2-rank from genus theory: number of ambiguous classes divides h
        assert len(narrow_classes(D)) % len(amb) == 0


def test_negate_is_an_involution():
    for c in narrow_classes(148):
        assert negate_class(negate_class(c)) == c


def test_kappa_examples():
    assert (class_number(37), class_number(148), kappa(37)) == (1, 3, 2)
    assert kappa(79) == 2
    assert class_number(652) == 1 and kappa(163) == 1


def test_kappa_rejects_composite():
    with pytest.raises(ValueError):
        kappa(21)


@pytest.mark.parametrize("N,D,r", [(37, 148, 0), (37, 37, 37), (79, 316, 0), (13, 52, 0), (13, 13, 13)])
def test_heegner_forms(N, D, r):
    ctx = HeegnerContext(N, D, r)
    forms = heegner_forms(ctx)
    assert len(forms) == class_number(D, narrow=True)
    assert len({FormClass.of(q) for q in forms}) == len(forms)
    for q in forms:
        assert q.disc == D and q.c % N == 0 and (q.b - r) % (2 * N) == 0


def test_heegner_condition_checked():
    with pytest.raises(ValueError):
        HeegnerContext(37, 148, 1)
