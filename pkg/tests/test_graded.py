from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from reesdepth.forms import BinaryForm, monomial, multiply
from reesdepth.graded import (
    GradedIdeal,
    NotPrimaryError,
    colength,
    colon,
    contains,
    expected_hilbert_function,
    genericity_failure,
    hilbert_table,
    ideal,
    is_m_primary,
    min_gens,
    minimal_generators,
    power,
    product,
    socle_degree,
    syzygy_profile,
)
from reesdepth.scalars import QQ, FieldSpec
from support import GF, raw_forms, sympy_colength

SMALL = FieldSpec.gf(101)


def mono(i, t, field=QQ):
    return monomial(i, t, field)


def mpower(n, field=QQ):
    return ideal(*[mono(i, n, field) for i in range(n + 1)])


def test_maximal_ideal_powers():
    m3 = mpower(3)
    assert min_gens(m3) == [(3, 4)]
    assert colength(m3) == 6
    assert hilbert_table(m3) == [1, 2, 3, 0]
    assert socle_degree(m3) == 2


def test_colon_of_monomial_ideal():
    A = ideal(mono(2, 2), mono(0, 2))  # (x^2, y^2)
    C = colon(A, ideal(mono(1, 1), mono(0, 1)))
    assert sorted(str(g) for g in C.gens) == ["x*y", "x^2", "y^2"]


@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 6))
def test_colon_by_x_power(a, b, c):
    A = ideal(mono(a, a), mono(0, b))
    C = colon(A, ideal(mono(c, c)))
    expected = ideal(mono(max(a - c, 0), max(a - c, 0)), mono(0, b))
    assert colength(C) == colength(expected)
    assert all(contains(C, g) for g in expected.gens)


@given(st.integers(2, 4), st.integers(0, 10**6))
def test_colon_soundness(d, seed):
    rng = random.Random(seed)
    forms = raw_forms(d, seed, SMALL)
    A = power(GradedIdeal(tuple(forms)), 2)
    b = forms[rng.randrange(3)]
    C = colon(A, ideal(b))
    for g in C.gens:
        assert contains(A, multiply(g, b))


def test_not_primary_is_detected():
    I = ideal(mono(2, 2), mono(1, 2))
    assert not is_m_primary(I)
    with pytest.raises(NotPrimaryError):
        colength(I)
    assert genericity_failure([mono(2, 2), mono(1, 2), mono(2, 2)]) == "not (x,y)-primary"


@given(st.integers(2, 3), st.lists(st.integers(-3, 3), min_size=12, max_size=12))
def test_colength_matches_groebner(d, coeffs):
    forms = [BinaryForm.from_coeffs(coeffs[k * (d + 1):(k + 1) * (d + 1)]) for k in range(3)]
    if all(f.is_zero for f in forms):
        return
    I = GradedIdeal(tuple(forms))
    if not is_m_primary(I):
        return
    assert colength(I) == sympy_colength(forms)


@pytest.mark.parametrize("d", range(2, 10))
def test_hilbert_table_of_random_forms(d):
    forms = raw_forms(d, 7)
    table = hilbert_table(GradedIdeal(tuple(forms)))
    assert table == [expected_hilbert_function(d, t) for t in range(len(table))]


def test_expected_hilbert_function_d5():
    # derived: 1,2,...,5 below d, then 6-3, 7-6, then the socle piece
    assert [expected_hilbert_function(5, t) for t in range(9)] == [1, 2, 3, 4, 5, 3, 1, 0, 0]


@pytest.mark.parametrize("d", [2, 3, 4, 5, 8])
def test_syzygies_are_syzygies(d):
    forms = raw_forms(d, 3)
    prof = syzygy_profile(forms)
    assert sum(prof.degrees) == d
    for syz in prof.syzygies:
        total = None
        for h, f in zip(syz, forms):
            term = multiply(h, f)
            total = term if total is None else total + term
        assert total.is_zero


def test_syzygies_of_square_of_maximal_ideal():
    prof = syzygy_profile(list(mpower(2).gens))
    assert prof.degrees == (1, 1)


def test_mixed_degree_syzygies():
    # (x, y^2, ...) style: generators of degrees 1 and 2 with a Koszul relation
    gens = [mono(1, 1), mono(0, 2)]
    prof = syzygy_profile(gens)
    assert prof.total_degrees == (3,)
    assert prof.degrees == (2,)


def test_power_and_product_agree():
    I = GradedIdeal(tuple(raw_forms(3, 2)))
    assert colength(power(I, 2)) == colength(product(I, I))
    assert len(minimal_generators(I)) == 3
    assert min_gens(I) == [(3, 3)]


def test_field_mismatch_in_contains():
    I = GradedIdeal(tuple(raw_forms(2, 1)))
    with pytest.raises(ValueError):
        contains(I, mono(0, 2))
    assert contains(I, BinaryForm.zero(2, GF))
