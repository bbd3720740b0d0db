"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line through the ``criterion`` fixture; the
lines are printed in the pytest terminal summary.
"""

from __future__ import annotations

import random
from functools import lru_cache
from math import comb

import pytest

from reesdepth.depth import (
    ALMOST_CM,
    DEPTH_ONE,
    colon_ideal,
    example_report,
    theorem_driver,
)
from reesdepth.forms import monomial, multiply
from reesdepth.genrank import (
    PAIRS,
    PHI,
    RANDOM,
    coefficient_assignment,
    concat_A,
    maximal_rank_certificate,
    q_form,
    specialize,
)
from reesdepth.graded import (
    GradedIdeal,
    colength,
    colon,
    contains,
    expected_hilbert_function,
    hilbert_table,
    min_gens,
    power,
    product,
    syzygy_profile,
)
from reesdepth.rrtest import COLON_ORACLE, CONTENT_MATRIX, conjecture_check, content_system, reconstruct, rr_test
from reesdepth.scalars import QQ, DenseMatrix, FieldSpec, determinant, kernel_basis, rank, rref
from support import GF, SEEDS, general_forms, naive_det, naive_rref, raw_forms


@lru_cache(maxsize=None)
def driver(d, seed):
    return theorem_driver(d, seed)


def test_criterion_01_syzygy_degrees(criterion):
    bad = []
    for d in range(2, 13):
        for seed in SEEDS:
            got = sorted(syzygy_profile(raw_forms(d, seed)).degrees)
            if got != [d // 2, (d + 1) // 2]:
                bad.append((d, seed, got))
    assert criterion("1 syzygy degrees {floor(d/2), ceil(d/2)}, d=2..12", not bad, f"mismatches {bad}" if bad else "33 cases")


def test_criterion_02_hilbert_tables(criterion):
    bad = []
    for d in (5, 6, 7, 8):
        s = d // 2
        for seed in SEEDS:
            table = hilbert_table(GradedIdeal(tuple(raw_forms(d, seed))))
            closed = [expected_hilbert_function(d, t) for t in range(len(table))]
            top = table[3 * s] == 1 if d % 2 else (table[3 * s - 2], table[3 * s - 1]) == (2, 0)
            if table != closed or not top:
                bad.append((d, seed, table))
    assert criterion("2 Hilbert function tables, d=5..8", not bad, str(bad) if bad else "12 cases")


def test_criterion_03_rank_certificates(criterion):
    bad = []
    for d in (5, 7, 9, 11, 13, 10, 12, 14):
        for seed in SEEDS:
            for strategy in (PHI, RANDOM):
                cert = maximal_rank_certificate(d, strategy, random.Random(seed), seed=seed)
                s = d // 2
                target = 5 * s + 2 if d % 2 else 5 * s - 1
                if not (cert.valid and cert.target_rank == target):
                    bad.append((d, seed, strategy, cert.achieved_rank))
    assert criterion("3 maximal-rank certificates, both strategies", not bad, str(bad) if bad else "48 certificates")


def test_criterion_04_specialization_bridge(criterion):
    bad = []
    for d in (5, 7, 10, 11):
        for seed in SEEDS:
            forms = raw_forms(d, seed)
            if specialize(concat_A(d), coefficient_assignment(forms), GF) != content_system(*forms).matrix:
                bad.append((d, seed))
    assert criterion("4 generic matrix specializes to the content matrix", not bad, str(bad) if bad else "12 cases")


def test_criterion_05_ratliff_rush(criterion):
    bad = []
    for d in (5, 7, 9, 11, 10, 12):
        for seed in SEEDS:
            forms = general_forms(d, seed)
            a = rr_test(forms, CONTENT_MATRIX)
            b = rr_test(forms, COLON_ORACLE)
            cs = content_system(*forms)
            residual_ok = all(
                reconstruct(forms, a.cofactors[t.label])
                == multiply(monomial(*t.monomial, field=GF), forms[t.form_index])
                for t in cs.targets
                if t.label in a.cofactors
            )
            if not (a.strictly_larger and b.strictly_larger and residual_ok):
                bad.append((d, seed))
    assert criterion("5 I^2:I strictly larger than I, both methods agree", not bad, str(bad) if bad else "18 cases")


def test_criterion_06_degree_six(criterion):
    bad = []
    for seed in SEEDS:
        rep = driver(6, seed)
        red = rep.reduction
        a3 = colon_ideal(red, 3)
        ok = (
            rep.ladder.values[:3] == (9, 3, 3)
            and min_gens(a3) == [(2, 3)] and colength(a3) == 3
            and red.reduction_number == 5
            and rep.e1 == 15
            and rep.total >= 17 > 15
            and rep.verdict == DEPTH_ONE
        )
        if not ok:
            bad.append((seed, rep.ladder.values, rep.e1))
    detail = str(bad) if bad else f"ladder {driver(6, 1).ladder.values}, sum {driver(6, 1).total}"
    assert criterion("6 d=6: 9 + 3 + 3 + ..., e1 = 15, depth one", not bad, detail)


def test_criterion_07_degree_eight(criterion):
    bad = []
    for seed in SEEDS:
        rep = driver(8, seed)
        ok = (
            rep.ladder.values[:3] == (16, 6, 3)
            and rep.e1 == 28
            and rep.total >= 29 > 28
            and rep.verdict == DEPTH_ONE
        )
        if not ok:
            bad.append((seed, rep.ladder.values, rep.e1))
    detail = str(bad) if bad else f"ladder {driver(8, 1).ladder.values}, sum {driver(8, 1).total}"
    assert criterion("7 d=8: 16 + 6 + 3 + ..., e1 = 28, depth one", not bad, detail)


def test_criterion_08_examples(criterion):
    a = example_report("a")
    b = example_report("b")
    ja = [str(g) for g in a.reduction.J.gens]
    jb = [str(g) for g in b.reduction.J.gens]
    b3 = colon_ideal(b.reduction, 3)
    ok = (
        a.ladder.values == (9, 2, 2, 1, 1)
        and ja == ["x^6", "x^4*y^2 + -1*y^6"]
        and b.ladder.values == (9, 3, 1, 1, 1)
        and jb == ["x^6 + -2*x^3*y^3", "x^4*y^2 + -1*y^6"]
        and min_gens(b3) == [(1, 2)] and colength(b3) == 1
        and a.total == a.e1 == 15 and b.total == b.e1 == 15
        and a.verdict == b.verdict == ALMOST_CM
        and all(f.field == QQ for f in a.forms + b.forms)
    )
    detail = f"(a) {a.ladder.values} e1={a.e1}; (b) {b.ladder.values} e1={b.e1}"
    assert criterion("8 worked examples over Q, almost Cohen-Macaulay", ok, detail)


def test_criterion_09_hilbert_samuel(criterion):
    bad = []
    for d in (5, 6, 7, 8):
        for seed in SEEDS:
            rep = driver(d, seed)
            if (rep.e0, rep.e1, rep.postulation_ok) != (d * d, comb(d, 2), True):
                bad.append((d, seed, rep.e0, rep.e1, rep.postulation_ok))
    assert criterion("9 Hilbert-Samuel fit (e0, e1) = (d^2, C(d,2))", not bad, str(bad) if bad else "12 fits")


def _convolution_ok():
    for d in (5, 6, 7, 10):
        for seed in SEEDS:
            forms = raw_forms(d, seed)
            a = coefficient_assignment(forms)
            for t1, t2 in PAIRS:
                prod = multiply(forms[t1 - 1], forms[t2 - 1]).coeffs
                if [q_form(r, t1, t2, d).evaluate(a, GF) for r in range(2 * d + 1)] != list(prod):
                    return False
    return True


def _colon_sound():
    for seed in SEEDS:
        red = driver(6, seed).reduction
        for ell in range(1, red.reduction_number + 1):
            A = red.J if ell == 1 else product(red.J, red.powers[ell - 1])
            f = red.f ** ell
            if not all(contains(A, multiply(g, f)) for g in colon_ideal(red, ell).gens):
                return False
        I = GradedIdeal(general_forms(5, seed))
        I2 = power(I, 2)
        C = colon(I2, I)
        if not all(contains(I2, multiply(g, f)) for g in C.gens for f in I.gens):
            return False
    return True


def _kernel_rank_duality():
    rng = random.Random(10)
    for field in (QQ, FieldSpec.gf(101), GF):
        for _ in range(30):
            r, c = rng.randint(1, 7), rng.randint(1, 7)
            rows = [[rng.randint(-3, 3) for _ in range(c)] for _ in range(r)]
            m = DenseMatrix.from_rows(field, rows)
            ker = kernel_basis(m)
            if rank(m) + len(ker) != c or any(any(m.matvec(v)) for v in ker):
                return False
    return True


def _fraction_free_vs_naive():
    rng = random.Random(11)
    for _ in range(50):
        rows = [[rng.randint(-99, 99) for _ in range(6)] for _ in range(6)]
        if rng.random() < 0.3:
            rows[5] = [a + b for a, b in zip(rows[0], rows[1])]
        m = DenseMatrix.from_rows(QQ, rows)
        ref, piv = naive_rref(rows)
        got, got_piv = rref(m)
        if determinant(m) != naive_det(rows) or got.to_lists() != ref or got_piv != piv:
            return False
    return True


def test_criterion_10_property_suites(criterion):
    parts = {
        "convolution": _convolution_ok(),
        "colon soundness": _colon_sound(),
        "kernel/rank duality": _kernel_rank_duality(),
        "fraction-free vs naive": _fraction_free_vs_naive(),
    }
    failed = [k for k, v in parts.items() if not v]
    assert criterion("10 property suites", not failed, f"failed: {failed}" if failed else ", ".join(parts))


# outcomes observed on the shipped seeds; a change here opens an investigation
CONJECTURE_PINNED = {(d, seed): True for d in (5, 7, 9) for seed in SEEDS}


def test_criterion_11_conjecture_exploratory(criterion):
    observed = {(d, seed): conjecture_check(*general_forms(d, seed)).holds for d in (5, 7, 9) for seed in SEEDS}
    ok = observed == CONJECTURE_PINNED
    holds = sum(observed.values())
    criterion("11 conjecture check d=5,7,9 (exploratory, non-blocking)", ok, f"holds on {holds}/{len(observed)} cases")
    if not ok:
        pytest.xfail(f"conjecture outcomes changed: {observed}")
