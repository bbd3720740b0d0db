"""Detecting I^2 : I strictly larger than I.

Two independent routes. The content-matrix route writes m * f_j as a
combination of the six products f_t1 f_t2 with cofactors of a fixed degree,
for m a socle monomial of R/I, and solves the resulting linear system. The
colon route computes (I^2 : I) directly and looks for a generator outside I.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .forms import BinaryForm, delta, monomial, multiply
from .genrank import PAIRS, cofactor_columns, in_range
from .graded import (
    GradedIdeal,
    NotPrimaryError,
    colon,
    contains,
    is_m_primary,
    minimal_generators,
    power,
    product,
)
from .scalars import DenseMatrix, solve_any

CONTENT_MATRIX = "content_matrix"
COLON_ORACLE = "colon_oracle"


def content_applies(d: int) -> bool:
    """Whether the content-matrix test is claimed to succeed for general forms."""
    return in_range(d)


def _check_forms(forms: Sequence[BinaryForm]) -> int:
    if len(forms) != 3:
        raise ValueError("need exactly three forms")
    degs = {f.degree for f in forms}
    if len(degs) != 1:
        raise ValueError(f"forms must share one degree, got {sorted(degs)}")
    if len({f.field for f in forms}) != 1:
        raise ValueError("forms over different fields")
    return degs.pop()


def socle_monomials(d: int) -> list[tuple[int, int]]:
    """(x-exponent, degree) of the monomials spanning the top piece of R/I."""
    s = d // 2
    if d % 2:
        return [(0, 3 * s)]
    return [(0, 3 * s - 2), (1, 3 * s - 2)]


@dataclass(frozen=True)
class Target:
    label: str
    monomial: tuple  # (x-exponent, degree)
    form_index: int  # 0-based index of f_j
    rhs: tuple


@dataclass(frozen=True)
class ContentSystem:
    d: int
    matrix: DenseMatrix
    targets: tuple
    forms: tuple

    @property
    def cofactor_degree(self) -> int:
        return cofactor_columns(self.d) - 1


def _label(mono: tuple[int, int], j: int) -> str:
    m = monomial(*mono)
    return f"{m}*f{j + 1}"


def content_system(f1: BinaryForm, f2: BinaryForm, f3: BinaryForm, exploratory: bool = False) -> ContentSystem:
    """Coefficient system for m * f_j = sum h_{t1,t2} f_t1 f_t2.

    Column block (t1, t2), column c is the coefficient vector of
    x^c y^(k-c) f_t1 f_t2 where k is the cofactor degree.
    """
    forms = (f1, f2, f3)
    d = _check_forms(forms)
    if not in_range(d) and not (exploratory and d >= 3):
        raise ValueError(f"content system needs odd d >= 5 or even d >= 10, got {d}")
    F = f1.field
    ncols = cofactor_columns(d)
    rows = 2 * d + ncols
    zero = F.zero()
    cols = []
    for t1, t2 in PAIRS:
        beta = multiply(forms[t1 - 1], forms[t2 - 1]).coeffs
        for c in range(ncols):
            cols.append([beta[r - c] if 0 <= r - c <= 2 * d else zero for r in range(rows)])
    matrix = DenseMatrix.from_rows(F, [list(r) for r in zip(*cols)], len(cols))
    targets = []
    for mono in socle_monomials(d):
        m = monomial(*mono, field=F)
        for j, f in enumerate(forms):
            rhs = multiply(m, f).coeffs
            if len(rhs) != rows:
                raise ArithmeticError("target degree does not match the system")
            targets.append(Target(_label(mono, j), mono, j, tuple(rhs)))
    return ContentSystem(d, matrix, tuple(targets), forms)


def solve_membership(cs: ContentSystem, index: int) -> dict | None:
    """Cofactors {(t1, t2): h} with sum h f_t1 f_t2 = target, or None."""
    target = cs.targets[index]
    sol = solve_any(cs.matrix, target.rhs)
    if sol is None:
        return None
    F = cs.matrix.field
    ncols = cofactor_columns(cs.d)
    cofactors = {}
    for b, pair in enumerate(PAIRS):
        cofactors[pair] = BinaryForm(F, ncols - 1, tuple(sol[b * ncols:(b + 1) * ncols]))
    check = reconstruct(cs.forms, cofactors)
    if check.coeffs != target.rhs:
        raise ArithmeticError(f"cofactors do not reconstruct {target.label}")
    return cofactors


def reconstruct(forms: Sequence[BinaryForm], cofactors: dict) -> BinaryForm:
    """sum over pairs of h_{t1,t2} * f_t1 * f_t2."""
    total = None
    for (t1, t2), h in cofactors.items():
        term = multiply(h, multiply(forms[t1 - 1], forms[t2 - 1]))
        total = term if total is None else total + term
    return total


@dataclass
class RRReport:
    d: int
    method: str
    strictly_larger: bool
    witness: list  # forms in (I^2 : I) outside I
    solvable: dict = field(default_factory=dict)  # target label -> bool
    cofactors: dict = field(default_factory=dict)  # target label -> {(t1,t2): h}
    colon_gens: list = field(default_factory=list)
    resamples: list = field(default_factory=list)


def rr_test(forms: Sequence[BinaryForm], method: str = CONTENT_MATRIX, exploratory: bool = False) -> RRReport:
    forms = tuple(forms)
    d = _check_forms(forms)
    if method == CONTENT_MATRIX:
        cs = content_system(*forms, exploratory=exploratory)
        solvable, cofactors = {}, {}
        for k, target in enumerate(cs.targets):
            sol = solve_membership(cs, k)
            solvable[target.label] = sol is not None
            if sol is not None:
                cofactors[target.label] = sol
        ok = all(solvable.values())
        F = forms[0].field
        witness = [monomial(*m, field=F) for m in socle_monomials(d)] if ok else []
        return RRReport(d, method, ok, witness, solvable, cofactors)
    if method == COLON_ORACLE:
        if d < 2:
            raise ValueError("colon oracle needs d >= 2")
        if not exploratory and d in (6, 8):
            raise ValueError("the colon oracle at d = 6, 8 is exploratory only")
        I = GradedIdeal(forms)
        if not is_m_primary(I):
            raise NotPrimaryError("forms do not generate an (x, y)-primary ideal")
        gens = minimal_generators(colon(power(I, 2), I))
        witness = [g for g in gens if not contains(I, g)]
        return RRReport(d, method, bool(witness), witness, colon_gens=gens)
    raise ValueError(f"unknown method {method!r}")


def tilde_ideal(f1: BinaryForm, f2: BinaryForm, f3: BinaryForm) -> GradedIdeal:
    """(x^2 delta(f1), x^2 delta(f2), x^2 delta(f3), x y^(d-1), y^d) for odd d."""
    forms = (f1, f2, f3)
    d = _check_forms(forms)
    if d % 2 == 0:
        raise ValueError("tilde ideal is defined for odd d")
    F = f1.field
    x2 = monomial(2, 2, F)
    gens = [multiply(x2, delta(f)) for f in forms]
    gens += [monomial(1, d, F), monomial(0, d, F)]
    return GradedIdeal(tuple(gens))


def _odd_primary(forms: Sequence[BinaryForm], lowest: int) -> tuple[int, GradedIdeal]:
    d = _check_forms(forms)
    if d % 2 == 0 or d < lowest:
        raise ValueError(f"need odd d >= {lowest}, got {d}")
    I = GradedIdeal(tuple(forms))
    if not is_m_primary(I):
        raise NotPrimaryError("forms do not generate an (x, y)-primary ideal")
    return d, I


@dataclass
class ConjectureReport:
    holds: bool
    failing: tuple | None  # (monomial, i, j): m * g_i * g_j not in I^2
    checked: int


def conjecture_check(f1: BinaryForm, f2: BinaryForm, f3: BinaryForm) -> ConjectureReport:
    """Test m * g * g' in I^2 for monomials m of degree s-1 and g, g' in the tilde ideal."""
    d, I = _odd_primary((f1, f2, f3), 5)
    s = d // 2
    F = f1.field
    I2 = power(I, 2)
    tilde = tilde_ideal(f1, f2, f3).nonzero_gens
    checked = 0
    for i in range(len(tilde)):
        for j in range(i, len(tilde)):
            g = multiply(tilde[i], tilde[j])
            for a in range(s):
                m = monomial(a, s - 1, F)
                checked += 1
                if not contains(I2, multiply(m, g)):
                    return ConjectureReport(False, (m, i, j), checked)
    return ConjectureReport(True, None, checked)


def corollary_witness(f1: BinaryForm, f2: BinaryForm, f3: BinaryForm) -> BinaryForm | None:
    """A monomial m of degree 3s with m * I in I^2 and m not in I."""
    d, I = _odd_primary((f1, f2, f3), 5)
    s = d // 2
    F = f1.field
    I2 = power(I, 2)
    for a in range(3 * s + 1):
        m = monomial(a, 3 * s, F)
        if contains(I, m):
            continue
        if all(contains(I2, multiply(m, f)) for f in (f1, f2, f3)):
            return m
    return None


def corollary_check(f1: BinaryForm, f2: BinaryForm, f3: BinaryForm) -> bool:
    return corollary_witness(f1, f2, f3) is not None


def tilde_colon(f1: BinaryForm, f2: BinaryForm, f3: BinaryForm) -> list[BinaryForm]:
    """Minimal generators of I^2 : (tilde ideal)^2 (exploratory)."""
    _, I = _odd_primary((f1, f2, f3), 3)
    T = tilde_ideal(f1, f2, f3)
    return minimal_generators(colon(power(I, 2), product(T, T)))
