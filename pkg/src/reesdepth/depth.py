"""Huckaba-Marley pipeline for the depth of the Rees algebra.

For a minimal reduction J of I with I = (J, f), each length
lambda(I^l / J I^(l-1)) equals the colength of a_l = (J I^(l-1) : f^l).
Summing these over l up to the reduction number and comparing with the
Hilbert-Samuel coefficient e1 decides between depth one (sum > e1) and the
almost Cohen-Macaulay case (sum = e1).
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .forms import BinaryForm, multiply
from .graded import (
    GenericityError,
    GradedIdeal,
    NotPrimaryError,
    colength,
    is_m_primary,
    last_coordinate_ideal,
    min_gens,
    power,
    product,
    sample_general_forms,
    syzygy_profile,
)
from .scalars import GF_DEFAULT, QQ, DenseMatrix, FieldSpec, solve_any

log = logging.getLogger(__name__)

DEPTH_ONE = "depth_one"
ALMOST_CM = "almost_cm"
INCONCLUSIVE = "inconclusive"


class Powers:
    """Memoized powers I, I^2, ... built by repeated multiplication."""

    def __init__(self, I: GradedIdeal):
        self.base = I
        self._cache = {1: I}

    def __getitem__(self, n: int) -> GradedIdeal:
        if n < 1:
            raise ValueError("power needs n >= 1")
        if n not in self._cache:
            self._cache[n] = power(self.base, n)
        return self._cache[n]


def same_ideal(A: GradedIdeal, B: GradedIdeal) -> bool:
    """Whether B ⊆ A is an equality, comparing piece dimensions degree by degree."""
    lo = min(A.min_degree, B.min_degree)
    for t in range(lo, max(A.safety_cap, B.safety_cap) + 1):
        a, b = A.piece(t), B.piece(t)
        if a.dim != b.dim:
            return False
        if a.is_full and b.is_full:
            return True
    raise NotPrimaryError("ideals did not fill R_t within the safety bound")


@dataclass(frozen=True, eq=False)
class Reduction:
    """A reduction J of I = (J, f) together with its reduction number."""

    I: GradedIdeal
    J: GradedIdeal
    f: BinaryForm
    reduction_number: int
    mixing: tuple | None = None
    resamples: tuple = ()
    powers: Powers = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.powers is None:
            object.__setattr__(self, "powers", Powers(self.I))


def reduction_number(I: GradedIdeal, J: GradedIdeal, r_cap: int, powers: Powers | None = None) -> int | None:
    """Least r with I^(r+1) = J I^r, or None if none up to r_cap."""
    powers = powers or Powers(I)
    if same_ideal(I, J):
        return 0
    for r in range(1, r_cap + 1):
        if same_ideal(powers[r + 1], product(J, powers[r])):
            return r
    return None


def _generates_with(I: GradedIdeal, J: GradedIdeal, f: BinaryForm) -> bool:
    return same_ideal(I, GradedIdeal(J.gens + (f,)))


def minimal_reduction(
    forms: Sequence[BinaryForm],
    rng: random.Random,
    max_resamples: int = 5,
    r_cap: int | None = None,
) -> Reduction:
    """J generated by two random combinations of the forms; f is the last form."""
    forms = list(forms)
    I = GradedIdeal(tuple(forms))
    if not is_m_primary(I):
        raise NotPrimaryError("minimal reduction needs an (x, y)-primary ideal")
    F = I.field
    d = max(g.degree for g in forms)
    r_cap = 2 * d if r_cap is None else r_cap
    f = forms[-1]
    resamples = []
    powers = Powers(I)
    for attempt in range(max_resamples + 1):
        a = [F.random_element(rng) for _ in forms]
        b = [F.random_element(rng) for _ in forms]
        j1 = _combine(forms, a)
        j2 = _combine(forms, b)
        J = GradedIdeal((j1, j2))
        if j1.is_zero or j2.is_zero or not _generates_with(I, J, f):
            reason = "J together with f does not generate I"
        else:
            r = reduction_number(I, J, r_cap, powers)
            if r is not None:
                return Reduction(I, J, f, r, (tuple(a), tuple(b)), tuple(resamples), powers)
            reason = f"no reduction number up to {r_cap}"
        log.warning("resampling reduction (attempt %d): %s", attempt, reason)
        resamples.append({"attempt": attempt, "reason": reason})
    raise GenericityError("no minimal reduction found")


def _combine(forms: Sequence[BinaryForm], coeffs: Sequence) -> BinaryForm:
    out = forms[0].scale(coeffs[0])
    for g, c in zip(forms[1:], coeffs[1:]):
        out = out + g.scale(c)
    return out


def reduction_from(forms: Sequence[BinaryForm], J_gens: Sequence[BinaryForm], r_cap: int | None = None) -> Reduction:
    """Accept a given J; f is the first generator of I with I = (J, f)."""
    I = GradedIdeal(tuple(forms))
    J = GradedIdeal(tuple(J_gens))
    d = max(g.degree for g in forms)
    r_cap = 2 * d if r_cap is None else r_cap
    for f in forms:
        if _generates_with(I, J, f):
            break
    else:
        raise ValueError("no generator f with I = (J, f)")
    powers = Powers(I)
    r = reduction_number(I, J, r_cap, powers)
    if r is None:
        raise ValueError(f"J is not a reduction of I up to r = {r_cap}")
    return Reduction(I, J, f, r, None, (), powers)


@dataclass(frozen=True)
class LambdaLadder:
    """lambda_l = colength(J I^(l-1) : f^l) for l = 1 .. reduction number."""

    values: tuple
    colon_gens: tuple  # per l: minimal generators of a_l
    colon_degrees: tuple  # per l: [(degree, count), ...]

    @property
    def total(self) -> int:
        return sum(self.values)


def colon_ideal(red: Reduction, ell: int) -> GradedIdeal:
    """a_l = (J I^(l-1) : f^l)."""
    A = red.J if ell == 1 else product(red.J, red.powers[ell - 1])
    return last_coordinate_ideal(A, red.f ** ell)


def lambda_value(red: Reduction, ell: int) -> tuple[int, GradedIdeal]:
    a = colon_ideal(red, ell)
    return colength(a), a


def lambda_ladder(red: Reduction) -> LambdaLadder:
    values, gens, degrees = [], [], []
    for ell in range(1, red.reduction_number + 1):
        lam, a = lambda_value(red, ell)
        values.append(lam)
        gens.append(tuple(a.gens))
        degrees.append(tuple(min_gens(a)))
    return LambdaLadder(tuple(values), tuple(gens), tuple(degrees))


def lambda_by_colengths(red: Reduction, ell: int) -> int:
    """lambda(I^l / J I^(l-1)) as a difference of colengths."""
    A = red.J if ell == 1 else product(red.J, red.powers[ell - 1])
    return colength(A) - colength(red.powers[ell])


@dataclass(frozen=True)
class ClosedForms:
    lambda1: int  # lambda(I/J)
    lambda_ri1: int  # lambda(R/I_1(phi))
    lambda2: int  # lambda(I^2/JI)
    threshold: Fraction  # bound on sum_{l>=3} lambda_l
    e1: int


def closed_forms(d: int) -> ClosedForms:
    """Predicted lengths for three general forms of degree d >= 5."""
    if d < 5:
        raise ValueError("closed forms need d >= 5")
    h = d // 2
    if d % 2 == 0:
        extra = max(d // 2 - 5, 0)
        lam1 = d * d // 4
        ri1 = comb(h + 1, 2) + extra
        threshold = Fraction(d * (d - 2), 8) + extra
    else:
        lam1 = (d * d - 1) // 4
        ri1 = comb(h + 1, 2) + (h - 2)
        threshold = Fraction((d + 1) * (d - 1), 8) - 2
    return ClosedForms(lam1, ri1, lam1 - ri1, threshold, comb(d, 2))


def hilbert_burch_ideal(forms: Sequence[BinaryForm]) -> GradedIdeal:
    """I_1(phi): the ideal of entries of the minimal syzygy matrix."""
    entries = [h for h in syzygy_profile(forms).entries() if not h.is_zero]
    return GradedIdeal(tuple(entries))


@dataclass(frozen=True)
class HilbertSamuelFit:
    e0: int | Fraction
    e1: int | Fraction
    e2: int | Fraction
    postulation_ok: bool
    lengths: tuple  # (n, lambda(R/I^n)) pairs


def _as_int(v: Fraction) -> int | Fraction:
    return int(v) if v.denominator == 1 else v


def hilbert_samuel_fit(I: GradedIdeal, n_lo: int, n_hi: int, powers: Powers | None = None) -> HilbertSamuelFit:
    """Fit lambda(R/I^n) = e0*C(n+1,2) - e1*n + e2 on the last three n.

    postulation_ok records whether the fit also reproduces the point before
    those three (False when only three points are available).
    """
    if n_hi < n_lo + 2:
        raise ValueError("need n_hi >= n_lo + 2")
    powers = powers or Powers(I)
    lengths = [(n, colength(powers[n])) for n in range(n_lo, n_hi + 1)]
    last = lengths[-3:]
    m = DenseMatrix.from_rows(QQ, [[comb(n + 1, 2), -n, 1] for n, _ in last], 3)
    sol = solve_any(m, [v for _, v in last])
    if sol is None:
        raise ArithmeticError("singular Hilbert-Samuel system")
    e0, e1, e2 = sol
    ok = False
    if len(lengths) >= 4:
        n, v = lengths[-4]
        ok = e0 * comb(n + 1, 2) - e1 * n + e2 == v
    return HilbertSamuelFit(_as_int(e0), _as_int(e1), _as_int(e2), ok, tuple(lengths))


def hm_verdict(ladder: LambdaLadder, e1) -> str:
    total = ladder.total
    if total > e1:
        return DEPTH_ONE
    if total == e1:
        return ALMOST_CM
    return INCONCLUSIVE


def hilbert_burch_generators(M: Sequence[Sequence[BinaryForm]]) -> tuple[BinaryForm, BinaryForm, BinaryForm]:
    """Signed 2x2 minors of a 3x2 matrix of forms (minor i deletes row i)."""
    if len(M) != 3 or any(len(row) != 2 for row in M):
        raise ValueError("need a 3x2 matrix")
    out = []
    for i in range(3):
        r, s = [k for k in range(3) if k != i]
        a = multiply(M[r][0], M[s][1])
        b = multiply(M[r][1], M[s][0])
        if a.degree != b.degree:
            raise ValueError("inhomogeneous minors")
        minor = a - b
        out.append(minor if i % 2 == 0 else -minor)
    return tuple(out)


def _form(field: FieldSpec, terms: dict[tuple[int, int], int]) -> BinaryForm:
    """Form from {(x_exp, y_exp): coeff}."""
    degs = {a + b for a, b in terms}
    if len(degs) != 1:
        raise ValueError("inhomogeneous terms")
    t = degs.pop()
    coeffs = [0] * (t + 1)
    for (a, _), c in terms.items():
        coeffs[a] += c
    return BinaryForm(field, t, tuple(coeffs))


def example_matrix(name: str, field: FieldSpec = QQ) -> list[list[BinaryForm]]:
    """Hilbert-Burch matrices of the two non-general degree-6 examples."""
    z3 = BinaryForm.zero(3, field)
    if name == "a":
        return [
            [_form(field, {(1, 2): -1}), _form(field, {(0, 3): -1})],
            [_form(field, {(3, 0): 1}), z3],
            [_form(field, {(0, 3): 1}), _form(field, {(3, 0): 1})],
        ]
    if name == "b":
        return [
            [_form(field, {(3, 0): 1}), _form(field, {(1, 2): 1})],
            [_form(field, {(2, 1): 1}), _form(field, {(3, 0): 1, (0, 3): -1})],
            [_form(field, {(0, 3): 1}), _form(field, {(2, 1): -1, (1, 2): 1})],
        ]
    raise ValueError(f"unknown example {name!r}")


def example_reduction_gens(name: str, field: FieldSpec = QQ) -> list[BinaryForm]:
    if name == "a":
        return [_form(field, {(6, 0): 1}), _form(field, {(4, 2): 1, (0, 6): -1})]
    if name == "b":
        return [_form(field, {(6, 0): 1, (3, 3): -2}), _form(field, {(4, 2): 1, (0, 6): -1})]
    raise ValueError(f"unknown example {name!r}")


@dataclass
class DepthReport:
    d: int
    seed: int | None
    field: str
    forms: tuple
    ladder: LambdaLadder
    reduction: Reduction
    e0: int | Fraction
    e1: int | Fraction
    e2: int | Fraction
    postulation_ok: bool
    total: int
    threshold62: Fraction | None
    verdict: str
    hm_verdict: str
    rr_verdict: str | None = None
    closed: ClosedForms | None = None
    lambda_ri1: int | None = None
    resamples: list = field(default_factory=list)


def hm_pipeline(
    red: Reduction,
    fit_points: tuple[int, int] | None = None,
) -> tuple[LambdaLadder, HilbertSamuelFit, str]:
    """Ladder, Hilbert-Samuel fit (default n = r .. r+3) and verdict."""
    ladder = lambda_ladder(red)
    n_lo, n_hi = fit_points or (max(red.reduction_number, 1), max(red.reduction_number, 1) + 3)
    fit = hilbert_samuel_fit(red.I, n_lo, n_hi, red.powers)
    return ladder, fit, hm_verdict(ladder, fit.e1)


def theorem_driver(
    d: int,
    seed: int,
    field: FieldSpec = GF_DEFAULT,
    max_resamples: int = 5,
    forms: Sequence[BinaryForm] | None = None,
) -> DepthReport:
    """Random general forms of degree d, both routes, one report."""
    from .rrtest import CONTENT_MATRIX, content_applies, rr_test

    if d < 5:
        raise ValueError("theorem driver needs d >= 5")
    rng = random.Random(seed)
    resamples: list = []
    if forms is None:
        forms, resamples = sample_general_forms(d, rng, field, max_resamples)
    red = minimal_reduction(forms, rng, max_resamples)
    resamples = list(resamples) + list(red.resamples)
    ladder, fit, hm = hm_pipeline(red)
    rr = None
    if content_applies(d):
        rr = rr_test(forms, CONTENT_MATRIX)
    rr_verdict = None if rr is None else (DEPTH_ONE if rr.strictly_larger else INCONCLUSIVE)
    verdict = DEPTH_ONE if DEPTH_ONE in (hm, rr_verdict) else hm
    closed = closed_forms(d)
    return DepthReport(
        d=d,
        seed=seed,
        field=str(field),
        forms=tuple(forms),
        ladder=ladder,
        reduction=red,
        e0=fit.e0,
        e1=fit.e1,
        e2=fit.e2,
        postulation_ok=fit.postulation_ok,
        total=ladder.total,
        threshold62=closed.threshold,
        verdict=verdict,
        hm_verdict=hm,
        rr_verdict=rr_verdict,
        closed=closed,
        lambda_ri1=colength(hilbert_burch_ideal(forms)),
        resamples=resamples,
    )


def example_report(name: str) -> DepthReport:
    """Run the HM pipeline over Q on one of the two degree-6 examples."""
    forms = list(hilbert_burch_generators(example_matrix(name)))
    red = reduction_from(forms, example_reduction_gens(name))
    ladder, fit, hm = hm_pipeline(red)
    return DepthReport(
        d=6,
        seed=None,
        field=str(QQ),
        forms=tuple(forms),
        ladder=ladder,
        reduction=red,
        e0=fit.e0,
        e1=fit.e1,
        e2=fit.e2,
        postulation_ok=fit.postulation_ok,
        total=ladder.total,
        threshold62=None,
        verdict=hm,
        hm_verdict=hm,
    )
