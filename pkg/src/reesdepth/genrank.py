"""Generic coefficient matrices for products of three forms.

Treat the coefficients of three degree-d forms as indeterminates T[t][l]
(t = 1..3, l = 0..d). The coefficient of x^r y^(2d-r) in f_t1 * f_t2 is then
the quadric Q_r^{t1,t2}. Stacking these quadrics into shifted columns gives
the matrix of the map (h_11, ..., h_33) -> sum h_ij f_i f_j on cofactors of
a fixed degree, and its rank is certified by evaluating at a point.

Variables are pairs ``(t, l)``; an assignment maps every pair to a scalar.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .scalars import GF_DEFAULT, DenseMatrix, FieldSpec, rank

PAIRS = tuple(combinations_with_replacement((1, 2, 3), 2))  # (1,1),(1,2),(1,3),(2,2),(2,3),(3,3)

PHI = "phi_specialization"
RANDOM = "random_point"


@dataclass(frozen=True)
class GenericQuadric:
    """Sum of monomials T[t1][l1] * T[t2][l2], each with coefficient 1."""

    terms: tuple  # of (t1, l1, t2, l2)

    def variables(self) -> set:
        out = set()
        for t1, l1, t2, l2 in self.terms:
            out.add((t1, l1))
            out.add((t2, l2))
        return out

    def evaluate(self, assignment: dict, field: FieldSpec):
        total = field.zero()
        for t1, l1, t2, l2 in self.terms:
            try:
                a, b = assignment[(t1, l1)], assignment[(t2, l2)]
            except KeyError as exc:
                raise ValueError(f"assignment is missing variable T{exc.args[0]}") from None
            total += field(a) * field(b)
        return field(total)


def q_form(r: int, t1: int, t2: int, d: int) -> GenericQuadric:
    """Coefficient of x^r y^(2d-r) in f_t1 * f_t2 with generic coefficients."""
    if not (1 <= t1 <= t2 <= 3):
        raise ValueError(f"need 1 <= t1 <= t2 <= 3, got ({t1}, {t2})")
    if not 0 <= r <= 2 * d:
        raise ValueError(f"need 0 <= r <= {2 * d}, got {r}")
    return GenericQuadric(tuple((t1, l1, t2, r - l1) for l1 in range(max(0, r - d), min(r, d) + 1)))


@dataclass(frozen=True)
class GenericMatrix:
    rows: int
    cols: int
    entries: tuple  # rows of GenericQuadric or None (structural zero)

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self.entries[i][j]

    def hstack(self, other: "GenericMatrix") -> "GenericMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return GenericMatrix(self.rows, self.cols + other.cols,
                             tuple(a + b for a, b in zip(self.entries, other.entries)))

    def select_columns(self, cols) -> "GenericMatrix":
        cols = list(cols)
        return GenericMatrix(self.rows, len(cols), tuple(tuple(row[j] for j in cols) for row in self.entries))

    def variables(self) -> set:
        out = set()
        for row in self.entries:
            for q in row:
                if q is not None:
                    out |= q.variables()
        return out


def cofactor_columns(d: int) -> int:
    """Number of coefficients of each cofactor: s for d = 2s+1, s-1 for d = 2s."""
    s = d // 2
    return s if d % 2 else s - 1


def in_range(d: int) -> bool:
    """Degrees for which the generic matrix is claimed to have maximal rank."""
    return d >= 5 if d % 2 else d >= 10


def _check_degree(d: int, exploratory: bool) -> None:
    if in_range(d):
        return
    if not exploratory:
        hint = " (even d = 6, 8 go through the Huckaba-Marley route)" if d in (6, 8) else ""
        raise ValueError(f"degree {d} outside the supported range: odd d >= 5 or even d >= 10{hint}")
    if d < 3:
        raise ValueError("exploratory matrices need d >= 3")


def block(t1: int, t2: int, d: int) -> GenericMatrix:
    """Column c holds Q_0..Q_2d shifted down by c rows."""
    if t1 > t2:
        raise ValueError("need t1 <= t2")
    cols = cofactor_columns(d)
    rows = 2 * d + cols
    quads = [q_form(r, t1, t2, d) for r in range(2 * d + 1)]
    entries = tuple(
        tuple(quads[i - c] if 0 <= i - c <= 2 * d else None for c in range(cols))
        for i in range(rows)
    )
    return GenericMatrix(rows, cols, entries)


def concat_A(d: int, exploratory: bool = False) -> GenericMatrix:
    """The six blocks side by side in the order of PAIRS."""
    _check_degree(d, exploratory)
    out = None
    for t1, t2 in PAIRS:
        b = block(t1, t2, d)
        out = b if out is None else out.hstack(b)
    return out


def dropped_columns(d: int) -> int:
    """Leading columns of the (3,3) block left out of the square selection."""
    s = d // 2
    return s - 2 if d % 2 else s - 5


def select_B(d: int, exploratory: bool = False) -> GenericMatrix:
    """Square submatrix of A: drop the first few columns of the (3,3) block.

    In exploratory mode below the supported range there may be no square
    selection; the full matrix is returned instead.
    """
    A = concat_A(d, exploratory)
    k = dropped_columns(d)
    if k < 0 or A.cols - k != A.rows:
        return A
    start = 5 * cofactor_columns(d)
    return A.select_columns([j for j in range(A.cols) if not start <= j < start + k])


def target_rank(d: int) -> int:
    """Maximal possible rank of A: 5s+2 (d = 2s+1) or 5s-1 (d = 2s) in range."""
    cols = cofactor_columns(d)
    return min(2 * d + cols, 6 * cols)


def all_variables(d: int) -> list[tuple[int, int]]:
    return [(t, l) for t in (1, 2, 3) for l in range(d + 1)]


def phi_survivors(d: int) -> list[tuple[int, int]]:
    """The four variables kept nonzero by the specialization."""
    s = d // 2
    if d % 2:
        return [(1, 0), (2, s), (2, 2 * s), (3, 2 * s + 1)]
    return [(1, 0), (2, s - 1), (2, 2 * (s - 1)), (3, 2 * s)]


def _random_scalar(field: FieldSpec, rng: random.Random, nonzero: bool = False):
    if field.is_prime_field:
        return field.random_element(rng, nonzero)
    return field(rng.randint(1 if nonzero else 0, 2**31))


def phi_assignment(
    d: int,
    rng: random.Random | None = None,
    field: FieldSpec = GF_DEFAULT,
    values: dict | None = None,
    exploratory: bool = False,
) -> dict:
    """Survivors get distinct random nonzero values (or ``values``); the rest 0."""
    _check_degree(d, exploratory)
    survivors = phi_survivors(d)
    assignment = {v: field.zero() for v in all_variables(d)}
    if values is not None:
        for v in survivors:
            if field(values[v]) == 0:
                raise ValueError(f"survivor T{v} must be nonzero")
            assignment[v] = field(values[v])
        return assignment
    rng = rng or random.Random(0)
    chosen: list = []
    while len(chosen) < len(survivors):
        a = _random_scalar(field, rng, nonzero=True)
        if a not in chosen:
            chosen.append(a)
    assignment.update(zip(survivors, chosen))
    return assignment


def random_assignment(d: int, rng: random.Random, field: FieldSpec = GF_DEFAULT) -> dict:
    return {v: _random_scalar(field, rng) for v in all_variables(d)}


def coefficient_assignment(forms) -> dict:
    """T[t][l] := coefficient of x^l y^(d-l) in the t-th form."""
    return {(t, l): c for t, f in enumerate(forms, start=1) for l, c in enumerate(f.coeffs)}


def specialize(M: GenericMatrix, assignment: dict, field: FieldSpec) -> DenseMatrix:
    zero = field.zero()
    rows = [[zero if q is None else q.evaluate(assignment, field) for q in row] for row in M.entries]
    return DenseMatrix.from_rows(field, rows, M.cols)


def surviving_quadrics(d: int, assignment: dict, field: FieldSpec) -> list[tuple[int, int, int]]:
    """(r, t1, t2) for every quadric Q_r^{t1,t2} that is nonzero at the assignment."""
    return [
        (r, t1, t2)
        for t1, t2 in PAIRS
        for r in range(2 * d + 1)
        if q_form(r, t1, t2, d).evaluate(assignment, field) != 0
    ]


def pivot_determinant(d: int, assignment: dict, field: FieldSpec):
    """Q_4s^{2,2} Q_{3s+1}^{2,3} - Q_3s^{2,2} Q_{4s+1}^{2,3} for odd d = 2s+1."""
    if d % 2 == 0:
        raise ValueError("pivot determinant is defined for odd d")
    s = d // 2

    def q(r, t1, t2):
        return q_form(r, t1, t2, d).evaluate(assignment, field)

    return field(q(4 * s, 2, 2) * q(3 * s + 1, 2, 3) - q(3 * s, 2, 2) * q(4 * s + 1, 2, 3))


@dataclass(frozen=True)
class RankCertificate:
    d: int
    parity: str
    target_rank: int
    strategy: str
    assignment: dict = field(repr=False)
    achieved_rank: int
    field: FieldSpec
    seed: int | None = None
    exploratory: bool = False

    @property
    def valid(self) -> bool:
        return self.achieved_rank == self.target_rank


def certificate_matrix(d: int, strategy: str, exploratory: bool = False) -> GenericMatrix:
    if strategy == PHI:
        return select_B(d, exploratory)
    if strategy == RANDOM:
        return concat_A(d, exploratory)
    raise ValueError(f"unknown strategy {strategy!r}")


def maximal_rank_certificate(
    d: int,
    strategy: str,
    rng: random.Random,
    field: FieldSpec = GF_DEFAULT,
    seed: int | None = None,
    exploratory: bool = False,
) -> RankCertificate:
    """Evaluate the generic matrix at a point and record the rank it reaches."""
    if field.characteristic == 2:
        raise ValueError("rank certificates need characteristic != 2")
    M = certificate_matrix(d, strategy, exploratory)
    if strategy == PHI:
        assignment = phi_assignment(d, rng, field, exploratory=exploratory)
    else:
        assignment = random_assignment(d, rng, field)
    achieved = rank(specialize(M, assignment, field))
    return RankCertificate(
        d=d,
        parity="odd" if d % 2 else "even",
        target_rank=target_rank(d),
        strategy=strategy,
        assignment=assignment,
        achieved_rank=achieved,
        field=field,
        seed=seed,
        exploratory=exploratory,
    )


def recheck_certificate(d: int, strategy: str, assignment: dict, field: FieldSpec, exploratory: bool = False) -> int:
    """Rank of the certificate matrix at a stored assignment."""
    return rank(specialize(certificate_matrix(d, strategy, exploratory), assignment, field))
