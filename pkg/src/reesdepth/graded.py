"""Homogeneous ideals of k[x, y], handled one graded piece at a time.

Every graded piece of k[x, y] is finite dimensional, so Hilbert functions,
membership, colon ideals, colengths, minimal generators and first syzygies
all reduce to exact linear algebra on coefficient vectors.  Pieces are built
incrementally: ``I_t = x I_{t-1} + y I_{t-1} + span(generators of degree t)``.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from .forms import BinaryForm, multiply, random_form
from .scalars import FieldSpec, RowSpace, kernel_rows

log = logging.getLogger(__name__)


class NotPrimaryError(ValueError):
    """The ideal does not contain a power of (x, y) within the safety bound."""


class GenericityError(RuntimeError):
    """Random data kept landing on the degenerate locus."""


def _shift_rows(rows: np.ndarray, width: int) -> np.ndarray:
    """Stack x*rows and y*rows for rows living in degree width-1."""
    k, n = rows.shape
    out = np.zeros((2 * k, width), dtype=rows.dtype)
    out[:k, 1:n + 1] = rows
    out[k:, :n] = rows
    return out


@dataclass(frozen=True, eq=False)
class GradedIdeal:
    """Ideal generated by homogeneous forms, possibly of mixed degrees.

    Graded pieces are memoized on the instance; the generators never change.
    """

    gens: tuple
    _pieces: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        gens = tuple(self.gens)
        if not gens:
            raise ValueError("an ideal needs at least one generator")
        if len({g.field for g in gens}) != 1:
            raise ValueError("generators over different fields")
        if all(g.is_zero for g in gens):
            raise ValueError("all generators are zero")
        object.__setattr__(self, "gens", gens)

    @property
    def field(self) -> FieldSpec:
        return self.gens[0].field

    @property
    def nonzero_gens(self) -> list[BinaryForm]:
        return [g for g in self.gens if not g.is_zero]

    @property
    def min_degree(self) -> int:
        return min(g.degree for g in self.nonzero_gens)

    @property
    def max_degree(self) -> int:
        return max(g.degree for g in self.nonzero_gens)

    @property
    def safety_cap(self) -> int:
        return 3 * self.max_degree + 6

    def piece(self, t: int) -> RowSpace:
        """The degree-t piece as a subspace of the t+1 monomial coordinates."""
        F = self.field
        if t < self.min_degree:
            return RowSpace.empty(F, t + 1)
        cache = self._pieces
        if t in cache:
            return cache[t]
        start = max((u for u in cache if u < t), default=self.min_degree - 1)
        for u in range(start + 1, t + 1):
            prev = cache.get(u - 1)
            parts = []
            if prev is not None and prev.dim:
                parts.append(_shift_rows(prev.rows, u + 1))
            new = [g.coeffs for g in self.nonzero_gens if g.degree == u]
            if new:
                parts.append(F._to_array(new, u + 1))
            if parts:
                cache[u] = RowSpace.from_array(F, np.vstack(parts))
            else:
                cache[u] = RowSpace.empty(F, u + 1)
        return cache[t]

    def __repr__(self) -> str:
        return "GradedIdeal(" + ", ".join(str(g) for g in self.gens) + ")"


def ideal(*gens: BinaryForm) -> GradedIdeal:
    return GradedIdeal(tuple(gens))


def piece_dim(I: GradedIdeal, t: int) -> int:
    return I.piece(t).dim


def hilbert_function(I: GradedIdeal, t: int) -> int:
    """dim_k (R/I)_t."""
    return (t + 1) - I.piece(t).dim


def contains(I: GradedIdeal, f: BinaryForm) -> bool:
    if f.field != I.field:
        raise ValueError("field mismatch")
    if f.is_zero:
        return True
    return I.piece(f.degree).contains(f.coeffs)


def product(I: GradedIdeal, J: GradedIdeal) -> GradedIdeal:
    """Ideal generated by all pairwise products of generators."""
    return GradedIdeal(tuple(multiply(a, b) for a in I.nonzero_gens for b in J.nonzero_gens))


def power(I: GradedIdeal, n: int) -> GradedIdeal:
    """I**n generated by the monomials of degree n in the generators of I."""
    if n < 1:
        raise ValueError("power needs n >= 1")
    gens = I.nonzero_gens
    out = []
    for combo in combinations_with_replacement(range(len(gens)), n):
        g = gens[combo[0]]
        for j in combo[1:]:
            g = multiply(g, gens[j])
        out.append(g)
    return GradedIdeal(tuple(out))


def hilbert_series_values(I: GradedIdeal) -> list[int]:
    """Hilbert function of R/I from degree 0 up to the first vanishing degree."""
    values = []
    for t in range(I.safety_cap + 1):
        h = hilbert_function(I, t)
        values.append(h)
        if h == 0:
            return values
    raise NotPrimaryError(f"Hilbert function does not vanish by degree {I.safety_cap}")


def is_m_primary(I: GradedIdeal) -> bool:
    try:
        hilbert_series_values(I)
    except NotPrimaryError:
        return False
    return True


def socle_degree(I: GradedIdeal) -> int:
    """Top degree with (R/I)_t nonzero; -1 for the unit ideal."""
    return len(hilbert_series_values(I)) - 2


def colength(I: GradedIdeal) -> int:
    """lambda(R/I), summing the Hilbert function until two consecutive zeros."""
    total = 0
    zeros = 0
    for t in range(I.safety_cap + 2):
        h = hilbert_function(I, t)
        total += h
        zeros = zeros + 1 if h == 0 else 0
        if zeros == 2:
            return total
    raise NotPrimaryError(f"Hilbert function does not vanish by degree {I.safety_cap}")


def expected_hilbert_function(d: int, t: int) -> int:
    """Hilbert function of R/I for three general forms of degree d."""

    def H(u: int) -> int:
        return u + 1 if u >= 0 else 0

    return H(t) - (3 * H(t - d) - H(t - d - d // 2) - H(t - d - (d + 1) // 2))


def _complement_forms(F: FieldSpec, t: int, space: RowSpace, sub: RowSpace | None) -> list[BinaryForm]:
    """Canonical representatives of space/sub in degree t (echelon form)."""
    if sub is None or sub.dim == 0:
        reps = space
    else:
        nf = sub.normal_forms(space.rows)
        nf = nf[np.any(nf != 0, axis=1)]
        if nf.shape[0] == 0:
            return []
        reps = RowSpace.from_array(F, nf)
    return [BinaryForm(F, t, tuple(v)) for v in reps.basis()]


def _minimal_from_pieces(F: FieldSpec, pieces: dict[int, RowSpace]) -> list[BinaryForm]:
    gens: list[BinaryForm] = []
    for t in sorted(pieces):
        space = pieces[t]
        if space.dim == 0:
            continue
        prev = pieces.get(t - 1)
        sub = None
        if prev is not None and prev.dim:
            sub = RowSpace.from_array(F, _shift_rows(prev.rows, t + 1))
            if sub.dim == space.dim:
                continue
        gens.extend(_complement_forms(F, t, space, sub))
    return gens


def minimal_generators(I: GradedIdeal) -> list[BinaryForm]:
    """A minimal homogeneous generating set, deterministic given the ideal."""
    degrees = sorted({g.degree for g in I.nonzero_gens})
    pieces = {}
    for t in degrees:
        pieces[t] = I.piece(t)
        pieces[t - 1] = I.piece(t - 1)
    F = I.field
    gens = []
    for t in degrees:
        prev = pieces[t - 1]
        sub = RowSpace.from_array(F, _shift_rows(prev.rows, t + 1)) if prev.dim else None
        gens.extend(_complement_forms(F, t, pieces[t], sub))
    return gens


def min_gens(I: GradedIdeal) -> list[tuple[int, int]]:
    """(degree, count) of a minimal generating set, by graded Nakayama."""
    out = []
    for t in sorted({g.degree for g in I.nonzero_gens}):
        prev = I.piece(t - 1)
        below = RowSpace.from_array(I.field, _shift_rows(prev.rows, t + 1)).dim if prev.dim else 0
        count = I.piece(t).dim - below
        if count:
            out.append((t, count))
    return out


def colon_pieces(A: GradedIdeal, B: GradedIdeal, t_max: int | None = None) -> dict[int, RowSpace]:
    """Graded pieces of (A : B) up to the first degree where it fills R_t."""
    F = A.field
    if B.field != F:
        raise ValueError("field mismatch")
    cap = A.safety_cap if t_max is None else t_max
    pieces: dict[int, RowSpace] = {}
    for t in range(cap + 1):
        blocks = []
        for b in B.nonzero_gens:
            target = A.piece(t + b.degree)
            free = target.nonpivots()
            if not free:
                continue
            vecs = F._to_array([b.shifted(i, t + b.degree) for i in range(t + 1)], t + b.degree + 1)
            nf = target.normal_forms(vecs)
            blocks.append(nf[:, free].T)
        if not blocks:
            pieces[t] = RowSpace.from_array(F, F._to_array([[int(i == j) for j in range(t + 1)] for i in range(t + 1)], t + 1))
            break
        ker = kernel_rows(F, np.vstack(blocks))
        pieces[t] = RowSpace.from_array(F, ker) if ker.shape[0] else RowSpace.empty(F, t + 1)
        if pieces[t].is_full:
            break
    return pieces


def colon(A: GradedIdeal, B: GradedIdeal, t_max: int | None = None) -> GradedIdeal:
    """(A : B) = {h : h B in A}, returned by minimal generators.

    Pieces are computed for t <= t_max (default: A's safety cap) and the scan
    stops as soon as a piece is all of R_t.
    """
    pieces = colon_pieces(A, B, t_max)
    gens = _minimal_from_pieces(A.field, pieces)
    if not gens:
        raise ValueError("colon ideal is zero up to the degree bound")
    return GradedIdeal(tuple(gens))


def last_coordinate_ideal(A: GradedIdeal, f: BinaryForm, t_max: int | None = None) -> GradedIdeal:
    """(A : f): the ideal of last syzygy coordinates when f is listed last."""
    return colon(A, GradedIdeal((f,)), t_max)


@dataclass(frozen=True)
class SyzygyProfile:
    """Minimal first syzygies of an ordered list of forms.

    ``degrees`` are standard degrees (total degree minus the smallest generator
    degree); ``syzygies[k][j]`` is the coefficient of generator j, or None
    when that generator's degree exceeds the syzygy's total degree.
    """

    degrees: tuple
    total_degrees: tuple
    syzygies: tuple

    def entries(self) -> list[BinaryForm]:
        return [h for syz in self.syzygies for h in syz if h is not None]


def _layout(degs: Sequence[int], t: int) -> list[tuple[int, int]]:
    """(offset, length) of each generator's coefficient block in degree t."""
    out = []
    off = 0
    for e in degs:
        n = max(t - e + 1, 0)
        out.append((off, n))
        off += n
    return out


def syzygy_profile(gens: Sequence[BinaryForm]) -> SyzygyProfile:
    """Minimal generators of the first syzygy module, degree by degree."""
    gens = list(gens)
    I = GradedIdeal(tuple(gens))
    if not is_m_primary(I):
        raise NotPrimaryError("syzygy profile needs an (x, y)-primary ideal")
    F = I.field
    degs = [g.degree for g in gens]
    lo = min(degs)
    top = socle_degree(I) + 2
    prev_ker = None
    found = []
    for t in range(lo, top + 1):
        layout = _layout(degs, t)
        n = sum(length for _, length in layout)
        cols = []
        for g, (_, length) in zip(gens, layout):
            cols.extend(g.shifted(i, t) for i in range(length))
        # rows are equations, so per-row rational scaling leaves the kernel alone
        mat = F._to_array([list(r) for r in zip(*cols)], n)
        ker = kernel_rows(F, mat)
        if ker.shape[0] == 0:
            prev_ker = None
            continue
        space = RowSpace.from_array(F, ker)
        sub = None
        if prev_ker is not None:
            old = _layout(degs, t - 1)
            k = prev_ker.shape[0]
            shifted = np.zeros((2 * k, n), dtype=prev_ker.dtype)
            for (o_new, _), (o_old, l_old) in zip(layout, old):
                if l_old:
                    shifted[:k, o_new + 1:o_new + 1 + l_old] = prev_ker[:, o_old:o_old + l_old]
                    shifted[k:, o_new:o_new + l_old] = prev_ker[:, o_old:o_old + l_old]
            sub = RowSpace.from_array(F, shifted)
        if sub is None or sub.dim < space.dim:
            if sub is None:
                reps = space
            else:
                nf = sub.normal_forms(space.rows)
                reps = RowSpace.from_array(F, nf[np.any(nf != 0, axis=1)])
            for vec in reps.basis():
                syz = tuple(
                    BinaryForm(F, t - e, tuple(vec[o:o + length])) if length else None
                    for e, (o, length) in zip(degs, layout)
                )
                found.append((t, syz))
        prev_ker = space.rows
    return SyzygyProfile(
        degrees=tuple(t - lo for t, _ in found),
        total_degrees=tuple(t for t, _ in found),
        syzygies=tuple(s for _, s in found),
    )


def hilbert_table(I: GradedIdeal) -> list[int]:
    return hilbert_series_values(I)


def sample_general_forms(
    d: int,
    rng: random.Random,
    field: FieldSpec,
    max_resamples: int = 5,
    count: int = 3,
) -> tuple[list[BinaryForm], list[dict]]:
    """Random forms with the generic Hilbert function and syzygy degrees.

    Draws again (from the same generator) when a genericity check fails;
    every redraw is logged and returned.
    """
    resamples: list[dict] = []
    for attempt in range(max_resamples + 1):
        forms = [random_form(d, rng, field) for _ in range(count)]
        reason = genericity_failure(forms)
        if reason is None:
            return forms, resamples
        log.warning("resampling degree-%d forms (attempt %d): %s", d, attempt, reason)
        resamples.append({"attempt": attempt, "reason": reason})
    raise GenericityError(f"no general forms of degree {d} after {max_resamples} resamples")


def genericity_failure(forms: Sequence[BinaryForm]) -> str | None:
    """Why three forms of degree d fail to look general, or None."""
    d = forms[0].degree
    I = GradedIdeal(tuple(forms))
    if not is_m_primary(I):
        return "not (x,y)-primary"
    table = hilbert_table(I)
    expected = [expected_hilbert_function(d, t) for t in range(len(table))]
    if table != expected:
        return f"Hilbert function {table} != {expected}"
    if d >= 2:
        prof = syzygy_profile(forms)
        if sorted(prof.degrees) != [d // 2, (d + 1) // 2]:
            return f"syzygy degrees {sorted(prof.degrees)}"
    return None
