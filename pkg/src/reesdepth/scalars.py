"""Exact fields and dense exact linear algebra.

Two coefficient fields are supported: the rationals (elements are
:class:`fractions.Fraction`) and prime fields GF(p) (elements are ints in
``[0, p)``).  Elimination over GF(p) runs on numpy arrays; over the rationals
every elimination is fraction-free (Bareiss) on integer-scaled rows, so no
intermediate fractions appear.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np
from sympy import isprime

DEFAULT_PRIME = 2147483647

# p below this bound keeps every product of two residues inside int64.
_INT64_PRIME_BOUND = 2**31


@dataclass(frozen=True)
class FieldSpec:
    """The active coefficient field: rationals when ``p`` is None, else GF(p)."""

    p: int | None = None

    def __post_init__(self) -> None:
        if self.p is not None and not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(None)

    @classmethod
    def gf(cls, p: int = DEFAULT_PRIME) -> "FieldSpec":
        return cls(int(p))

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``rational`` or ``gfp:<p>``."""
        text = text.strip().lower()
        if text in ("rational", "rationals", "qq"):
            return cls.rationals()
        if text.startswith("gfp:"):
            return cls.gf(int(text[4:]))
        raise ValueError(f"unknown field {text!r}")

    def __str__(self) -> str:
        return "rational" if self.p is None else f"gfp:{self.p}"

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def check_degree(self, d: int) -> None:
        """Refuse prime fields with p <= 2d."""
        if self.p is not None and self.p <= 2 * d:
            raise ValueError(f"characteristic {self.p} too small for degree {d}")

    def __call__(self, value) -> int | Fraction:
        if self.p is None:
            return Fraction(value)
        if isinstance(value, Fraction):
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / Fraction(a)
        return pow(int(a), -1, self.p)

    def random_element(self, rng: random.Random, nonzero: bool = False) -> int:
        if self.p is None:
            raise ValueError("no uniform distribution on the rationals")
        if nonzero:
            return rng.randrange(1, self.p)
        return rng.randrange(self.p)

    # -- internal array representation -------------------------------------

    @property
    def _dtype(self):
        if self.p is not None and self.p < _INT64_PRIME_BOUND:
            return np.int64
        return object

    def _to_array(self, rows: Sequence[Sequence], ncols: int) -> np.ndarray:
        """Rows as a 2-d array; each rational row is scaled to integers."""
        if self.p is not None:
            arr = np.zeros((len(rows), ncols), dtype=self._dtype)
            for i, row in enumerate(rows):
                arr[i, :] = [self(v) for v in row]
            return arr
        arr = np.zeros((len(rows), ncols), dtype=object)
        for i, row in enumerate(rows):
            arr[i, :] = _integer_row(row)
        return arr

    def _from_int(self, value):
        return Fraction(value) if self.p is None else int(value) % self.p


QQ = FieldSpec.rationals()
GF_DEFAULT = FieldSpec.gf(DEFAULT_PRIME)


def _integer_row(row: Sequence) -> list[int]:
    fracs = [Fraction(v) for v in row]
    den = reduce(math.lcm, (f.denominator for f in fracs), 1)
    return [int(f * den) for f in fracs]


def _primitive(row: np.ndarray) -> np.ndarray:
    g = reduce(math.gcd, (int(v) for v in row), 0)
    if g > 1:
        row = row // g
    return row


@dataclass(frozen=True)
class DenseMatrix:
    """Immutable row-major matrix over a :class:`FieldSpec`."""

    field: FieldSpec
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length does not match shape")

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], cols: int | None = None) -> "DenseMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(field, len(rows), cols, tuple(field(v) for r in rows for v in r))

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "DenseMatrix":
        return cls(field, rows, cols, (field.zero(),) * (rows * cols))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "DenseMatrix":
        return cls.from_rows(field, [[int(i == j) for j in range(n)] for i in range(n)], n)

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return self.entries[j::self.cols] if self.cols else ()

    def to_lists(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "DenseMatrix":
        return DenseMatrix.from_rows(self.field, [self.column(j) for j in range(self.cols)], self.rows)

    def hstack(self, other: "DenseMatrix") -> "DenseMatrix":
        if self.field != other.field or self.rows != other.rows:
            raise ValueError("incompatible matrices")
        return DenseMatrix.from_rows(
            self.field, [self.row(i) + other.row(i) for i in range(self.rows)], self.cols + other.cols
        )

    def select_columns(self, cols: Sequence[int]) -> "DenseMatrix":
        return DenseMatrix.from_rows(self.field, [[self[i, j] for j in cols] for i in range(self.rows)], len(cols))

    def matvec(self, vec: Sequence) -> list:
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        F = self.field
        out = []
        for i in range(self.rows):
            acc = sum((a * b for a, b in zip(self.row(i), vec)), F.zero())
            out.append(F(acc))
        return out

    def _array(self) -> np.ndarray:
        return self.field._to_array(self.to_lists(), self.cols)


# -- elimination kernels ------------------------------------------------------


def _bareiss(arr: np.ndarray) -> tuple[np.ndarray, list[int], int]:
    """Fraction-free forward elimination of an integer object array in place.

    Returns the echelon array, the pivot columns, and the sign of the row
    permutation.  Every entry produced is a minor of the input, so the
    divisions are exact.
    """
    m, n = arr.shape
    prev = 1
    r = 0
    sign = 1
    pivots: list[int] = []
    for c in range(n):
        if r == m:
            break
        nz = [i for i in range(r, m) if arr[i, c] != 0]
        if not nz:
            continue
        p = nz[0]
        if p != r:
            arr[[r, p]] = arr[[p, r]]
            sign = -sign
        a = arr[r, c]
        if r + 1 < m:
            below = arr[r + 1:]
            arr[r + 1:] = (a * below - np.outer(below[:, c], arr[r])) // prev
        prev = a
        pivots.append(c)
        r += 1
    return arr, pivots, sign


def _rref_modp(arr: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Gauss-Jordan over GF(p) in place; returns (nonzero rows, pivots)."""
    m, n = arr.shape
    arr %= p
    r = 0
    pivots: list[int] = []
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(arr[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            arr[[r, piv]] = arr[[piv, r]]
        inv = pow(int(arr[r, c]), -1, p)
        arr[r] = (arr[r] * inv) % p
        col = arr[:, c].copy()
        col[r] = 0
        idx = np.nonzero(col)[0]
        if idx.size:
            arr[idx] = (arr[idx] - np.outer(col[idx], arr[r])) % p
        pivots.append(c)
        r += 1
    return arr[:r].copy(), pivots


def _rref_int(arr: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Integer reduced echelon form of a rational row space.

    Bareiss forward pass, then fraction-free back substitution.  Each output
    row is primitive with a positive pivot and vanishes at the other pivots.
    """
    arr, pivots, _ = _bareiss(arr)
    k = len(pivots)
    arr = arr[:k]
    for i in range(k):
        arr[i] = _primitive(arr[i])
        if arr[i, pivots[i]] < 0:
            arr[i] = -arr[i]
    for j in range(k - 1, -1, -1):
        c = pivots[j]
        a = arr[j, c]
        for i in range(j):
            b = arr[i, c]
            if b != 0:
                row = a * arr[i] - b * arr[j]
                arr[i] = _primitive(row)
    return arr, pivots


def _rref_array(field: FieldSpec, arr: np.ndarray) -> tuple[np.ndarray, list[int]]:
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        return arr[:0].copy(), []
    if field.p is None:
        return _rref_int(arr.copy())
    return _rref_modp(arr.copy(), field.p)


class RowSpace:
    """A subspace of ``field^ncols`` held in reduced echelon form.

    Over GF(p) the rows have pivot 1; over the rationals the rows are
    primitive integer vectors (pivot value ``a_k``), and normal forms are
    scaled by ``lcm(a_k)`` so they stay integral and linear.
    """

    __slots__ = ("field", "ncols", "rows", "pivots", "_scale")

    def __init__(self, field: FieldSpec, ncols: int, rows: np.ndarray, pivots: list[int]):
        self.field = field
        self.ncols = ncols
        self.rows = rows
        self.pivots = pivots
        if field.p is None and pivots:
            self._scale = reduce(math.lcm, (int(rows[k, c]) for k, c in enumerate(pivots)), 1)
        else:
            self._scale = 1

    @classmethod
    def span(cls, field: FieldSpec, vectors: Sequence[Sequence], ncols: int) -> "RowSpace":
        return cls.from_array(field, field._to_array(vectors, ncols))

    @classmethod
    def from_array(cls, field: FieldSpec, arr: np.ndarray) -> "RowSpace":
        """Span of the rows of an array already in internal representation."""
        ncols = arr.shape[1]
        rows, pivots = _rref_array(field, arr)
        return cls(field, ncols, rows, pivots)

    @classmethod
    def empty(cls, field: FieldSpec, ncols: int) -> "RowSpace":
        return cls(field, ncols, np.zeros((0, ncols), dtype=field._dtype), [])

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def is_full(self) -> bool:
        return self.dim == self.ncols

    def nonpivots(self) -> list[int]:
        piv = set(self.pivots)
        return [j for j in range(self.ncols) if j not in piv]

    def normal_forms(self, arr: np.ndarray) -> np.ndarray:
        """Reduce each row of ``arr`` (internal representation) modulo the space.

        Linear in its input: over the rationals the result is scaled by a
        constant that depends only on the space.
        """
        out = arr.copy()
        if self.field.p is None:
            out = out * self._scale
            for k, c in enumerate(self.pivots):
                coef = out[:, c] // int(self.rows[k, c])
                if np.any(coef != 0):
                    out -= np.outer(coef, self.rows[k])
            return out
        p = self.field.p
        out %= p
        for k, c in enumerate(self.pivots):
            coef = out[:, c].copy()
            idx = np.nonzero(coef)[0]
            if idx.size:
                out[idx] = (out[idx] - np.outer(coef[idx], self.rows[k])) % p
        return out

    def contains_array(self, arr: np.ndarray) -> np.ndarray:
        """Boolean mask: which rows of ``arr`` lie in the space."""
        nf = self.normal_forms(arr)
        return ~np.any(nf != 0, axis=1)

    def contains(self, vec: Sequence) -> bool:
        arr = self.field._to_array([vec], self.ncols)
        return bool(self.contains_array(arr)[0])

    def basis(self) -> list[list]:
        """Basis vectors as field elements (pivot entries equal to 1)."""
        F = self.field
        out = []
        for k, c in enumerate(self.pivots):
            row = self.rows[k]
            if F.p is None:
                a = int(row[c])
                out.append([Fraction(int(v), a) for v in row])
            else:
                out.append([int(v) for v in row])
        return out

    def extended(self, arr: np.ndarray) -> "RowSpace":
        return RowSpace.from_array(self.field, np.vstack([self.rows, arr.astype(self.rows.dtype)]))


def kernel_rows(field: FieldSpec, arr: np.ndarray) -> np.ndarray:
    """Kernel basis (as rows, internal representation) of the matrix ``arr``."""
    n = arr.shape[1]
    if arr.shape[0] == 0:
        rows, pivots = arr[:0], []
    else:
        rows, pivots = _rref_array(field, arr)
    piv_set = set(pivots)
    free = [j for j in range(n) if j not in piv_set]
    out = np.zeros((len(free), n), dtype=field._dtype)
    if field.p is None:
        scale = reduce(math.lcm, (int(rows[k, c]) for k, c in enumerate(pivots)), 1)
        for i, f in enumerate(free):
            out[i, f] = scale
            for k, c in enumerate(pivots):
                out[i, c] = -(scale // int(rows[k, c])) * rows[k, f]
            out[i] = _primitive(out[i])
    else:
        p = field.p
        for i, f in enumerate(free):
            out[i, f] = 1
            for k, c in enumerate(pivots):
                out[i, c] = (-rows[k, f]) % p
    return out


def _array_to_vectors(field: FieldSpec, arr: np.ndarray) -> list[list]:
    return [[field._from_int(v) for v in row] for row in arr]


# -- public operations ---------------------------------------------------------


def rank(m: DenseMatrix) -> int:
    """Rank of ``m`` over its field."""
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.field.p is None:
        _, pivots, _ = _bareiss(m._array())
        return len(pivots)
    return len(_rref_modp(m._array(), m.field.p)[1])


def rref(m: DenseMatrix) -> tuple[DenseMatrix, list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    space = RowSpace.span(m.field, m.to_lists(), m.cols)
    return DenseMatrix.from_rows(m.field, space.basis(), m.cols), list(space.pivots)


def kernel_basis(m: DenseMatrix) -> list[list]:
    """Basis of ``{x : m x = 0}``, one vector per free column."""
    if m.cols == 0:
        return []
    arr = m._array() if m.rows else np.zeros((0, m.cols), dtype=m.field._dtype)
    return _array_to_vectors(m.field, kernel_rows(m.field, arr))


def solve_any(m: DenseMatrix, rhs: Sequence) -> list | None:
    """Some solution of ``m x = rhs``, or None when the system is inconsistent."""
    if len(rhs) != m.rows:
        raise ValueError("dimension mismatch")
    F = m.field
    aug = [list(m.row(i)) + [rhs[i]] for i in range(m.rows)]
    if not aug:
        return [F.zero()] * m.cols
    space = RowSpace.span(F, aug, m.cols + 1)
    if space.pivots and space.pivots[-1] == m.cols:
        return None
    x = [F.zero()] * m.cols
    for vec, c in zip(space.basis(), space.pivots):
        x[c] = vec[m.cols]
    if m.matvec(x) != [F(v) for v in rhs]:
        raise ArithmeticError("solution failed verification")
    return x


def determinant(m: DenseMatrix):
    """Exact determinant of a square matrix."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    F = m.field
    n = m.rows
    if n == 0:
        return F.one()
    if F.p is None:
        scales = [Fraction(1)] * n
        for i in range(n):
            den = reduce(math.lcm, (Fraction(v).denominator for v in m.row(i)), 1)
            scales[i] = Fraction(den)
        arr, pivots, sign = _bareiss(m._array())
        if len(pivots) < n:
            return F.zero()
        return Fraction(sign * int(arr[n - 1, n - 1])) / math.prod(scales)
    p = F.p
    arr = m._array() % p
    det = 1
    for c in range(n):
        nz = np.nonzero(arr[c:, c])[0]
        if nz.size == 0:
            return 0
        piv = c + int(nz[0])
        if piv != c:
            arr[[c, piv]] = arr[[piv, c]]
            det = -det
        a = int(arr[c, c])
        det = det * a % p
        inv = pow(a, -1, p)
        col = (arr[c + 1:, c] * inv) % p
        idx = np.nonzero(col)[0]
        if idx.size:
            sub = arr[c + 1:]
            sub[idx] = (sub[idx] - np.outer(col[idx], arr[c])) % p
            arr[c + 1:] = sub
    return det % p


def matmul(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    if a.field != b.field or a.cols != b.rows:
        raise ValueError("incompatible matrices")
    cols = [b.column(j) for j in range(b.cols)]
    return DenseMatrix.from_rows(
        a.field,
        [[sum((x * y for x, y in zip(a.row(i), col)), a.field.zero()) for col in cols] for i in range(a.rows)],
        b.cols,
    )


__all__ = [
    "DEFAULT_PRIME",
    "FieldSpec",
    "QQ",
    "GF_DEFAULT",
    "DenseMatrix",
    "RowSpace",
    "rank",
    "rref",
    "kernel_basis",
    "solve_any",
    "determinant",
    "matmul",
]
