"""Shared helpers and independent oracles for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

import sympy

from reesdepth.forms import BinaryForm, random_form
from reesdepth.graded import sample_general_forms
from reesdepth.scalars import GF_DEFAULT

GF = GF_DEFAULT
SEEDS = (1, 2, 3)


def raw_forms(d: int, seed: int, field=GF) -> list[BinaryForm]:
    """Three unfiltered random forms."""
    rng = random.Random(seed)
    return [random_form(d, rng, field) for _ in range(3)]


@lru_cache(maxsize=None)
def general_forms(d: int, seed: int) -> tuple[BinaryForm, ...]:
    forms, _ = sample_general_forms(d, random.Random(seed), GF)
    return tuple(forms)


def naive_rref(rows) -> tuple[list[list[Fraction]], list[int]]:
    """Textbook Gauss-Jordan over Fractions."""
    m = [[Fraction(v) for v in row] for row in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        a = m[r][c]
        m[r] = [v / a for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [u - f * v for u, v in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def naive_det(rows) -> Fraction:
    m = [[Fraction(v) for v in row] for row in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [u - f * v for u, v in zip(m[i], m[c])]
    return det


X, Y = sympy.symbols("x y")


def to_sympy(f: BinaryForm):
    return sum(sympy.Rational(c.numerator, c.denominator) * X**i * Y**(f.degree - i)
               for i, c in enumerate(f.coeffs))


def sympy_colength(forms) -> int:
    """Number of standard monomials outside the leading-term ideal."""
    G = sympy.groebner([to_sympy(f) for f in forms if not f.is_zero], X, Y, order="grevlex")
    leads = [sympy.Poly(g, X, Y).monoms(order="grevlex")[0] for g in G.exprs]
    if not any(b == 0 for a, b in leads) or not any(a == 0 for a, b in leads):
        raise ValueError("not (x, y)-primary")
    bound = max(a + b for a, b in leads) + 1
    count = 0
    for a in range(bound + 1):
        for b in range(bound + 1):
            if not any(a >= la and b >= lb for la, lb in leads):
                count += 1
    return count
