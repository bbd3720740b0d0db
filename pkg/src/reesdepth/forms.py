"""Binary forms in k[x, y].

A form of degree d is stored as its d+1 coefficients in ascending powers of
x: ``coeffs[i]`` multiplies ``x**i * y**(d - i)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .scalars import QQ, FieldSpec


@dataclass(frozen=True)
class BinaryForm:
    field: FieldSpec
    degree: int
    coeffs: tuple

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise ValueError("negative degree")
        if len(self.coeffs) != self.degree + 1:
            raise ValueError(f"degree {self.degree} form needs {self.degree + 1} coefficients")
        object.__setattr__(self, "coeffs", tuple(self.field(c) for c in self.coeffs))

    @classmethod
    def from_coeffs(cls, coeffs, field: FieldSpec = QQ) -> "BinaryForm":
        coeffs = tuple(coeffs)
        return cls(field, len(coeffs) - 1, coeffs)

    @classmethod
    def zero(cls, degree: int, field: FieldSpec = QQ) -> "BinaryForm":
        return cls(field, degree, (0,) * (degree + 1))

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other: "BinaryForm") -> None:
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        self._check(other)
        if self.degree != other.degree:
            raise ValueError("adding forms of different degrees")
        return BinaryForm(self.field, self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "BinaryForm":
        return BinaryForm(self.field, self.degree, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, BinaryForm):
            return multiply(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> "BinaryForm":
        c = self.field(c)
        return BinaryForm(self.field, self.degree, tuple(c * a for a in self.coeffs))

    def __pow__(self, n: int) -> "BinaryForm":
        if n < 0:
            raise ValueError("negative power")
        out = monomial(0, 0, self.field)
        for _ in range(n):
            out = multiply(out, self)
        return out

    def shifted(self, i: int, t: int) -> list:
        """Coefficient vector of ``x**i * y**(t - deg - i) * self`` in degree t."""
        out = [self.field.zero()] * (t + 1)
        out[i:i + self.degree + 1] = self.coeffs
        return out

    def __str__(self) -> str:
        terms = []
        d = self.degree
        for i in range(d, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "*".join(
                m for m in (_power("x", i), _power("y", d - i)) if m
            )
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms) if terms else f"0 (degree {d})"


def _power(var: str, e: int) -> str:
    if e == 0:
        return ""
    return var if e == 1 else f"{var}^{e}"


def multiply(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    """Product of two forms by coefficient convolution."""
    f._check(g)
    out = [0] * (f.degree + g.degree + 1)
    for i, a in enumerate(f.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(g.coeffs):
            out[i + j] += a * b
    return BinaryForm(f.field, f.degree + g.degree, tuple(out))


def delta(f: BinaryForm) -> BinaryForm:
    """The degree d-2 form multiplying x**2 once the xy^(d-1) and y^d terms are dropped."""
    if f.degree < 2:
        raise ValueError("delta needs degree >= 2")
    return BinaryForm(f.field, f.degree - 2, f.coeffs[2:])


def random_form(d: int, rng: random.Random, field: FieldSpec) -> BinaryForm:
    """d+1 independent uniform coefficients from GF(p)."""
    if not field.is_prime_field:
        raise ValueError("random forms need a prime field")
    field.check_degree(d)
    return BinaryForm(field, d, tuple(rng.randrange(field.p) for _ in range(d + 1)))


def monomial(i: int, t: int, field: FieldSpec = QQ) -> BinaryForm:
    """The form x**i * y**(t - i)."""
    if not 0 <= i <= t:
        raise ValueError(f"need 0 <= i <= t, got i={i}, t={t}")
    coeffs = [0] * (t + 1)
    coeffs[i] = 1
    return BinaryForm(field, t, tuple(coeffs))


__all__ = ["BinaryForm", "multiply", "delta", "random_form", "monomial"]
