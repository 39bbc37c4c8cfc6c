"""Exact arithmetic in imaginary quadratic fields Q(sqrt(-d))."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import isqrt, lcm
from typing import Iterator, List, Tuple, Union

import numpy as np
from sympy import legendre_symbol, primerange
from sympy.ntheory.factor_ import core

from ..utils.validators import (
    ValidationError,
    validate_fundamental_discriminant,
    validate_prime,
)

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]


class SplittingType(Enum):
    """How a rational prime decomposes in O_k."""
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


@dataclass(frozen=True)
class Field:
    """An imaginary quadratic field with integral basis {1, omega}.

    omega is (1 + sqrt(-d))/2 when d = 3 mod 4, otherwise sqrt(-d).
    """

    d: int
    disc: int
    omega_half: bool
    note: str = field(default="", compare=False)

    @property
    def trace_omega(self) -> int:
        return 1 if self.omega_half else 0

    @property
    def norm_omega(self) -> int:
        return (1 + self.d) // 4 if self.omega_half else self.d

    @property
    def abs_disc(self) -> int:
        return -self.disc

    @property
    def label(self) -> str:
        return f"Q(sqrt(-{self.d}))"

    def element(self, a: Rational = 0, b: Rational = 0) -> 'FieldElement':
        return FieldElement(self, Fraction(a), Fraction(b))

    @property
    def zero(self) -> 'FieldElement':
        return self.element(0, 0)

    @property
    def one(self) -> 'FieldElement':
        return self.element(1, 0)

    @property
    def omega(self) -> 'FieldElement':
        return self.element(0, 1)

    @property
    def sqrt_minus_d(self) -> 'FieldElement':
        if self.omega_half:
            return self.element(-1, 2)
        return self.omega

    def norm_form(self, a: int, b: int) -> int:
        """Norm of a + b*omega, computed on integer coordinates."""
        return a * a + a * b * self.trace_omega + b * b * self.norm_omega

    def trace_pairing(self, x: Tuple[int, int], y: Tuple[int, int]) -> int:
        """Tr(x * conj(y)) on integer coordinates."""
        (a1, b1), (a2, b2) = x, y
        return 2 * a1 * a2 + (a1 * b2 + a2 * b1) * self.trace_omega + 2 * b1 * b2 * self.norm_omega

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class FieldElement:
    """The element a + b*omega of a fixed field, with exact rational a, b."""

    field: Field
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'a', Fraction(self.a))
        object.__setattr__(self, 'b', Fraction(self.b))

    def _coerce(self, other) -> 'FieldElement':
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValidationError(
                    f"cannot combine elements of {self.field} and {other.field}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, Fraction(other), Fraction(0))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, -self.a, -self.b)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        # omega^2 = T*omega - N
        t, n = self.field.trace_omega, self.field.norm_omega
        bd = self.b * other.b
        return FieldElement(
            self.field,
            self.a * other.a - n * bd,
            self.a * other.b + self.b * other.a + t * bd,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> 'FieldElement':
        # conj(omega) = T - omega
        return FieldElement(self.field, self.a + self.b * self.field.trace_omega, -self.b)

    def norm(self) -> Fraction:
        t, n = self.field.trace_omega, self.field.norm_omega
        return self.a * self.a + self.a * self.b * t + self.b * self.b * n

    def trace(self) -> Fraction:
        return 2 * self.a + self.b * self.field.trace_omega

    def inverse(self) -> 'FieldElement':
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero field element")
        c = self.conj()
        return FieldElement(self.field, c.a / n, c.b / n)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def denominator(self) -> int:
        """Least positive integer m with m*self integral."""
        return lcm(self.a.denominator, self.b.denominator)

    def coords(self) -> Tuple[Fraction, Fraction]:
        return (self.a, self.b)

    def int_coords(self) -> Tuple[int, int]:
        if not self.is_integral():
            raise ValidationError(f"{self} is not integral")
        return (int(self.a), int(self.b))

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}w"
        return f"{self.a}{'+' if self.b > 0 else '-'}{abs(self.b)}w"


def make_field(d: int) -> Field:
    """Build Q(sqrt(-d)).

    Non-square-free d is reduced to its square-free part; the reduction is
    recorded in the field's note.

    Raises:
        ValidationError: for d <= 0
    """

    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ValidationError(f"d must be a positive integer, got {d!r}")

    kernel = core(d, 2)
    note = ""
    if kernel != d:
        note = f"d={d} reduced to square-free part {kernel}"
        logger.info(note)

    omega_half = kernel % 4 == 3
    disc = -kernel if omega_half else -4 * kernel
    return Field(d=int(kernel), disc=int(disc), omega_half=omega_half, note=note)


def field_from_disc(disc: int) -> Field:
    """Build the field with the given negative fundamental discriminant."""

    validate_fundamental_discriminant(disc)
    d = -disc if disc % 4 == 1 else -disc // 4
    return make_field(d)


def splitting_type(fld: Field, p: int) -> SplittingType:
    """Classify the decomposition of the rational prime p in O_k."""

    validate_prime(p)
    disc = fld.disc

    if disc % p == 0:
        return SplittingType.RAMIFIED

    if p == 2:
        # Kronecker symbol (disc|2) for odd disc
        return SplittingType.SPLIT if disc % 8 == 1 else SplittingType.INERT

    if legendre_symbol(disc % p, p) == 1:
        return SplittingType.SPLIT
    return SplittingType.INERT


def elem_norm(x: FieldElement) -> Fraction:
    return x.norm()


def elem_conj(x: FieldElement) -> FieldElement:
    return x.conj()


def elem_mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def elem_add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def elem_sub(x: FieldElement, y: FieldElement) -> FieldElement:
    return x - y


def elements_up_to_norm(fld: Field, bound: int) -> List[Tuple[int, int]]:
    """All (a, b) with a + b*omega in O_k and 0 <= N(a + b*omega) <= bound.

    Uses N = (a + bT/2)^2 + b^2 |disc|/4. Sorted by (norm, a, b).
    """

    t, D = fld.trace_omega, fld.abs_disc
    result = []
    b_max = isqrt(4 * bound // D) + 1
    for b in range(-b_max, b_max + 1):
        room = 4 * bound - b * b * D
        if room < 0:
            continue
        s = isqrt(room)
        # |2a + bT| <= s
        a_lo = -((s + b * t) // 2) - 1
        a_hi = (s - b * t) // 2 + 1
        for a in range(a_lo, a_hi + 1):
            if fld.norm_form(a, b) <= bound:
                result.append((a, b))
    result.sort(key=lambda ab: (fld.norm_form(*ab), ab[0], ab[1]))
    return result


def units(fld: Field) -> List[FieldElement]:
    """The roots of unity of O_k."""
    return [fld.element(a, b) for a, b in elements_up_to_norm(fld, 1) if fld.norm_form(a, b) == 1]


def squarefree_mask(limit: int) -> np.ndarray:
    """Boolean array m with m[n] true iff n is square-free, 0 <= n <= limit."""

    mask = np.ones(limit + 1, dtype=bool)
    mask[0] = False
    for p in primerange(2, isqrt(limit) + 1):
        mask[p * p::p * p] = False
    return mask


def fundamental_discriminants(lo: int, hi: int) -> Iterator[int]:
    """Yield negative fundamental discriminants with lo <= |disc| <= hi.

    |disc| = n is fundamental iff n = 3 mod 4 square-free, or n = 4k with
    k = 1, 2 mod 4 square-free.
    """

    if hi < 3:
        return
    mask = squarefree_mask(hi)
    for n in range(max(lo, 3), hi + 1):
        if n % 4 == 3:
            if mask[n]:
                yield -n
        elif n % 4 == 0:
            k = n // 4
            if k % 4 in (1, 2) and mask[k]:
                yield -n


def prime_above(fld: Field, p: int):
    """A prime ideal of O_k above p, as a FractionalIdeal."""

    from .ideals import prime_above as _prime_above

    return _prime_above(fld, p)
