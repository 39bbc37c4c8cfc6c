"""Fractional ideals of O_k in Hermite normal form, and the ideal to form bridge."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, List, Optional, Tuple

from sympy import sqrt_mod
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form

from ..utils.validators import InvariantViolation, ValidationError
from .classgroup import FormClass, QuadraticForm, principal_form, reduce, reduce_with_transform
from .quadfield import Field, FieldElement, SplittingType, splitting_type

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FractionalIdeal:
    """The fractional ideal scale * (a*Z + (b + omega)*Z).

    0 <= b < a and a divides N(b + omega), so the integral part is an ideal
    of norm a. The representation is canonical.
    """

    field: Field
    scale: Fraction
    a: int
    b: int

    def __post_init__(self):
        object.__setattr__(self, 'scale', Fraction(self.scale))
        if self.scale <= 0 or self.a <= 0 or not 0 <= self.b < self.a:
            raise InvariantViolation(f"non-canonical ideal data {self.scale}, {self.a}, {self.b}")
        if self.field.norm_form(self.b, 1) % self.a:
            raise InvariantViolation(f"{self.a} does not divide N({self.b}+w)")

    @property
    def beta(self) -> FieldElement:
        return self.field.element(self.b, 1)

    def basis(self) -> Tuple[FieldElement, FieldElement]:
        return (self.field.element(self.scale * self.a), self.beta * self.scale)

    def norm(self) -> Fraction:
        return self.scale * self.scale * self.a

    def is_integral(self) -> bool:
        return self.scale.denominator == 1

    def contains(self, x: FieldElement) -> bool:
        y = x / self.scale
        if y.b.denominator != 1:
            return False
        rest = y.a - y.b * self.b
        return rest.denominator == 1 and int(rest) % self.a == 0

    def __mul__(self, other: 'FractionalIdeal') -> 'FractionalIdeal':
        return ideal_mul(self, other)

    def __truediv__(self, other: 'FractionalIdeal') -> 'FractionalIdeal':
        return ideal_mul(self, ideal_inverse(other))

    def __str__(self):
        inner = f"({self.a}, {self.b}+w)"
        return inner if self.scale == 1 else f"{self.scale}*{inner}"


def ideal_from_generators(fld: Field, gens: Iterable[FieldElement]) -> FractionalIdeal:
    """The O_k-module generated by gens, in canonical form.

    Raises:
        ValidationError: if every generator is zero
    """

    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ValidationError("an ideal needs at least one nonzero generator")
    for g in gens:
        if g.field != fld:
            raise ValidationError(f"generator {g} does not belong to {fld}")

    # Z-span of {g, g*omega} for every generator
    spanning = []
    for g in gens:
        spanning.append(g)
        spanning.append(g * fld.omega)

    denom = lcm(*(x.denominator() for x in spanning))
    columns = [[int(x.a * denom), int(x.b * denom)] for x in spanning]
    matrix = DomainMatrix([[ZZ(col[0]) for col in columns], [ZZ(col[1]) for col in columns]], (2, len(columns)), ZZ)
    W = [[int(x) for x in row] for row in hermite_normal_form(matrix).to_list()]

    if len(W[0]) != 2 or W[1][0] != 0:
        raise InvariantViolation(f"unexpected HNF shape {W} for generators {[str(g) for g in gens]}")

    (w00, w01), (_, w11) = W
    c = w11
    if w00 % c or w01 % c:
        raise InvariantViolation(f"HNF {W} is not an O_k-ideal lattice")
    a = w00 // c
    b = (w01 // c) % a
    return FractionalIdeal(fld, Fraction(c, denom), a, b)


def unit_ideal(fld: Field) -> FractionalIdeal:
    return FractionalIdeal(fld, Fraction(1), 1, 0)


def principal_ideal(x: FieldElement) -> FractionalIdeal:
    return ideal_from_generators(x.field, [x])


def ideal_mul(I: FractionalIdeal, J: FractionalIdeal) -> FractionalIdeal:
    if I.field != J.field:
        raise ValidationError(f"ideals of {I.field} and {J.field} cannot be multiplied")
    return ideal_from_generators(I.field, [x * y for x in I.basis() for y in J.basis()])


def ideal_inverse(I: FractionalIdeal) -> FractionalIdeal:
    """I^-1 = conj(I0) / (scale * a), using I0 * conj(I0) = (a)."""

    factor = I.scale * I.a
    return ideal_from_generators(I.field, [I.field.element(Fraction(I.a) / factor), I.beta.conj() / factor])


def ideal_norm(I: FractionalIdeal) -> Fraction:
    return I.norm()


def ideal_power(I: FractionalIdeal, n: int) -> FractionalIdeal:
    if n < 0:
        return ideal_power(ideal_inverse(I), -n)
    result = unit_ideal(I.field)
    for _ in range(n):
        result = ideal_mul(result, I)
    return result


def associated_form(I: FractionalIdeal) -> QuadraticForm:
    """N(a*x + beta*y) / a for the integral part of I, with beta = b + omega."""

    fld = I.field
    beta = I.beta
    return QuadraticForm(I.a, int(beta.trace()), fld.norm_form(I.b, 1) // I.a)


def ideal_to_form_class(I: FractionalIdeal) -> FormClass:
    return reduce(associated_form(I))


def is_principal(I: FractionalIdeal) -> Tuple[bool, Optional[FieldElement]]:
    """Decide principality by reducing the associated form.

    The reduction matrix m maps the form to a reduced one; when that is the
    principal form, a*m11 + beta*m21 has norm a and generates I0.

    Returns:
        (True, generator) or (False, None)
    """

    form = associated_form(I)
    reduced, m = reduce_with_transform(form)
    if reduced != principal_form(form.disc):
        return False, None

    (m11, _), (m21, _) = m
    witness = (I.field.element(I.a * m11) + I.beta * m21) * I.scale
    if witness.norm() != I.norm():
        raise InvariantViolation(f"principal witness {witness} has norm {witness.norm()}, expected {I.norm()}")
    return True, witness


def ideal_of_coordinates(fld: Field, coords: List[FieldElement]) -> FractionalIdeal:
    """The ideal x1*O_k + x2*O_k + x3*O_k of a vector's coordinates."""
    return ideal_from_generators(fld, coords)


def prime_above(fld: Field, p: int) -> FractionalIdeal:
    """A prime ideal of O_k above p: (p, omega - r) if p splits or ramifies, else (p)."""

    kind = splitting_type(fld, p)
    if kind is SplittingType.INERT:
        return ideal_from_generators(fld, [fld.element(p)])

    t, n = fld.trace_omega, fld.norm_omega
    if p == 2:
        r = next(x for x in range(2) if (x * x - t * x + n) % 2 == 0)
    else:
        s = sqrt_mod(fld.disc % p, p) or 0
        r = (t + s) * pow(2, -1, p) % p

    if (r * r - t * r + n) % p:
        raise InvariantViolation(f"{r} is not a root of the minimal polynomial of w mod {p}")

    ideal = ideal_from_generators(fld, [fld.element(p), fld.omega - r])
    if ideal.norm() != p:
        raise InvariantViolation(f"prime above {p} has norm {ideal.norm()}")
    return ideal
