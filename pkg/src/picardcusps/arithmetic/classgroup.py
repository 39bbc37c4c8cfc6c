"""
Class groups of imaginary quadratic fields via reduced binary quadratic forms.

A class is represented by its unique reduced form. The group law is Gauss
composition followed by reduction. Structure is computed separately for
each Sylow subgroup, since h is known from the form count.
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd, isqrt
from typing import Dict, Iterable, List, Optional, Tuple

from sympy import factorint, multiplicity
from sympy.core.intfunc import igcdex

from ..utils.validators import (
    InvariantViolation,
    ValidationError,
    validate_fundamental_discriminant,
    validate_positive,
)
from .quadfield import fundamental_discriminants

logger = logging.getLogger(__name__)

Matrix2 = Tuple[Tuple[int, int], Tuple[int, int]]

IDENTITY2: Matrix2 = ((1, 0), (0, 1))


@dataclass(frozen=True)
class QuadraticForm:
    """The binary quadratic form a*x^2 + b*x*y + c*y^2."""

    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1

    def is_positive_definite(self) -> bool:
        return self.a > 0 and self.disc < 0

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not abs(b) <= a <= c:
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def evaluate(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def transform(self, m: Matrix2) -> 'QuadraticForm':
        """The form (x, y) -> f(p*x + q*y, r*x + s*y) for m = ((p, q), (r, s))."""
        (p, q), (r, s) = m
        return QuadraticForm(
            self.evaluate(p, r),
            2 * self.a * p * q + self.b * (p * s + q * r) + 2 * self.c * r * s,
            self.evaluate(q, s),
        )

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def sort_key(self) -> Tuple[int, int, int]:
        return (self.a, abs(self.b), -self.b)

    def __str__(self):
        return f"({self.a},{self.b},{self.c})"


@dataclass(frozen=True)
class FormClass(QuadraticForm):
    """A form class, stored as its unique reduced representative."""

    def __post_init__(self):
        if not self.is_reduced():
            raise InvariantViolation(f"{QuadraticForm.__str__(self)} is not reduced")

    @property
    def label(self) -> str:
        return str(self)


def _mat_mul(m: Matrix2, n: Matrix2) -> Matrix2:
    (a, b), (c, d) = m
    (e, f), (g, h) = n
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def _check_form(f: QuadraticForm) -> None:
    if f.a <= 0 or f.disc >= 0:
        raise ValidationError(f"form {f} is not positive definite")
    if not f.is_primitive():
        raise ValidationError(f"form {f} is not primitive")


def reduce_with_transform(f: QuadraticForm) -> Tuple[FormClass, Matrix2]:
    """Reduce f and return the SL2(Z) matrix m with f.transform(m) reduced.

    Raises:
        ValidationError: if f is imprimitive or not positive definite
    """

    _check_form(f)
    a, b, c = f.a, f.b, f.c
    m = IDENTITY2

    def normalize(a, b, c, m):
        if -a < b <= a:
            return a, b, c, m
        r = (a - b) // (2 * a)
        return a, b + 2 * r * a, a * r * r + b * r + c, _mat_mul(m, ((1, r), (0, 1)))

    a, b, c, m = normalize(a, b, c, m)
    while a > c or (a == c and b < 0):
        s = (c + b) // (2 * c)
        # swap (x, y) -> (-y, x), then translate by s
        m = _mat_mul(m, ((0, -1), (1, s)))
        a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
    a, b, c, m = normalize(a, b, c, m)

    return FormClass(a, b, c), m


def reduce(f: QuadraticForm) -> FormClass:
    """Reduce a primitive positive definite form."""
    return reduce_with_transform(f)[0]


def principal_form(disc: int) -> FormClass:
    if disc % 4 == 0:
        return FormClass(1, 0, -disc // 4)
    return FormClass(1, 1, (1 - disc) // 4)


def compose(f: QuadraticForm, g: QuadraticForm) -> FormClass:
    """Gauss composition of two forms of the same discriminant, reduced."""

    disc = f.disc
    if g.disc != disc:
        raise ValidationError(f"cannot compose forms of discriminants {disc} and {g.disc}")

    a1, b1, _ = f.as_tuple()
    a2, b2, _ = g.as_tuple()
    if a1 == 1:
        return reduce(g)
    if a2 == 1:
        return reduce(f)

    s = (b1 + b2) // 2
    u1, v1, d1 = igcdex(a1, a2)
    u2, v2, d = igcdex(d1, s)
    # u*a1 + v*a2 + w*s = d = gcd(a1, a2, s)
    u, v, w = u2 * u1, u2 * v1, v2
    a3 = a1 * a2 // (d * d)
    b3 = (u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + disc) // 2) // d
    b3 %= 2 * a3
    c3 = (b3 * b3 - disc) // (4 * a3)
    return reduce(QuadraticForm(a3, b3, c3))


def inverse(f: QuadraticForm) -> FormClass:
    return reduce(QuadraticForm(f.a, -f.b, f.c))


def power(f: QuadraticForm, n: int) -> FormClass:
    if n < 0:
        return power(inverse(f), -n)
    result = principal_form(f.disc)
    base = reduce(f)
    while n:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base)
        n >>= 1
    return result


def enumerate_reduced_forms(disc: int) -> List[FormClass]:
    """All primitive reduced forms of a negative discriminant, sorted."""

    n = -disc
    forms = []
    for a in range(1, isqrt(n // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b - disc) % 2:
                continue
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            forms.append(FormClass(a, b, c))

    forms.sort(key=QuadraticForm.sort_key)
    return forms


def reduced_forms_in_range(lo: int, hi: int) -> Dict[int, List[FormClass]]:
    """Reduced forms of every fundamental discriminant with lo <= |disc| <= hi.

    One pass over (a, b, c); gives the same lists as enumerate_reduced_forms.
    """

    result: Dict[int, List[FormClass]] = {disc: [] for disc in fundamental_discriminants(lo, hi)}
    if not result:
        return result

    for a in range(1, isqrt(hi // 3) + 1):
        for b in range(-a + 1, a + 1):
            bb = b * b
            # 4ac - b^2 in [lo, hi], c >= a
            c_lo = max(a, -((-(lo + bb)) // (4 * a)))
            c_hi = (hi + bb) // (4 * a)
            for c in range(c_lo, c_hi + 1):
                if a == c and b < 0:
                    continue
                disc = bb - 4 * a * c
                forms = result.get(disc)
                if forms is None or gcd(gcd(a, b), c) != 1:
                    continue
                forms.append(FormClass(a, b, c))

    for forms in result.values():
        forms.sort(key=QuadraticForm.sort_key)
    return result


class ClassGroup:
    """The form class group of a negative fundamental discriminant."""

    def __init__(self, disc: int, forms: Optional[List[FormClass]] = None):
        self.logger = logging.getLogger(__name__)
        self.disc = disc
        self.forms = forms if forms is not None else enumerate_reduced_forms(disc)
        self.identity = principal_form(disc)

        if not self.forms or self.forms[0] != self.identity:
            raise InvariantViolation(f"principal form missing from class group of {disc}")

    @property
    def h(self) -> int:
        return len(self.forms)

    @cached_property
    def h_factors(self) -> Dict[int, int]:
        return {int(p): int(e) for p, e in factorint(self.h).items()}

    def __contains__(self, f: QuadraticForm) -> bool:
        return isinstance(f, QuadraticForm) and f.disc == self.disc and reduce(f) in self._form_set

    def __iter__(self):
        return iter(self.forms)

    def __len__(self):
        return self.h

    @cached_property
    def _form_set(self):
        return frozenset(self.forms)

    def compose(self, f: QuadraticForm, g: QuadraticForm) -> FormClass:
        return compose(f, g)

    def power(self, f: QuadraticForm, n: int) -> FormClass:
        return power(f, n)

    def order(self, f: QuadraticForm) -> int:
        """Order of the class of f."""

        n = self.h
        for p in self.h_factors:
            while n % p == 0 and power(f, n // p) == self.identity:
                n //= p
        return n

    def torsion_order(self, q: int) -> int:
        """#{c : c^q = 1}, the size of the q-torsion subgroup."""

        validate_positive(q, "q", minimum=2)
        g = gcd(q, self.h)
        if g == 1:
            return 1

        factors = factorint(g)
        if all(self.h_factors[p] == 1 for p in factors):
            # every Sylow subgroup involved is cyclic of prime order
            return g

        return sum(1 for f in self.forms if power(f, g) == self.identity)

    def primary_order(self, q: int) -> int:
        """Order of the product of the Sylow subgroups for primes dividing q."""

        validate_positive(q, "q", minimum=2)
        result = 1
        for p in factorint(q):
            result *= p ** self.h_factors.get(int(p), 0)
        return result

    def sylow_profile(self, p: int) -> List[int]:
        """[#G[p], #G[p^2], ..., #G[p^e]] for p^e exactly dividing h."""

        e = self.h_factors.get(p, 0)
        if e == 0:
            return []
        if e == 1:
            return [p]

        counts = []
        current = list(self.forms)
        for _ in range(e):
            current = [power(f, p) for f in current]
            counts.append(sum(1 for f in current if f == self.identity))
        return counts

    def sylow_structure(self, p: int) -> List[int]:
        """Cyclic factor orders of the p-Sylow subgroup, ascending."""

        profile = self.sylow_profile(p)
        if not profile:
            return []

        # ranks[k] = number of cyclic factors of order >= p^(k+1)
        ranks = []
        previous = 1
        for count in profile:
            ratio = count // previous
            ranks.append(multiplicity(p, ratio) if ratio > 1 else 0)
            previous = count

        orders = []
        for k, r in enumerate(ranks):
            above = ranks[k + 1] if k + 1 < len(ranks) else 0
            orders.extend([p ** (k + 1)] * (r - above))

        total = 1
        for o in orders:
            total *= o
        if total != p ** self.h_factors[p]:
            raise InvariantViolation(
                f"{p}-Sylow structure {orders} does not multiply to {p}^{self.h_factors[p]} for disc {self.disc}"
            )
        return sorted(orders)

    @cached_property
    def structure(self) -> Tuple[int, ...]:
        """Elementary divisors d1 | d2 | ... with product h; () for the trivial group."""

        per_prime = {p: sorted(self.sylow_structure(p), reverse=True) for p in self.h_factors}
        length = max((len(v) for v in per_prime.values()), default=0)
        divisors = []
        for i in range(length):
            d = 1
            for orders in per_prime.values():
                if i < len(orders):
                    d *= orders[i]
            divisors.append(d)
        return tuple(sorted(divisors))

    def _sylow_elements(self, p: int) -> List[FormClass]:
        cofactor = self.h // p ** self.h_factors[p]
        seen = {}
        for f in self.forms:
            g = power(f, cofactor)
            seen.setdefault(g, None)
        return sorted(seen, key=QuadraticForm.sort_key)

    def _sylow_basis(self, p: int) -> List[Tuple[FormClass, int]]:
        """Greedy basis of the p-Sylow subgroup as (generator, order), largest first."""

        elements = self._sylow_elements(p)
        subgroup = {self.identity}
        basis = []

        while len(subgroup) < len(elements):
            best, best_m = None, 1
            for g in elements:
                m = 1
                while power(g, m) not in subgroup:
                    m *= p
                if m > best_m:
                    best, best_m = g, m

            target = power(best, best_m)
            correction = next((x for x in sorted(subgroup, key=QuadraticForm.sort_key)
                               if power(x, best_m) == target), None)
            if correction is None:
                raise InvariantViolation(f"greedy {p}-Sylow basis failed for disc {self.disc}")

            generator = compose(best, inverse(correction))
            basis.append((generator, best_m))

            cyclic = [power(generator, i) for i in range(best_m)]
            subgroup = {compose(x, y) for x in subgroup for y in cyclic}

        return basis

    @cached_property
    def generators(self) -> Tuple[FormClass, ...]:
        """Generators aligned with structure: generators[i] has order structure[i]."""

        bases = {p: self._sylow_basis(p) for p in self.h_factors}
        length = len(self.structure)
        result = []
        for i in range(length):
            # bases are largest first, structure is smallest first
            j = length - 1 - i
            g = self.identity
            for basis in bases.values():
                if j < len(basis):
                    g = compose(g, basis[j][0])
            result.append(g)

        for g, d in zip(result, self.structure):
            if self.order(g) != d:
                raise InvariantViolation(
                    f"generator {g} has order {self.order(g)}, expected {d} (disc {self.disc})"
                )
        return tuple(result)

    def class_action(self, c: QuadraticForm, t: QuadraticForm, q: Optional[int] = None) -> FormClass:
        return class_action(c, t, q)


@lru_cache(maxsize=256)
def class_group(disc: int) -> ClassGroup:
    validate_fundamental_discriminant(disc)
    return ClassGroup(disc)


def enumerate_reduced(disc: int) -> ClassGroup:
    """Class group of a negative fundamental discriminant.

    Raises:
        ValidationError: for positive or non-fundamental disc
    """
    return class_group(disc)


def h(disc: int) -> int:
    return class_group(disc).h


def torsion_order(disc: int, q: int) -> int:
    return class_group(disc).torsion_order(q)


def primary_order(disc: int, q: int) -> int:
    return class_group(disc).primary_order(q)


def three_torsion_from_counts(h_value: int, forms: Iterable[FormClass]) -> int:
    """#Cl[3] given h and the reduced forms, skipping composition when 9 does not divide h."""

    v = multiplicity(3, h_value) if h_value % 3 == 0 else 0
    if v <= 1:
        return 3 ** v
    forms = list(forms)
    identity = principal_form(forms[0].disc)
    return sum(1 for f in forms if power(f, 3) == identity)


def class_action(c: QuadraticForm, t: QuadraticForm, q: Optional[int] = None) -> FormClass:
    """The action cl -> t^-1 * cl of a torsion class t on classes.

    Raises:
        ValidationError: if q is given and t is not q-torsion, or discriminants differ
    """

    if c.disc != t.disc:
        raise ValidationError(f"class {c} and translation {t} have different discriminants")
    if q is not None:
        validate_positive(q, "q", minimum=2)
        if power(t, q) != principal_form(t.disc):
            raise ValidationError(f"{t} is not {q}-torsion")
    return compose(inverse(t), c)
