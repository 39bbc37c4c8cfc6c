"""
Isotropic lines of the hermitian form h0 on k^3 and their ideal classes.

h0 is antidiag(1, -1, 1), so h0(x, x) = Tr(x1 * conj(x3)) - N(x2). The class
of a line is the class of I_x = {a in k : a*x in O_k^3}, which equals the
inverse of the ideal generated by the coordinates of x.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..arithmetic.classgroup import FormClass, class_group
from ..arithmetic.ideals import (
    ideal_from_generators,
    ideal_inverse,
    ideal_of_coordinates,
    ideal_to_form_class,
    is_principal,
)
from ..arithmetic.quadfield import Field, FieldElement, elements_up_to_norm, units
from ..utils.validators import InvariantViolation, ValidationError, validate_positive
from .modp import DEFAULT_MAX_PRIME, ModPModel, Subgroup

logger = logging.getLogger(__name__)

Vector = Tuple[FieldElement, FieldElement, FieldElement]
IntVector = Tuple[Tuple[int, int], Tuple[int, int], Tuple[int, int]]
Matrix3 = Tuple[Vector, Vector, Vector]


def _check_vector(fld: Field, x: Sequence[FieldElement]) -> Vector:
    if len(x) != 3:
        raise ValidationError(f"expected a vector of length 3, got {len(x)}")
    x = tuple(v if isinstance(v, FieldElement) else fld.element(v) for v in x)
    for v in x:
        if v.field != fld:
            raise ValidationError(f"coordinate {v} does not belong to {fld}")
    if all(v.is_zero() for v in x):
        raise ValidationError("the zero vector spans no line")
    return x


def hermitian_value(x: Vector) -> Fraction:
    """h0(x, x) = Tr(x1 * conj(x3)) - N(x2)."""
    return (x[0] * x[2].conj()).trace() - x[1].norm()


def is_isotropic(fld: Field, x: Sequence[FieldElement]) -> bool:
    """Exact test h0(x, x) = 0.

    Raises:
        ValidationError: for the zero vector
    """
    return hermitian_value(_check_vector(fld, x)) == 0


def canonical_vector(fld: Field, x: Sequence[FieldElement]) -> Vector:
    """Deterministic integral representative of the line through x.

    Scale the first nonzero coordinate to 1, clear denominators and the
    rational content, divide by a generator of the content ideal when it is
    principal, then pick the unit multiple whose first nonzero coordinate is
    lexicographically largest.
    """

    x = _check_vector(fld, x)
    pivot = next(v for v in x if not v.is_zero())
    y = [v / pivot for v in x]

    denom = lcm(*(v.denominator() for v in y))
    z = [v * denom for v in y]
    content = 0
    for v in z:
        content = gcd(content, int(v.a), int(v.b))
    z = [v / content for v in z]

    principal, generator = is_principal(ideal_from_generators(fld, z))
    if principal:
        z = [v / generator for v in z]

    index = next(i for i, v in enumerate(z) if not v.is_zero())
    best = max(units(fld), key=lambda u: (u * z[index]).coords())
    return tuple(best * v for v in z)


@dataclass(frozen=True)
class IsotropicLine:
    """An h0-isotropic line, stored by its canonical integral representative."""

    field: Field
    coords: IntVector

    @classmethod
    def from_vector(cls, fld: Field, x: Sequence[FieldElement]) -> 'IsotropicLine':
        """Raises ValidationError unless x is a nonzero isotropic vector."""

        x = _check_vector(fld, x)
        if hermitian_value(x) != 0:
            raise ValidationError(f"vector {[str(v) for v in x]} is not isotropic (h0 = {hermitian_value(x)})")
        return cls(fld, tuple(v.int_coords() for v in canonical_vector(fld, x)))

    @property
    def vector(self) -> Vector:
        return tuple(self.field.element(a, b) for a, b in self.coords)

    @property
    def height(self) -> int:
        return max(self.field.norm_form(a, b) for a, b in self.coords)

    def order_key(self) -> Tuple:
        # height, then fewest nonzero coordinates, then decreasing lexicographic,
        # so (1,0,0) comes first
        nonzero = sum(1 for a, b in self.coords if a or b)
        return (self.height, nonzero, tuple((-a, -b) for a, b in self.coords))

    def __str__(self):
        return "[" + ", ".join(str(v) for v in self.vector) + "]"


def standard_line(fld: Field) -> IsotropicLine:
    return IsotropicLine.from_vector(fld, (fld.one, fld.zero, fld.zero))


def ideal_of_line(line: IsotropicLine):
    """I_x, the inverse of the ideal generated by the coordinates."""
    return ideal_inverse(ideal_of_coordinates(line.field, list(line.vector)))


@lru_cache(maxsize=65536)
def _line_class(line: IsotropicLine) -> FormClass:
    return ideal_to_form_class(ideal_of_line(line))


def ideal_class_of_line(fld: Field, line) -> FormClass:
    """The class cl(l) of a line, given as an IsotropicLine or a vector."""

    if not isinstance(line, IsotropicLine):
        line = IsotropicLine.from_vector(fld, line)
    if line.field != fld:
        raise ValidationError(f"line {line} does not belong to {fld}")
    return _line_class(line)


def iter_isotropic_lines(fld: Field, height_bound: int) -> Iterator[IsotropicLine]:
    """Yield distinct isotropic lines found among integral vectors of height <= height_bound.

    Heights are swept in doubling shells 1, 2, 4, ... up to the bound. A
    line is yielded in the first shell containing one of its integral
    vectors; within a shell lines come in order_key order.
    """

    validate_positive(height_bound, "height bound")

    seen = set()
    previous = 0
    bound = 1
    while previous < height_bound:
        bound = min(bound, height_bound)
        elements = elements_up_to_norm(fld, bound)
        by_norm: Dict[int, List[Tuple[int, int]]] = {}
        for e in elements:
            by_norm.setdefault(fld.norm_form(*e), []).append(e)

        shell = []
        for x1 in elements:
            n1 = fld.norm_form(*x1)
            for x3 in elements:
                t = fld.trace_pairing(x1, x3)
                candidates = by_norm.get(t)
                if not candidates:
                    continue
                n3 = fld.norm_form(*x3)
                for x2 in candidates:
                    if max(n1, t, n3) <= previous:
                        continue
                    if x1 == (0, 0) and x2 == (0, 0) and x3 == (0, 0):
                        continue
                    if gcd(*x1, *x2, *x3) != 1:
                        continue
                    line = IsotropicLine.from_vector(fld, tuple(fld.element(a, b) for a, b in (x1, x2, x3)))
                    if line not in seen:
                        seen.add(line)
                        shell.append(line)

        shell.sort(key=IsotropicLine.order_key)
        logger.debug(f"{fld}: {len(shell)} new lines in height shell ({previous}, {bound}]")
        yield from shell

        previous = bound
        bound *= 2


def find_line_with_class(fld: Field, target: FormClass, height_bound: int) -> Optional[IsotropicLine]:
    """First line (in iter_isotropic_lines order) with class target.

    Returns:
        The line, or None when no line of that class has height <= height_bound
    """

    if target.disc != fld.disc:
        raise ValidationError(f"class {target} has discriminant {target.disc}, field has {fld.disc}")

    for line in iter_isotropic_lines(fld, height_bound):
        if ideal_class_of_line(fld, line) == target:
            return line

    logger.warning(f"{fld}: no line of class {target} up to height {height_bound}")
    return None


def realize_all_classes(fld: Field, height_bound: int) -> Dict[FormClass, IsotropicLine]:
    """First line of every class reached within the height bound; stops early once all are found."""

    h = class_group(fld.disc).h
    found: Dict[FormClass, IsotropicLine] = {}
    for line in iter_isotropic_lines(fld, height_bound):
        c = ideal_class_of_line(fld, line)
        if c not in found:
            found[c] = line
            if len(found) == h:
                break

    if len(found) < h:
        logger.warning(f"{fld}: only {len(found)} of {h} classes realized up to height {height_bound}")
    return found


# --- unitary matrices -------------------------------------------------------


def _mat_mul(m: Matrix3, n: Matrix3) -> Matrix3:
    return tuple(
        tuple(sum((m[i][k] * n[k][j] for k in range(3)), m[i][0].field.zero) for j in range(3))
        for i in range(3)
    )


def _conj_transpose(m: Matrix3) -> Matrix3:
    return tuple(tuple(m[j][i].conj() for j in range(3)) for i in range(3))


def _det(m: Matrix3) -> FieldElement:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def h0_matrix(fld: Field) -> Matrix3:
    o, z = fld.one, fld.zero
    return ((z, z, o), (z, -o, z), (o, z, z))


@dataclass(frozen=True)
class UnitaryMatrix:
    """A 3x3 matrix over k with its membership flags, verified at construction."""

    field: Field
    entries: Matrix3
    label: str = ""
    preserves_h0: bool = field(init=False)
    integral: bool = field(init=False)
    det_one: bool = field(init=False)

    def __post_init__(self):
        h0 = h0_matrix(self.field)
        m = self.entries
        object.__setattr__(self, 'preserves_h0', _mat_mul(_mat_mul(_conj_transpose(m), h0), m) == h0)
        object.__setattr__(self, 'integral', all(v.is_integral() for row in m for v in row))
        object.__setattr__(self, 'det_one', _det(m) == self.field.one)

    @property
    def in_gamma_std(self) -> bool:
        return self.preserves_h0 and self.integral and self.det_one

    def apply(self, x: Sequence[FieldElement]) -> Vector:
        m = self.entries
        return tuple(m[i][0] * x[0] + m[i][1] * x[1] + m[i][2] * x[2] for i in range(3))

    def apply_line(self, line: IsotropicLine) -> IsotropicLine:
        return IsotropicLine.from_vector(self.field, self.apply(line.vector))

    def __matmul__(self, other: 'UnitaryMatrix') -> 'UnitaryMatrix':
        return UnitaryMatrix(self.field, _mat_mul(self.entries, other.entries), f"{self.label}*{other.label}")

    def __str__(self):
        return self.label or str([[str(v) for v in row] for row in self.entries])


def unitary_inverse(g: UnitaryMatrix) -> UnitaryMatrix:
    """h0 * conj(g)^T * h0, the inverse of an h0-unitary matrix."""

    if not g.preserves_h0:
        raise ValidationError(f"{g} does not preserve h0")
    h0 = h0_matrix(g.field)
    return UnitaryMatrix(g.field, _mat_mul(_mat_mul(h0, _conj_transpose(g.entries)), h0), f"({g.label})^-1")


def identity_matrix(fld: Field) -> UnitaryMatrix:
    o, z = fld.one, fld.zero
    return UnitaryMatrix(fld, ((o, z, z), (z, o, z), (z, z, o)), "1")


def weyl_element(fld: Field) -> UnitaryMatrix:
    return UnitaryMatrix(fld, h0_matrix(fld), "w")


def diagonal_element(fld: Field, a: FieldElement) -> UnitaryMatrix:
    """diag(a, conj(a)/a, 1/conj(a)); in Gamma_std exactly when a is a unit."""

    z = fld.zero
    return UnitaryMatrix(fld, ((a, z, z), (z, a.conj() / a, z), (z, z, a.conj().inverse())), f"D({a})")


def heisenberg_element(fld: Field, t: FieldElement, s: FieldElement) -> UnitaryMatrix:
    """N(t, s) = [[1, conj(t), s], [0, 1, t], [0, 0, 1]]; unitary iff s + conj(s) = N(t)."""

    o, z = fld.one, fld.zero
    return UnitaryMatrix(fld, ((o, t.conj(), s), (z, o, t), (z, z, o)), f"N({t},{s})")


def gamma_std_sample(fld: Field, bound: int = 4, max_size: Optional[int] = None) -> List[UnitaryMatrix]:
    """A finite list of verified Gamma_std elements.

    Contains the identity, w, the unit diagonals, and N(t, s) for N(t) <= bound
    and s = x + y*omega with Tr(s) = N(t), |y| <= bound. max_size truncates the
    Heisenberg part. Not a generating set.

    Raises:
        InvariantViolation: if a constructed element fails a membership flag
    """

    validate_positive(bound, "sample bound", minimum=0)
    sample = [identity_matrix(fld), weyl_element(fld)]
    sample.extend(diagonal_element(fld, u) for u in units(fld) if u != fld.one)

    t_coord = fld.trace_omega
    heisenberg = []
    for a, b in elements_up_to_norm(fld, bound):
        t = fld.element(a, b)
        n = fld.norm_form(a, b)
        for y in sorted(range(-bound, bound + 1), key=lambda v: (abs(v), -v)):
            if (n - y * t_coord) % 2:
                continue
            if n == 0 and y == 0:
                continue
            s = fld.element((n - y * t_coord) // 2, y)
            heisenberg.append(heisenberg_element(fld, t, s))

    if max_size is not None:
        heisenberg = heisenberg[:max_size]
    sample.extend(heisenberg)

    for g in sample:
        if not g.in_gamma_std:
            raise InvariantViolation(
                f"sample element {g} fails membership: preserves_h0={g.preserves_h0}, "
                f"integral={g.integral}, det_one={g.det_one}"
            )
    return sample


def class_invariance_check(fld: Field, line: IsotropicLine, sample: Sequence[UnitaryMatrix], word_length: int) -> bool:
    """True iff every word of length <= word_length over sample preserves cl(line).

    Lines are deduplicated by canonical representative, so each reached line
    is classified once.
    """

    validate_positive(word_length, "word length", minimum=0)
    expected = ideal_class_of_line(fld, line)
    seen = {line}
    frontier = [line]
    for depth in range(word_length):
        next_frontier = []
        for current in frontier:
            for g in sample:
                image = g.apply_line(current)
                if image in seen:
                    continue
                seen.add(image)
                if ideal_class_of_line(fld, image) != expected:
                    logger.error(f"{fld}: {g} maps {current} to {image}, changing class from {expected}")
                    return False
                next_frontier.append(image)
        frontier = next_frontier
        logger.debug(f"{fld}: depth {depth + 1}, {len(seen)} lines checked")
    return True


class SearchStatus(Enum):
    FOUND = "found"
    NOT_FOUND = "not_found"
    NOT_EQUIVALENT = "not_equivalent"


@dataclass(frozen=True)
class EquivalenceResult:
    """Outcome of a word search; word lists sample indices in application order."""

    status: SearchStatus
    word: Tuple[int, ...] = ()

    @property
    def found(self) -> bool:
        return self.status is SearchStatus.FOUND


def _bfs(start: IsotropicLine, moves: Sequence[UnitaryMatrix], depth: int) -> Dict[IsotropicLine, Tuple[int, ...]]:
    words = {start: ()}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        word = words[current]
        if len(word) == depth:
            continue
        for i, g in enumerate(moves):
            image = g.apply_line(current)
            if image not in words:
                words[image] = word + (i,)
                queue.append(image)
    return words


def equivalence_search(
    fld: Field,
    line: IsotropicLine,
    other: IsotropicLine,
    sample: Sequence[UnitaryMatrix],
    word_length: int,
) -> EquivalenceResult:
    """Meet-in-the-middle search for a word over sample mapping line to other.

    NOT_FOUND is inconclusive; NOT_EQUIVALENT is decided by the classes.
    """

    validate_positive(word_length, "word length", minimum=0)
    if ideal_class_of_line(fld, line) != ideal_class_of_line(fld, other):
        return EquivalenceResult(SearchStatus.NOT_EQUIVALENT)

    forward = _bfs(line, sample, (word_length + 1) // 2)
    backward = _bfs(other, [unitary_inverse(g) for g in sample], word_length // 2)

    best = None
    for middle, head in forward.items():
        tail = backward.get(middle)
        if tail is None:
            continue
        word = head + tuple(reversed(tail))
        if best is None or (len(word), word) < (len(best), best):
            best = word

    if best is None:
        logger.warning(f"{fld}: no word of length <= {word_length} maps {line} to {other}")
        return EquivalenceResult(SearchStatus.NOT_FOUND)
    return EquivalenceResult(SearchStatus.FOUND, best)


def apply_word(line: IsotropicLine, sample: Sequence[UnitaryMatrix], word: Sequence[int]) -> IsotropicLine:
    for i in word:
        line = sample[i].apply_line(line)
    return line


# --- reduction modulo p -----------------------------------------------------


def modp_isotropic_count(fld: Field, p: int, max_prime: int = DEFAULT_MAX_PRIME) -> int:
    """Number of isotropic points of the reduction mod p, by enumeration."""
    return ModPModel(fld, p, max_prime).count


def modp_parabolic_orbits(fld: Field, p: int, subgroup, max_prime: int = DEFAULT_MAX_PRIME) -> int:
    """Orbit count of FULL, P1, P2 or BOREL on the isotropic points mod p.

    Raises:
        ValidationError: for p = 2, p beyond max_prime, or P1/P2 at a nonsplit prime
    """

    if not isinstance(subgroup, Subgroup):
        try:
            subgroup = Subgroup(str(subgroup).lower())
        except ValueError:
            raise ValidationError(f"unknown subgroup {subgroup!r}; expected one of {[s.value for s in Subgroup]}")
    return ModPModel(fld, p, max_prime).orbit_count(subgroup)
