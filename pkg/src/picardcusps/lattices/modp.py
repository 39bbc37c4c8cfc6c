"""
Brute-force orbit oracle for the reduction of Gamma_std modulo a prime p.

Points are isotropic lines over the residue field, found by exhaustive
enumeration:

  split p:    all of P^2(F_p), acted on by SL_3(F_p)
  inert p:    the h0-isotropic points of P^2(F_{p^2}), acted on by SU(3)
  ramified p: the conic 2*x1*x3 = x2^2 over F_p, acted on by SO(3)

Orbits are connected components of the graph whose edges are the
permutations induced by a generating set of the chosen subgroup.
Elements of F_{p^2} = F_p[tau]/(tau^2 - n) are pairs (a, b) meaning a + b*tau;
F_p elements have b = 0.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

import numpy as np
from sympy import factorint, legendre_symbol, primitive_root

from ..arithmetic.quadfield import Field, SplittingType, splitting_type
from ..utils.validators import InvariantViolation, ValidationError, validate_prime

logger = logging.getLogger(__name__)

DEFAULT_MAX_PRIME = 97

Scalar = Tuple[int, int]
Matrix = Tuple[Tuple[Scalar, Scalar, Scalar], ...]


class Subgroup(Enum):
    """Subgroups of the reduction whose orbits are counted."""
    FULL = "full"
    P1 = "p1"
    P2 = "p2"
    BOREL = "borel"


@dataclass(frozen=True)
class Orbit:
    size: int
    representative: Tuple[Scalar, Scalar, Scalar]


class ResidueField:
    """F_p (degree 1) or F_{p^2} (degree 2) with vectorized arithmetic on (a, b) pairs."""

    def __init__(self, p: int, degree: int):
        self.p = p
        self.degree = degree
        self.n = 0
        if degree == 2:
            self.n = next(x for x in range(2, p) if legendre_symbol(x, p) == -1)
        self.inv_table = np.array([0] + [pow(x, p - 2, p) for x in range(1, p)], dtype=np.int64)

    @property
    def size(self) -> int:
        return self.p ** self.degree

    def mul(self, a1, b1, a2, b2):
        p, n = self.p, self.n
        return (a1 * a2 + n * b1 * b2) % p, (a1 * b2 + a2 * b1) % p

    def add(self, a1, b1, a2, b2):
        return (a1 + a2) % self.p, (b1 + b2) % self.p

    def conj(self, a, b):
        return a, (-b) % self.p

    def norm(self, a, b):
        return (a * a - self.n * b * b) % self.p

    def trace(self, a, b):
        return (2 * a) % self.p

    def inv(self, a, b):
        ninv = self.inv_table[self.norm(a, b)]
        return (a * ninv) % self.p, ((-b) * ninv) % self.p

    def scalar_inv(self, x: Scalar) -> Scalar:
        a, b = x
        ninv = pow(int(self.norm(a, b)), self.p - 2, self.p)
        return (a * ninv % self.p, (-b) * ninv % self.p)

    def scalar_pow(self, x: Scalar, e: int) -> Scalar:
        result, base = (1, 0), x
        while e:
            if e & 1:
                result = tuple(int(v) for v in self.mul(*result, *base))
            base = tuple(int(v) for v in self.mul(*base, *base))
            e >>= 1
        return result

    def elements(self) -> Tuple[np.ndarray, np.ndarray]:
        idx = np.arange(self.size, dtype=np.int64)
        return idx % self.p, idx // self.p

    def multiplicative_generator(self) -> Scalar:
        if self.degree == 1:
            return (int(primitive_root(self.p)), 0)
        order = self.size - 1
        primes = list(factorint(order))
        for b in range(1, self.p):
            for a in range(self.p):
                x = (a, b)
                if all(self.scalar_pow(x, order // q) != (1, 0) for q in primes):
                    return x
        raise InvariantViolation(f"no generator of F_{self.p}^2 found")


class ModPModel:
    """Isotropic points modulo p and orbit counts of the reduced subgroups."""

    def __init__(self, fld: Field, p: int, max_prime: int = DEFAULT_MAX_PRIME):
        self.logger = logging.getLogger(__name__)
        validate_prime(p)
        if p == 2:
            raise ValidationError("p = 2 is excluded from the mod p oracle")
        if p > max_prime:
            raise ValidationError(f"p = {p} exceeds the oracle bound {max_prime}")

        self.field = fld
        self.p = p
        self.kind = splitting_type(fld, p)
        self.residue = ResidueField(p, 2 if self.kind is SplittingType.INERT else 1)

        A, B = self._enumerate_points()
        codes = self._encode(A, B)
        order = np.argsort(codes)
        self.A, self.B, self.codes = A[order], B[order], codes[order]
        self.logger.debug(f"{fld}, p={p} ({self.kind.value}): {self.count} isotropic points")

    @property
    def count(self) -> int:
        return len(self.codes)

    # --- points -------------------------------------------------------------

    def _form_value(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """h0(x, x) on rows of points; Tr(x1 * conj(x3)) - N(x2) in the residue ring."""

        F = self.residue
        if self.kind is SplittingType.INERT:
            a, b = F.mul(A[:, 0], B[:, 0], *F.conj(A[:, 2], B[:, 2]))
            return (F.trace(a, b) - F.norm(A[:, 1], B[:, 1])) % F.p
        if self.kind is SplittingType.RAMIFIED:
            return (2 * A[:, 0] * A[:, 2] - A[:, 1] * A[:, 1]) % F.p
        return np.zeros(len(A), dtype=np.int64)

    def _charts(self):
        """Normalized points of P^2 in chunks: (1, y, z) per y, then (0, 1, z), then (0, 0, 1)."""

        F = self.residue
        ea, eb = F.elements()
        q = F.size
        ones, zeros = np.ones(q, dtype=np.int64), np.zeros(q, dtype=np.int64)
        for ya, yb in zip(ea, eb):
            A = np.stack([ones, np.full(q, ya), ea], axis=1)
            B = np.stack([zeros, np.full(q, yb), eb], axis=1)
            yield A, B
        yield np.stack([zeros, ones, ea], axis=1), np.stack([zeros, zeros, eb], axis=1)
        yield np.array([[0, 0, 1]], dtype=np.int64), np.zeros((1, 3), dtype=np.int64)

    def _enumerate_points(self) -> Tuple[np.ndarray, np.ndarray]:
        chunks_a, chunks_b = [], []
        for A, B in self._charts():
            mask = self._form_value(A, B) == 0
            chunks_a.append(A[mask])
            chunks_b.append(B[mask])
        return np.concatenate(chunks_a), np.concatenate(chunks_b)

    def _encode(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        q, p = self.residue.size, self.p
        digits = A + p * B
        return digits[:, 0] + q * digits[:, 1] + q * q * digits[:, 2]

    def _normalize(self, A: np.ndarray, B: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        F = self.residue
        nonzero = (A != 0) | (B != 0)
        if not nonzero.any(axis=1).all():
            raise InvariantViolation("a group element mapped a point to zero")
        pivot = np.argmax(nonzero, axis=1)
        rows = np.arange(len(A))
        ia, ib = F.inv(A[rows, pivot], B[rows, pivot])
        na, nb = F.mul(A, B, ia[:, None], ib[:, None])
        return na, nb

    # --- group elements -----------------------------------------------------

    def _identity(self) -> List[List[Scalar]]:
        return [[(1, 0) if i == j else (0, 0) for j in range(3)] for i in range(3)]

    def _elementary(self, i: int, j: int, value: Scalar = (1, 0)) -> Matrix:
        m = self._identity()
        m[i][j] = value
        return tuple(tuple(row) for row in m)

    def _diagonal(self, d0: Scalar, d1: Scalar, d2: Scalar) -> Matrix:
        z = (0, 0)
        return ((d0, z, z), (z, d1, z), (z, z, d2))

    def _heisenberg(self, t: Scalar, s: Scalar) -> Matrix:
        F = self.residue
        tc = tuple(int(v) for v in F.conj(*t))
        return (((1, 0), tc, s), ((0, 0), (1, 0), t), ((0, 0), (0, 0), (1, 0)))

    def _weyl(self) -> Matrix:
        z, o, m = (0, 0), (1, 0), (self.p - 1, 0)
        return ((z, z, o), (z, m, z), (o, z, z))

    def generators(self, subgroup: Subgroup) -> List[Matrix]:
        """A generating set of the requested subgroup of the reduction.

        Raises:
            ValidationError: for P1 or P2 at a nonsplit prime
        """

        F, p = self.residue, self.p
        half = pow(2, -1, p)

        if self.kind is SplittingType.SPLIT:
            g = F.multiplicative_generator()
            gi = F.scalar_inv(g)
            borel = [
                self._elementary(0, 1), self._elementary(0, 2), self._elementary(1, 2),
                self._diagonal(g, gi, (1, 0)), self._diagonal((1, 0), g, gi),
            ]
            if subgroup is Subgroup.BOREL:
                return borel
            if subgroup is Subgroup.P1:
                # stabilizer of the point <e1>
                return borel + [self._elementary(2, 1)]
            if subgroup is Subgroup.P2:
                # stabilizer of the plane <e1, e2>
                return borel + [self._elementary(1, 0)]
            return [self._elementary(i, j) for i in range(3) for j in range(3) if i != j]

        if subgroup in (Subgroup.P1, Subgroup.P2):
            raise ValidationError(f"{subgroup.value} is only defined at split primes, {p} is {self.kind.value}")

        if self.kind is SplittingType.INERT:
            n = F.n
            g = F.multiplicative_generator()
            gc = tuple(int(v) for v in F.conj(*g))
            d1 = tuple(int(v) for v in F.mul(*gc, *F.scalar_inv(g)))
            borel = [
                self._heisenberg((1, 0), (half, 0)),
                # N(tau) = -n, so s = -n/2
                self._heisenberg((0, 1), ((-n * half) % p, 0)),
                self._heisenberg((0, 0), (0, 1)),
                self._diagonal(g, d1, F.scalar_inv(gc)),
            ]
        else:
            g = F.multiplicative_generator()
            borel = [
                self._heisenberg((1, 0), (half, 0)),
                self._diagonal(g, (1, 0), F.scalar_inv(g)),
            ]

        if subgroup is Subgroup.BOREL:
            return borel
        return borel + [self._weyl()]

    def permutation(self, m: Matrix) -> np.ndarray:
        """perm[i] = index of m applied to point i."""

        F = self.residue
        A, B = self.A, self.B
        out_a, out_b = [], []
        for i in range(3):
            ra = np.zeros(len(A), dtype=np.int64)
            rb = np.zeros(len(A), dtype=np.int64)
            for j in range(3):
                ma, mb = m[i][j]
                if ma == 0 and mb == 0:
                    continue
                pa, pb = F.mul(A[:, j], B[:, j], ma, mb)
                ra, rb = F.add(ra, rb, pa, pb)
            out_a.append(ra)
            out_b.append(rb)

        na, nb = self._normalize(np.stack(out_a, axis=1), np.stack(out_b, axis=1))
        codes = self._encode(na, nb)
        perm = np.searchsorted(self.codes, codes)
        perm = np.minimum(perm, len(self.codes) - 1)
        if not np.array_equal(self.codes[perm], codes):
            raise InvariantViolation(f"group element does not preserve the isotropic points mod {self.p}")
        return perm

    def orbit_labels(self, subgroup: Subgroup) -> np.ndarray:
        """Smallest point index of each point's orbit."""

        perms = [self.permutation(m) for m in self.generators(subgroup)]
        inverses = []
        for perm in perms:
            inv = np.empty_like(perm)
            inv[perm] = np.arange(len(perm))
            inverses.append(inv)

        labels = np.arange(self.count)
        while True:
            previous = labels
            for perm in perms + inverses:
                labels = np.minimum(labels, labels[perm])
            labels = labels[labels]
            if np.array_equal(labels, previous):
                return labels

    def orbits(self, subgroup: Subgroup) -> List[Orbit]:
        """Orbits with sizes and representatives, largest first.

        The representative has the fewest nonzero coordinates, ties broken
        by the smallest encoding, so (1,0,0) beats (0,0,1).
        """

        labels = self.orbit_labels(subgroup)
        nonzero = ((self.A != 0) | (self.B != 0)).sum(axis=1)
        result = []
        for label in np.unique(labels):
            members = np.nonzero(labels == label)[0]
            best = members[np.lexsort((self.codes[members], nonzero[members]))[0]]
            rep = tuple((int(self.A[best, i]), int(self.B[best, i])) for i in range(3))
            result.append(Orbit(size=len(members), representative=rep))

        result.sort(key=lambda o: (-o.size, o.representative))
        return result

    def orbit_count(self, subgroup: Subgroup) -> int:
        return len(self.orbits(subgroup))
