"""Validation utilities for picardcusps."""

from typing import Iterable, Optional, Tuple

from sympy import factorint, isprime


class PicardError(Exception):
    """Base class for all picardcusps errors."""


class ValidationError(PicardError, ValueError):
    """Raised when user supplied input is rejected."""


class InvariantViolation(PicardError, AssertionError):
    """Raised when an internal consistency check fails.

    Seeing one of these means a bug in the arithmetic, never bad input.
    """


def validate_prime(p: int, what: str = "p") -> int:
    """Validate that p is a rational prime.

    Args:
        p: Candidate prime
        what: Name used in the error message

    Returns:
        p as a plain int
    """

    if not isinstance(p, int) or isinstance(p, bool):
        raise ValidationError(f"{what} must be an integer, got {p!r}")

    if not isprime(p):
        raise ValidationError(f"{what} = {p} is not prime")

    return p


def validate_positive(n: int, what: str, minimum: int = 1) -> int:
    """Validate an integer lower bound."""

    if not isinstance(n, int) or isinstance(n, bool):
        raise ValidationError(f"{what} must be an integer, got {n!r}")

    if n < minimum:
        raise ValidationError(f"{what} must be >= {minimum}, got {n}")

    return n


def is_squarefree(n: int) -> bool:
    """Check whether |n| has no repeated prime factor."""

    if n == 0:
        return False

    return all(e == 1 for e in factorint(abs(n)).values())


def fundamental_discriminant_error(disc: int) -> Optional[str]:
    """Explain why disc is not a negative fundamental discriminant.

    Returns:
        None if disc is fundamental, otherwise a message
    """

    if disc >= 0:
        return f"discriminant must be negative, got {disc}"

    if disc % 4 == 1:
        if not is_squarefree(disc):
            return f"{disc} is not fundamental: odd part is not square-free"
        return None

    if disc % 4 == 0:
        m = disc // 4
        if m % 4 not in (2, 3):
            return f"{disc} is not fundamental: disc/4 = {m} is not 2 or 3 mod 4"
        if not is_squarefree(m):
            return f"{disc} is not fundamental: disc/4 = {m} is not square-free"
        return None

    return f"{disc} is not a discriminant: must be 0 or 1 mod 4"


def is_fundamental_discriminant(disc: int) -> bool:
    """Check whether disc is a negative fundamental discriminant."""
    return fundamental_discriminant_error(disc) is None


def validate_fundamental_discriminant(disc: int) -> int:
    """Validate a negative fundamental discriminant.

    Raises:
        ValidationError: if disc is positive, not a discriminant or not fundamental
    """

    if not isinstance(disc, int) or isinstance(disc, bool):
        raise ValidationError(f"discriminant must be an integer, got {disc!r}")

    error = fundamental_discriminant_error(disc)
    if error:
        raise ValidationError(error)

    return disc


def validate_disjoint(named_sets: Iterable[Tuple[str, Iterable[int]]]) -> None:
    """Validate that the given prime sets are pairwise disjoint."""

    seen = {}
    for name, primes in named_sets:
        for p in primes:
            if p in seen:
                raise ValidationError(
                    f"prime {p} appears in both {seen[p]} and {name}; sets must be disjoint"
                )
            seen[p] = name


def validate_ranges(ranges: Iterable[Tuple[int, int]]) -> list:
    """Validate a list of disjoint, increasing, nonempty |disc| ranges."""

    ranges = [(int(lo), int(hi)) for lo, hi in ranges]
    if not ranges:
        raise ValidationError("at least one range is required")

    previous_hi = None
    for lo, hi in ranges:
        if lo > hi:
            raise ValidationError(f"empty range [{lo}, {hi}]")
        if hi < 3:
            raise ValidationError(f"range [{lo}, {hi}] contains no fundamental discriminant")
        if previous_hi is not None and lo <= previous_hi:
            raise ValidationError(f"range [{lo}, {hi}] overlaps or precedes the previous one")
        previous_hi = hi

    return ranges
