"""
Closed-form cusp counts and normalizer indices over validated level data.

h_{k,q} defaults to the q-torsion order #Cl[q]; convention="primary" switches
to the order of the q-primary part and tags the result.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from sympy import isprime, primerange

from ..arithmetic.classgroup import class_group
from ..arithmetic.quadfield import Field, SplittingType, splitting_type
from ..catalog.records import CuspResult
from ..utils.config import TORSION_CONVENTIONS
from ..utils.validators import (
    InvariantViolation,
    ValidationError,
    validate_disjoint,
    validate_positive,
    validate_prime,
)

logger = logging.getLogger(__name__)


class LocalType(Enum):
    """Local level at a prime: a vertex stabilizer or the Iwahori subgroup."""
    HYPERSPECIAL = "v0"
    OTHER_V1 = "v1"
    OTHER_V2 = "v2"
    IWAHORI = "iwahori"


@dataclass(frozen=True)
class KfConfig:
    """Per-prime local types plus the subset xi of Iwahori primes.

    Unlisted primes are hyperspecial. Whether a given xi is realized by an
    actual maximal lattice is not decided here.
    """

    field: Field
    local_types: Tuple[Tuple[int, LocalType], ...] = ()
    xi: FrozenSet[int] = frozenset()

    def __post_init__(self):
        entries = tuple(sorted((int(p), LocalType(t)) for p, t in dict(self.local_types).items()))
        object.__setattr__(self, 'local_types', entries)
        object.__setattr__(self, 'xi', frozenset(int(p) for p in self.xi))

        for p, kind in entries:
            validate_prime(p)
            if kind in (LocalType.IWAHORI, LocalType.OTHER_V2):
                if splitting_type(self.field, p) is not SplittingType.SPLIT:
                    raise ValidationError(
                        f"{kind.value} at p = {p} requires a split prime, "
                        f"but {p} is {splitting_type(self.field, p).value} in {self.field}"
                    )
        extra = self.xi - self.iwahori
        if extra:
            raise ValidationError(f"xi must be a subset of the Iwahori primes; {sorted(extra)} are not Iwahori")

    @classmethod
    def build(
        cls,
        fld: Field,
        iwahori: Iterable[int] = (),
        xi: Iterable[int] = (),
        v1: Iterable[int] = (),
        v2: Iterable[int] = (),
    ) -> 'KfConfig':
        iwahori, v1, v2 = list(iwahori), list(v1), list(v2)
        validate_disjoint([("iwahori", iwahori), ("v1", v1), ("v2", v2)])
        types = {p: LocalType.IWAHORI for p in iwahori}
        types.update({p: LocalType.OTHER_V1 for p in v1})
        types.update({p: LocalType.OTHER_V2 for p in v2})
        return cls(fld, tuple(types.items()), frozenset(xi))

    @property
    def local_type_map(self) -> Dict[int, LocalType]:
        return dict(self.local_types)

    def local_type(self, p: int) -> LocalType:
        return self.local_type_map.get(p, LocalType.HYPERSPECIAL)

    def primes_of(self, kind: LocalType) -> FrozenSet[int]:
        return frozenset(p for p, t in self.local_types if t is kind)

    @property
    def iwahori(self) -> FrozenSet[int]:
        return self.primes_of(LocalType.IWAHORI)

    @property
    def m(self) -> int:
        """|I minus xi|."""
        return len(self.iwahori - self.xi)


@dataclass(frozen=True)
class CongruenceLevel:
    """The level data (P1, P2, B) of a congruence subgroup Gamma(P1, P2, B)."""

    field: Field
    P1: FrozenSet[int] = frozenset()
    P2: FrozenSet[int] = frozenset()
    B: FrozenSet[int] = frozenset()

    def __post_init__(self):
        for name in ('P1', 'P2', 'B'):
            object.__setattr__(self, name, frozenset(int(p) for p in getattr(self, name)))
        validate_disjoint([("P1", self.P1), ("P2", self.P2), ("B", self.B)])
        for p in self.B:
            validate_prime(p)
        for name, primes in (("P1", self.P1), ("P2", self.P2)):
            for p in primes:
                validate_prime(p)
                kind = splitting_type(self.field, p)
                if kind is not SplittingType.SPLIT:
                    raise ValidationError(f"{name} contains {p}, which is {kind.value} in {self.field}")

    def _b_of(self, kind: SplittingType) -> FrozenSet[int]:
        return frozenset(p for p in self.B if splitting_type(self.field, p) is kind)

    @property
    def B_split(self) -> FrozenSet[int]:
        return self._b_of(SplittingType.SPLIT)

    @property
    def B_inert(self) -> FrozenSet[int]:
        return self._b_of(SplittingType.INERT)

    @property
    def B_ramified(self) -> FrozenSet[int]:
        return self._b_of(SplittingType.RAMIFIED)


def _check_convention(convention: str) -> str:
    if convention not in TORSION_CONVENTIONS:
        raise ValidationError(f"torsion convention must be one of {TORSION_CONVENTIONS}, got {convention!r}")
    return convention


def h_kq(fld: Field, q: int, convention: str = "torsion") -> int:
    """h_{k,q} under the chosen convention."""

    group = class_group(fld.disc)
    if _check_convention(convention) == "primary":
        return group.primary_order(q)
    return group.torsion_order(q)


def _exact_div(numerator: int, denominator: int, what: str) -> int:
    if denominator <= 0 or numerator % denominator:
        raise InvariantViolation(f"{what}: {denominator} does not divide {numerator}")
    return numerator // denominator


def cusps_std(fld: Field) -> int:
    """Cusps of the standard Picard modular group: the class number."""
    return class_group(fld.disc).h


def cusps_congruence(level: CongruenceLevel) -> int:
    """2^(|P1|+|P2|+|B^i|+|B^r|) * 3^|B^s| * h."""

    if 2 in level.P1 | level.P2 | level.B:
        logger.warning(f"{level.field}: p = 2 in the level is treated by its splitting type only")
    twos = len(level.P1) + len(level.P2) + len(level.B_inert) + len(level.B_ramified)
    return 2 ** twos * 3 ** len(level.B_split) * cusps_std(level.field)


def congruence_from_config(config: KfConfig) -> CongruenceLevel:
    """P1/P2 from split other-vertex primes, B from Iwahori and nonsplit other-vertex primes."""

    fld = config.field
    P1, P2, B = set(), set(), set(config.iwahori)
    for p, kind in config.local_types:
        split = splitting_type(fld, p) is SplittingType.SPLIT
        if kind is LocalType.OTHER_V1:
            (P1 if split else B).add(p)
        elif kind is LocalType.OTHER_V2:
            P2.add(p)
    return CongruenceLevel(fld, frozenset(P1), frozenset(P2), frozenset(B))


def cusps_maximal(config: KfConfig, convention: str = "torsion") -> int:
    """3^m * h / h_{k,3} with m = |I minus xi|."""

    fld = config.field
    return _exact_div(3 ** config.m * cusps_std(fld), h_kq(fld, 3, convention), f"cusps_maximal for {fld}")


def normalizer_index_std(fld: Field, convention: str = "torsion") -> int:
    return 3 * h_kq(fld, 3, convention)


def normalizer_index_bound(config: KfConfig, convention: str = "torsion") -> int:
    """Upper bound 3^(1 + |I|) * h_{k,3}; a bound, not an equality."""
    return 3 ** (1 + len(config.iwahori)) * h_kq(config.field, 3, convention)


def cusps_std_higher(fld: Field, r: int) -> int:
    validate_positive(r, "r")
    return cusps_std(fld) ** r


def simple_type_exhaustive(r: int) -> bool:
    """Whether q = 2r + 1 is prime, so simple type covers every commensurability class."""
    return isprime(2 * r + 1)


def cusps_higher(fld: Field, r: int, config: Optional[KfConfig] = None, convention: str = "torsion") -> int:
    """q^m * h^r / h_{k,q} with q = 2r + 1."""

    validate_positive(r, "r")
    if config is None:
        config = KfConfig(fld)
    if config.field != fld:
        raise ValidationError(f"configuration belongs to {config.field}, not {fld}")

    q = 2 * r + 1
    if not simple_type_exhaustive(r):
        logger.info(f"q = {q} is not prime; simple type is not exhaustive over commensurability classes")
    return _exact_div(q ** config.m * cusps_std(fld) ** r, h_kq(fld, q, convention), f"cusps_higher for {fld}, r={r}")


def higher_normalizer_index(fld: Field, r: int, convention: str = "torsion") -> int:
    """q * h_{k,q}, the higher-rank analogue of normalizer_index_std."""

    validate_positive(r, "r")
    q = 2 * r + 1
    return q * h_kq(fld, q, convention)


def one_cusped_family(fld: Field, count: int) -> List[KfConfig]:
    """Non-isomorphic maximal configurations sharing the cusp count h/h_{k,3}.

    Member i (for i = 0..count) puts the other vertex v1 at the first i odd
    inert primes, with I empty. Every value is recomputed and checked.
    """

    validate_positive(count, "count", minimum=0)
    inert = []
    for p in primerange(3, 10 ** 6):
        if len(inert) == count:
            break
        if splitting_type(fld, p) is SplittingType.INERT:
            inert.append(p)

    expected = cusps_std(fld) // h_kq(fld, 3)
    family = []
    for i in range(count + 1):
        config = KfConfig.build(fld, v1=inert[:i])
        value = cusps_maximal(config)
        if value != expected:
            raise InvariantViolation(f"{fld}: family member {inert[:i]} has {value} cusps, expected {expected}")
        family.append(config)
    return family


# --- results with provenance -------------------------------------------------

FORMULA_DESCRIPTIONS = {
    "std": "standard lattice: h_k cusps",
    "congruence": "congruence subgroup Gamma(P1,P2,B): 2^(|P1|+|P2|+|B^i|+|B^r|) 3^|B^s| h_k",
    "maximal": "maximal lattice: 3^m h_k / h_{k,3}",
    "normalizer_std": "normalizer index of the standard lattice: 3 h_{k,3}",
    "normalizer_bound": "normalizer index bound: 3^(1+|I|) h_{k,3}",
    "std_higher": "standard lattice in SU(r+1,r): h_k^r cusps",
    "higher": "maximal simple-type lattice in SU(r+1,r): q^m h_k^r / h_{k,q}, q = 2r+1",
    "higher_normalizer": "higher-rank normalizer index: q h_{k,q}",
}


def _config_inputs(config: KfConfig) -> Dict:
    return {
        "disc": config.field.disc,
        "local_types": {str(p): t.value for p, t in config.local_types},
        "xi": sorted(config.xi),
    }


def _flags(convention: str, primes: Iterable[int] = ()) -> List[str]:
    flags = []
    if convention == "primary":
        flags.append("h_kq=primary")
    if 2 in set(primes):
        flags.append("p=2 treated by splitting type only")
    return flags


def evaluate(formula: str, fld: Field, config: Optional[KfConfig] = None, level: Optional[CongruenceLevel] = None,
             r: int = 1, convention: str = "torsion") -> CuspResult:
    """Evaluate a named formula and wrap it with inputs, flags and its description."""

    _check_convention(convention)
    if formula not in FORMULA_DESCRIPTIONS:
        raise ValidationError(f"unknown formula {formula!r}; expected one of {sorted(FORMULA_DESCRIPTIONS)}")

    config = config or KfConfig(fld)
    inputs = _config_inputs(config)
    flags = _flags(convention, [p for p, _ in config.local_types])

    if formula == "std":
        inputs = {"disc": fld.disc}
        value = cusps_std(fld)
        flags = []
    elif formula == "congruence":
        level = level or congruence_from_config(config)
        inputs = {"disc": fld.disc, "P1": sorted(level.P1), "P2": sorted(level.P2), "B": sorted(level.B)}
        value = cusps_congruence(level)
        flags = _flags("torsion", level.P1 | level.P2 | level.B)
    elif formula == "maximal":
        value = cusps_maximal(config, convention)
        if config.xi:
            flags.append("xi taken as given; realizability not checked")
    elif formula == "normalizer_std":
        inputs = {"disc": fld.disc}
        value = normalizer_index_std(fld, convention)
    elif formula == "normalizer_bound":
        value = normalizer_index_bound(config, convention)
        flags.append("upper bound")
    elif formula == "std_higher":
        inputs = {"disc": fld.disc, "r": r}
        value = cusps_std_higher(fld, r)
        flags = []
    elif formula == "higher":
        inputs["r"] = r
        value = cusps_higher(fld, r, config, convention)
        if not simple_type_exhaustive(r):
            flags.append("simple type only: q not prime, not exhaustive over commensurability classes")
    else:
        inputs = {"disc": fld.disc, "r": r}
        value = higher_normalizer_index(fld, r, convention)

    return CuspResult(formula=formula, inputs=inputs, value=value, flags=flags, citation=FORMULA_DESCRIPTIONS[formula])
