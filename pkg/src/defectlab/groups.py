"""Ordered abelian groups of finite rational rank, with their convex subgroups.

A group is modelled as a finite lexicographic product of subgroups of the
rationals, coarsest (most significant) slot first.  Each slot is described by a
finite set of rational generators together with a divisibility rule: either a
set of primes that may be inverted, or full divisibility (the slot is then the
rational span of its generators).  Since every finitely generated subgroup of
the rationals is cyclic, a slot with no divisibility is the cyclic group on the
rational gcd of its generators, and is discrete; any nonempty divisibility rule
makes the slot dense in the rationals.

Elements are coordinate tuples validated against the slots; comparisons are
lexicographic.  Convex subgroups of a lex product of rank ``k`` form a chain
``H_0 ⊇ H_1 ⊇ … ⊇ H_k`` where ``H_j`` consists of the elements whose first
``j`` coordinates vanish (``H_0`` is the whole group, ``H_k`` is trivial).
A proper convex subgroup ``H_j`` is *strongly convex* when the quotient by it
has no least positive element, which for a lex product happens exactly when
slot ``j-1`` (the finest slot surviving in the quotient) is dense.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

from .errors import (
    GroupMismatchError,
    MalformedElementError,
    NotProperSubgroupError,
    SpecFileError,
    UndefinedComponentError,
)

RationalLike = Union[Fraction, int, str]


def parse_rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions, and strings like ``"-3/4"`` to ``Fraction``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedElementError(f"not a rational: {value!r}") from exc
    raise MalformedElementError(f"not a rational: {value!r}")


def _rational_gcd(values: Iterable[Fraction]) -> Fraction:
    result = Fraction(0)
    for v in values:
        v = abs(v)
        if result == 0:
            result = v
        elif v != 0:
            result = Fraction(
                math.gcd(result.numerator * v.denominator, v.numerator * result.denominator),
                result.denominator * v.denominator,
            )
    return result


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> frozenset[int]:
    factors = set()
    f = 2
    while f * f <= n:
        while n % f == 0:
            factors.add(f)
            n //= f
        f += 1
    if n > 1:
        factors.add(n)
    return frozenset(factors)


@dataclass(frozen=True)
class Slot:
    """One lexicographic slot: a subgroup of the rationals.

    ``generators`` is a nonempty tuple of nonzero rationals; ``divisibility``
    is the set of primes whose powers may divide denominators (relative to the
    generated cyclic group); ``divisible_all`` makes the slot the full rational
    span of the generators.
    """

    generators: tuple[Fraction, ...]
    divisibility: frozenset[int] = frozenset()
    divisible_all: bool = False

    def __post_init__(self) -> None:
        gens = tuple(sorted({abs(parse_rational(g)) for g in self.generators}))
        if not gens or any(g == 0 for g in gens):
            raise MalformedElementError("slot needs at least one nonzero generator")
        primes = frozenset(int(p) for p in self.divisibility)
        for p in primes:
            if not is_prime(p):
                raise MalformedElementError(f"divisibility entries must be prime, got {p}")
        if self.divisible_all:
            primes = frozenset()
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "divisibility", primes)

    @cached_property
    def generator_gcd(self) -> Fraction:
        return _rational_gcd(self.generators)

    @property
    def is_dense(self) -> bool:
        return self.divisible_all or bool(self.divisibility)

    def contains(self, value: RationalLike) -> bool:
        q = parse_rational(value)
        if q == 0:
            return True
        ratio = q / self.generator_gcd
        if self.divisible_all:
            return True
        den = ratio.denominator
        for p in self.divisibility:
            while den % p == 0:
                den //= p
        return den == 1

    def divisible_by_prime(self, p: int) -> bool:
        return self.divisible_all or p in self.divisibility

    def next_above(self, value: Fraction) -> Fraction:
        """Least slot element strictly greater than ``value`` (discrete slots)."""
        if self.is_dense:
            raise ValueError("next_above is only defined for discrete slots")
        g = self.generator_gcd
        return g * (math.floor(value / g) + 1)

    def prev_below(self, value: Fraction) -> Fraction:
        """Greatest slot element strictly less than ``value`` (discrete slots)."""
        if self.is_dense:
            raise ValueError("prev_below is only defined for discrete slots")
        g = self.generator_gcd
        return g * (math.ceil(value / g) - 1)

    def describe(self) -> str:
        g = self.generator_gcd
        scale = "" if g == 1 else f"({g})"
        if self.divisible_all:
            return f"{scale}Q"
        if self.divisibility:
            inv = ",".join(f"1/{p}" for p in sorted(self.divisibility))
            return f"{scale}Z[{inv}]"
        return f"{scale}Z"

    def to_json(self) -> dict:
        data: dict = {"generators": [str(g) for g in self.generators]}
        if self.divisible_all:
            data["divisible_by"] = "all"
        elif self.divisibility:
            data["divisible_by"] = sorted(self.divisibility)
        return data


@dataclass(frozen=True)
class OrderedGroup:
    """A lexicographic product of slots, coarsest slot first."""

    slots: tuple[Slot, ...]

    def __post_init__(self) -> None:
        slots = tuple(self.slots)
        if not slots:
            raise MalformedElementError("a group needs at least one slot")
        object.__setattr__(self, "slots", slots)

    @property
    def rank(self) -> int:
        return len(self.slots)

    def element(self, coords: Union[RationalLike, Sequence[RationalLike]]) -> "GroupElement":
        if isinstance(coords, (Fraction, int, str)):
            coords = (coords,) if self.rank == 1 else _parse_tuple_text(coords, self.rank)
        return GroupElement(self, tuple(parse_rational(c) for c in coords))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (Fraction(0),) * self.rank)

    def p_divisible(self, p: int) -> bool:
        return all(slot.divisible_by_prime(p) for slot in self.slots)

    def describe(self) -> str:
        return " x ".join(slot.describe() for slot in self.slots)

    def to_json(self) -> list:
        return [slot.to_json() for slot in self.slots]


def _parse_tuple_text(text: RationalLike, rank: int) -> tuple[Fraction, ...]:
    if not isinstance(text, str):
        raise MalformedElementError(f"cannot read coordinates from {text!r}")
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    parts = [p for p in (s.strip() for s in body.split(",")) if p]
    if len(parts) != rank:
        raise MalformedElementError(
            f"expected {rank} coordinates, got {len(parts)} in {text!r}"
        )
    return tuple(parse_rational(p) for p in parts)


@dataclass(frozen=True)
class GroupElement:
    """A validated point of an :class:`OrderedGroup`, ordered lexicographically."""

    group: OrderedGroup
    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        coords = tuple(parse_rational(c) for c in self.coords)
        if len(coords) != self.group.rank:
            raise MalformedElementError(
                f"expected {self.group.rank} coordinates, got {len(coords)}"
            )
        for i, (c, slot) in enumerate(zip(coords, self.group.slots)):
            if not slot.contains(c):
                raise MalformedElementError(
                    f"coordinate {c} at position {i} is not in slot {slot.describe()}"
                )
        object.__setattr__(self, "coords", coords)

    def _same_group(self, other: "GroupElement") -> None:
        if self.group != other.group:
            raise GroupMismatchError("elements belong to different groups")

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def leading_index(self) -> int | None:
        for i, c in enumerate(self.coords):
            if c != 0:
                return i
        return None

    def __lt__(self, other: "GroupElement"):
        if not isinstance(other, GroupElement):
            return NotImplemented
        self._same_group(other)
        return self.coords < other.coords

    def __le__(self, other: "GroupElement"):
        if not isinstance(other, GroupElement):
            return NotImplemented
        self._same_group(other)
        return self.coords <= other.coords

    def __gt__(self, other: "GroupElement"):
        if not isinstance(other, GroupElement):
            return NotImplemented
        self._same_group(other)
        return self.coords > other.coords

    def __ge__(self, other: "GroupElement"):
        if not isinstance(other, GroupElement):
            return NotImplemented
        self._same_group(other)
        return self.coords >= other.coords

    def __add__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement):
            return NotImplemented
        self._same_group(other)
        return GroupElement(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement):
            return NotImplemented
        self._same_group(other)
        return GroupElement(self.group, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, tuple(-c for c in self.coords))

    def __mul__(self, n: int) -> "GroupElement":
        if not isinstance(n, int):
            return NotImplemented
        return GroupElement(self.group, tuple(n * c for c in self.coords))

    __rmul__ = __mul__

    def describe(self) -> str:
        if self.group.rank == 1:
            return str(self.coords[0])
        return "(" + ",".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class ConvexSubgroup:
    """The convex subgroup ``H_level``: elements whose first ``level``
    coordinates vanish.  ``H_0`` is the whole group; ``H_rank`` is trivial."""

    group: OrderedGroup
    level: int

    def __post_init__(self) -> None:
        if not 0 <= self.level <= self.group.rank:
            raise MalformedElementError(
                f"convex subgroup level must lie in 0..{self.group.rank}, got {self.level}"
            )

    @property
    def is_whole_group(self) -> bool:
        return self.level == 0

    @property
    def is_trivial(self) -> bool:
        return self.level == self.group.rank

    def contains(self, element: GroupElement) -> bool:
        if element.group != self.group:
            raise GroupMismatchError("element belongs to a different group")
        return all(c == 0 for c in element.coords[: self.level])

    def describe(self) -> str:
        if self.is_trivial:
            return "{0}"
        if self.is_whole_group:
            return "G"
        return f"H{self.level}"


@dataclass(frozen=True)
class ArchimedeanComponent:
    """The archimedean data of a nonzero element: the smallest convex subgroup
    containing it, the largest convex subgroup excluding it, and the slot
    realizing their quotient."""

    containing: ConvexSubgroup
    excluding: ConvexSubgroup
    slot: Slot
    index: int


def coerce_element(group: OrderedGroup, value) -> GroupElement:
    """Coerce ``value`` (GroupElement, rational-like, coordinate sequence, or
    tuple literal string) to a validated element of ``group``."""
    if isinstance(value, GroupElement):
        if value.group != group:
            raise GroupMismatchError("element belongs to a different group")
        return value
    if isinstance(value, (list, tuple)):
        return GroupElement(group, tuple(parse_rational(c) for c in value))
    return group.element(value)


def compare(group: OrderedGroup, left, right) -> str:
    """Lexicographic comparison of two elements; returns ``"<"``, ``"="``, or ``">"``."""
    a = coerce_element(group, left)
    b = coerce_element(group, right)
    if a.coords < b.coords:
        return "<"
    if a.coords > b.coords:
        return ">"
    return "="


def is_strongly_convex(group: OrderedGroup, subgroup: ConvexSubgroup) -> bool:
    """Whether the proper convex subgroup is strongly convex, i.e. the quotient
    by it has no least positive element."""
    if subgroup.group != group:
        raise GroupMismatchError("subgroup belongs to a different group")
    if subgroup.is_whole_group:
        raise NotProperSubgroupError(
            "strong convexity is only defined for proper convex subgroups"
        )
    return group.slots[subgroup.level - 1].is_dense


def strongly_convex_subgroups(group: OrderedGroup) -> list[ConvexSubgroup]:
    """All strongly convex subgroups, largest first."""
    return [
        ConvexSubgroup(group, level)
        for level in range(1, group.rank + 1)
        if group.slots[level - 1].is_dense
    ]


def archimedean_component(group: OrderedGroup, element) -> ArchimedeanComponent:
    """Archimedean data of a nonzero element (undefined for zero)."""
    el = coerce_element(group, element)
    index = el.leading_index()
    if index is None:
        raise UndefinedComponentError("zero has no archimedean component")
    return ArchimedeanComponent(
        containing=ConvexSubgroup(group, index),
        excluding=ConvexSubgroup(group, index + 1),
        slot=group.slots[index],
        index=index,
    )


def deeply_ramified_value_group(group: OrderedGroup) -> bool:
    """Whether every quotient by a proper convex subgroup lacks a least
    positive element — equivalently, every slot is dense."""
    return all(slot.is_dense for slot in group.slots)


_TOKEN_RE = re.compile(r"^Z\[1/(\d+)\]$")


def _slot_from_token(token: str) -> Slot:
    token = token.strip()
    if token == "Q":
        return Slot((Fraction(1),), divisible_all=True)
    if token == "Z":
        return Slot((Fraction(1),))
    m = _TOKEN_RE.match(token)
    if m:
        n = int(m.group(1))
        if n < 2:
            raise SpecFileError(f"bad slot token {token!r}")
        return Slot((Fraction(1),), _prime_factors(n))
    raise SpecFileError(f"unknown slot token {token!r} (expected Q, Z, or Z[1/n])")


def parse_group(text: str) -> OrderedGroup:
    """Parse shorthand like ``"Q"``, ``"Z[1/2]"``, or ``"QxZ[1/3]"``."""
    tokens = [t for t in re.split(r"[x×]", text) if t.strip()]
    if not tokens:
        raise SpecFileError(f"empty group description {text!r}")
    return OrderedGroup(tuple(_slot_from_token(t) for t in tokens))


def _slot_from_json(data) -> Slot:
    if not isinstance(data, dict):
        raise SpecFileError(f"slot must be an object, got {data!r}")
    gens = data.get("generators", ["1"])
    if not isinstance(gens, list):
        raise SpecFileError("slot generators must be a list")
    generators = tuple(parse_rational(g) for g in gens)
    div = data.get("divisible_by", [])
    if div == "all":
        return Slot(generators, divisible_all=True)
    if not isinstance(div, list):
        raise SpecFileError('divisible_by must be a list of primes or "all"')
    return Slot(generators, frozenset(int(p) for p in div))


def group_from_json(data) -> OrderedGroup:
    """Build a group from the on-disk form: either shorthand text or a list of
    slot objects ``{"generators": [...], "divisible_by": [...] | "all"}``."""
    if isinstance(data, str):
        return parse_group(data)
    if isinstance(data, list):
        try:
            return OrderedGroup(tuple(_slot_from_json(s) for s in data))
        except MalformedElementError as exc:
            raise SpecFileError(str(exc)) from exc
    raise SpecFileError(f"cannot read a group from {data!r}")
