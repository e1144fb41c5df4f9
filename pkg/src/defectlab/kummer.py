"""Value-level analysis of degree-p radical extensions in mixed characteristic.

When the base field has residue characteristic p and ``v(p) > 0``, the unit
``ζ − 1`` for a primitive p-th root of unity has value ``v(p)/(p−1)``, and a
radical extension generated by a 1-unit η with ``η^p`` in the base field is a
defect candidate precisely when the values ``v(η − c)`` stay strictly below
that cyclotomic value.  Subtracting the cyclotomic value from the distance
cut puts the data in the same coordinates the equal-characteristic analysis
uses: the ramification jump is the negative of the shifted cut, and the whole
battery of independence characterizations, ideal computations, and the
differential presentation apply unchanged.

This module works purely at the level of value data: the input is the group,
``v(p)``, and the distance cut, not a series model of the field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .artin_schreier import DefectReport, classify_cut
from .errors import (
    GroupMismatchError,
    InvalidCharacteristicError,
    InvalidDistanceError,
    MalformedElementError,
)
from .groups import GroupElement, OrderedGroup, is_prime
from .segments import FinalSegment, InitialSegment, initial_below

__all__ = [
    "CyclotomicValue",
    "KummerData",
    "KummerReport",
    "cyclotomic_unit_value",
    "from_pth_power_distance",
    "independence_conditions",
    "normalizer_value",
    "ramification_jump",
]


@dataclass(frozen=True)
class CyclotomicValue:
    """The value ``v(ζ − 1) = v(p)/(p−1)`` as a point of the divisible hull.

    ``element`` is set when the point actually lies in the group."""

    coords: tuple[Fraction, ...]
    in_group: bool
    element: Optional[GroupElement]

    def describe(self) -> str:
        if len(self.coords) == 1:
            return str(self.coords[0])
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def cyclotomic_unit_value(p: int, vp: GroupElement) -> CyclotomicValue:
    """Value of ``ζ − 1``: the p-th of ``v(p)`` taken p−1 times, i.e.
    ``v(p)/(p−1)``, which need not lie in the value group itself."""
    if not is_prime(p):
        raise InvalidCharacteristicError(f"{p} is not prime")
    coords = tuple(c / (p - 1) for c in vp.coords)
    element: Optional[GroupElement] = None
    try:
        element = vp.group.element(coords)
    except MalformedElementError:
        element = None
    return CyclotomicValue(coords=coords, in_group=element is not None, element=element)


@dataclass(frozen=True)
class KummerData:
    """Value data of a radical degree-p extension by a 1-unit.

    ``vp`` is the value of p (strictly positive), ``distance`` the initial
    segment of values ``v(η − c)`` over base-field elements c.  The distance
    must stay strictly below the cyclotomic value ``v(p)/(p−1)``; data coming
    from an actual 1-unit also contains 0 (take ``c = 0``), which is reported
    as a flag rather than enforced, so that purely synthetic cuts can be
    analyzed too.
    """

    p: int
    group: OrderedGroup
    vp: GroupElement
    distance: InitialSegment

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise InvalidCharacteristicError(f"{self.p} is not prime")
        if self.vp.group != self.group:
            raise GroupMismatchError("v(p) belongs to a different group")
        if not (self.vp > self.group.zero()):
            raise InvalidCharacteristicError(
                "mixed-characteristic data needs v(p) > 0"
            )
        if self.distance.group != self.group:
            raise GroupMismatchError("the distance cut belongs to a different group")
        if self.distance.is_empty:
            raise InvalidDistanceError("the distance cut must be nonempty")
        bound = initial_below(self.group, self.cyclotomic.coords, strict=True)
        if not self.distance.is_subset(bound):
            raise InvalidDistanceError(
                "the distance of a defect candidate must stay strictly below "
                f"the cyclotomic value {self.cyclotomic.describe()}"
            )

    @property
    def cyclotomic(self) -> CyclotomicValue:
        return cyclotomic_unit_value(self.p, self.vp)

    @property
    def zero_in_distance(self) -> bool:
        return self.distance.contains(self.group.zero())


def from_pth_power_distance(
    p: int, group: OrderedGroup, vp: GroupElement, residual_distance: InitialSegment
) -> KummerData:
    """Build the data from the cut of values ``v(η^p − c^p)`` instead.

    In the valid range the p-th power dominates every binomial term, so
    ``v(η^p − c^p) = p·v(η − c)`` exactly; the distance cut is recovered by
    dividing the cut boundary by p, and the round trip is checked.
    """
    key = tuple((sign, q / p) for sign, q in residual_distance.key)
    distance = InitialSegment(group, key)
    if distance.scale(p) != residual_distance:
        raise InvalidDistanceError(
            "the given cut is not the p-fold scale of any distance cut over "
            "this group"
        )
    return KummerData(p=p, group=group, vp=vp, distance=distance)


def ramification_jump(data: KummerData) -> FinalSegment:
    """The jump ``{v(ζ−1) − δ : δ in the distance}``, upward closed.

    Shifting the distance down by the cyclotomic value places it strictly
    below zero; negating gives a final segment of strictly positive values.
    """
    shift = tuple(-c for c in data.cyclotomic.coords)
    return data.distance.shift(shift).negate().restrict_positive()


def normalizer_value(data: KummerData, v_eta_c) -> tuple[Fraction, ...]:
    """Value of the normalizing monomial for a concrete approximant:
    ``v(ζ−1) − v(η−c)``, a point of the divisible hull.

    ``v_eta_c`` must be a realized distance value, i.e. lie in the cut."""
    element = (
        v_eta_c
        if isinstance(v_eta_c, GroupElement)
        else data.group.element(v_eta_c)
    )
    if not data.distance.contains(element):
        raise InvalidDistanceError(
            "the given value is not inside the distance cut"
        )
    return tuple(x - c for x, c in zip(data.cyclotomic.coords, element.coords))


@dataclass(frozen=True)
class KummerReport:
    """Full analysis of one mixed-characteristic defect candidate.

    ``vp_in_subgroup`` is set on independent verdicts: data realized by an
    actual extension always has ``v(p)`` outside the subgroup attached to the
    jump, so a True here flags a synthetic cut that no extension produces.
    """

    data: KummerData
    jump: FinalSegment
    report: DefectReport
    cyclotomic: CyclotomicValue
    vp_in_subgroup: Optional[bool]
    zero_in_distance: bool

    def as_dict(self) -> dict:
        return {
            "p": self.data.p,
            "group": self.data.group.describe(),
            "vp": self.data.vp.describe(),
            "cyclotomic_value": self.cyclotomic.describe(),
            "cyclotomic_in_group": self.cyclotomic.in_group,
            "distance": self.data.distance.to_literal(),
            "jump": self.jump.to_literal(),
            "report": self.report.as_dict(),
            "realizability_flags": {
                "zero_in_distance": self.zero_in_distance,
                "vp_in_subgroup": self.vp_in_subgroup,
            },
        }


def independence_conditions(data: KummerData) -> KummerReport:
    """Run the full characterization battery on mixed-characteristic data.

    The jump is classified exactly as in equal characteristic; the residual
    cut is derived (no series model exists at this level), so the residual
    conditions are marked as derived in the table.
    """
    jump = ramification_jump(data)
    report = classify_cut(jump, p=data.p)
    vp_in_subgroup: Optional[bool] = None
    if report.independent and report.subgroup is not None:
        vp_in_subgroup = report.subgroup.contains(data.vp)
    return KummerReport(
        data=data,
        jump=jump,
        report=report,
        cyclotomic=data.cyclotomic,
        vp_in_subgroup=vp_in_subgroup,
        zero_in_distance=data.zero_in_distance,
    )
