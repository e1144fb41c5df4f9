"""Kähler differentials of the ring extension attached to a degree-p defect.

For an immediate degree-p Galois extension with valuation rings O_K ⊆ O_L,
the module of relative differentials is presented as U/UV where

* U is the ramification ideal (value set: the ramification jump),
* V is its (p−1)-st power,

so U·V = U^p and the module vanishes exactly when U^p = U — that is, exactly
when the defect is independent.

:func:`differential_presentation` builds the presentation from the
ramification ideal alone.  :func:`verify_chain_presentation` certifies the
relation side from an actual approximation chain over a base field: the chain
of unit generators ``x_c = t_c(θ − c)`` has minimal polynomials whose
derivative values ``(p−1)·(−v(θ−c))`` must strictly decrease (so the family
of principal relation ideals is directed under divisibility, checked by exact
series arithmetic), must all lie in V's value set, and must approach its cut
within the resolution the approximation reached.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from .errors import CoherenceError, InsufficientDataError
from .segments import FinalSegment, Ideal, final_above

if TYPE_CHECKING:  # pragma: no cover - typing only
    from .artin_schreier import ArtinSchreierExtension, RootApproximation


@dataclass(frozen=True)
class DifferentialPresentation:
    """U/UV presentation of the differential module."""

    generators: Ideal
    relations: Ideal
    product: Ideal

    @property
    def is_zero(self) -> bool:
        return self.product == self.generators

    def as_dict(self) -> dict:
        return {
            "u_segment": self.generators.to_literal(),
            "uv_segment": self.product.to_literal(),
            "is_zero": self.is_zero,
        }


def differential_presentation(ideal: Ideal, p: int) -> DifferentialPresentation:
    """Present the differential module attached to a ramification ideal."""
    if not isinstance(p, int) or p < 2:
        raise ValueError("the degree must be a prime at least 2")
    presentation = DifferentialPresentation(
        generators=ideal,
        relations=ideal.power(p - 1),
        product=ideal.power(p),
    )
    if presentation.is_zero != (ideal.power(p) == ideal):
        raise CoherenceError("presentation disagrees with the ideal power test")
    return presentation


@dataclass(frozen=True)
class ChainStage:
    """Relation data contributed by one stage of the approximation chain.

    The unit generator ``x_c = t_c(θ − c)`` at approximant value β has minimal
    polynomial ``X^p − t_c^{p−1} X − t_c^p (a − ℘(c))``, whose derivative is the
    constant ``−t_c^{p−1}`` of value ``(p−1)·(−β)``.  The stage presents the
    differential module restricted to this generator as a cyclic module
    annihilated by that value."""

    index: int
    derivative_value: Fraction
    annihilator: FinalSegment


@dataclass(frozen=True)
class ChainPresentationReport:
    """Certified comparison of the chain's relation data against V = U^(p−1)."""

    stages: tuple[ChainStage, ...]
    derivative_values_decrease: bool
    values_inside_relations: bool
    cofinal_gap: Fraction
    gap_within_resolution: bool

    @property
    def presents_relation_ideal(self) -> bool:
        return (
            self.derivative_values_decrease
            and self.values_inside_relations
            and self.gap_within_resolution
        )

    def as_dict(self) -> dict:
        return {
            "stages": [
                {
                    "index": stage.index,
                    "derivative_value": str(stage.derivative_value),
                    "annihilator": stage.annihilator.to_literal(),
                }
                for stage in self.stages
            ],
            "derivative_values_decrease": self.derivative_values_decrease,
            "values_inside_relations": self.values_inside_relations,
            "cofinal_gap": str(self.cofinal_gap),
            "presents_relation_ideal": self.presents_relation_ideal,
        }


def verify_chain_presentation(
    extension: "ArtinSchreierExtension",
    approximation: "RootApproximation",
    relations: Ideal,
) -> ChainPresentationReport:
    """Certify that the approximation chain's relation values present V.

    Three checks, all on exact rational data:

    * the derivative values strictly decrease along the chain, certified by
      exact series arithmetic (each earlier derivative divided by the later
      one lies in the valuation ring with strictly positive value);
    * every derivative value lies in V's value set;
    * the deepest derivative value is within ``(p−1)·p^(−target)`` of V's
      cut, so the principal annihilators are cofinal in V up to the
      resolution the approximation was asked for.
    """
    p = extension.p
    steps = approximation.steps
    if len(steps) < 2:
        raise InsufficientDataError(
            "chain verification needs at least two approximation steps"
        )
    group = relations.segment.group

    stages: list[ChainStage] = []
    series_divisible = True
    previous = None
    for step in steps:
        t_c = extension.base.monomial(-step.value)
        derivative = -(t_c ** (p - 1))
        derivative_value = derivative.exact_valuation()
        if derivative_value != (p - 1) * (-step.value):
            raise CoherenceError(
                "derivative value disagrees with the step value it comes from"
            )
        if previous is not None:
            ratio = previous * derivative.invert()
            if ratio.exact_valuation() <= 0:
                series_divisible = False
        previous = derivative
        stages.append(
            ChainStage(
                index=step.index,
                derivative_value=derivative_value,
                annihilator=final_above(group, derivative_value, strict=False),
            )
        )

    values = [stage.derivative_value for stage in stages]
    strictly_down = all(later < earlier for earlier, later in zip(values, values[1:]))
    if strictly_down != series_divisible:
        raise CoherenceError(
            "series-level divisibility disagrees with the value comparison"
        )

    inside = all(relations.contains_value(value) for value in values)

    form, level, prefix = relations.segment.decompose()
    if form == "open" and level == group.rank:
        cut_value = prefix[-1] if group.rank == 1 else None
    else:
        cut_value = None
    if group.rank == 1 and cut_value is not None:
        gap = min(values) - cut_value
    else:
        # Subgroup-shaped or higher-rank cut: the gap is measured in the last
        # coordinate against zero, which is the only case the solver produces.
        gap = min(values)
    resolution = (p - 1) * Fraction(1, p ** approximation.target)
    return ChainPresentationReport(
        stages=tuple(stages),
        derivative_values_decrease=strictly_down,
        values_inside_relations=inside,
        cofinal_gap=gap,
        gap_within_resolution=0 <= gap <= resolution,
    )
