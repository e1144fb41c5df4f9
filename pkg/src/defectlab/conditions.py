"""Shape tests that characterize when a degree-p defect is independent.

The module works on the ramification jump of an immediate degree-p Galois
extension: the final segment of strictly positive values attained by
``v((σb − b)/b)``.  Its pointwise negation — the *approximation distance* —
is the initial segment of values ``v(θ − c)`` over approximants ``c`` from
the base field.  Mixed-characteristic callers normalize their data (shifting
by the cyclotomic reference value) so both families share one battery.

Each test re-derives independence from a different slice of the data:

* ``distance_is_subgroup_cut`` — the distance is exactly the set of values
  lying below a strongly convex subgroup.
* ``residual_is_subgroup_cut`` — the residual values ``v(a − ℘(c))`` (the
  p-fold distance values) form the set below a strongly convex subgroup.
* ``residuals_reach_above_subgroup`` — for some strongly convex subgroup H,
  every value above H is beaten by some residual: whenever ``vb > H`` there
  is an approximant with residual value at least ``−vb``.
* ``distance_scale_invariant`` — multiplying the distance values by p does
  not move the cut.  Only meaningful over p-divisible groups, where the cut
  equality is equivalent to equality of the underlying value sets.
* ``residual_matches_distance`` — the residual cut equals the distance cut;
  same caveat about p-divisibility.
* ``residuals_reach_all_positive`` — rank-one form of the reach test,
  quantified over every strictly positive value of the group.

The first two tests, the scale test, and the rank-one reach test are each
provably equivalent to scale invariance of the jump by pure segment calculus,
so any disagreement is asserted as a :class:`~defectlab.errors.CoherenceError`
(always a bug).  The subgroup reach test is genuinely weaker on cut data that
cannot arise from an actual field extension: a boundary point lying strictly
inside a proper convex subgroup makes it hold vacuously in rank two or more.
For such synthetic inputs the table reports the divergence honestly via
``all_equivalent`` instead of raising.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import CoherenceError
from .groups import strongly_convex_subgroups
from .segments import (
    FinalSegment,
    InitialSegment,
    ScaleInvariance,
    above_subgroup,
    element_in_difference,
    positive_cone,
)

CONDITION_NAMES = (
    "distance_is_subgroup_cut",
    "residual_is_subgroup_cut",
    "residuals_reach_above_subgroup",
    "distance_scale_invariant",
    "residual_matches_distance",
    "residuals_reach_all_positive",
)


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of a single independence test.

    ``holds`` is None when the test does not apply to the input (group not
    p-divisible, rank not one).  ``derived`` marks results computed from the
    distance cut alone because no independently measured residual data was
    available.
    """

    name: str
    holds: Optional[bool]
    subgroup_level: Optional[int] = None
    derived: bool = False
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "holds": self.holds,
            "subgroup_level": self.subgroup_level,
            "derived": self.derived,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class ConditionTable:
    """All condition outcomes for one extension or synthetic cut."""

    reports: tuple[ConditionReport, ...]
    verdict_independent: bool
    all_equivalent: bool

    def __getitem__(self, name: str) -> ConditionReport:
        for report in self.reports:
            if report.name == name:
                return report
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "verdict_independent": self.verdict_independent,
            "all_equivalent": self.all_equivalent,
            "conditions": [report.as_dict() for report in self.reports],
        }


def _subgroup_cut_level(segment: InitialSegment) -> Optional[int]:
    """Level ℓ when the segment is exactly ``{γ : γ < H_ℓ}``, else None.

    Canonicalization guarantees the all-zero open form exists only when the
    slot at that level is dense, i.e. when ``H_ℓ`` is strongly convex."""
    form, level, prefix = segment.decompose()
    if form == "open" and level >= 1 and all(q == 0 for q in prefix):
        return level
    return None


def evaluate_conditions(
    jump: FinalSegment,
    classification: ScaleInvariance,
    *,
    p: int,
    residual_distance: Optional[InitialSegment] = None,
) -> ConditionTable:
    """Evaluate every characterization against one ramification jump.

    ``classification`` must be the scale-invariance verdict for ``jump`` with
    multiplier ``p``.  ``residual_distance``, when given, is the independently
    measured cut of residual values (already normalized the same way as the
    jump); it is checked against the p-fold distance cut, which the residual
    law forces them to share.
    """
    group = jump.group
    verdict = classification.matches
    verdict_level = (
        classification.subgroup.level if classification.subgroup is not None else None
    )

    distance = jump.negate()
    residual = distance.scale(p)
    measured = residual_distance is not None
    if measured and residual_distance != residual:
        raise CoherenceError(
            "measured residual cut disagrees with the p-fold distance cut; "
            "the residual law makes this impossible for exact data"
        )

    # -- the two subgroup-cut tests -------------------------------------------
    level_b = _subgroup_cut_level(distance)
    report_distance_cut = ConditionReport(
        "distance_is_subgroup_cut",
        holds=level_b is not None,
        subgroup_level=level_b,
        detail=f"distance cut is {distance.to_literal()}",
    )
    level_c = _subgroup_cut_level(residual)
    report_residual_cut = ConditionReport(
        "residual_is_subgroup_cut",
        holds=level_c is not None,
        subgroup_level=level_c,
        derived=not measured,
        detail=f"residual cut is {residual.to_literal()}",
    )

    if report_distance_cut.holds != verdict or (verdict and level_b != verdict_level):
        raise CoherenceError(
            "subgroup-cut shape of the distance disagrees with scale invariance "
            "of the jump"
        )
    if level_c != level_b:
        raise CoherenceError(
            "distance and residual cuts decompose to different subgroup levels"
        )

    # -- reach test over strongly convex subgroups -----------------------------
    target = residual.negate()
    holding: list[int] = []
    reach_detail = ""
    for sub in strongly_convex_subgroups(group):
        witness = element_in_difference(above_subgroup(group, sub.level), target)
        if witness is None:
            holding.append(sub.level)
        elif not reach_detail:
            reach_detail = (
                f"value {witness.describe()} above H{sub.level} is not reached "
                "by any residual"
            )
    if holding != sorted(holding) or (holding and holding != list(range(1, len(holding) + 1))):
        raise CoherenceError(
            "reach test is not monotone across nested strongly convex subgroups"
        )
    if not strongly_convex_subgroups(group):
        reach_detail = "the group has no strongly convex subgroups"
    elif holding:
        reach_detail = f"every value above H{max(holding)} is reached by a residual"
    report_reach = ConditionReport(
        "residuals_reach_above_subgroup",
        holds=bool(holding),
        subgroup_level=max(holding) if holding else None,
        derived=not measured,
        detail=reach_detail,
    )
    if verdict and (not report_reach.holds or report_reach.subgroup_level != verdict_level):
        raise CoherenceError(
            "an independent jump must pass the reach test at its own subgroup"
        )

    # -- scale test and residual/distance comparison ---------------------------
    if not group.p_divisible(p):
        report_scale = ConditionReport(
            "distance_scale_invariant",
            holds=None,
            detail="value group is not p-divisible; the set-level test is undefined",
        )
        report_match = ConditionReport(
            "residual_matches_distance",
            holds=None,
            derived=not measured,
            detail="value group is not p-divisible; the set-level test is undefined",
        )
    else:
        scale_holds = residual == distance
        report_scale = ConditionReport(
            "distance_scale_invariant",
            holds=scale_holds,
            detail="p-fold distance cut "
            + ("equals" if scale_holds else "differs from")
            + " the distance cut",
        )
        if scale_holds != report_distance_cut.holds:
            raise CoherenceError(
                "scale invariance of the distance disagrees with its "
                "subgroup-cut shape"
            )
        match_source = (
            "measured residual data" if measured else "the p-fold distance cut"
        )
        report_match = ConditionReport(
            "residual_matches_distance",
            holds=scale_holds,
            derived=not measured,
            detail=f"compared against {match_source}",
        )

    # -- rank-one reach test ----------------------------------------------------
    if group.rank != 1:
        report_rank_one = ConditionReport(
            "residuals_reach_all_positive",
            holds=None,
            detail="defined only for rank-one groups",
        )
    else:
        witness = element_in_difference(positive_cone(group), target)
        rank_one_holds = witness is None
        report_rank_one = ConditionReport(
            "residuals_reach_all_positive",
            holds=rank_one_holds,
            derived=not measured,
            detail=(
                "every positive value is reached by a residual"
                if rank_one_holds
                else f"positive value {witness.describe()} is not reached by any residual"
            ),
        )
        if rank_one_holds != verdict or report_reach.holds != verdict:
            raise CoherenceError(
                "in rank one, both reach tests must agree with scale invariance"
            )

    reports = (
        report_distance_cut,
        report_residual_cut,
        report_reach,
        report_scale,
        report_match,
        report_rank_one,
    )
    all_equivalent = all(
        report.holds == verdict for report in reports if report.holds is not None
    )
    return ConditionTable(
        reports=reports,
        verdict_independent=verdict,
        all_equivalent=all_equivalent,
    )
