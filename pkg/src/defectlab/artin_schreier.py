"""Degree-p extensions in characteristic p and their defect analysis.

An extension is specified by a base field and an exact series ``a`` with
``v(a) < 0``; the generator θ satisfies ``θ^p − θ = a`` and the generating
automorphism sends θ to θ+1.  The central object is the distance of θ from
the base field: the successive approximants ``c_0, c_1, …`` built by
:func:`approximate_root` realize strictly increasing values ``v(θ − c_i)``
whose upward limit bounds how well θ can be approximated from below.

The value of ``θ − c`` is never computed inside the extension.  It comes from
the exact identity ``v(a − (c^p − c)) = p · v(θ − c)``, which holds because
``a − (c^p − c) = (θ−c)^p − (θ−c)`` and the p-th power dominates once
``v(θ−c) < 0``.  Each residual on the left is a base-field series, so every
step is certified by exact arithmetic.

From the realized values, :func:`detect_boundary` locates the cut boundary on
a p-adic grid, :func:`distance_and_jump` turns it into the distance cut and
the ramification jump (the set of values ``v((σb − b)/b)``), and
:func:`classify_cut` runs the whole battery of independence characterizations
plus the ramification-ideal, differential-module, and trace-ideal
computations, cross-checking every pair of them.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .conditions import ConditionTable, evaluate_conditions
from .differentials import DifferentialPresentation, differential_presentation
from .elements import ExtensionElement, taylor_valuation
from .errors import (
    CoherenceError,
    IndeterminateValuationError,
    InconclusiveCutError,
    InsufficientDataError,
    NotImmediateError,
    PrecisionError,
    RootInBaseFieldError,
)
from .groups import ConvexSubgroup, OrderedGroup
from .segments import (
    FinalSegment,
    Ideal,
    InitialSegment,
    ScaleInvariance,
    initial_below,
    is_idempotent,
    scale_invariant_shape,
)
from .series import AtLeast, BaseField, HahnSeries, artin_schreier_map
from .trace import trace_ideal

__all__ = [
    "ApproximationStep",
    "ArtinSchreierExtension",
    "ChainLink",
    "CutDetection",
    "DefectReport",
    "ExtensionClassification",
    "MinimalPolynomial",
    "RamificationSampleReport",
    "RootApproximation",
    "approximate_root",
    "classify_cut",
    "classify_extension",
    "detect_boundary",
    "distance_and_jump",
    "generator_chain",
    "generator_minimal_polynomial",
    "sample_ramification_values",
]

_HENSEL_TERMS = 64


@dataclass(frozen=True)
class ArtinSchreierExtension:
    """The degree-p extension generated by a root of ``X^p − X = rhs``."""

    base: BaseField
    rhs: HahnSeries

    def __post_init__(self) -> None:
        if self.rhs.p != self.base.p:
            raise ValueError(
                "right-hand side lives over a different prime field than the base"
            )
        if self.rhs.is_exact_zero:
            raise ValueError("right-hand side must be nonzero")
        if not self.rhs.terms:
            raise PrecisionError(
                "right-hand side has no known terms; its valuation is undetermined"
            )

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def group(self) -> OrderedGroup:
        return self.base.group

    def describe(self) -> str:
        return f"theta^{self.p} - theta = {self.rhs}"

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "base": self.base.to_json(),
            "rhs": str(self.rhs),
        }


@dataclass(frozen=True)
class ApproximationStep:
    """One stage of the approximation chain.

    ``approximant`` is the base-field element ``c``; ``residual`` is the exact
    series ``rhs − (c^p − c)``, whose valuation ``residual_value`` determines
    ``value = v(θ − c) = residual_value / p``.
    """

    index: int
    approximant: HahnSeries
    residual: HahnSeries
    residual_value: Fraction
    value: Fraction


@dataclass(frozen=True)
class RootApproximation:
    """The chain of approximants together with how the iteration ended."""

    extension: ArtinSchreierExtension
    steps: tuple[ApproximationStep, ...]
    target: int
    outcome: str  # "target_reached" | "precision_exhausted" | "step_limit"

    @property
    def deepest(self) -> ApproximationStep:
        return self.steps[-1]

    def values(self) -> tuple[Fraction, ...]:
        return tuple(step.value for step in self.steps)

    def as_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "target": self.target,
            "steps": len(self.steps),
            "deepest_value": str(self.steps[-1].value) if self.steps else None,
        }


def approximate_root(
    extension: ArtinSchreierExtension, target: int = 10
) -> RootApproximation:
    """Build approximants ``c`` with ``v(θ − c)`` climbing past ``−p^−target``.

    Each iteration removes the leading term of the residual
    ``rhs − (c^p − c)`` by adding its p-th root to ``c``; the p-th root of a
    monomial keeps its coefficient because the coefficient field is fixed by
    the p-power map.  The iteration stops when the realized value crosses the
    target threshold, and raises as soon as the data shows the extension is
    not an immediate degree-p extension at all:

    * residual exactly zero — θ is the base-field element ``c``;
    * residual of value zero — its nonzero residue is not of the form
      ``x^p − x`` in the prime field, so the residue field grows;
    * residual of positive value — the equation has a root in the
      henselization, found by summing the geometric p-power series;
    * residual value not divisible by p inside the exponent group — the value
      group grows.
    """
    if not isinstance(target, int) or target < 1:
        raise ValueError("target must be a positive integer depth")
    p = extension.p
    a = extension.rhs
    threshold = -Fraction(1, p**target)
    step_cap = max(4 * target + 16, 32)

    c = HahnSeries.zero(p)
    steps: list[ApproximationStep] = []
    outcome = "step_limit"
    for _ in range(step_cap):
        residual = a - artin_schreier_map(c)
        if residual.is_exact_zero:
            raise RootInBaseFieldError(
                "the equation is solved exactly by a base-field element",
                root=c,
            )
        valuation = residual.valuation()
        if isinstance(valuation, AtLeast):
            outcome = "precision_exhausted"
            break
        e = valuation.value
        if e == 0:
            raise NotImmediateError(
                "the residual has a nonzero residue, which no element of the "
                "prime field maps to under x^p − x; the residue field grows"
            )
        if e > 0:
            root = c - _geometric_p_power_sum(residual)
            raise RootInBaseFieldError(
                "the residual has positive value, so the equation has a root "
                "in the henselization of the base field; an approximation is "
                "attached",
                root=root,
            )
        value = e / p
        steps.append(
            ApproximationStep(
                index=len(steps),
                approximant=c,
                residual=residual,
                residual_value=e,
                value=value,
            )
        )
        if not extension.base.contains_exponent(value):
            raise NotImmediateError(
                f"v(θ − c) = {value} lies outside the exponent group, so the "
                "value group grows and the extension is ramified"
            )
        if value > threshold:
            outcome = "target_reached"
            break
        exponent, coeff = residual.leading()
        c = c + extension.base.monomial(exponent / p, coeff)
    return RootApproximation(
        extension=extension, steps=tuple(steps), target=target, outcome=outcome
    )


def _geometric_p_power_sum(residual: HahnSeries) -> HahnSeries:
    """Partial sum of ``Σ_k residual^(p^k)``, the explicit henselian root of
    ``x^p − x = residual`` when ``v(residual) > 0`` (up to sign)."""
    total = residual
    power = residual
    for _ in range(_HENSEL_TERMS):
        power = power.frobenius()
        total = total + power
    return total


# -- boundary detection ----------------------------------------------------------


@dataclass(frozen=True)
class CutDetection:
    """Where a strictly increasing value sequence accumulates, read off a
    p-adic grid of the given depth.

    On convergence, ``bracket = (low, high)`` certifies the boundary lies in
    ``(low, high]`` and ``boundary = high``.  Without convergence only the
    lower end is certified — the data ran out before any upper bound could be
    established — so ``high`` is None."""

    converged: bool
    boundary: Optional[Fraction]
    bracket: tuple[Fraction, Optional[Fraction]]
    depth: int
    candidates: tuple[Fraction, ...]

    def as_dict(self) -> dict:
        low, high = self.bracket
        return {
            "converged": self.converged,
            "boundary": None if self.boundary is None else str(self.boundary),
            "bracket": [str(low), None if high is None else str(high)],
            "depth": self.depth,
        }


def detect_boundary(
    values: Sequence[Fraction], p: int, depth: int, runs: int = 3
) -> CutDetection:
    """Detect the upward limit of a strictly increasing value sequence.

    Each value is rounded up to the grid ``p^−depth · ℤ``; the detection
    converges when the last ``runs`` rounded candidates agree and every value
    stays strictly below that common grid point.  The certified bracket is
    ``(deepest value, candidate]``, of width at most ``p^−depth``.
    """
    if not values:
        raise InsufficientDataError("no values to detect a boundary from")
    if not isinstance(depth, int) or depth < 1:
        raise ValueError("detection depth must be a positive integer")
    if runs < 2:
        raise ValueError("detection needs at least two agreeing runs")
    for earlier, later in zip(values, values[1:]):
        if earlier >= later:
            raise ValueError("boundary detection needs strictly increasing values")
    grid = Fraction(p) ** depth
    candidates = tuple(Fraction(math.ceil(v * grid), 1) / grid for v in values)
    last = candidates[-1]
    converged = (
        len(candidates) >= runs
        and all(c == last for c in candidates[-runs:])
        and all(v < last for v in values)
    )
    return CutDetection(
        converged=converged,
        boundary=last if converged else None,
        bracket=(values[-1], last if converged else None),
        depth=depth,
        candidates=candidates,
    )


def _detection_depth(approximation: RootApproximation, depth: Optional[int]) -> int:
    if depth is not None:
        return depth
    return max(approximation.target - 3, 1)


def distance_and_jump(
    approximation: RootApproximation, depth: Optional[int] = None
) -> tuple[InitialSegment, FinalSegment, CutDetection]:
    """Distance cut and ramification jump read off an approximation chain.

    The distance cut is the set of values ``v(θ − c)`` realized over all
    base-field ``c``: the strictly increasing chain values accumulate at the
    detected boundary from below, giving the open cut strictly below it.  The
    jump is its negative, restricted to the positive cone.
    """
    if len(approximation.steps) < 2:
        raise InsufficientDataError(
            "need at least two approximation steps to detect the distance cut"
        )
    p = approximation.extension.p
    group = approximation.extension.group
    detection = detect_boundary(
        approximation.values(), p, _detection_depth(approximation, depth)
    )
    if not detection.converged:
        raise InconclusiveCutError(
            "the distance boundary did not stabilize at this depth; rerun with "
            "a larger target or smaller depth",
            bracket=detection.bracket,
        )
    distance = initial_below(group, detection.boundary, strict=True)
    jump = distance.negate().restrict_positive()
    return distance, jump, detection


# -- classification ----------------------------------------------------------------


@dataclass(frozen=True)
class DefectReport:
    """Full defect analysis of one ramification jump.

    Every characterization is computed independently and cross-checked; a
    disagreement among the provably equivalent ones raises
    :class:`~defectlab.errors.CoherenceError` rather than being reported.
    """

    p: int
    jump: FinalSegment
    distance: InitialSegment
    independent: bool
    subgroup: Optional[ConvexSubgroup]
    conditions: ConditionTable
    ramification_ideal: Ideal
    ideal_idempotent: bool
    omega: DifferentialPresentation
    trace: Ideal

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "group": self.jump.group.describe(),
            "jump": self.jump.to_literal(),
            "distance": self.distance.to_literal(),
            "independent": self.independent,
            "subgroup": None if self.subgroup is None else self.subgroup.describe(),
            "conditions": self.conditions.as_dict(),
            "ramification_ideal": self.ramification_ideal.to_literal(),
            "ideal_idempotent": self.ideal_idempotent,
            "omega": self.omega.as_dict(),
            "trace_ideal": self.trace.to_literal(),
        }


def classify_cut(
    jump: FinalSegment,
    *,
    p: int,
    residual_distance: Optional[InitialSegment] = None,
) -> DefectReport:
    """Run every defect characterization on a ramification jump.

    The verdict comes from scale invariance of the jump; the condition battery,
    the idempotence of the ramification ideal, and the vanishing of the
    differential module are computed independently and must all agree with it.
    """
    classification: ScaleInvariance = scale_invariant_shape(jump, p)
    conditions = evaluate_conditions(
        jump, classification, p=p, residual_distance=residual_distance
    )
    independent = classification.matches

    ramification_ideal = Ideal(jump)
    idempotent = is_idempotent(ramification_ideal, p)
    if idempotent != independent:
        raise CoherenceError(
            "idempotence of the ramification ideal disagrees with scale "
            "invariance of the jump"
        )
    omega = differential_presentation(ramification_ideal, p)
    if omega.is_zero != independent:
        raise CoherenceError(
            "vanishing of the differential module disagrees with scale "
            "invariance of the jump"
        )
    return DefectReport(
        p=p,
        jump=jump,
        distance=jump.negate(),
        independent=independent,
        subgroup=classification.subgroup,
        conditions=conditions,
        ramification_ideal=ramification_ideal,
        ideal_idempotent=idempotent,
        omega=omega,
        trace=trace_ideal(jump, p),
    )


@dataclass(frozen=True)
class ExtensionClassification:
    """End-to-end result of classifying a concrete extension."""

    extension: ArtinSchreierExtension
    approximation: RootApproximation
    detection: CutDetection
    residual_detection: CutDetection
    report: DefectReport

    def as_dict(self) -> dict:
        return {
            "extension": self.extension.to_json(),
            "approximation": self.approximation.as_dict(),
            "detection": self.detection.as_dict(),
            "residual_detection": self.residual_detection.as_dict(),
            "report": self.report.as_dict(),
        }


def classify_extension(
    extension: ArtinSchreierExtension,
    *,
    target: int = 10,
    depth: Optional[int] = None,
) -> ExtensionClassification:
    """Approximate the root, detect both cuts, and run the full analysis.

    The residual values ``v(rhs − (c^p − c))`` are detected independently on a
    grid one level coarser (where the p-fold boundary is guaranteed to be a
    grid point) and must land exactly on p times the distance boundary; the
    measured residual cut then feeds the condition battery as independent
    evidence rather than a value derived from the distance.
    """
    approximation = approximate_root(extension, target)
    main_depth = _detection_depth(approximation, depth)
    distance, jump, detection = distance_and_jump(approximation, main_depth)

    residual_depth = max(main_depth - 1, 1)
    residual_detection = detect_boundary(
        tuple(step.residual_value for step in approximation.steps),
        extension.p,
        residual_depth,
    )
    if not residual_detection.converged:
        raise CoherenceError(
            "the distance boundary stabilized but the residual boundary did "
            "not, contradicting the residual law"
        )
    if residual_detection.boundary != extension.p * detection.boundary:
        raise CoherenceError(
            "the residual boundary is not p times the distance boundary, "
            "contradicting the residual law"
        )
    measured = initial_below(
        extension.group, residual_detection.boundary, strict=True
    )
    report = classify_cut(jump, p=extension.p, residual_distance=measured)
    return ExtensionClassification(
        extension=extension,
        approximation=approximation,
        detection=detection,
        residual_detection=residual_detection,
        report=report,
    )


# -- sampling the jump off actual elements ------------------------------------------


@dataclass(frozen=True)
class RamificationSampleReport:
    """Outcome of sampling ``v((σb − b)/b)`` against the computed jump."""

    tested: int
    passed: int
    failed: int
    skipped: int
    special_checked: int

    def as_dict(self) -> dict:
        return {
            "tested": self.tested,
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
            "special_checked": self.special_checked,
        }


def _random_extension_element(
    extension: ArtinSchreierExtension, rng: random.Random
) -> ExtensionElement:
    p = extension.p
    coeffs = [HahnSeries.zero(p) for _ in range(p)]
    for index in range(p):
        terms: dict[Fraction, int] = {}
        for _ in range(rng.randint(0, 2)):
            exponent = Fraction(rng.randint(-3, 3), p ** rng.randint(0, 4))
            terms[exponent] = terms.get(exponent, 0) + rng.randint(0, p - 1)
        coeffs[index] = HahnSeries.make(p, terms)
    if all(coeffs[i].is_exact_zero for i in range(1, p)):
        index = rng.randint(1, p - 1)
        coeffs[index] = extension.base.monomial(
            Fraction(rng.randint(-3, 3), p ** rng.randint(0, 4))
        )
    return ExtensionElement(extension, tuple(coeffs))


def sample_ramification_values(
    extension: ArtinSchreierExtension,
    approximation: RootApproximation,
    jump: FinalSegment,
    *,
    count: int = 50,
    rng: Optional[random.Random] = None,
) -> RamificationSampleReport:
    """Check that sampled values ``v((σb − b)/b)`` land inside the jump.

    Two families: the elements ``θ − c_i`` along the approximation chain,
    whose values are pinned down exactly (``σb − b = 1`` there, so the sample
    value is ``−v(θ − c_i)``, and the chain value is cross-checked against the
    Taylor certification); and random elements outside the base field, whose
    numerator and denominator values are certified independently.  Samples the
    certification cannot decide are counted as skipped.
    """
    if rng is None:
        rng = random.Random(0)
    steps = [(step.approximant, step.value) for step in approximation.steps]
    tested = passed = failed = skipped = 0

    special_checked = 0
    theta = ExtensionElement.theta(extension)
    for step in approximation.steps:
        element = theta - ExtensionElement.constant(extension, step.approximant)
        certified = taylor_valuation(element, steps)
        if certified != step.value:
            raise CoherenceError(
                "Taylor certification of v(θ − c) disagrees with the chain value"
            )
        difference = element.galois() - element
        if not (
            difference.coeffs[0] - HahnSeries.one(extension.p)
        ).is_exact_zero or any(c.terms for c in difference.coeffs[1:]):
            raise CoherenceError("σ(θ − c) − (θ − c) must equal 1 exactly")
        sample_value = Fraction(0) - step.value
        special_checked += 1
        tested += 1
        if jump.contains(sample_value):
            passed += 1
        else:
            failed += 1

    attempts = 0
    while tested < count + special_checked and attempts < 20 * max(count, 1):
        attempts += 1
        element = _random_extension_element(extension, rng)
        difference = element.galois() - element
        try:
            numerator = taylor_valuation(difference, steps)
            denominator = taylor_valuation(element, steps)
        except IndeterminateValuationError:
            skipped += 1
            continue
        if numerator is None or denominator is None:
            raise CoherenceError(
                "an element outside the base field gave an exactly zero sample"
            )
        tested += 1
        if jump.contains(numerator - denominator):
            passed += 1
        else:
            failed += 1

    return RamificationSampleReport(
        tested=tested,
        passed=passed,
        failed=failed,
        skipped=skipped,
        special_checked=special_checked,
    )


# -- the generator chain and its minimal polynomials ---------------------------------


@dataclass(frozen=True)
class ChainLink:
    """Transition between consecutive normalized generators.

    With ``x_i = t_i(θ − c_i)`` and ``t_i`` the monomial of value ``−v(θ−c_i)``,
    the exact identity ``x_i = ratio·x_{i+1} + offset`` holds with
    ``ratio = t_i/t_{i+1}`` of positive value and ``offset = t_i(c_{i+1}−c_i)``
    a unit, which is what makes the generated rings strictly grow."""

    lower_index: int
    upper_index: int
    ratio_value: Fraction
    offset_value: Fraction

    @property
    def strictly_smaller(self) -> bool:
        return self.ratio_value > 0 and self.offset_value == 0

    def as_dict(self) -> dict:
        return {
            "lower_index": self.lower_index,
            "upper_index": self.upper_index,
            "ratio_value": str(self.ratio_value),
            "offset_value": str(self.offset_value),
            "strictly_smaller": self.strictly_smaller,
        }


def generator_chain(
    extension: ArtinSchreierExtension, approximation: RootApproximation
) -> tuple[ChainLink, ...]:
    """Certify the strictly increasing chain of rings ``O_K[x_i]``.

    For each consecutive pair the transition identity is verified by exact
    extension-ring arithmetic, and its two value facts — ratio of positive
    value, offset a unit — are certified from the series."""
    steps = approximation.steps
    if len(steps) < 2:
        raise InsufficientDataError("a chain needs at least two approximation steps")
    base = extension.base
    theta = ExtensionElement.theta(extension)
    links = []
    for lower, upper in zip(steps, steps[1:]):
        t_lower = base.monomial(-lower.value)
        t_upper = base.monomial(-upper.value)
        ratio = t_lower * t_upper.invert()
        offset = t_lower * (upper.approximant - lower.approximant)
        ratio_value = ratio.exact_valuation()
        offset_value = offset.exact_valuation()
        if ratio_value != upper.value - lower.value:
            raise CoherenceError("transition ratio has an unexpected value")
        x_lower = (theta - ExtensionElement.constant(extension, lower.approximant)) * t_lower
        x_upper = (theta - ExtensionElement.constant(extension, upper.approximant)) * t_upper
        identity = x_lower - (x_upper * ratio + ExtensionElement.constant(extension, offset))
        if not identity.is_exact_zero:
            raise CoherenceError("transition identity between generators failed")
        links.append(
            ChainLink(
                lower_index=lower.index,
                upper_index=upper.index,
                ratio_value=ratio_value,
                offset_value=offset_value,
            )
        )
    return tuple(links)


@dataclass(frozen=True)
class MinimalPolynomial:
    """Minimal polynomial of a normalized generator ``x_c = t_c(θ − c)``.

    ``coefficients[k]`` multiplies ``X^k``; the polynomial is
    ``X^p − t_c^{p−1}·X − t_c^p·(rhs − (c^p − c))``.  Its derivative is the
    constant ``−t_c^{p−1}``, and the constant term is a unit — the two value
    facts the differential-module computation rests on."""

    step_index: int
    coefficients: tuple[HahnSeries, ...]
    derivative: HahnSeries
    derivative_value: Fraction
    constant_value: Fraction
    verified_root: bool

    def as_dict(self) -> dict:
        return {
            "step_index": self.step_index,
            "coefficients": [str(c) for c in self.coefficients],
            "derivative": str(self.derivative),
            "derivative_value": str(self.derivative_value),
            "constant_value": str(self.constant_value),
            "verified_root": self.verified_root,
        }


def generator_minimal_polynomial(
    extension: ArtinSchreierExtension, step: ApproximationStep
) -> MinimalPolynomial:
    """Minimal polynomial of the normalized generator at one chain step.

    The derivative value ``(p−1)·(−v(θ−c))`` and the unit constant term are
    certified from exact series arithmetic, and the generator is verified to
    be an exact root whenever the residual series is exact."""
    p = extension.p
    base = extension.base
    t = base.monomial(-step.value)
    t_power = t ** (p - 1)
    constant = -(t_power * t * step.residual)
    derivative = -t_power

    coefficients = [HahnSeries.zero(p) for _ in range(p + 1)]
    coefficients[0] = constant
    coefficients[1] = -t_power
    coefficients[p] = HahnSeries.one(p)

    derivative_value = derivative.exact_valuation()
    if derivative_value != (p - 1) * (-step.value):
        raise CoherenceError("derivative of the minimal polynomial has a wrong value")
    constant_value = constant.exact_valuation()
    if constant_value != 0:
        raise CoherenceError("constant term of the minimal polynomial is not a unit")

    theta = ExtensionElement.theta(extension)
    generator = (theta - ExtensionElement.constant(extension, step.approximant)) * t
    evaluated = ExtensionElement.zero(extension)
    power = ExtensionElement.constant(extension, HahnSeries.one(p))
    for coefficient in coefficients:
        evaluated = evaluated + power * coefficient
        power = power * generator
    verified = evaluated.is_exact_zero
    if step.residual.is_exact and not verified:
        raise CoherenceError("the normalized generator is not a root of its "
                             "minimal polynomial")
    return MinimalPolynomial(
        step_index=step.index,
        coefficients=tuple(coefficients),
        derivative=derivative,
        derivative_value=derivative_value,
        constant_value=constant_value,
        verified_root=verified,
    )
