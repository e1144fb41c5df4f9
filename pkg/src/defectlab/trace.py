"""Trace computations for the degree-p extension.

The trace of the generator's powers is pinned down exactly: ``Tr(θ^i) = 0``
for ``0 ≤ i ≤ p−2`` and ``Tr(θ^{p−1}) = −1``, so the trace of an arbitrary
element is the negative of its top coordinate.  Together with the residual
law this identifies the image of the maximal ideal under the trace map: it is
the set of base-field elements whose value lies in the (p−1)-fold
ramification jump.

:func:`trace_ideal` builds that ideal from the jump.  :func:`verify_trace_ideal`
tests both inclusions on an actual extension: random maximal-ideal elements
must have traces with values inside the ideal (membership direction), and for
prescribed values in the ideal an explicit preimage ``u·(θ−c)^{p−1}`` with
trace exactly ``−u`` is produced and checked by exact arithmetic
(surjectivity direction).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Optional

from .elements import ExtensionElement, taylor_valuation
from .errors import CoherenceError, IndeterminateValuationError
from .segments import FinalSegment, Ideal
from .series import AtLeast, HahnSeries

if TYPE_CHECKING:  # pragma: no cover - typing only
    from .artin_schreier import ArtinSchreierExtension, RootApproximation

__all__ = [
    "ExtensionElement",
    "TraceSampleReport",
    "element_valuation",
    "taylor_valuation",
    "trace_element",
    "trace_ideal",
    "verify_trace_ideal",
]


def trace_element(element: ExtensionElement) -> HahnSeries:
    """Trace of an extension element, cross-checked against the orbit sum."""
    return element.conjugate_trace()


def element_valuation(
    element: ExtensionElement, approximation: "RootApproximation"
) -> Optional[Fraction]:
    """Valuation of an extension element via the approximation chain."""
    steps = [(step.approximant, step.value) for step in approximation.steps]
    return taylor_valuation(element, steps)


def trace_ideal(jump: FinalSegment, p: int) -> Ideal:
    """The trace image of the maximal ideal, as an ideal of the base ring."""
    if not isinstance(p, int) or p < 2:
        raise ValueError("the degree must be a prime at least 2")
    return Ideal(jump.scale(p - 1))


@dataclass(frozen=True)
class TraceSampleReport:
    """Outcome of sampling both directions of the trace-ideal identity."""

    tested: int
    passed: int
    failed: int
    skipped: int
    zero_traces: int
    witnesses_checked: int
    witnesses_passed: int

    def as_dict(self) -> dict:
        return {
            "tested": self.tested,
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
            "zero_traces": self.zero_traces,
            "witnesses_checked": self.witnesses_checked,
            "witnesses_passed": self.witnesses_passed,
        }


def _random_series(extension: "ArtinSchreierExtension", rng: random.Random) -> HahnSeries:
    p = extension.p
    terms: dict[Fraction, int] = {}
    for _ in range(rng.randint(0, 2)):
        exponent = Fraction(rng.randint(-2, 3), p ** rng.randint(0, 3))
        terms[exponent] = terms.get(exponent, 0) + rng.randint(1, p - 1)
    return HahnSeries.make(p, terms)


def _random_element(
    extension: "ArtinSchreierExtension", rng: random.Random
) -> ExtensionElement:
    p = extension.p
    coeffs = [_random_series(extension, rng) for _ in range(p)]
    if rng.random() < 0.75:
        index = rng.randint(1, p - 1)
        if coeffs[index].is_exact_zero:
            coeffs[index] = extension.base.monomial(
                Fraction(rng.randint(-2, 3), p ** rng.randint(0, 3))
            )
    if all(c.is_exact_zero for c in coeffs):
        coeffs[0] = HahnSeries.one(p)
    return ExtensionElement(extension, tuple(coeffs))


def verify_trace_ideal(
    extension: "ArtinSchreierExtension",
    approximation: "RootApproximation",
    jump: FinalSegment,
    *,
    samples: int = 100,
    witnesses: int = 20,
    rng: Optional[random.Random] = None,
) -> TraceSampleReport:
    """Sample-test the trace-ideal identity on an actual extension.

    Membership direction: random elements are normalized into the maximal
    ideal of the extension ring; each trace must be zero or have value inside
    the (p−1)-fold jump.  Elements whose valuation the approximation chain
    cannot certify are counted as skipped, never as passes.

    Surjectivity direction: for values ``w`` in the (p−1)-fold jump, the
    element ``u·(θ−c_i)^{p−1}`` with ``v(u) = w`` and a deep enough step ``i``
    lies in the maximal ideal and has trace exactly ``−u``; both facts are
    checked by exact arithmetic.
    """
    if rng is None:
        rng = random.Random(0)
    p = extension.p
    ideal = trace_ideal(jump, p)
    steps = approximation.steps

    tested = passed = failed = skipped = zero_traces = 0
    for _ in range(samples):
        raw = _random_element(extension, rng)
        try:
            raw_value = element_valuation(raw, approximation)
        except IndeterminateValuationError:
            skipped += 1
            continue
        if raw_value is None:
            skipped += 1
            continue
        # Normalize into the maximal ideal at a varied positive value.
        target = Fraction(rng.randint(1, 2 * p), p ** rng.randint(0, 2))
        shifted = raw * extension.base.monomial(target - raw_value)
        tested += 1
        trace = shifted.conjugate_trace()
        if trace.is_exact_zero:
            zero_traces += 1
            passed += 1
            continue
        val = trace.valuation()
        if isinstance(val, AtLeast):
            tested -= 1
            skipped += 1
            continue
        if ideal.contains_value(val.value):
            passed += 1
        else:
            failed += 1

    witnesses_checked = witnesses_passed = 0
    witness_steps = [step for step in steps if step.index >= 1]
    if witness_steps and witnesses > 0:
        deepest = witness_steps[-1]
        floor_value = (p - 1) * (-deepest.value)
        for _ in range(witnesses):
            # A value safely inside the ideal: above the deepest stage value.
            w = floor_value + Fraction(rng.randint(1, 4 * p), p)
            step = next(
                s for s in reversed(witness_steps) if (p - 1) * (-s.value) < w
            )
            unit = rng.randint(1, p - 1)
            u = extension.base.monomial(w, unit)
            theta_shift = ExtensionElement.theta(extension) - ExtensionElement.constant(
                extension, step.approximant
            )
            candidate = (theta_shift ** (p - 1)) * u
            witnesses_checked += 1
            value = element_valuation(candidate, approximation)
            if value is None or value <= 0:
                raise CoherenceError(
                    "trace witness fell outside the maximal ideal"
                )
            if value != w + (p - 1) * step.value:
                raise CoherenceError(
                    "trace witness has an unexpected valuation"
                )
            trace = candidate.conjugate_trace()
            if (trace + u).is_exact_zero:
                witnesses_passed += 1

    return TraceSampleReport(
        tested=tested,
        passed=passed,
        failed=failed,
        skipped=skipped,
        zero_traces=zero_traces,
        witnesses_checked=witnesses_checked,
        witnesses_passed=witnesses_passed,
    )
