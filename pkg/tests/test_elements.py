"""Arithmetic in the degree-p extension: reduction, automorphism, trace, Taylor data."""

from __future__ import annotations

from fractions import Fraction

import pytest

from defectlab import (
    ArtinSchreierExtension,
    ExtensionElement,
    HahnSeries,
    IndeterminateValuationError,
    approximate_root,
    taylor_valuation,
)

from conftest import abhyankar_field, abhyankar_rhs


def F(n, d=1):
    return Fraction(n, d)


@pytest.fixture(scope="module")
def ext3():
    return ArtinSchreierExtension(abhyankar_field(3), abhyankar_rhs(3))


@pytest.fixture(scope="module")
def approx3(ext3):
    return approximate_root(ext3, target=6)


def test_theta_power_reduction(ext3):
    theta = ExtensionElement.theta(ext3)
    a = ExtensionElement.constant(ext3, ext3.rhs)
    # The defining relation: θ^p equals θ + a.
    assert (theta**3 - (theta + a)).is_exact_zero
    # Degrees stay below p after any product.
    sq = theta * theta
    assert len(sq.coeffs) == 3


def test_galois_automorphism_order(ext3):
    theta = ExtensionElement.theta(ext3)
    one = ExtensionElement.constant(ext3, HahnSeries.one(3))
    assert (theta.galois() - (theta + one)).is_exact_zero
    # σ^p is the identity.
    assert (theta.galois(3) - theta).is_exact_zero
    x = theta * theta + theta
    assert (x.galois(1).galois(2) - x.galois(3)).is_exact_zero


def test_galois_fixes_base_field(ext3):
    c = ExtensionElement.constant(ext3, ext3.base.series("t^-1 + 1"))
    assert (c.galois() - c).is_exact_zero


def test_trace_table(ext3):
    theta = ExtensionElement.theta(ext3)
    one = ExtensionElement.constant(ext3, HahnSeries.one(3))
    # Tr(1) = p·1 = 0, Tr(θ^i) = 0 for 0 < i < p−1, Tr(θ^{p−1}) = −1.
    assert one.trace().is_exact_zero
    assert theta.trace().is_exact_zero
    assert (theta * theta).trace() == HahnSeries.make(3, [(F(0), -1)])


def test_conjugate_trace_matches_power_sum_formula(ext3):
    theta = ExtensionElement.theta(ext3)
    u = ExtensionElement.constant(ext3, ext3.base.series("t^-2 + t^1"))
    x = u * theta * theta + theta
    assert x.conjugate_trace() == x.trace()


def test_trace_is_linear_over_base(ext3):
    theta = ExtensionElement.theta(ext3)
    u = ExtensionElement.constant(ext3, ext3.base.series("t^-1"))
    x = theta * theta
    assert (u * x).trace() == ext3.base.series("t^-1") * x.trace() * HahnSeries.one(
        3
    )


def test_taylor_coefficients_reconstruct(ext3):
    theta = ExtensionElement.theta(ext3)
    center = ext3.base.series("t^-1/3 + 2")
    x = theta * theta + ExtensionElement.constant(ext3, ext3.base.series("t^-5")) * theta
    coeffs = x.taylor_coefficients(center)
    shifted = ExtensionElement.theta(ext3) - ExtensionElement.constant(ext3, center)
    rebuilt = ExtensionElement.zero(ext3)
    power = ExtensionElement.constant(ext3, HahnSeries.one(3))
    for d in coeffs:
        rebuilt = rebuilt + ExtensionElement.constant(ext3, d) * power
        power = power * shifted
    assert (rebuilt - x).is_exact_zero


def test_taylor_valuation_on_solver_steps(ext3, approx3):
    steps = [(s.approximant, s.value) for s in approx3.steps]
    theta = ExtensionElement.theta(ext3)
    for s in approx3.steps:
        diff = theta - ExtensionElement.constant(ext3, s.approximant)
        assert taylor_valuation(diff, steps) == s.value
    # A base-field constant has its series valuation.
    c = ExtensionElement.constant(ext3, ext3.base.series("t^2"))
    assert taylor_valuation(c, steps) == F(2)
    assert taylor_valuation(ExtensionElement.zero(ext3), steps) is None


def test_taylor_valuation_detects_ties():
    ext = ArtinSchreierExtension(abhyankar_field(2), abhyankar_rhs(2))
    theta = ExtensionElement.theta(ext)
    # One approximation step at value −1/2; the element θ + t^{−1/2} has both
    # Taylor candidates land on −1/2, so no certificate exists at this depth.
    tie = theta + ExtensionElement.constant(ext, ext.base.series("t^-1/2"))
    steps = [(HahnSeries.zero(2), F(-1, 2))]
    with pytest.raises(IndeterminateValuationError):
        taylor_valuation(tie, steps)


def test_deeper_steps_resolve_the_tie(ext3):
    # With several distinct-value steps, generic elements certify fine.
    approx = approximate_root(ext3, target=5)
    steps = [(s.approximant, s.value) for s in approx.steps]
    theta = ExtensionElement.theta(ext3)
    x = theta + ExtensionElement.constant(ext3, ext3.base.series("t^-2"))
    assert taylor_valuation(x, steps) == F(-2)
