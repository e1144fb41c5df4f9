"""Root approximation, cut detection, classification, and chain certificates."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from defectlab import (
    ArtinSchreierExtension,
    BaseField,
    CoherenceError,
    ExtensionElement,
    HahnSeries,
    InconclusiveCutError,
    InsufficientDataError,
    NotImmediateError,
    PrecisionError,
    RootInBaseFieldError,
    approximate_root,
    artin_schreier_map,
    classify_extension,
    detect_boundary,
    distance_and_jump,
    generator_chain,
    generator_minimal_polynomial,
    parse_group,
    sample_ramification_values,
    series_from_literal,
    taylor_valuation,
)

from conftest import abhyankar_field, abhyankar_rhs


def F(n, d=1):
    return Fraction(n, d)


def _abhyankar(p):
    return ArtinSchreierExtension(abhyankar_field(p), abhyankar_rhs(p))


# -- extension construction ---------------------------------------------------------------


def test_extension_validation():
    base = abhyankar_field(3)
    with pytest.raises(ValueError):
        ArtinSchreierExtension(base, HahnSeries.zero(3))
    with pytest.raises(Exception):
        ArtinSchreierExtension(base, series_from_literal(2, "t^-1"))  # p mismatch
    ext = _abhyankar(3)
    assert ext.p == 3
    assert ext.group.describe() == "Z[1/3]"
    assert "t^-1" in ext.describe()


# -- the solver’s terminating branches ----------------------------------------------------


@pytest.mark.parametrize("p", [2, 3])
def test_exact_root_in_base_field_is_reported(p):
    base = abhyankar_field(p)
    c = base.series("t^-1")
    rhs = artin_schreier_map(c)
    with pytest.raises(RootInBaseFieldError) as exc:
        approximate_root(ArtinSchreierExtension(base, rhs))
    assert exc.value.root is not None
    assert (artin_schreier_map(exc.value.root) - rhs).is_exact_zero


def test_henselian_branch_finds_deep_root():
    base = abhyankar_field(2)
    rhs = base.series("t")  # positive value: the equation splits over the henselization
    with pytest.raises(RootInBaseFieldError) as exc:
        approximate_root(ArtinSchreierExtension(base, rhs))
    root = exc.value.root
    assert root is not None
    residual = rhs - artin_schreier_map(root)
    # the geometric p-power sum kills the residual to astronomical order
    assert residual.exact_valuation() >= F(2) ** 64


def test_residue_obstruction_is_not_immediate():
    base = abhyankar_field(2)
    with pytest.raises(NotImmediateError):
        approximate_root(ArtinSchreierExtension(base, base.series("1")))
    base3 = abhyankar_field(3)
    with pytest.raises(NotImmediateError):
        approximate_root(ArtinSchreierExtension(base3, base3.series("1")))


def test_ramified_case_is_not_immediate():
    # Over a value group with no 2-divisibility the first step already needs
    # the exponent −1/2, so the extension visibly enlarges the value group.
    base = BaseField.make("truncated_hahn", 2, group=parse_group("Z"))
    with pytest.raises(NotImmediateError):
        approximate_root(ArtinSchreierExtension(base, base.series("t^-1")))


def test_truncated_data_exhausts_precision():
    base = BaseField.make("truncated_hahn", 2)
    rhs = base.series("t^-1 + O(t^-1/64)")
    approx = approximate_root(ArtinSchreierExtension(base, rhs), target=10)
    assert approx.outcome == "precision_exhausted"
    with pytest.raises(InconclusiveCutError) as exc:
        distance_and_jump(approx)
    low, high = exc.value.bracket
    assert high is None  # no certified upper end: the data ran out
    assert low == approx.deepest.value


# -- the defect tower ---------------------------------------------------------------------


@pytest.mark.parametrize("p", [2, 3])
def test_abhyankar_step_values_are_exact(p):
    approx = approximate_root(_abhyankar(p), target=8)
    assert approx.outcome == "target_reached"
    values = list(approx.values())
    assert values == [F(-1, p ** (i + 1)) for i in range(len(values))]
    # approximants accumulate one new monomial per step
    for i, step in enumerate(approx.steps):
        assert len(step.approximant.terms) == i
        assert step.residual_value == p * step.value


def test_approximation_values_strictly_increase():
    approx = approximate_root(_abhyankar(5), target=6)
    values = approx.values()
    assert all(a < b for a, b in zip(values, values[1:]))


def test_as_dict_shapes():
    approx = approximate_root(_abhyankar(2), target=4)
    data = approx.as_dict()
    assert data["outcome"] == "target_reached"
    assert data["steps"] == len(approx.steps)
    assert data["deepest_value"] == str(approx.deepest.value)
    assert data["target"] == 4


# -- boundary detection -------------------------------------------------------------------


def test_detect_boundary_converged():
    values = [F(-1, 2**k) for k in range(1, 9)]
    detection = detect_boundary(values, p=2, depth=4)
    assert detection.converged
    assert detection.boundary == F(0)
    assert detection.bracket == (F(-1, 256), F(0))


def test_detect_boundary_nonzero_cut():
    # values approaching −1 from below
    values = [F(-1) - F(1, 3**k) for k in range(1, 8)]
    detection = detect_boundary(values, p=3, depth=3)
    assert detection.converged
    assert detection.boundary == F(-1)


def test_detect_boundary_unconverged_has_no_upper_certificate():
    values = [F(-1, 2**k) for k in range(1, 4)]  # too few to stabilize at depth 8
    detection = detect_boundary(values, p=2, depth=8)
    assert not detection.converged
    assert detection.bracket == (values[-1], None)
    assert detection.as_dict()["bracket"] == [str(values[-1]), None]


def test_detect_boundary_input_validation():
    with pytest.raises(InsufficientDataError):
        detect_boundary([], p=2, depth=3)
    with pytest.raises(ValueError):
        detect_boundary([F(0), F(0)], p=2, depth=3)  # not strictly increasing
    with pytest.raises(ValueError):
        detect_boundary([F(0), F(1)], p=2, depth=0)
    with pytest.raises(ValueError):
        detect_boundary([F(0), F(1)], p=2, depth=3, runs=1)


def test_detect_boundary_rejects_values_at_or_above_candidate():
    # stabilized candidate must sit strictly above every sample
    values = [F(-1, 2), F(0)]
    detection = detect_boundary(values, p=2, depth=2, runs=2)
    assert not detection.converged


# -- end-to-end classification ------------------------------------------------------------


@pytest.mark.parametrize("p", [2, 3, 5])
def test_classification_of_the_standard_tower(p):
    result = classify_extension(_abhyankar(p))
    report = result.report
    assert report.independent
    assert report.jump.to_literal() == ">0"
    assert report.distance.to_literal() == "<0"
    assert report.subgroup is not None and report.subgroup.level == 1
    assert report.conditions.all_equivalent
    assert report.ideal_idempotent
    assert report.omega.is_zero
    assert report.trace.to_literal() == ">0"
    assert result.detection.converged
    assert result.residual_detection.converged
    assert result.residual_detection.boundary == p * result.detection.boundary


def test_classification_report_dict_keys():
    result = classify_extension(_abhyankar(2), target=6)
    data = result.as_dict()
    assert {"extension", "approximation", "detection", "residual_detection", "report"} <= set(data)
    rep = data["report"]
    assert rep["independent"] is True
    assert rep["jump"] == ">0"
    assert rep["trace_ideal"] == ">0"
    assert rep["subgroup"] == "{0}"
    assert rep["omega"]["is_zero"] is True
    assert data["detection"]["converged"] is True


def test_laurent_base_classifies_identically():
    base = BaseField.make("perfect_hull_laurent", 2)
    ext = ArtinSchreierExtension(base, base.series("t^-3"))
    result = classify_extension(ext)
    assert result.report.independent
    assert result.report.jump.to_literal() == ">0"


# -- ramification sampling ----------------------------------------------------------------


def test_sample_ramification_values_all_pass():
    ext = _abhyankar(3)
    result = classify_extension(ext)
    report = sample_ramification_values(
        ext,
        result.approximation,
        result.report.jump,
        count=60,
        rng=random.Random(7),
    )
    assert report.failed == 0
    assert report.tested >= 60
    assert report.special_checked == len(result.approximation.steps)
    assert report.skipped <= report.tested


def test_sampling_is_deterministic_for_a_seed():
    ext = _abhyankar(2)
    result = classify_extension(ext, target=8)
    runs = [
        sample_ramification_values(
            ext, result.approximation, result.report.jump, count=25,
            rng=random.Random(11),
        ).as_dict()
        for _ in range(2)
    ]
    assert runs[0] == runs[1]


# -- generator chain and minimal polynomials ----------------------------------------------


@pytest.mark.parametrize("p", [2, 3])
def test_generator_chain_certifies_unit_transitions(p):
    ext = _abhyankar(p)
    approx = approximate_root(ext, target=7)
    links = generator_chain(ext, approx)
    assert len(links) == len(approx.steps) - 1
    for i, link in enumerate(links):
        assert link.lower_index == i and link.upper_index == i + 1
        assert link.strictly_smaller
        assert link.ratio_value == approx.steps[i + 1].value - approx.steps[i].value
        assert link.ratio_value > 0
        assert link.offset_value == 0  # the transition offset is a unit


def test_minimal_polynomial_certificate():
    ext = _abhyankar(3)
    approx = approximate_root(ext, target=6)
    for step in approx.steps:
        poly = generator_minimal_polynomial(ext, step)
        assert poly.verified_root
        assert poly.derivative_value == (3 - 1) * -step.value
        assert poly.constant_value == 0  # unit constant term
        # derivative is exactly −t^{p−1}
        t_power = ext.base.monomial(-step.value) ** 2
        assert poly.derivative == -t_power


def test_minimal_polynomial_horner_evaluation_vanishes():
    ext = _abhyankar(2)
    approx = approximate_root(ext, target=5)
    step = approx.steps[-1]
    poly = generator_minimal_polynomial(ext, step)
    # rebuild g(x_c) by hand inside the extension and check exact vanishing
    t_c = ext.base.monomial(-step.value)
    x_c = (ExtensionElement.theta(ext) - ExtensionElement.constant(ext, step.approximant)) * ExtensionElement.constant(ext, t_c)
    total = ExtensionElement.zero(ext)
    for coeff in reversed(poly.coefficients):
        total = total * x_c + ExtensionElement.constant(ext, coeff)
    assert total.is_exact_zero


# -- independent recomputation of the residual law ----------------------------------------


@pytest.mark.parametrize("p", [2, 3])
def test_residual_law_via_taylor_certificates(p):
    ext = _abhyankar(p)
    approx = approximate_root(ext, target=7)
    steps = [(s.approximant, s.value) for s in approx.steps]
    theta = ExtensionElement.theta(ext)
    for s in approx.steps:
        fresh_residual = ext.rhs - artin_schreier_map(s.approximant)
        lhs = fresh_residual.exact_valuation()
        diff = theta - ExtensionElement.constant(ext, s.approximant)
        rhs_value = taylor_valuation(diff, steps)
        assert lhs == p * rhs_value
