"""Mixed-characteristic analogue at the level of value groups."""

from __future__ import annotations

from fractions import Fraction

import pytest

from defectlab import (
    GroupMismatchError,
    InitialSegment,
    InvalidCharacteristicError,
    InvalidDistanceError,
    KummerData,
    cyclotomic_unit_value,
    empty_initial,
    from_pth_power_distance,
    independence_conditions,
    normalizer_value,
    parse_group,
    ramification_jump,
)


def F(n, d=1):
    return Fraction(n, d)


def _data(group_name, p, vp, distance_literal):
    group = parse_group(group_name)
    return KummerData(
        p=p,
        group=group,
        vp=group.element(vp),
        distance=InitialSegment.from_literal(group, distance_literal),
    )


# -- the cyclotomic reference value -------------------------------------------------------


def test_cyclotomic_value_exact():
    q = parse_group("Q")
    assert cyclotomic_unit_value(2, q.element(1)).coords == (F(1),)
    assert cyclotomic_unit_value(3, q.element(1)).coords == (F(1, 2),)
    assert cyclotomic_unit_value(5, q.element(1)).coords == (F(1, 4),)
    assert cyclotomic_unit_value(3, q.element("3/2")).coords == (F(3, 4),)


def test_cyclotomic_value_group_membership_flag():
    z3 = parse_group("Z[1/3]")
    val = cyclotomic_unit_value(3, z3.element(1))
    assert val.coords == (F(1, 2),)
    assert not val.in_group  # 1/2 is not 3-adically reachable in Z[1/3]
    assert val.element is None
    z2 = parse_group("Z[1/2]")
    val2 = cyclotomic_unit_value(3, z2.element(1))
    assert val2.in_group and val2.element is not None
    assert "1/2" in val.describe()


def test_cyclotomic_value_rank_two():
    qz3 = parse_group("QxZ[1/3]")
    val = cyclotomic_unit_value(3, qz3.element((0, 1)))
    assert val.coords == (F(0), F(1, 2))
    assert not val.in_group


# -- construction and validation ----------------------------------------------------------


def test_kummer_data_validation():
    with pytest.raises(InvalidCharacteristicError):
        _data("Q", 4, 1, "<1/2")  # degree must be prime
    with pytest.raises(InvalidCharacteristicError):
        _data("Q", 3, 0, "<1/2")  # v(p) must be positive
    with pytest.raises(InvalidCharacteristicError):
        _data("Q", 3, -1, "<1/2")
    with pytest.raises(InvalidDistanceError):
        _data("Q", 3, 1, "<1")  # reaches past the cyclotomic bound vp/(p−1)
    q = parse_group("Q")
    with pytest.raises(InvalidDistanceError):
        KummerData(3, q, q.element(1), empty_initial(q))
    other = parse_group("Z[1/2]")
    with pytest.raises(GroupMismatchError):
        KummerData(
            3,
            q,
            other.element(1),
            InitialSegment.from_literal(q, "<1/2"),
        )


def test_kummer_data_accepts_the_full_open_bound():
    data = _data("Q", 3, 1, "<1/2")
    assert data.cyclotomic.coords == (F(1, 2),)
    assert data.zero_in_distance
    narrow = _data("Q", 3, 1, "<1/3")
    assert narrow.zero_in_distance
    shifted = _data("Q", 3, 1, "<-2")
    assert not shifted.zero_in_distance


# -- jumps and verdicts --------------------------------------------------------------------


def test_ramification_jump_shapes():
    assert ramification_jump(_data("Q", 3, 1, "<1/2")).to_literal() == ">0"
    assert ramification_jump(_data("Q", 3, 1, "<1/3")).to_literal() == ">1/6"
    assert ramification_jump(_data("Q", 2, 1, "<1")).to_literal() == ">0"


def test_independence_verdicts_and_flags():
    report = independence_conditions(_data("Q", 3, 1, "<1/2"))
    assert report.report.independent
    assert report.vp_in_subgroup is False  # vp has nonzero leading coordinate
    assert report.zero_in_distance is True
    dependent = independence_conditions(_data("Q", 3, 1, "<1/3"))
    assert not dependent.report.independent
    assert dependent.vp_in_subgroup is None  # only meaningful for independent verdicts


def test_rank_two_independent_case_with_vp_inside_subgroup():
    report = independence_conditions(_data("QxZ[1/3]", 3, (0, 1), "<H1"))
    assert report.report.independent
    assert report.jump.to_literal() == ">H1"
    assert report.vp_in_subgroup is True
    assert report.zero_in_distance is False
    assert report.cyclotomic.coords == (F(0), F(1, 2))
    flags = report.as_dict()["realizability_flags"]
    assert flags == {"zero_in_distance": False, "vp_in_subgroup": True}


def test_report_dict_shape():
    data = independence_conditions(_data("Q", 2, 1, "<1")).as_dict()
    assert {"p", "group", "vp", "distance", "jump", "cyclotomic_value",
            "cyclotomic_in_group", "report", "realizability_flags"} <= set(data)
    assert data["jump"] == ">0"


# -- reconstruction from p-th power data ---------------------------------------------------


def test_from_pth_power_distance_round_trip():
    q = parse_group("Q")
    data = from_pth_power_distance(
        3, q, q.element(1), InitialSegment.from_literal(q, "<1")
    )
    assert data.distance.to_literal() == "<1/3"
    assert data.distance.scale(3).to_literal() == "<1"


def test_from_pth_power_distance_needs_divisible_shape():
    z = parse_group("Z")
    with pytest.raises(InvalidDistanceError):
        from_pth_power_distance(
            2, z, z.element(2), InitialSegment.from_literal(z, "<=1")
        )


# -- normalized witness values -------------------------------------------------------------


def test_normalizer_value_inside_distance():
    data = _data("Q", 3, 1, "<1/2")
    assert normalizer_value(data, "1/4") == (F(1, 4),)
    assert normalizer_value(data, 0) == (F(1, 2),)
    with pytest.raises(InvalidDistanceError):
        normalizer_value(data, "1/2")  # not strictly inside the cut
