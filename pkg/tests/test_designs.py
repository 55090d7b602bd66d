import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from macc import (
    Design,
    PointBudgetError,
    block_cover_check,
    construct_mcrd,
    point_at,
    verify_mcrd,
)

# Block lists of the published small constructions, frozen verbatim.
KNOWN_CONSTRUCTIONS = {
    (3, 2, 1): [
        [[1, 2, 3, 4], [5, 6, 7, 8]],
        [[1, 2, 5, 6], [3, 4, 7, 8]],
        [[1, 3, 5, 7], [2, 4, 6, 8]],
    ],
    (4, 2, 1): [
        [[1, 2, 3, 4, 5, 6, 7, 8], [9, 10, 11, 12, 13, 14, 15, 16]],
        [[1, 2, 3, 4, 9, 10, 11, 12], [5, 6, 7, 8, 13, 14, 15, 16]],
        [[1, 2, 5, 6, 9, 10, 13, 14], [3, 4, 7, 8, 11, 12, 15, 16]],
        [[1, 3, 5, 7, 9, 11, 13, 15], [2, 4, 6, 8, 10, 12, 14, 16]],
    ],
    (3, 3, 1): [
        [
            [1, 2, 3, 4, 5, 6, 7, 8, 9],
            [10, 11, 12, 13, 14, 15, 16, 17, 18],
            [19, 20, 21, 22, 23, 24, 25, 26, 27],
        ],
        [
            [1, 2, 3, 10, 11, 12, 19, 20, 21],
            [4, 5, 6, 13, 14, 15, 22, 23, 24],
            [7, 8, 9, 16, 17, 18, 25, 26, 27],
        ],
        [
            [1, 4, 7, 10, 13, 16, 19, 22, 25],
            [2, 5, 8, 11, 14, 17, 20, 23, 26],
            [3, 6, 9, 12, 15, 18, 21, 24, 27],
        ],
    ],
    (2, 4, 1): [
        [[1, 2, 3, 4], [5, 6, 7, 8], [9, 10, 11, 12], [13, 14, 15, 16]],
        [[1, 5, 9, 13], [2, 6, 10, 14], [3, 7, 11, 15], [4, 8, 12, 16]],
    ],
    (3, 2, 2): [
        [[1, 2, 3, 4, 5, 6, 7, 8], [9, 10, 11, 12, 13, 14, 15, 16]],
        [[1, 2, 3, 4, 9, 10, 11, 12], [5, 6, 7, 8, 13, 14, 15, 16]],
        [[1, 2, 5, 6, 9, 10, 13, 14], [3, 4, 7, 8, 11, 12, 15, 16]],
    ],
}


@pytest.mark.parametrize("key", sorted(KNOWN_CONSTRUCTIONS))
def test_construct_matches_known_block_lists(key):
    m, b, mu = key
    design = construct_mcrd(m, b, mu)
    expected = KNOWN_CONSTRUCTIONS[key]
    got = [[list(blk) for blk in cls] for cls in design.blocks]
    assert got == expected
    report = verify_mcrd(design)
    assert report.passed and report.measured_mu == mu


def test_trivial_design():
    design = construct_mcrd(1, 1, 1)
    assert design.blocks == (((1,),),)
    assert verify_mcrd(design).passed


def test_mu3_equals_2_design_shape():
    design = construct_mcrd(3, 2, 2)
    assert design.num_points == 16
    assert all(len(blk) == 8 for cls in design.blocks for blk in cls)
    report = verify_mcrd(design)
    assert report.passed and report.measured_mu == 2


def test_verify_rejects_nonconstant_intersections():
    # resolvable but with cross intersections of several sizes
    bad = Design.from_blocks(
        [
            [[1, 2, 3, 4], [5, 6, 7, 8], [9, 10, 11, 12], [13, 14, 15, 16]],
            [[1, 2, 9, 13], [5, 6, 10, 14], [3, 7, 11, 15], [4, 8, 12, 16]],
        ],
        mu=1,
    )
    report = verify_mcrd(bad)
    assert not report.passed
    assert report.measured_mu is None
    assert {0, 2} <= set(report.intersection_sizes)
    assert all(report.classes_partition)


def test_verify_reports_partition_failure():
    broken = Design.from_blocks([[[1, 2], [2, 3]], [[1, 3], [2, 4]]], mu=1)
    report = verify_mcrd(broken)
    assert not report.passed
    assert not all(report.classes_partition)


def test_point_at_examples():
    d = construct_mcrd(2, 4, 1)
    assert point_at(d, (1, 1)) == (1,)
    # independent of the constructor: intersect the published blocks directly
    assert set(point_at(d, (2, 3))) == set([5, 6, 7, 8]) & set([3, 7, 11, 15])
    d1 = construct_mcrd(1, 3, 1)
    assert point_at(d1, (2,)) == d1.block(1, 2)


def test_point_at_rejects_bad_coords():
    d = construct_mcrd(2, 4, 1)
    with pytest.raises(ValueError):
        point_at(d, (1,))
    with pytest.raises(ValueError):
        point_at(d, (0, 1))
    with pytest.raises(ValueError):
        point_at(d, (1, 5))


def test_block_cover_examples():
    assert block_cover_check(construct_mcrd(2, 4, 1), 1, 1)
    assert block_cover_check(construct_mcrd(3, 3, 1), 1, 1)
    d1 = construct_mcrd(1, 4, 1)
    assert all(block_cover_check(d1, 1, j) for j in range(1, 5))


def test_argument_and_budget_errors():
    for bad in [(0, 2, 1), (2, 0, 1), (2, 2, 0), (-1, 2, 1)]:
        with pytest.raises(ValueError):
            construct_mcrd(*bad)
    with pytest.raises(PointBudgetError):
        construct_mcrd(2, 1000, 10, point_budget=10**6)


def test_json_round_trip():
    d = construct_mcrd(3, 3, 1)
    again = Design.from_json_dict(d.to_json_dict())
    assert again == d


@settings(max_examples=60, deadline=None)
@given(
    m=st.integers(1, 3),
    b=st.integers(1, 4),
    mu=st.integers(1, 2),
)
def test_constructed_designs_always_verify(m, b, mu):
    design = construct_mcrd(m, b, mu)
    assert design.num_points == mu * b**m
    assert all(len(blk) == mu * b ** (m - 1) for cls in design.blocks for blk in cls)
    report = verify_mcrd(design)
    assert report.passed
    assert report.measured_mu == mu
    assert all(
        block_cover_check(design, i, j)
        for i in range(1, m + 1)
        for j in range(1, b + 1)
    )
