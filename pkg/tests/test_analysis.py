from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from macc import (
    ApplicabilityError,
    RatePoint,
    achievable_rate,
    comparison_checks,
    comparison_table,
    corner_points,
    envelope,
    our_envelope,
    rival_envelope,
    rival_rate,
    rival_subpacketization,
)
from macc.analysis import log10_of, rows_to_csv, sr1_lower_bound

F = Fraction


def test_corner_points_k100():
    pts = {(p.memory, p.rate) for p in corner_points(100, 5)}
    for expected in [(F(0), F(100)), (F(1, 50), F(45)), (F(1, 25), F(20)),
                     (F(1, 20), F(15)), (F(1, 10), F(5)), (F(1, 5), F(0))]:
        assert expected in pts


def test_corner_points_k8():
    pts = {(p.memory, p.rate) for p in corner_points(8, 2)}
    assert (F(1, 4), F(2)) in pts


def test_corner_point_full_access():
    pts = {(p.memory, p.rate) for p in corner_points(6, 6)}
    assert (F(1, 6), F(0)) in pts


def test_envelope_vertices_k100():
    curve = our_envelope(100, 5)
    assert curve.vertices() == [
        (F(0), F(100)),
        (F(1, 50), F(45)),
        (F(1, 25), F(20)),
        (F(1, 20), F(15)),
        (F(1, 10), F(5)),
        (F(1, 5), F(0)),
    ]


def test_envelope_table_values():
    curve = our_envelope(100, 5)
    grid = [F("0.16"), F("0.17"), F("0.18"), F("0.19"), F("0.2")]
    assert [curve.rate_at(x) for x in grid] == [F(2), F(3, 2), F(1), F(1, 2), F(0)]
    # a corner evaluates to its own rate
    assert curve.rate_at(F(1, 20)) == 15


def test_envelope_drops_dominated_and_collinear():
    pts = [
        RatePoint(F(0), F(10), "x"),
        RatePoint(F(1, 4), F(4), "x"),
        RatePoint(F(1, 4), F(6), "x"),      # duplicate memory, higher rate
        RatePoint(F(1, 8), F(7), "x"),      # collinear between (0,10) and (1/4,4)
        RatePoint(F(3, 8), F(5), "x"),      # above the hull
        RatePoint(F(3, 8), F(2), "x"),
        RatePoint(F(1, 2), F(3, 2), "x"),
    ]
    curve = envelope(pts)
    assert [(p.memory, p.rate) for p in curve.points] == [
        (F(0), F(10)),
        (F(1, 4), F(4)),
        (F(3, 8), F(2)),
        (F(1, 2), F(3, 2)),
    ]


def test_rival_rate_rk():
    assert rival_rate("RK", 100, 5, 16) == 4
    assert rival_rate("RK", 100, 5, 17) == F(9, 4)
    assert rival_rate("RK", 100, 5, 20) == 0
    with pytest.raises(ApplicabilityError):
        rival_rate("RK", 100, 5, 21)


def test_rival_rate_nt():
    assert rival_rate("NT", 100, 5, 10) == F(50, 11)
    with pytest.raises(ApplicabilityError):
        rival_rate("NT", 100, 5, 0)


def test_rival_rate_sr1():
    assert rival_rate("SR1", 100, 5, 7) == 32
    assert rival_rate("SR1", 100, 5, 1) == F(95, 2)
    with pytest.raises(ApplicabilityError):
        rival_rate("SR1", 100, 5, 16)  # gcd(16,100) != 1


def test_sr1_lower_bound_holds():
    for tpp in [1, 3, 7, 9, 11, 13, 17, 19]:
        g = 100 - tpp * 5
        if g > 1:
            assert rival_rate("SR1", 100, 5, tpp) >= sr1_lower_bound(100, 5, tpp)


def test_rival_rate_sr2():
    assert rival_rate("SR2", 120, 5, 15) == F(45, 4)
    with pytest.raises(ApplicabilityError) as err:
        rival_rate("SR2", 100, 5, 16)
    assert "dividing" in str(err.value)


def test_rival_rate_mr():
    assert rival_rate("MR", 100, 5, 1) == F(95, 2)
    with pytest.raises(ApplicabilityError):
        rival_rate("MR", 100, 5, 2)


def test_rival_rate_unknown_scheme():
    with pytest.raises(ApplicabilityError):
        rival_rate("SPE", 100, 5, 2)


def test_rival_subpacketization():
    assert rival_subpacketization("ours", 100, 5, 10) == 10**10
    assert rival_subpacketization("SR2", 100, 5, 20) == 100
    assert rival_subpacketization("MR", 100, 5, 1) == 100
    assert rival_subpacketization("SPE", 100, 5, 2) == 2300
    assert rival_subpacketization("RK", 100, 5, 1) == 100
    assert rival_subpacketization("SICPS", 100, 5, 1) == 100
    nt = rival_subpacketization("NT", 100, 5, 10)
    assert nt == 100 * comb(60, 10)
    assert abs(log10_of(nt) - 12.8) < 0.1
    assert rival_subpacketization("SR1", 100, 5, 7) == (100, 10000)


def test_rk_subpacketization_fraction_when_tp_misses_k():
    val = rival_subpacketization("RK", 100, 5, 7)
    assert val == F(100, 7) * comb(100 - 35 + 6, 6)


def test_check_rk_rate():
    chk = comparison_checks(100, 5, m=2, b=50, t=1)["rk_rate"]
    assert chk.applicable and chk.satisfied
    assert chk.ours == 45 and chk.rival == 81
    assert chk.confirmed


def test_check_subpacketization():
    chk = comparison_checks(100, 5, m=4, b=25)["subpacketization"]
    assert chk.applicable and chk.satisfied
    assert chk.ours == 25**4
    assert chk.confirmed


def test_check_sr1_rate_published_pair():
    chk = comparison_checks(100, 5, tpp=7, sr1_pair=(4, 10))["sr1_rate"]
    assert chk.applicable and chk.satisfied
    assert chk.ours == F(25, 2)
    assert chk.rival == 32
    assert chk.confirmed


def test_check_sr1_rate_best_pair_search():
    chk = comparison_checks(100, 5, tpp=7)["sr1_rate"]
    assert chk.applicable and chk.satisfied and chk.confirmed
    # the search finds the (m1=5, m2=10) chord, below the published pair's 12.5
    assert chk.ours == 11


def test_check_sr1_not_applicable_on_gcd():
    chk = comparison_checks(100, 5, tpp=16)["sr1_rate"]
    assert not chk.applicable


def test_check_sr2_rate_published_example():
    chk = comparison_checks(120, 5, m=5, b=24, t=3)["sr2_rate"]
    assert chk.applicable and chk.satisfied
    assert chk.ours == 9 and chk.rival == F(45, 4)
    assert chk.confirmed


def test_check_mr_rate():
    not_app = comparison_checks(100, 5, m=2, b=50)["mr_rate"]
    assert not not_app.applicable
    chk = comparison_checks(100, 5, m=4, b=25)["mr_rate"]
    assert chk.applicable and chk.confirmed
    assert chk.ours == 20 and chk.rival == 40


def test_sr2_envelope_is_straight_line_for_k100():
    # no interior corner applies, so the curve joins (0,100) and (1/5,0)
    curve = rival_envelope("SR2", 100, 5)
    assert curve.vertices() == [(F(0), F(100)), (F(1, 5), F(0))]


def test_comparison_table_values():
    grid = [F("0.16"), F("0.17"), F("0.18"), F("0.19"), F("0.2")]
    rows = comparison_table(100, 5, grid)
    ours = {r.memory: r.rate for r in rows if r.scheme == "ours"}
    rk = {r.memory: r.rate for r in rows if r.scheme == "RK"}
    sr1 = {r.memory: r.rate for r in rows if r.scheme == "SR1"}
    assert [ours[x] for x in grid] == [F(2), F(3, 2), F(1), F(1, 2), F(0)]
    assert [rk[x] for x in grid] == [F(4), F(9, 4), F(1), F(1, 4), F(0)]
    published = [3.4965, 1.6953, 0.9528, 0.2103, 0.0]
    for x, want in zip(grid, published):
        assert abs(float(sr1[x]) - want) < 1e-3


def test_comparison_table_subpacketization_column():
    rows = comparison_table(100, 5, [F(1, 10)])
    by_scheme = {r.scheme: r for r in rows}
    assert by_scheme["ours"].subpacketization == 10**10
    assert by_scheme["ours"].kind == "corner"
    assert by_scheme["NT"].subpacketization == 100 * comb(60, 10)
    assert by_scheme["SPE"].rate is None and by_scheme["SPE"].kind == "external"
    assert by_scheme["SR2"].subpacketization is None  # t''=10: 60 does not divide 100


def test_comparison_table_zero_memory():
    rows = comparison_table(100, 5, [F(0)])
    for r in rows:
        if r.scheme not in ("SPE", "SICPS"):
            assert r.rate == 100


def test_comparison_table_empty_grid_and_csv():
    rows = comparison_table(100, 5, [])
    assert rows == []
    assert rows_to_csv(rows) == "mn_num,mn_den,scheme,rate,log10_subpacketization\n"


def test_csv_shape():
    rows = comparison_table(8, 2, [F(1, 4)])
    text = rows_to_csv(rows)
    lines = text.strip().split("\n")
    assert lines[0] == "mn_num,mn_den,scheme,rate,log10_subpacketization"
    assert len(lines) == 1 + 8
    ours = next(l for l in lines if ",ours," in l)
    assert ours.startswith("1,4,ours,2.000000,")


def test_log10_of_big_values():
    assert abs(log10_of(10**400) - 400.0) < 1e-9
    assert abs(log10_of(F(10**50, 10**20)) - 30.0) < 1e-9


@settings(max_examples=50, deadline=None)
@given(data=st.data())
def test_envelope_properties(data):
    n = data.draw(st.integers(1, 12))
    raw = data.draw(
        st.lists(
            st.tuples(st.fractions(0, 1), st.fractions(0, 100)),
            min_size=n,
            max_size=n,
        )
    )
    pts = [RatePoint(mem, rate, "x") for mem, rate in raw]
    curve = envelope(pts)
    xs = [p.memory for p in curve.points]
    assert xs == sorted(set(xs))
    # convex: slopes non-decreasing; every input point sits on or above the curve
    slopes = [
        (curve.points[i + 1].rate - curve.points[i].rate)
        / (curve.points[i + 1].memory - curve.points[i].memory)
        for i in range(len(curve.points) - 1)
    ]
    assert all(s1 < s2 for s1, s2 in zip(slopes, slopes[1:]))
    for p in pts:
        if p.memory <= curve.points[-1].memory:
            assert curve.rate_at(p.memory) <= p.rate


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_three_way_rate_agreement(data):
    # formula rate == corner-point rate used by the envelope, over a small grid
    k = data.draw(st.sampled_from([4, 6, 8, 12]))
    z = data.draw(st.integers(1, 3))
    pts = corner_points(k, z)
    for p in pts:
        if p.params and p.params[0][0] == "m":
            keys = dict(p.params)
            assert achievable_rate(keys["b"], keys["m"], z, keys["t"]) == p.rate


def test_simulated_rate_meets_envelope_corner(example_a):
    # measured rate == closed form == the envelope corner at the same memory
    from macc import simulate

    design, top, params = example_a
    report = simulate(design, top, params)
    assert report.rate == achievable_rate(4, 2, 2, 1) == our_envelope(8, 2).rate_at(F(1, 4))


def test_checks_never_contradict_direct_comparison():
    # whenever a claim is applicable and its threshold holds, the direct
    # numeric comparison must agree, over a broad parameter sweep
    for k in (12, 24, 36, 60, 100):
        for z in (2, 3, 5):
            for m in [d for d in range(1, k + 1) if k % d == 0]:
                b = k // m
                if b < z:
                    continue
                for t in range(1, b // z + 1):
                    for chk in comparison_checks(k, z, m=m, b=b, t=t).values():
                        if chk.applicable and chk.satisfied:
                            assert chk.confirmed, (k, z, m, b, t, chk)
            for tpp in range(1, k // z + 1):
                chk = comparison_checks(k, z, tpp=tpp)["sr1_rate"]
                if chk.applicable and chk.satisfied:
                    assert chk.confirmed, (k, z, tpp, chk)
