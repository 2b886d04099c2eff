"""Consensus metrics: frozen oracle values, property tests, and reports.

Expected values were computed by hand from the closed-form definitions:
gini(4,10) = 1 - (4/14)^2 - (10/14)^2 = 20/49 = 0.40816326...
weighted over [(16,0),(4,10)] = (0*16 + (20/49)*14) / 30 = 4/21 = 0.19047619...
"""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from agorum import analytics
from agorum.analytics import PolicyVoteCount, gini, majority_supported, percent_half_up, weighted_gini
from agorum.errors import NoVotes


def test_gini_unanimous_is_zero():
    assert gini(16, 0) == 0.0
    assert gini(0, 7) == 0.0


def test_gini_even_split_is_half():
    assert gini(5, 5) == 0.5
    assert gini(1, 1) == 0.5


def test_gini_four_up_ten_down():
    assert gini(4, 10) == pytest.approx(20 / 49, abs=1e-12)
    assert gini(4, 10) == pytest.approx(0.408163, abs=1e-6)


def test_gini_without_votes_raises():
    with pytest.raises(NoVotes):
        gini(0, 0)


@given(st.integers(0, 60), st.integers(0, 60))
def test_gini_symmetry_and_bounds(a, b):
    if a + b == 0:
        return
    value = gini(a, b)
    assert value == gini(b, a)
    assert 0.0 <= value <= 0.5
    if a == b:
        assert value == 0.5


@given(st.integers(1, 40), st.integers(0, 40), st.integers(0, 40))
def test_gini_strictly_decreasing_in_margin_for_fixed_total(total, a1, a2):
    # Compare two splits of the same total: the more lopsided one is lower.
    a1, a2 = a1 % (total + 1), a2 % (total + 1)
    m1, m2 = abs(2 * a1 - total), abs(2 * a2 - total)
    g1, g2 = gini(a1, total - a1), gini(a2, total - a2)
    if m1 > m2:
        assert g1 < g2
    elif m1 == m2:
        assert g1 == pytest.approx(g2, abs=1e-12)


def test_weighted_gini_single_policy_equals_gini():
    assert weighted_gini([PolicyVoteCount("p", 4, 10)]) == gini(4, 10)


def test_weighted_gini_hand_computed_pair():
    counts = [PolicyVoteCount("a", 16, 0), PolicyVoteCount("b", 4, 10)]
    assert weighted_gini(counts) == pytest.approx(float(Fraction(4, 21)), abs=1e-12)
    assert weighted_gini(counts) == pytest.approx(0.19048, abs=1e-5)


def test_weighted_gini_excludes_zero_vote_policies():
    counts = [PolicyVoteCount("a", 5, 5), PolicyVoteCount("b", 0, 0)]
    assert weighted_gini(counts) == 0.5
    with pytest.raises(NoVotes):
        weighted_gini([PolicyVoteCount("a", 0, 0)])


@given(st.lists(st.tuples(st.integers(0, 20), st.integers(0, 20)), min_size=1, max_size=8))
def test_weighted_gini_bracketed_by_member_ginis(pairs):
    counts = [PolicyVoteCount(f"p{i}", a, b) for i, (a, b) in enumerate(pairs)]
    voted = [c for c in counts if c.total > 0]
    if not voted:
        return
    ginis = [gini(c.v_u, c.v_d) for c in voted]
    value = weighted_gini(counts)
    assert min(ginis) - 1e-12 <= value <= max(ginis) + 1e-12


def test_majority_support_published_examples():
    assert majority_supported(PolicyVoteCount("p", 18, 1), 20) is True  # 17 > 10
    assert majority_supported(PolicyVoteCount("p", 4, 13), 20) is False
    assert majority_supported(PolicyVoteCount("p", 16, 0), 22) is True


def test_majority_support_odd_roster_boundary():
    # 6 - 0 = 6 > 5.5; an exact-rational comparison, not integer division.
    assert majority_supported(PolicyVoteCount("p", 6, 0), 11) is True
    assert majority_supported(PolicyVoteCount("p", 5, 0), 11) is False
    # Brute-force the inequality over a grid as an independent check.
    for n in range(1, 12):
        for up in range(8):
            for down in range(8):
                expected = (up - down) > n / 2
                assert majority_supported(PolicyVoteCount("p", up, down), n) == expected


@given(st.integers(1, 30), st.integers(0, 15), st.integers(0, 15))
def test_majority_support_monotonicity(n, up, down):
    base = majority_supported(PolicyVoteCount("p", up, down), n)
    if base:
        assert majority_supported(PolicyVoteCount("p", up + 1, down), n)
    if not base:
        assert not majority_supported(PolicyVoteCount("p", up, down + 1), n)


@pytest.mark.parametrize(
    "majority,total,expected",
    [(14, 19, 74), (7, 31, 23), (7, 19, 37), (8, 11, 73)],
)
def test_percent_half_up_published_rows(majority, total, expected):
    assert percent_half_up(majority, total) == expected


def test_percent_half_up_exact_halves_round_up():
    assert percent_half_up(1, 8) == 13  # 12.5 -> 13
    assert percent_half_up(3, 8) == 38  # 37.5 -> 38
    assert percent_half_up(1, 2) == 50


def test_report_csv_has_one_row_per_policy():
    report = analytics.CampaignReport(
        n_participants=20,
        n_policies=2,
        n_majority=1,
        pct_majority=50,
        weighted_gini=float(Fraction(4, 21)),
        inspiration_distribution={},
        pct_specific_case_other=None,
        per_policy=(PolicyVoteCount("a", 16, 0), PolicyVoteCount("b", 4, 10)),
    )
    lines = analytics.report_csv(report).strip().splitlines()
    assert lines[0] == "policy_id,v_u,v_d,gini,majority_supported"
    assert lines[1] == "a,16,0,0.000000,true"
    assert lines[2].startswith("b,4,10,0.408163,")
    assert len(lines) == 3
