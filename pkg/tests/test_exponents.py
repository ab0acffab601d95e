"""Exponent profiles: frozen scans, sampling, the division point table."""

import csv
import dataclasses
import random

import pytest

import helpers
from helpers import F, frs
from pgnlab import (
    InsufficientDataError,
    component_extrema_periodic,
    profile_periodic,
    profile_sampled,
    ratio_extrema_periodic,
)
from pgnlab.exponents import export_division_table, write_division_csv


def strip_notes(profile):
    return dataclasses.replace(profile, notes=())


class TestPeriodicProfiles:
    def test_a356_profile_matches_hand_scan(self, a356):
        profile = profile_periodic(a356)
        assert profile.n == 3
        assert profile.omega_hat == helpers.A356_OMEGA_HAT
        assert profile.omega == helpers.A356_OMEGA
        assert profile.phi_bar == helpers.A356_PHI_BAR
        assert profile.phi_under == helpers.A356_PHI_UNDER

    def test_a2_profile_matches_hand_scan(self, a2):
        profile = profile_periodic(a2)
        assert profile.omega_hat == helpers.A2_OMEGA_HAT
        assert profile.omega == helpers.A2_OMEGA
        assert profile.phi_bar == helpers.A2_PHI_BAR
        assert profile.phi_under == helpers.A2_PHI_UNDER

    def test_b3_profile_matches_hand_scan(self, b3):
        profile = profile_periodic(b3)
        assert profile.omega_hat == helpers.B3_OMEGA_HAT
        assert profile.omega == helpers.B3_OMEGA
        assert profile.phi_bar == helpers.B3_PHI_BAR
        assert profile.phi_under == helpers.B3_PHI_UNDER

    def test_needs_dilation(self, a356):
        with pytest.raises(ValueError):
            profile_periodic(a356.unroll(2))

    def test_tie_notes_on_uniform(self, uniform3):
        # One distinct point per period: extrema are trivially unique.
        assert profile_periodic(uniform3).notes == ()

    def test_json_shape(self, a356):
        doc = profile_periodic(a356).to_json_dict()
        assert doc["schema"] == 1
        assert doc["omega_hat"] == ["2/5", "4/3", "5"]
        assert doc["phi_under"] == ["1/11", "1/6", "2/9", "2/7"]


class TestRatioExtrema:
    def test_partial_sum_scan_detail(self, a356):
        top = ratio_extrema_periodic(a356, 1)
        assert (top.max_value, top.argmax) == (F(1, 6), F(6))
        assert (top.min_value, top.argmin) == (F(1, 11), F(11))
        middle = ratio_extrema_periodic(a356, 2)
        assert (middle.max_value, middle.argmax) == (F(3, 7), F(7))
        # The scan sees 1/3, 3/7, 1/3, 3/11: the repeated value is not
        # extremal, so both extrema stay unique.
        assert middle.min_value == F(3, 11)
        assert middle.min_count == 1

    def test_tie_resolution_keeps_smallest_q(self, a356):
        scan = ratio_extrema_periodic(a356, 4)
        assert scan.max_value == scan.min_value == 1
        assert scan.argmax == scan.argmin == F(6)
        assert scan.max_count == 4

    def test_component_scan(self, b3):
        scan = component_extrema_periodic(b3, 3)
        assert (scan.max_value, scan.argmax) == (F(3, 8), F(2))
        assert (scan.min_value, scan.argmin) == (F(2, 9), F(9, 8))

    def test_index_guards(self, a356):
        with pytest.raises(ValueError):
            ratio_extrema_periodic(a356, 0)
        with pytest.raises(ValueError):
            component_extrema_periodic(a356, 5)

    def test_interior_points_never_beat_division_points(self, a356, b3):
        # Ratios are monotone between division points, so random interior
        # samples must stay inside the scanned envelope.
        rng = random.Random(3)
        for system in (a356, b3):
            for k in range(1, system.n + 2):
                scan = ratio_extrema_periodic(system, k)
                lo, hi = system.q_start, system.q_end
                for _ in range(200):
                    q = lo + (hi - lo) * F(rng.randint(0, 10**6), 10**6)
                    ratio = system.partial_sum(k, q) / q
                    assert scan.min_value <= ratio <= scan.max_value


class TestSampledProfiles:
    def test_unrolled_periods_reproduce_the_periodic_profile(self, a356, b3):
        for system in (a356, b3):
            exact = strip_notes(profile_periodic(system))
            sampled = profile_sampled(system.unroll(3))
            assert len(sampled.period_profiles) == 3
            for per_period in sampled.period_profiles:
                assert strip_notes(per_period) == exact
            assert strip_notes(sampled.headline) == exact
            assert not sampled.omega_hat_top_diverging

    def test_infinite_variant_periods_follow_closed_forms(self, infinite4):
        sampled = profile_sampled(infinite4)
        assert sampled.omega_hat_top_diverging
        for m in range(4):
            assert sampled.period_p1_ratio_max[m] == F(1, m + 5)
            assert sampled.period_top_ratio_min[m] == F(m + 3, 3 * m + 11)

    def test_horizon_cut(self, infinite4):
        # A cap at the second gluing point keeps two periods; a cap strictly
        # between the first and second keeps one, which is not enough.
        marks = infinite4.period_marks
        q1 = infinite4.division_points[marks[1]]
        q2 = infinite4.division_points[marks[2]]
        sampled = profile_sampled(infinite4, q_max=q2)
        assert len(sampled.period_profiles) == 2
        with pytest.raises(InsufficientDataError):
            profile_sampled(infinite4, q_max=(q1 + q2) / 2)

    def test_requires_marks(self, a356):
        bare = dataclasses.replace(a356.unroll(3), period_marks=None)
        with pytest.raises(InsufficientDataError):
            profile_sampled(bare)


class TestDivisionTable:
    def test_rows_collapse_coincident_points(self, a356):
        rows = export_division_table(a356)
        assert [row.q for row in rows] == [6, 7, 9, 11, 12]
        assert [row.kind for row in rows] == list(helpers.A356_GROUP_KINDS)
        assert rows[0].partial_sums == frs("1", "2", "4", "6")
        assert rows[2].ratios == frs("1/9", "1/3", "5/9", "1")

    def test_multi_period_table(self, a356):
        rows = export_division_table(a356, periods=2)
        assert [float(r.q) for r in rows[-2:]] == [22.0, 24.0]
        assert rows[-1].values == frs("4", "4", "8", "8")

    def test_csv_layout(self, tmp_path, b3):
        path = tmp_path / "division.csv"
        count = write_division_csv(path, b3)
        with open(path, newline="") as handle:
            table = list(csv.reader(handle))
        assert count == len(table) - 1 == 7
        assert table[0][:4] == ["q", "q_float", "kind", "P_1"]
        by_q = {row[0]: row for row in table[1:]}
        assert by_q["11/4"][2] == "switch"
        assert by_q["2"][3:7] == ["1/8", "3/8", "3/4", "3/4"]
