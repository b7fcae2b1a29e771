import json

import pytest

from src.core.harbourne.criteria import (
    HIRZEBRUCH,
    MULTIPLICITY_SUM,
    PARITY_PROFILE,
    TWO_PENCILS,
    Mode,
    apply_all,
    hirzebruch_filter,
    line_profiles,
    multiplicity_sum_filter,
    parity_profile_filter,
    profile_counts_feasible,
    two_pencils_filter,
)
from src.core.harbourne.tspace import enumerate_tvectors

from .factories import tv


class TestMultiplicitySum:
    def test_five_lines_three_triple_points(self):
        verdict = multiplicity_sum_filter(tv(5, 1, 3))
        assert verdict.excluded
        assert verdict.criterion == MULTIPLICITY_SUM
        assert verdict.detail.startswith("r=3: 3+3+3 = 9 > d + C(3,2) = 8")

    def test_eight_lines_six_fold_point(self):
        verdict = multiplicity_sum_filter(tv(8, 1, 4, 0, 0, 1))
        assert verdict.excluded
        assert verdict.detail.startswith("r=3: 6+3+3 = 12 > d + C(3,2) = 11")

    @pytest.mark.parametrize("vector", [t for t in enumerate_tvectors(9) if t.t(6) == 2])
    def test_two_six_fold_points_on_nine_lines(self, vector):
        verdict = multiplicity_sum_filter(vector)
        assert verdict.excluded
        assert verdict.detail.startswith("r=2: 6+6 = 12 > d + C(2,2) = 10")

    def test_general_lines_pass(self):
        assert not multiplicity_sum_filter(tv(4, 6)).excluded


class TestTwoPencils:
    def test_ten_lines_five_and_four_fold(self):
        verdict = two_pencils_filter(tv(10, 2, 7, 2, 1))
        assert verdict.excluded
        assert verdict.criterion == TWO_PENCILS
        assert "(4)(3)+2 = 14 > s = 12" in verdict.detail

    def test_dual_hesse_passes(self, dual_hesse_t):
        assert not two_pencils_filter(dual_hesse_t).excluded

    def test_eight_lines_passes(self):
        assert not two_pencils_filter(tv(8, 4, 6, 1)).excluded

    def test_single_point_is_vacuous(self):
        verdict = two_pencils_filter(tv(5, 0, 0, 0, 1))
        assert not verdict.excluded
        assert verdict.detail == "s < 2"


class TestParity:
    def test_six_lines_five_triple_points(self):
        verdict = parity_profile_filter(tv(6, 0, 5))
        assert verdict.excluded
        assert verdict.criterion == PARITY_PROFILE
        assert "no line profile" in verdict.detail

    def test_nine_lines_lonely_four_fold_point(self):
        verdict = parity_profile_filter(tv(9, 0, 10, 1))
        assert verdict.excluded
        assert "4-fold" in verdict.detail

    def test_six_lines_three_triples_and_a_four_fold(self):
        assert parity_profile_filter(tv(6, 0, 3, 1)).excluded

    def test_fano_passes(self, fano_t):
        assert line_profiles(fano_t) == [(3, 3, 3)]
        assert profile_counts_feasible(fano_t, [(3, 3, 3)]) == [7]
        assert not parity_profile_filter(fano_t).excluded

    def test_profiles_respect_available_points(self):
        # one 4-fold point: no line may pass through it twice
        for profile in line_profiles(tv(9, 0, 10, 1)):
            assert profile.count(4) <= 1
            assert sum(m - 1 for m in profile) == 8


class TestHirzebruch:
    def test_fano_excluded(self, fano_t):
        verdict = hirzebruch_filter(fano_t)
        assert verdict.excluded
        assert verdict.criterion == HIRZEBRUCH
        assert "21/4 < d + sum (k-4)t_k = 7" in verdict.detail

    def test_dual_hesse_passes(self, dual_hesse_t):
        assert not hirzebruch_filter(dual_hesse_t).excluded

    def test_ten_lines_excluded(self, ten_lines_t):
        verdict = hirzebruch_filter(ten_lines_t)
        assert verdict.excluded
        assert "27/4" in verdict.detail

    def test_inapplicable_with_near_pencil(self):
        verdict = hirzebruch_filter(tv(5, 4, 0, 1))
        assert not verdict.excluded
        assert verdict.detail == "inapplicable"


class TestApplyAll:
    def test_first_exclusion_wins(self):
        verdict = apply_all(tv(5, 1, 3), Mode.ABSOLUTE)
        assert verdict.criterion == MULTIPLICITY_SUM

    def test_dual_hesse_absolute(self, dual_hesse_t):
        verdict = apply_all(dual_hesse_t, Mode.ABSOLUTE)
        assert not verdict.excluded
        assert verdict.criterion is None

    def test_hirzebruch_only_in_complex_mode(self):
        vector = tv(10, 3, 8, 3)
        assert not apply_all(vector, Mode.ABSOLUTE).excluded
        assert apply_all(vector, Mode.COMPLEX).criterion == HIRZEBRUCH

    def test_fano_modes(self, fano_t):
        assert not apply_all(fano_t, "absolute").excluded
        assert apply_all(fano_t, "complex").criterion == HIRZEBRUCH

    def test_verdict_json(self):
        data = json.loads(apply_all(tv(6, 0, 5)).to_json())
        assert list(data) == ["status", "criterion", "detail"]
        assert data["status"] == "excluded"
        assert data["criterion"] == TWO_PENCILS

    @pytest.mark.parametrize("d", range(2, 11))
    def test_filters_are_deterministic(self, d):
        for vector in enumerate_tvectors(d):
            assert apply_all(vector, Mode.COMPLEX).to_dict() == apply_all(vector, Mode.COMPLEX).to_dict()
