import pytest

from app.exceptions import NonStabilizedError, ValidationError
from app.schemas.limits import StabilizationPolicy
from app.schemas.symbolic import to_word


class TestLimitWindows:
    """Test omega, alpha and gamma window sets of described points"""

    @pytest.mark.parametrize("L", [1, 2, 3, 4])
    def test_spike_trains(self, limits, specs, points, L):
        """x = 1 0 1 00 ... and y = 2 0 2 00 ... have spike limit sets"""
        assert limits.omega_windows(points.point("ex28_x"), L).words == specs.spike_spec("0", "1").windows(L).words
        assert limits.omega_windows(points.point("ex28_y"), L).words == specs.spike_spec("0", "2").windows(L).words

    @pytest.mark.parametrize("L", [1, 2, 3, 4])
    def test_backward_spike_train(self, limits, specs, points, L):
        windows = limits.alpha_windows(points.point("ex28_backward"), L)
        assert windows.words == specs.spike_spec("0", "3").windows(L).words

    @pytest.mark.parametrize("L", [1, 2, 3, 4])
    def test_gamma_of_two_block_tails(self, limits, points, L):
        """Only the constant words survive in both tails"""
        windows = limits.gamma_windows(points.point("ex410_x"), L)
        assert windows.words == {("0",) * L, ("1",) * L}

    def test_two_sided_examples(self, limits, specs, points):
        ex52 = points.point("ex52_x")
        ex53 = points.point("ex53_x")
        assert limits.alpha_windows(ex52, 3).texts() == ["000"]
        assert limits.omega_windows(ex52, 3).words == specs.spike_spec("0", "1").windows(3).words
        assert limits.alpha_windows(ex53, 3).words == specs.spike_spec("0", "1").windows(3).words
        assert limits.omega_windows(ex53, 3).texts() == ["000"]

    def test_exact_analysis_is_tagged_exact(self, limits, points):
        assert limits.omega_windows(points.point("ex28_x"), 3).provenance.is_exact

    def test_empirical_scan_agrees(self, limits, spike_point_factory):
        """The doubling scan stabilizes on the exact window set"""
        policy = StabilizationPolicy(mode="empirical")
        point = spike_point_factory()
        scanned = limits.omega_windows(point, 2, policy)
        assert scanned.words == limits.omega_windows(point, 2).words
        assert scanned.provenance.tag == "empirical(cutoff=128)"

    def test_finite_prefix_stabilizes(self, limits, points):
        policy = StabilizationPolicy(initial=8)
        windows = limits.omega_windows(points.point("golden_prefix"), 2, policy)
        assert windows.texts() == ["00", "01", "10"]
        assert windows.provenance.cutoff == 32

    def test_finite_prefix_too_short(self, limits, points):
        with pytest.raises(NonStabilizedError):
            limits.omega_windows(points.point("golden_prefix"), 2)

    def test_gamma_needs_two_sided_point(self, limits, periodic_factory):
        with pytest.raises(ValidationError):
            limits.gamma_windows(periodic_factory("0"), 2)

    def test_alpha_of_right_point(self, limits, periodic_factory):
        with pytest.raises(ValidationError):
            limits.alpha_windows(periodic_factory("0"), 2)

    def test_limit_spec_sidedness(self, limits, points):
        spec = limits.limit_spec(points.point("ex52_x"), "omega")
        assert spec.two_sided
        assert spec.provenance.is_exact


class TestChainTransitivity:
    """Test internal chain transitivity on block graphs"""

    def test_golden_mean_is_ict(self, limits, specs, golden_mean):
        assert limits.is_ict_upto(specs.language_spec(golden_mean), 3) is None

    def test_spike_sets_are_ict(self, limits, specs):
        assert limits.is_ict_upto(specs.spike_spec("0", "1"), 4) is None
        assert limits.is_ict_upto(specs.spike_spec("0", "12", two_sided=True), 3) is None

    def test_disjoint_fixed_points_are_not_ict(self, limits, specs, window_set_factory):
        spec = specs.windows_spec(window_set_factory("00 11"))
        assert limits.is_ict_upto(spec, 2) == 0
        classes = limits.enumerate_maximal_ict_spec(spec, 1)
        assert [c.texts() for c in classes] == [["00"], ["11"]]

    def test_negative_resolution(self, limits, specs):
        with pytest.raises(ValidationError):
            limits.is_ict(specs.spike_spec("0", "1"), -1)

    def test_sft_classes(self, limits, golden_mean):
        classes = limits.enumerate_maximal_ict(golden_mean, 1)
        assert len(classes) == 1
        assert classes[0].texts() == ["00", "01", "10"]

    def test_sft_classes_need_positive_resolution(self, limits, golden_mean):
        with pytest.raises(ValidationError):
            limits.enumerate_maximal_ict(golden_mean, 0)

    def test_chain_component_check(self, limits, full3, window_set_factory):
        assert limits.chain_component_check(window_set_factory("00 11"), full3, k=1)

    def test_chain_component_check_wrong_length(self, limits, full3, window_set_factory):
        with pytest.raises(ValidationError):
            limits.chain_component_check(window_set_factory("00 11"), full3, k=2)

    def test_chain_component_check_outside_language(self, limits, golden_mean, window_set_factory):
        with pytest.raises(ValidationError):
            limits.chain_component_check(window_set_factory("11"), golden_mean)


class TestHausdorff:
    """Test window Hausdorff bounds"""

    def test_equal_specs(self, limits, specs, points):
        omega = limits.limit_spec(points.point("ex28_x"), "omega")
        assert limits.window_hausdorff(omega, specs.spike_spec("0", "1"), 4).is_zero

    def test_first_disagreement_at_resolution_zero(self, limits, specs, window_set_factory):
        fixed = specs.windows_spec(window_set_factory("0"))
        assert limits.window_hausdorff(specs.spike_spec("0", "1"), fixed, 3).value == 1

    def test_later_disagreement(self, limits, specs, window_set_factory):
        """{00, 01, 10} and the spike set first differ at length 3"""
        golden = specs.windows_spec(window_set_factory("00 01 10"))
        bound = limits.window_hausdorff(golden, specs.spike_spec("0", "1"), 3)
        assert bound.exponent == 1

    def test_sidedness_must_match(self, limits, specs):
        with pytest.raises(ValidationError):
            limits.window_hausdorff(specs.spike_spec("0", "1"), specs.spike_spec("0", "1", two_sided=True), 2)
