import pytest

from app.exceptions import ValidationError
from app.schemas.shadowing import AsymptoticSchedule, PseudoOrbitSym, PseudoOrbitTail, TrajectoryTail
from app.schemas.symbolic import to_word


@pytest.fixture
def truncated_tail(points):
    """Trajectory of the Example 5.2 point cut off along 2^-(2 + |i|)"""
    return PseudoOrbitTail(
        source=points.point("ex52_x"),
        schedule=AsymptoticSchedule(base=2, stride=1),
        two_sided_metric=True,
    )


@pytest.fixture
def trajectory(points):
    return TrajectoryTail(point=points.point("ex52_x"), two_sided_metric=True)


class TestTailElements:
    """Test element access on tails"""

    def test_truncation_uses_filler(self, witnesses, points):
        tail = PseudoOrbitTail(
            source=points.point("period_two"),
            schedule=AsymptoticSchedule(base=0, stride=1),
            filler="1",
        )
        assert witnesses.element(tail, 0, 4) == to_word("01011")

    def test_tail_needs_one_presentation(self, points):
        with pytest.raises(ValueError):
            PseudoOrbitTail(source=points.point("fixed_zero"))


class TestOrbitalWitnesses:
    """Test cofinal, eventual strong and limit witnesses"""

    def test_cofinal_witness(self, witnesses, truncated_tail, trajectory):
        result = witnesses.check_cofinal_orbital_witness(truncated_tail, trajectory, 2, 0, 16)
        assert result.found
        assert result.value == 0
        assert result.label == "witness found (0)"

    def test_eventual_strong_witness(self, witnesses, truncated_tail, trajectory):
        result = witnesses.check_eventual_strong_orbital_witness(truncated_tail, trajectory, 2, 16)
        assert result.found
        assert result.value == 0

    def test_no_witness_within_horizon(self, witnesses, points):
        zeros = PseudoOrbitSym(direction="forward", entries=(points.point("fixed_zero"),) * 5, delta_exponent=1)
        po_tail = PseudoOrbitTail(explicit=zeros)
        genuine = TrajectoryTail(point=points.point("period_two"))
        result = witnesses.check_cofinal_orbital_witness(po_tail, genuine, 1, 0, 3, direction="forward")
        assert not result.found
        assert result.label == "witness not found within horizon 3"

    def test_horizon_beyond_depth(self, witnesses, truncated_tail, trajectory):
        with pytest.raises(ValidationError):
            witnesses.check_cofinal_orbital_witness(truncated_tail, trajectory, 2, 0, 200)

    def test_resolution_below_epsilon(self, witnesses, truncated_tail, trajectory):
        with pytest.raises(ValidationError):
            witnesses.check_eventual_strong_orbital_witness(truncated_tail, trajectory, 3, 8, k_res=2)

    def test_backward_limit_witness(self, witnesses, truncated_tail, trajectory):
        assert witnesses.tail_limit_windows(trajectory, 2) == {to_word("00")}
        assert witnesses.check_backward_orbital_limit_witness(truncated_tail, trajectory, 2)

    def test_forward_limit_witness(self, witnesses, truncated_tail, trajectory):
        assert witnesses.check_forward_orbital_limit_witness(truncated_tail, trajectory, 2)


class TestAsymptotic:
    """Test asymptotic pseudo-orbit schedules"""

    def test_truncated_trajectory_is_asymptotic(self, witnesses, truncated_tail):
        assert witnesses.verify_asymptotic(truncated_tail, truncated_tail.schedule, 16).valid

    def test_jump_against_schedule(self, witnesses, points):
        po = PseudoOrbitSym.backward(
            [points.point("period_two"), points.point("fixed_zero"), points.point("fixed_zero")],
            delta_exponent=0,
        )
        result = witnesses.verify_asymptotic(PseudoOrbitTail(explicit=po), AsymptoticSchedule(base=1), 2)
        assert not result.valid
        assert result.first_failure == -2

    def test_schedule_bound(self):
        schedule = AsymptoticSchedule(base=2, stride=3)
        assert schedule.required(-7) == 4
        assert schedule.truncation(-7) == 6
