"""Control laws, subgroup partitioning, gain validation, orbit centers."""

import numpy as np
import pytest
from pytest import approx

from phasebal import (
    BalancedStartError,
    ControlLaw,
    GainVector,
    SwarmState,
    balancing_gradient,
    circle_center,
    control_input,
    partition_subgroups,
    splay_gradient,
    validate_gain_ordering,
    validate_stability_condition,
)


def state_from(headings):
    th = np.asarray(headings, dtype=float)
    pos = np.stack([2.0 * np.arange(th.size), np.zeros(th.size)], axis=1)
    return SwarmState(0.0, pos, th)


class TestControlInput:
    def test_vanishes_at_balance_up_to_omega0(self):
        state = state_from([0.0, np.pi])
        law = ControlLaw("balance", GainVector([5.0, 2.0]), omega0=0.2)
        assert control_input(state, law) == approx([0.2, 0.2], abs=1e-15)

    def test_right_angle_pair_unit_gains(self):
        state = state_from([0.0, np.pi / 2])
        law = ControlLaw("balance", GainVector([1.0, 1.0]))
        assert control_input(state, law) == approx([-0.5, 0.5])

    def test_linear_in_gains(self):
        state = state_from([0.0, np.pi / 2])
        law = ControlLaw("balance", GainVector([2.0, 1.0]))
        assert control_input(state, law) == approx([-1.0, 0.5])

    def test_dimension_mismatch_rejected(self):
        state = state_from([0.0, 1.0, 2.0])
        law = ControlLaw("balance", GainVector([1.0, 1.0]))
        with pytest.raises(ValueError):
            control_input(state, law)

    def test_matches_gradient_definition(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            th = rng.uniform(-5, 5, 6)
            gains = rng.uniform(-2, 3, 6)
            state = state_from(th)
            for kind, grad in (
                ("balance", balancing_gradient),
                ("splay", splay_gradient),
            ):
                law = ControlLaw(kind, GainVector(gains), omega0=0.3)
                u = control_input(state, law)
                assert np.max(np.abs(u - (0.3 - gains * grad(th)))) <= 1e-12

    def test_weighted_turn_rates_cancel(self):
        rng = np.random.default_rng(4)
        th = rng.uniform(-4, 4, 5)
        gains = rng.uniform(0.5, 3.0, 5)
        u = control_input(state_from(th), ControlLaw("balance", GainVector(gains), 0.7))
        assert abs(np.sum((u - 0.7) / gains)) <= 1e-12

    def test_splay_equals_balance_for_two_and_three_agents(self):
        rng = np.random.default_rng(6)
        for n in (2, 3):
            th = rng.uniform(-3, 3, n)
            gains = rng.uniform(0.5, 2.0, n)
            state = state_from(th)
            u_bal = control_input(state, ControlLaw("balance", GainVector(gains)))
            u_spl = control_input(state, ControlLaw("splay", GainVector(gains)))
            assert np.array_equal(u_bal, u_spl)

    def test_gain_doubling_doubles_correction_exactly(self):
        rng = np.random.default_rng(7)
        th = rng.uniform(-3, 3, 4)
        gains = rng.uniform(0.5, 2.0, 4)
        state = state_from(th)
        u1 = control_input(state, ControlLaw("balance", GainVector(gains)))
        u2 = control_input(state, ControlLaw("balance", GainVector(2 * gains)))
        assert np.array_equal(u2, 2.0 * u1)
        # with a base turn rate the correction still doubles, up to the
        # rounding of the single addition
        w1 = control_input(state, ControlLaw("balance", GainVector(gains), 0.2))
        w2 = control_input(state, ControlLaw("balance", GainVector(2 * gains), 0.2))
        assert (w2 - 0.2) == approx(2.0 * (w1 - 0.2), abs=1e-15)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            ControlLaw("spiral", GainVector([1.0, 1.0]))

    def test_harmonic_count(self):
        assert ControlLaw("balance", GainVector([1.0] * 7)).harmonics == 1
        assert ControlLaw("splay", GainVector([1.0] * 7)).harmonics == 3
        assert ControlLaw("splay", GainVector([1.0] * 10)).harmonics == 5


class TestPartition:
    def test_seven_agent_symmetric_fan(self):
        th = np.deg2rad([-90.0, -60.0, -30.0, 0.0, 30.0, 60.0, 90.0])
        part = partition_subgroups(th)
        assert part.reference_psi == approx(0.0, abs=1e-12)
        assert part.subgroup1 == (0, 1, 2)
        assert part.subgroup2 == (4, 5, 6)
        assert part.on_axis == (3,)

    def test_unequal_pair(self):
        part = partition_subgroups(np.deg2rad([0.0, 120.0]))
        assert part.reference_psi == approx(np.deg2rad(60.0))
        assert part.subgroup1 == (0,)
        assert part.subgroup2 == (1,)
        assert part.on_axis == ()

    def test_symmetric_pair(self):
        part = partition_subgroups(np.deg2rad([-45.0, 45.0]))
        assert part.reference_psi == approx(0.0, abs=1e-12)
        assert part.subgroup1 == (0,)
        assert part.subgroup2 == (1,)

    def test_three_agents_with_on_axis_member(self):
        part = partition_subgroups(np.deg2rad([0.0, 30.0, 60.0]))
        assert part.reference_psi == approx(np.deg2rad(30.0), abs=1e-12)
        assert part.subgroup1 == (0,)
        assert part.on_axis == (1,)
        assert part.subgroup2 == (2,)

    def test_balanced_start_rejected(self):
        with pytest.raises(BalancedStartError):
            partition_subgroups([-np.pi / 2, np.pi / 2])

    def test_cyclic_preconditions(self):
        with pytest.raises(ValueError):
            partition_subgroups([0.5, 0.1])
        with pytest.raises(ValueError):
            partition_subgroups([-4.0, 0.1])


class TestGainOrdering:
    def test_fan_gain_set_accepted(self):
        part = partition_subgroups(
            np.deg2rad([-90.0, -60.0, -30.0, 0.0, 30.0, 60.0, 90.0])
        )
        res = validate_gain_ordering(part, [2.0, 1.0, 0.0, 0.0, 0.0, 1.0, 2.0])
        assert res.ok

    def test_broken_ordering_reports_first_pair(self):
        part = partition_subgroups(
            np.deg2rad([-90.0, -60.0, -30.0, 0.0, 30.0, 60.0, 90.0])
        )
        res = validate_gain_ordering(part, [1.0, 2.0, 0.0, 0.0, 0.0, 1.0, 2.0])
        assert not res.ok
        assert res.first_violation == (0, 1)

    def test_on_axis_gain_unconstrained(self):
        part = partition_subgroups(np.deg2rad([0.0, 30.0, 60.0]))
        res = validate_gain_ordering(part, [2.0, 3.0, 6.0])
        assert res.ok
        res = validate_gain_ordering(part, [6.0, 3.0, 1.0])
        assert res.ok

    def test_negative_subgroup_gain_rejected(self):
        part = partition_subgroups(np.deg2rad([0.0, 30.0, 60.0]))
        res = validate_gain_ordering(part, [-1.0, 3.0, 6.0])
        assert not res.ok


class TestStabilityCondition:
    def test_all_positive(self):
        assert validate_stability_condition([1.0, 2.0], "all-positive").ok
        assert not validate_stability_condition([1.0, 0.0], "all-positive").ok

    def test_allow_zeros_floor_half(self):
        res = validate_stability_condition(
            [2.0, 1.0, 0.0, 0.0, 0.0, 1.0, 2.0], "allow-zeros"
        )
        assert res.ok
        res = validate_stability_condition(
            [2.0, 1.0, 0.0, 0.0, 0.0, 0.0, 2.0], "allow-zeros"
        )
        assert not res.ok
        assert not validate_stability_condition([-1.0, 2.0, 2.0], "allow-zeros").ok

    def test_two_agent_sum(self):
        assert validate_stability_condition([3.0, -1.0], "two-agent-sum").ok
        assert not validate_stability_condition([-3.0, 1.0], "two-agent-sum").ok
        with pytest.raises(ValueError):
            validate_stability_condition([1.0, 1.0, 1.0], "two-agent-sum")

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            validate_stability_condition([1.0, 1.0], "sometimes")


class TestCircleCenter:
    def test_east_heading(self):
        state = state_from([0.0, 0.0])
        assert circle_center(state, 0, 1.0) == approx([0.0, 1.0])

    def test_north_heading(self):
        state = SwarmState(0.0, [[0.0, 0.0], [1.0, 1.0]], [np.pi / 2, 0.0])
        assert circle_center(state, 0, 1.0) == approx([-1.0, 0.0], abs=1e-15)

    def test_slow_turn(self):
        state = SwarmState(0.0, [[2.0, -2.0], [0.0, 0.0]], [np.pi / 3, 0.0])
        c = circle_center(state, 0, 0.2)
        assert c == approx([2.0 - 5.0 * np.sin(np.pi / 3), -2.0 + 5.0 * np.cos(np.pi / 3)])
        assert c == approx([-2.3301270189221928, 0.5])

    def test_zero_rate_rejected(self):
        with pytest.raises(ValueError):
            circle_center(state_from([0.0, 0.0]), 0, 0.0)
