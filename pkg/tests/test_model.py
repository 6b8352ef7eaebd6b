"""Order parameters, potentials, gradients, Hessian, critical points."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from pytest import approx

import helpers
from phasebal import (
    GainVector,
    SwarmState,
    balancing_gradient,
    balancing_hessian,
    balancing_potential,
    classify_critical_point,
    order_parameter,
    splay_gradient,
    splay_potential,
    wrap_angle,
)

heading_lists = st.lists(
    st.floats(-8.0, 8.0, allow_nan=False), min_size=2, max_size=10
)


class TestOrderParameter:
    def test_antipodal_pair_is_balanced(self):
        p = order_parameter([0.0, np.pi])
        assert p.magnitude == approx(0.0, abs=1e-15)
        assert not p.psi_defined
        assert p.psi == 0.0

    def test_synchronized_has_unit_magnitude(self):
        p = order_parameter([0.0, 0.0, 0.0])
        assert p.magnitude == approx(1.0, abs=1e-15)
        assert p.psi == approx(0.0, abs=1e-15)
        assert p.psi_defined

    def test_three_phase_balance(self):
        p = order_parameter([0.0, 2 * np.pi / 3, 4 * np.pi / 3])
        assert p.magnitude == approx(0.0, abs=1e-15)

    def test_second_harmonic_of_two_clusters(self):
        p = order_parameter([0.0, 0.0, np.pi, np.pi], harmonic=2)
        assert p.magnitude == approx(0.5, abs=1e-15)

    def test_single_agent_allowed(self):
        p = order_parameter([0.7])
        assert p.magnitude == approx(1.0)
        assert p.psi == approx(0.7)

    def test_empty_headings_rejected(self):
        with pytest.raises(ValueError):
            order_parameter([])

    def test_bad_harmonic_rejected(self):
        with pytest.raises(ValueError):
            order_parameter([0.0, 1.0], harmonic=0)

    @given(heading_lists, st.integers(1, 4))
    def test_magnitude_bounds_and_consistency(self, headings, m):
        p = order_parameter(headings, harmonic=m)
        assert p.magnitude <= 1.0 / m + 1e-12
        assert p.magnitude >= 0.0
        assert p.magnitude == approx(np.hypot(p.re, p.im), abs=1e-12)


class TestPotentials:
    def test_balanced_pair_zero(self):
        assert balancing_potential([0.0, np.pi]).value == approx(0.0, abs=1e-15)

    def test_synchronized_pair_attains_half_n(self):
        assert balancing_potential([0.0, 0.0]).value == approx(1.0)

    def test_right_angle_pair(self):
        assert balancing_potential([0.0, np.pi / 2]).value == approx(0.5)

    def test_kind_labels(self):
        assert balancing_potential([0.0, 1.0]).kind == "balance"
        assert splay_potential([0.0, 1.0]).kind == "splay"

    def test_splay_of_four_zero(self):
        th = [0.0, np.pi / 2, np.pi, 3 * np.pi / 2]
        assert splay_potential(th).value == approx(0.0, abs=1e-15)

    def test_two_cluster_splay_value(self):
        assert splay_potential([0.0, 0.0, np.pi, np.pi]).value == approx(0.5)

    def test_three_agent_splay_equals_balance(self):
        th = [0.0, 2 * np.pi / 3, 4 * np.pi / 3]
        assert splay_potential(th).value == approx(0.0, abs=1e-15)

    @given(heading_lists)
    def test_range_bound(self, headings):
        n = len(headings)
        u = balancing_potential(headings).value
        assert -1e-12 <= u <= n / 2 + 1e-12

    @given(st.lists(st.floats(-8.0, 8.0, allow_nan=False), min_size=2, max_size=3))
    def test_splay_equals_balance_for_small_n(self, headings):
        assert splay_potential(headings).value == balancing_potential(headings).value


class TestGradients:
    def test_balanced_pair_critical(self):
        assert balancing_gradient([0.0, np.pi]) == approx([0.0, 0.0], abs=1e-15)

    def test_synchronized_pair_critical(self):
        assert balancing_gradient([0.0, 0.0]) == approx([0.0, 0.0], abs=1e-15)

    def test_right_angle_pair_components(self):
        g = balancing_gradient([0.0, np.pi / 2])
        assert g == approx([0.5, -0.5])

    def test_matches_pairwise_route(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            th = rng.uniform(-6, 6, rng.integers(2, 9))
            assert balancing_gradient(th) == approx(
                helpers.pairwise_gradient(th), abs=1e-12
            )

    def test_splay_gradient_zero_on_splay(self):
        th = np.array([0.0, np.pi / 2, np.pi, 3 * np.pi / 2])
        assert splay_gradient(th) == approx(np.zeros(4), abs=1e-15)
        th3 = np.array([0.0, 2 * np.pi / 3, 4 * np.pi / 3])
        assert splay_gradient(th3) == approx(np.zeros(3), abs=1e-15)

    def test_finite_difference_match(self):
        rng = np.random.default_rng(17)
        for _ in range(10):
            th = rng.uniform(-6, 6, 5)
            g = balancing_gradient(th)
            fd = helpers.fd_gradient(lambda x: balancing_potential(x).value, th)
            assert np.max(np.abs(g - fd)) <= 1e-6 * max(1.0, np.max(np.abs(g)))
            gw = splay_gradient(th)
            fdw = helpers.fd_gradient(lambda x: splay_potential(x).value, th)
            assert np.max(np.abs(gw - fdw)) <= 1e-6 * max(1.0, np.max(np.abs(gw)))

    @given(heading_lists)
    def test_components_sum_to_zero(self, headings):
        assert abs(balancing_gradient(headings).sum()) <= 1e-12
        assert abs(splay_gradient(headings).sum()) <= 1e-12


class TestHessian:
    def test_balanced_pair(self):
        h = balancing_hessian([0.0, np.pi])
        assert h == approx(np.array([[0.5, -0.5], [-0.5, 0.5]]), abs=1e-15)
        assert np.linalg.eigvalsh(h) == approx([0.0, 1.0], abs=1e-12)

    def test_synchronized_pair(self):
        h = balancing_hessian([0.0, 0.0])
        assert h == approx(np.array([[-0.5, 0.5], [0.5, -0.5]]), abs=1e-15)
        assert np.linalg.eigvalsh(h) == approx([-1.0, 0.0], abs=1e-12)

    def test_symmetric_and_matches_finite_differences(self):
        rng = np.random.default_rng(23)
        for _ in range(5):
            th = rng.uniform(-6, 6, 6)
            h = balancing_hessian(th)
            assert h == approx(h.T, abs=1e-15)
            fd = helpers.fd_hessian(lambda x: balancing_potential(x).value, th)
            assert np.max(np.abs(h - fd)) <= 1e-5 * max(1.0, np.max(np.abs(h)))

    def test_two_cluster_indefiniteness_identity(self):
        # M agents opposite the rest; the probe moves the last two agents,
        # which sit in the same cluster.
        for n, m, base in [(4, 1, 0.3), (5, 2, -1.1), (6, 2, 2.0)]:
            th = np.array([base + np.pi] * m + [base] * (n - m))
            h = balancing_hessian(th)
            p = order_parameter(th)
            q_h_q = h[-1, -1] + h[-2, -2] - 2 * h[-1, -2]
            assert q_h_q == approx(-2.0 * p.magnitude, abs=1e-12)


class TestClassification:
    def test_balanced_pair_is_minimum(self):
        assert classify_critical_point([0.0, np.pi]) == "minimum"

    def test_splay_three_is_minimum(self):
        assert classify_critical_point([0.0, 2 * np.pi / 3, 4 * np.pi / 3]) == "minimum"

    def test_synchronized_is_maximum(self):
        assert classify_critical_point([0.0, 0.0, 0.0]) == "maximum"

    def test_cluster_split_is_saddle(self):
        assert classify_critical_point([0.0, 0.0, np.pi]) == "saddle"

    def test_generic_point_not_critical(self):
        assert classify_critical_point([0.1, 0.9, 2.2]) == "not-critical"


class TestTypes:
    def test_swarm_state_validation(self):
        with pytest.raises(ValueError):
            SwarmState(0.0, [[0.0, 0.0]], [0.0, 1.0])
        with pytest.raises(ValueError):
            SwarmState(0.0, [[0.0, np.inf], [0.0, 0.0]], [0.0, 1.0])
        state = SwarmState(0.0, [[0.0, 0.0], [1.0, 0.0]], [0.0, 1.0])
        assert state.n == 2
        with pytest.raises(ValueError):
            state.headings[0] = 3.0

    def test_gain_vector_validation(self):
        with pytest.raises(ValueError):
            GainVector([np.nan, 1.0])
        gv = GainVector([1.0, 2.0])
        assert gv.checked_condition == "unchecked"

    def test_wrap_angle_half_open_convention(self):
        assert wrap_angle(np.pi) == approx(np.pi)
        assert wrap_angle(-np.pi) == approx(np.pi)
        assert wrap_angle(3 * np.pi / 2) == approx(-np.pi / 2)
        arr = wrap_angle(np.array([0.0, 2 * np.pi, -2 * np.pi]))
        assert arr == approx([0.0, 0.0, 0.0], abs=1e-12)
