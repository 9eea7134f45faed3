import math

import pytest
from hypothesis import given, strategies as st

from cohabitat.thermo import (AmbientState, ThAction, ThermalGrid,
                              apply_th_action, make_state, newton_step,
                              rh_from_temp, temp_from_rh, tick)

GRID = ThermalGrid()


class TestNewtonStep:
    def test_moves_toward_target(self):
        assert 20.0 < newton_step(20.0, 25.0, 0.8) < 25.0
        assert 20.0 < newton_step(25.0, 20.0, 0.8) < 25.0

    def test_fixed_point_at_target(self):
        assert newton_step(22.0, 22.0, 0.8) == pytest.approx(22.0)

    def test_monotone_convergence(self):
        t = 15.0
        gaps = []
        for _ in range(20):
            t = newton_step(t, 30.0, 0.8)
            gaps.append(30.0 - t)
        assert all(g > 0 for g in gaps)
        assert all(a > b for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 1e-5

    def test_exact_exponential_form(self):
        got = newton_step(18.0, 27.0, 0.8)
        assert got == pytest.approx(27.0 - 9.0 * math.exp(-0.8), abs=1e-12)

    @given(st.floats(10.0, 40.0), st.floats(10.0, 40.0),
           st.floats(0.01, 5.0))
    def test_never_overshoots(self, t, target, k):
        nxt = newton_step(t, target, k)
        lo, hi = min(t, target), max(t, target)
        assert lo - 1e-9 <= nxt <= hi + 1e-9


class TestMagnus:
    def test_known_value(self):
        assert rh_from_temp(25.0, 4.0) == pytest.approx(25.71, abs=0.01)

    def test_round_trip(self):
        for t in GRID.t_points():
            rh = rh_from_temp(t, 4.0)
            assert temp_from_rh(rh, 4.0) == pytest.approx(t, abs=1e-9)

    def test_saturation_at_dew_point(self):
        assert rh_from_temp(4.0, 4.0) == pytest.approx(100.0)

    def test_monotone_decreasing_in_temperature(self):
        values = [rh_from_temp(t, 4.0) for t in GRID.t_points()]
        assert all(a > b for a, b in zip(values, values[1:]))

    @given(st.floats(5.0, 40.0), st.floats(-10.0, 20.0))
    def test_round_trip_property(self, t, dew):
        rh = rh_from_temp(t, dew)
        assert temp_from_rh(rh, dew) == pytest.approx(t, abs=1e-8)

    def test_rejects_invalid_inputs(self):
        with pytest.raises(ValueError):
            rh_from_temp(-300.0, 4.0)
        with pytest.raises(ValueError):
            temp_from_rh(0.0, 4.0)


class TestGrid:
    def test_cell_counts(self):
        assert GRID.n_t == 16
        assert GRID.n_rh == 9

    def test_index_value_inverse(self):
        for i in range(GRID.n_t):
            assert GRID.t_index(GRID.t_value(i)) == i
        for j in range(GRID.n_rh):
            assert GRID.rh_index(GRID.rh_value(j)) == j

    def test_indices_clamp(self):
        assert GRID.t_index(-100.0) == 0
        assert GRID.t_index(100.0) == GRID.n_t - 1
        assert GRID.rh_index(0.0) == 0
        assert GRID.rh_index(100.0) == GRID.n_rh - 1

    @given(st.floats(0.0, 45.0))
    def test_snap_is_nearest(self, temp):
        snapped = GRID.snap_t(temp)
        clamped = min(max(temp, GRID.t_min), GRID.t_max)
        assert abs(snapped - clamped) <= GRID.t_step / 2 + 1e-9

    def test_step_must_divide_range(self):
        with pytest.raises(ValueError):
            ThermalGrid(t_step=0.7)


class TestSetpointActions:
    def test_temp_up_moves_one_step(self):
        s = make_state(GRID, 20.0, 50.0)
        s2 = apply_th_action(s, ThAction.TEMP_UP, GRID)
        assert s2.temp_setpoint == 21.0

    def test_clamped_press_is_a_full_noop(self):
        s = make_state(GRID, 30.0, 50.0)
        s2 = apply_th_action(s, ThAction.TEMP_UP, GRID)
        assert s2 == s

    def test_coupling_drags_humidity_down_when_heating(self):
        # the Magnus drag per degree is largest at the cold end of the
        # grid, where it exceeds half a humidity bin and survives snapping
        s = make_state(GRID, 15.0, 50.0)
        s2 = apply_th_action(s, ThAction.TEMP_UP, GRID, coupling=True)
        assert s2.rh_setpoint < s.rh_setpoint

    def test_no_coupling_leaves_other_setpoint(self):
        s = make_state(GRID, 20.0, 50.0)
        s2 = apply_th_action(s, ThAction.TEMP_UP, GRID, coupling=False)
        assert s2.rh_setpoint == s.rh_setpoint

    def test_humidity_press_drags_temperature(self):
        s = make_state(GRID, 20.0, 50.0)
        s2 = apply_th_action(s, ThAction.HUM_UP, GRID, coupling=True)
        assert s2.rh_setpoint == 55.0
        assert s2.temp_setpoint <= s.temp_setpoint

    def test_setpoints_stay_on_grid(self):
        s = make_state(GRID, 23.0, 45.0)
        for action in ThAction:
            s2 = apply_th_action(s, action, GRID)
            assert s2.temp_setpoint in GRID.t_points()
            assert s2.rh_setpoint in GRID.rh_points()


class TestTick:
    def test_relaxes_toward_setpoints(self):
        s = AmbientState(20.0, 50.0, 25.0, 40.0, 5, 4)
        s2 = tick(s, GRID)
        assert 20.0 < s2.temp < 25.0
        assert 40.0 < s2.rh < 50.0

    def test_indices_track_values(self):
        s = AmbientState(20.0, 50.0, 25.0, 40.0, 5, 4)
        s2 = tick(s, GRID)
        assert s2.t_idx == GRID.t_index(s2.temp)
        assert s2.rh_idx == GRID.rh_index(s2.rh)

    def test_stationary_at_setpoint(self):
        s = make_state(GRID, 22.0, 50.0)
        s2 = tick(s, GRID)
        assert s2.temp == pytest.approx(22.0)
        assert s2.rh == pytest.approx(50.0)
