"""Shared thermal zone: discretization grid, setpoint actions, relaxation."""

from dataclasses import dataclass, replace
from enum import IntEnum
import math

from .kernels import newton_step, rh_from_temp, temp_from_rh

__all__ = [
    "ThermalGrid", "AmbientState", "ThAction",
    "apply_th_action", "tick", "make_state",
    "newton_step", "rh_from_temp", "temp_from_rh",
]


class ThAction(IntEnum):
    TEMP_UP = 0
    TEMP_DOWN = 1
    HUM_UP = 2
    HUM_DOWN = 3


@dataclass(frozen=True)
class ThermalGrid:
    t_min: float = 15.0
    t_max: float = 30.0
    t_step: float = 1.0
    rh_min: float = 30.0
    rh_max: float = 70.0
    rh_step: float = 5.0
    dew_point: float = 4.0
    decay_k: float = 0.8

    def __post_init__(self):
        if not self.t_min < self.t_max:
            raise ValueError("t_min must be below t_max")
        if not self.rh_min < self.rh_max:
            raise ValueError("rh_min must be below rh_max")
        if self.decay_k <= 0:
            raise ValueError("decay_k must be positive")
        for span, step, name in ((self.t_max - self.t_min, self.t_step, "t_step"),
                                 (self.rh_max - self.rh_min, self.rh_step, "rh_step")):
            if step <= 0 or abs(span / step - round(span / step)) > 1e-9:
                raise ValueError(f"{name} must divide its range exactly")

    @property
    def n_t(self) -> int:
        return round((self.t_max - self.t_min) / self.t_step) + 1

    @property
    def n_rh(self) -> int:
        return round((self.rh_max - self.rh_min) / self.rh_step) + 1

    # nearest grid index, ties round up
    def t_index(self, temp: float) -> int:
        i = math.floor((temp - self.t_min) / self.t_step + 0.5)
        return min(max(i, 0), self.n_t - 1)

    def rh_index(self, rh: float) -> int:
        i = math.floor((rh - self.rh_min) / self.rh_step + 0.5)
        return min(max(i, 0), self.n_rh - 1)

    def t_value(self, i: int) -> float:
        return self.t_min + i * self.t_step

    def rh_value(self, i: int) -> float:
        return self.rh_min + i * self.rh_step

    def snap_t(self, temp: float) -> float:
        return self.t_value(self.t_index(temp))

    def snap_rh(self, rh: float) -> float:
        return self.rh_value(self.rh_index(rh))

    def t_points(self):
        return [self.t_value(i) for i in range(self.n_t)]

    def rh_points(self):
        return [self.rh_value(i) for i in range(self.n_rh)]


@dataclass(frozen=True)
class AmbientState:
    temp: float
    rh: float
    temp_setpoint: float
    rh_setpoint: float
    t_idx: int
    rh_idx: int


def make_state(grid: ThermalGrid, temp: float, rh: float,
               temp_setpoint=None, rh_setpoint=None) -> AmbientState:
    temp = min(max(temp, grid.t_min), grid.t_max)
    rh = min(max(rh, grid.rh_min), grid.rh_max)
    tsp = grid.snap_t(temp if temp_setpoint is None else temp_setpoint)
    rsp = grid.snap_rh(rh if rh_setpoint is None else rh_setpoint)
    return AmbientState(temp, rh, tsp, rsp, grid.t_index(temp), grid.rh_index(rh))


def apply_th_action(state: AmbientState, action: ThAction, grid: ThermalGrid,
                    coupling: bool = True) -> AmbientState:
    """Move one setpoint by one grid step, clamped; optionally drag the other
    setpoint along the Magnus dew-point curve (differential coupling)."""
    tsp, rsp = state.temp_setpoint, state.rh_setpoint
    td = grid.dew_point
    if action in (ThAction.TEMP_UP, ThAction.TEMP_DOWN):
        delta = grid.t_step if action == ThAction.TEMP_UP else -grid.t_step
        new_tsp = min(max(tsp + delta, grid.t_min), grid.t_max)
        if coupling and new_tsp != tsp:
            drag = rh_from_temp(new_tsp, td) - rh_from_temp(tsp, td)
            rsp = grid.snap_rh(min(max(rsp + drag, grid.rh_min), grid.rh_max))
        tsp = new_tsp
    else:
        delta = grid.rh_step if action == ThAction.HUM_UP else -grid.rh_step
        new_rsp = min(max(rsp + delta, grid.rh_min), grid.rh_max)
        if coupling and new_rsp != rsp:
            drag = temp_from_rh(new_rsp, td) - temp_from_rh(rsp, td)
            tsp = grid.snap_t(min(max(tsp + drag, grid.t_min), grid.t_max))
        rsp = new_rsp
    return replace(state, temp_setpoint=tsp, rh_setpoint=rsp)


def tick(state: AmbientState, grid: ThermalGrid) -> AmbientState:
    """One time-step of exponential relaxation toward the setpoints."""
    temp = newton_step(state.temp, state.temp_setpoint, grid.decay_k)
    rh = newton_step(state.rh, state.rh_setpoint, grid.decay_k)
    return AmbientState(temp, rh, state.temp_setpoint, state.rh_setpoint,
                        grid.t_index(temp), grid.rh_index(rh))
