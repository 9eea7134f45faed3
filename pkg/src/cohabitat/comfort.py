"""Fanger thermal sensation, discomfort term, and comfort-region enumeration."""

from dataclasses import dataclass
from typing import Optional

from . import kernels
from .thermo import ThermalGrid

CLO_PER_ACTIVITY = (0.5, 0.67, 0.36)  # rest, leisure, physical workout


class PmvConvergenceError(ArithmeticError):
    """The clothing-temperature fixed point failed to converge."""


@dataclass(frozen=True)
class ComfortProfile:
    met_per_activity: tuple
    clo_per_activity: tuple = CLO_PER_ACTIVITY
    band_halfwidth: float = 0.5
    air_speed: float = 0.0
    # None tracks the air temperature, which is what reproduces the
    # published comfort-region table; a float pins the radiant temperature.
    mean_radiant_temp: Optional[float] = None

    def __post_init__(self):
        if len(self.met_per_activity) != 3 or len(self.clo_per_activity) != 3:
            raise ValueError("expected one met and one clo value per activity")
        if any(not 0.5 < m <= 3.0 for m in self.met_per_activity):
            raise ValueError("met values must lie in (0.5, 3.0]")
        if any(not 0.0 <= c <= 2.0 for c in self.clo_per_activity):
            raise ValueError("clo values must lie in [0, 2]")
        if self.band_halfwidth <= 0:
            raise ValueError("band_halfwidth must be positive")

    def radiant(self, air_temp: float) -> float:
        return air_temp if self.mean_radiant_temp is None else self.mean_radiant_temp


@dataclass(frozen=True)
class PmvInput:
    air_temp: float
    radiant_temp: float
    air_speed: float
    rel_humidity: float
    met: float
    clo: float

    def __post_init__(self):
        if not 10.0 <= self.air_temp <= 40.0:
            raise ValueError("air_temp outside supported range [10, 40]")
        if not 0.0 < self.rel_humidity <= 100.0:
            raise ValueError("rel_humidity must lie in (0, 100]")
        if self.met <= 0:
            raise ValueError("met must be positive")
        if self.clo < 0:
            raise ValueError("clo must be non-negative")
        if self.air_speed < 0:
            raise ValueError("air_speed must be non-negative")


def pmv(inp: PmvInput) -> float:
    """Predicted mean vote, clamped to [-3, 3]."""
    try:
        return kernels.pmv(inp.air_temp, inp.radiant_temp, inp.air_speed,
                           inp.rel_humidity, inp.met, inp.clo)
    except ArithmeticError as exc:
        raise PmvConvergenceError(str(exc)) from exc


def discomfort(pmv_value: float, band_halfwidth: float) -> float:
    """Discomfort d: |pmv| outside the comfort band, zero inside."""
    if band_halfwidth <= 0:
        raise ValueError("band_halfwidth must be positive")
    mag = abs(pmv_value)
    return mag if mag > band_halfwidth else 0.0


def comfort_table(profile: ComfortProfile, met: float, clo: float,
                  grid: ThermalGrid):
    """Grid cells whose |PMV| fits inside the profile's comfort band,
    ordered by (temperature, humidity)."""
    cells = []
    for t in grid.t_points():
        for rh in grid.rh_points():
            v = pmv(PmvInput(t, profile.radiant(t), profile.air_speed, rh, met, clo))
            if abs(v) <= profile.band_halfwidth:
                cells.append((t, rh))
    return cells
