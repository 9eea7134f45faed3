"""Pure-Python scalar kernels: thermal relaxation, Magnus coupling, Fanger PMV.

These are the per-tick hot functions of the simulator. A compiled Cython
twin lives in ``_core.pyx``; both expose the same signatures and are
selected at import time by :mod:`cohabitat.kernels`.
"""

import math

MAGNUS_A = 17.625
MAGNUS_B = 243.04


def newton_step(t_current: float, t_target: float, k: float) -> float:
    """One exponential relaxation step of the ambient toward its target."""
    return t_target + (t_current - t_target) * math.exp(-k)


def rh_from_temp(t: float, t_dew: float) -> float:
    """Relative humidity (%) at dry-bulb temperature t given a dew point."""
    if t <= -MAGNUS_B or t_dew <= -MAGNUS_B:
        raise ValueError("temperature below Magnus validity range")
    num = math.exp(MAGNUS_A * t_dew / (MAGNUS_B + t_dew))
    den = math.exp(MAGNUS_A * t / (MAGNUS_B + t))
    return 100.0 * num / den


def temp_from_rh(rh: float, t_dew: float) -> float:
    """Dry-bulb temperature (degC) matching a relative humidity at a dew point."""
    if rh <= 0.0:
        raise ValueError("relative humidity must be positive")
    if t_dew <= -MAGNUS_B:
        raise ValueError("dew point below Magnus validity range")
    g = MAGNUS_A * t_dew / (MAGNUS_B + t_dew)
    ln = math.log(rh / 100.0)
    return MAGNUS_B * (g - ln) / (MAGNUS_A + ln - g)


def pmv(ta: float, tr: float, vel: float, rh: float, met: float, clo: float,
        tol: float = 1e-5, max_iter: int = 200) -> float:
    """Fanger predicted mean vote, clamped to [-3, 3].

    Damped fixed-point solve for the clothing surface temperature; raises
    ArithmeticError if the iteration does not converge within max_iter.
    """
    pa = rh * 10.0 * math.exp(16.6536 - 4030.183 / (ta + 235.0))
    icl = 0.155 * clo
    m = met * 58.15
    mw = m  # no external work
    if icl > 0.078:
        fcl = 1.05 + 0.645 * icl
    else:
        fcl = 1.0 + 1.29 * icl
    hcf = 12.1 * math.sqrt(vel)
    taa = ta + 273.0
    tra = tr + 273.0
    tcla = taa + (35.5 - ta) / (3.5 * icl + 0.1)

    p1 = icl * fcl
    p2 = p1 * 3.96
    p3 = p1 * 100.0
    p4 = p1 * taa
    p5 = 308.7 - 0.028 * mw + p2 * (tra / 100.0) ** 4
    xn = tcla / 100.0
    xf = tcla / 50.0
    eps = tol / 100.0  # tolerance is on t_cl; xn carries t_cl/100
    hc = hcf
    n = 0
    while abs(xn - xf) > eps:
        xf = (xf + xn) / 2.0
        hcn = 2.38 * abs(100.0 * xf - taa) ** 0.25
        hc = hcf if hcf > hcn else hcn
        xn = (p5 + p4 * hc - p2 * xf ** 4) / (100.0 + p3 * hc)
        n += 1
        if n > max_iter:
            raise ArithmeticError(
                "clothing-temperature iteration failed to converge "
                f"after {max_iter} steps (ta={ta}, rh={rh}, met={met}, clo={clo})")
    tcl = 100.0 * xn - 273.0

    hl1 = 3.05e-3 * (5733.0 - 6.99 * mw - pa)
    hl2 = 0.42 * (mw - 58.15) if mw > 58.15 else 0.0
    hl3 = 1.7e-5 * m * (5867.0 - pa)
    hl4 = 0.0014 * m * (34.0 - ta)
    hl5 = 3.96 * fcl * (xn ** 4 - (tra / 100.0) ** 4)
    hl6 = fcl * hc * (tcl - tr)
    ts = 0.303 * math.exp(-0.036 * m) + 0.028
    value = ts * (mw - hl1 - hl2 - hl3 - hl4 - hl5 - hl6)
    if value > 3.0:
        return 3.0
    if value < -3.0:
        return -3.0
    return value
