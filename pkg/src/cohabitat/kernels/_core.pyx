# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled scalar kernels; mirrors kernels/_pure.py exactly."""

from libc.math cimport exp, log, sqrt, fabs, pow

DEF MAGNUS_A = 17.625
DEF MAGNUS_B = 243.04


def newton_step(double t_current, double t_target, double k):
    return t_target + (t_current - t_target) * exp(-k)


def rh_from_temp(double t, double t_dew):
    if t <= -MAGNUS_B or t_dew <= -MAGNUS_B:
        raise ValueError("temperature below Magnus validity range")
    return 100.0 * exp(MAGNUS_A * t_dew / (MAGNUS_B + t_dew)) \
        / exp(MAGNUS_A * t / (MAGNUS_B + t))


def temp_from_rh(double rh, double t_dew):
    cdef double g, ln
    if rh <= 0.0:
        raise ValueError("relative humidity must be positive")
    if t_dew <= -MAGNUS_B:
        raise ValueError("dew point below Magnus validity range")
    g = MAGNUS_A * t_dew / (MAGNUS_B + t_dew)
    ln = log(rh / 100.0)
    return MAGNUS_B * (g - ln) / (MAGNUS_A + ln - g)


def pmv(double ta, double tr, double vel, double rh, double met, double clo,
        double tol=1e-5, int max_iter=200):
    cdef double pa, icl, m, mw, fcl, hcf, taa, tra, tcla
    cdef double p1, p2, p3, p4, p5, xn, xf, eps, hc, hcn, tcl
    cdef double hl1, hl2, hl3, hl4, hl5, hl6, ts, value
    cdef int n = 0

    pa = rh * 10.0 * exp(16.6536 - 4030.183 / (ta + 235.0))
    icl = 0.155 * clo
    m = met * 58.15
    mw = m
    if icl > 0.078:
        fcl = 1.05 + 0.645 * icl
    else:
        fcl = 1.0 + 1.29 * icl
    hcf = 12.1 * sqrt(vel)
    taa = ta + 273.0
    tra = tr + 273.0
    tcla = taa + (35.5 - ta) / (3.5 * icl + 0.1)

    p1 = icl * fcl
    p2 = p1 * 3.96
    p3 = p1 * 100.0
    p4 = p1 * taa
    p5 = 308.7 - 0.028 * mw + p2 * pow(tra / 100.0, 4.0)
    xn = tcla / 100.0
    xf = tcla / 50.0
    eps = tol / 100.0
    hc = hcf
    while fabs(xn - xf) > eps:
        xf = (xf + xn) / 2.0
        hcn = 2.38 * pow(fabs(100.0 * xf - taa), 0.25)
        hc = hcf if hcf > hcn else hcn
        xn = (p5 + p4 * hc - p2 * pow(xf, 4.0)) / (100.0 + p3 * hc)
        n += 1
        if n > max_iter:
            raise ArithmeticError(
                "clothing-temperature iteration failed to converge "
                "after %d steps (ta=%r, rh=%r, met=%r, clo=%r)"
                % (max_iter, ta, rh, met, clo))
    tcl = 100.0 * xn - 273.0

    hl1 = 3.05e-3 * (5733.0 - 6.99 * mw - pa)
    hl2 = 0.42 * (mw - 58.15) if mw > 58.15 else 0.0
    hl3 = 1.7e-5 * m * (5867.0 - pa)
    hl4 = 0.0014 * m * (34.0 - ta)
    hl5 = 3.96 * fcl * (pow(xn, 4.0) - pow(tra / 100.0, 4.0))
    hl6 = fcl * hc * (tcl - tr)
    ts = 0.303 * exp(-0.036 * m) + 0.028
    value = ts * (mw - hl1 - hl2 - hl3 - hl4 - hl5 - hl6)
    if value > 3.0:
        return 3.0
    if value < -3.0:
        return -3.0
    return value
