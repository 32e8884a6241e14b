"""Compiled event loops for the jump processes.

Each kernel takes a ``numpy.random.Generator`` and draws, per event, one
exponential holding time from the total rate and one uniform to pick the
transition.  Paths are written into preallocated arrays whose length is the
maximum possible number of events plus one (the initial state).
"""

import numpy as np
from numba import njit

ABSORBED = 0
ALL_SERVED = 1
TIME_LIMIT = 2
THRESHOLD = 3

REASONS = ("absorbed_y_zero", "all_served", "time_limit", "threshold_reached")


@njit(cache=True, nogil=True)
def general_path(rng, lam, mu, y, xc, xf, t_max):
    """Free-rider epidemic.  Columns of ``states``: y, xc, xf.

    Also covers the fully cooperative network (``mu = 0``, ``xf = 0``), where
    the path ends at ``xc = 0`` with reason ALL_SERVED.
    """
    cap = y + 2 * xc + xf + 1
    ts = np.empty(cap)
    states = np.empty((cap, 3), dtype=np.int64)
    ts[0] = 0.0
    states[0, 0] = y
    states[0, 1] = xc
    states[0, 2] = xf
    n = 1
    t = 0.0
    reason = ABSORBED
    while y > 0:
        r_c = lam * y * xc
        r_d = mu * y
        r_f = lam * y * xf
        total = r_c + r_d + r_f
        if total <= 0.0:
            reason = ALL_SERVED
            break
        dt = rng.exponential(1.0 / total)
        if t + dt > t_max:
            reason = TIME_LIMIT
            break
        t += dt
        u = rng.random() * total
        if u < r_c:
            y += 1
            xc -= 1
        elif u < r_c + r_d:
            y -= 1
        else:
            xf -= 1
        ts[n] = t
        states[n, 0] = y
        states[n, 1] = xc
        states[n, 2] = xf
        n += 1
    return ts[:n], states[:n], reason


@njit(cache=True, nogil=True)
def fixed_rate_path(rng, lam, mu, y, x, t_max):
    """Fixed request-rate model.  Columns: y, x."""
    cap = y + 2 * x + 1
    ts = np.empty(cap)
    states = np.empty((cap, 2), dtype=np.int64)
    ts[0] = 0.0
    states[0, 0] = y
    states[0, 1] = x
    n = 1
    t = 0.0
    reason = ABSORBED
    while y > 0:
        r_i = lam * y * x / (y + x)
        r_d = mu * y
        total = r_i + r_d
        dt = rng.exponential(1.0 / total)
        if t + dt > t_max:
            reason = TIME_LIMIT
            break
        t += dt
        if rng.random() * total < r_i:
            y += 1
            x -= 1
        else:
            y -= 1
        ts[n] = t
        states[n, 0] = y
        states[n, 1] = x
        n += 1
    return ts[:n], states[:n], reason


@njit(cache=True, nogil=True)
def publisher_path(rng, lam, mu, seeds, y, x, t_max):
    """All-cooperative epidemic with ``seeds`` holders that never leave.
    Columns: y (non-permanent holders), x.  Stops once ``x = 0``."""
    cap = y + 2 * x + 1
    ts = np.empty(cap)
    states = np.empty((cap, 2), dtype=np.int64)
    ts[0] = 0.0
    states[0, 0] = y
    states[0, 1] = x
    n = 1
    t = 0.0
    reason = ALL_SERVED
    while x > 0:
        r_i = lam * (y + seeds) * x
        r_d = mu * y
        total = r_i + r_d
        dt = rng.exponential(1.0 / total)
        if t + dt > t_max:
            reason = TIME_LIMIT
            break
        t += dt
        if rng.random() * total < r_i:
            y += 1
            x -= 1
        else:
            y -= 1
        ts[n] = t
        states[n, 0] = y
        states[n, 1] = x
        n += 1
    return ts[:n], states[:n], reason


@njit(cache=True, nogil=True)
def branching_run(rng, birth, death, k, y_cap, t_max):
    """Linear birth-death process from ``k`` objects, each giving birth at
    rate ``birth`` and dying at rate ``death``.

    Runs until extinction, until the population reaches ``y_cap`` or until
    ``t_max``.  Returns (final time, final size, births, reason).
    """
    y = k
    t = 0.0
    births = 0
    reason = ABSORBED
    p_birth = birth / (birth + death)
    rate = birth + death
    while y > 0:
        if y >= y_cap:
            reason = THRESHOLD
            break
        dt = rng.exponential(1.0 / (rate * y))
        if t + dt > t_max:
            reason = TIME_LIMIT
            break
        t += dt
        if rng.random() < p_birth:
            y += 1
            births += 1
        else:
            y -= 1
    return t, y, births, reason
