"""Reference computations used only by the tests.

Kept deliberately naive: fixed-step classical Runge-Kutta and direct
formulas, so that they share no code path with the package.
"""

import numpy as np


def rk4(f, y0, t_end, n_steps):
    """Classical fourth-order Runge-Kutta with a fixed step; returns the
    grid and the states on it."""
    h = t_end / n_steps
    y = np.array(y0, dtype=float)
    ts = np.linspace(0.0, t_end, n_steps + 1)
    out = np.empty((n_steps + 1, len(y)))
    out[0] = y
    for i in range(n_steps):
        t = ts[i]
        k1 = f(t, y)
        k2 = f(t + h / 2, y + h / 2 * k1)
        k3 = f(t + h / 2, y + h / 2 * k2)
        k4 = f(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[i + 1] = y
    return ts, out


def kolmogorov_g1(birth, death):
    """Backward equation for the extinction CDF of one object of a linear
    birth-death process: G' = death - (birth + death) G + birth G**2."""
    def f(t, g):
        return np.array([death - (birth + death) * g[0] + birth * g[0] ** 2])
    return f


def meanfield_rhs(beta, mu):
    def f(t, u):
        y, xc, xf = u
        return np.array([y * (beta * xc - mu), -beta * y * xc, -beta * y * xf])
    return f
