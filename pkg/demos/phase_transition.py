"""
Phase transition of the fluid limit
===================================

Sweeping theta = beta/mu shows that the fraction of cooperative peers that
never get the file collapses once theta * xc0 passes 1.
"""

import numpy as np

from p2ptransient import MeanFieldParams, integrate_ode, phase_sweep, terminal_uninfected

s = np.logspace(-1, 2, 13)
for xc0 in (0.1, 0.5, 0.9):
    ratio = phase_sweep(0.05, xc0, s)["xc_inf"] / xc0
    print(f"xc0={xc0}: " + " ".join(f"{v:.2f}" for v in ratio))

# the root of the conserved quantity agrees with integrating the ODE
p = MeanFieldParams(beta=2.0, mu=1.0, y0=0.05, xc0=0.95)
path = integrate_ode(p, 80.0)
print("root", terminal_uninfected(p)[0], "ode", path.xc[-1])
