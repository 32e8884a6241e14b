"""
Exact answers for a tiny swarm
==============================

With a handful of peers the state space is small enough to solve exactly,
which makes a good check on the simulator.
"""

import numpy as np

from p2ptransient import GeneralParams, empirical_cdf, exact_small_n, run_ensemble

p = GeneralParams(4, 1.0, 1.0, y0=1, nc=2, nf=1)
exact = exact_small_n(p, t_grid=[0.5, 1, 2, 5])
ens = run_ensemble("general", p, master_seed=5, replicates=50_000)

print("(xc, xf) left   exact   simulated")
for (xc, xf), prob in sorted(exact.terminal.items()):
    freq = np.mean((ens.final_xc == xc) & (ens.final_xf == xf))
    print(f"({xc}, {xf})          {prob:.4f}  {freq:.4f}")

F = empirical_cdf(ens.extinction_time)
for t, prob in zip(exact.t_grid, exact.extinction_cdf):
    print(f"P(T <= {t}) exact {prob:.4f}  simulated {F(t):.4f}")
