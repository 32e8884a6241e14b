"""
Early extinction of a file in a swarm
=====================================

A file seeded by a single peer can vanish before it spreads.  Early on, each
holder behaves like an object of a linear birth-death process, which gives a
closed form for the extinction-time distribution.
"""

import numpy as np

from p2ptransient import BranchingParams, GeneralParams, empirical_cdf, run_ensemble
from p2ptransient.branching import branching_validity_horizon, extinction_cdf, extinction_probability

# 400 peers, one holder, everybody cooperates
p = GeneralParams(400, 0.006, 1.0, 1, 399, 0)
b = BranchingParams.from_general(p)
print(f"rho = {b.rho:.3f}, chance the file dies early = {extinction_probability(b):.4f}")

# simulate the full swarm and compare with the branching curve
ens = run_ensemble("general", p, master_seed=1, replicates=1000)
F = empirical_cdf(ens.extinction_time)
t_b = branching_validity_horizon(b)
for t in sorted((0.5, 1, 2, 5, t_b, 20, 50)):
    print(f"t={t:6.2f}  simulated {F(t):.3f}  branching {extinction_cdf(b, t):.3f}")

# past the plateau a second, late extinction mode appears
print("late extinctions:", int(np.sum(ens.extinction_time > t_b)))
