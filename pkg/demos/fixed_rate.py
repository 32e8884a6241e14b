"""
Fixed request rate
==================

When each peer requests at a fixed rate, the scaled fluid limit is explicit.
It has two thresholds: everyone is served once xi = lambda/mu reaches 1, and
the torrent grows before it shrinks once xi exceeds 1/x0.
"""

from p2ptransient import FixedRateMeanField, FixedRateParams, run_ensemble
from p2ptransient.fixedrate import max_torrent, terminal_uninfected_fraction

x0 = 0.8
for xi in (0.3, 0.8, 1.0, 1.25, 2.0, 3.0):
    p = FixedRateMeanField(xi, 1.0, x0)
    y_max, t_peak = max_torrent(p)
    print(f"xi={xi:4.2f}  never served {terminal_uninfected_fraction(p):.4f}  "
          f"peak {y_max:.4f} at t={t_peak:.3f}")

# a 10 000 peer swarm lands on the formula
n = 10_000
sim = FixedRateParams(n, 0.5, 1.0, int(n * (1 - x0)))
ens = run_ensemble("fixed_rate", sim, master_seed=3, replicates=20)
print("simulated", ens.final_xc.mean() / n,
      "formula", terminal_uninfected_fraction(FixedRateMeanField(0.5, 1.0, x0)))
