"""
Branching first, fluid later
============================

A cheap approximation: run the birth-death process until n0 peers hold the
file, then hand over to the fluid limit.  The full chain is used to check it.
"""

import numpy as np

from p2ptransient import GeneralParams, child_seed, run_ensemble, simulate_hybrid
from p2ptransient.experiments import late_survival_mask

p = GeneralParams.from_ratio(400, 0.006, 1.0, 1, 0.6)
runs = [simulate_hybrid(p, child_seed(9, i), n0=10) for i in range(2000)]
late = [r.xc_final for r in runs if not r.early_extinction]
print(f"early extinctions {1 - len(late) / len(runs):.3f} (branching says {1 / p.rho:.3f})")

full = run_ensemble("general", p, master_seed=10, replicates=1000)
mask = late_survival_mask(p, full.final_xc)
print(f"never served: hybrid {np.mean(late):.4f}  full chain {full.final_xc[mask].mean() / p.n_total:.4f}")
