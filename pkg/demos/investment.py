"""
Paying peers to leave
=====================

A content owner keeps a few permanent publishers and can pay alpha to make
other holders leave faster, at rate mu * alpha.  Slower spreading raises the
mean delay T(alpha), and the owner trades that against the cost.
"""

import numpy as np

from p2ptransient import ControlParams
from p2ptransient.control import delay_curve, optimize_alpha

n = 500
p = ControlParams(n, beta=2.0, mu_base=0.5, alpha=1.0, y_star=2 / n, y0=0.0, x0=498 / n)
curve = delay_curve(p, np.linspace(0.5, 40, 9))
for a, t, h in zip(curve.alpha, curve.t_bar, curve.h):
    print(f"alpha={a:6.2f}  T={t:7.3f}  utility={h:7.3f}")

a_star, h_star = optimize_alpha(p, (0.5, 40.0))
print(f"best alpha {a_star:.3f}, utility {h_star:.3f}, "
      f"beta/mu(alpha*) = {p.beta / p.with_alpha(a_star).mu_of_alpha:.3f}")
