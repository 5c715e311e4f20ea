"""
Moment generating functions of coupled spins
============================================
"""

import numpy as np

from spincouple import experiments

print(f"{'t':>6s} {'M1 M2':>12s} {'independent':>12s} {'coupled':>10s}")
for t in np.linspace(0, 4, 9):
    r = experiments.mgf_check(float(t))
    print(f"{t:6.2f} {r.product_of_marginals:12.6f} {r.independent_product:12.6f} {r.coupled_value:10.6f}")
