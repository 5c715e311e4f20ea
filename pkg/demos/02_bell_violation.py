"""
Three directions, one contradiction
===================================

A classical joint distribution for three perfectly correlated spin pairs
must satisfy a triangle inequality.  Quantum disagreement rates do not.
"""

import math
from fractions import Fraction

import numpy as np

from spincouple import coupling

# Directions in units of pi give exact rational arithmetic.
directions = (Fraction(0), Fraction(1, 3), Fraction(2, 3))
report = coupling.bell_check(*directions)
print(f"lhs = {report.lhs}, rhs = {report.rhs}, violated = {report.violated}")

# %%
# The same question as a linear feasibility problem over the 8 sign assignments.
problem = coupling.LhvProblem.from_angles(directions)
result = coupling.lhv_feasibility(problem)
print("feasible:", result.feasible)
print("certificate:", [str(v) for v in result.farkas])
print("violated:", result.violated_inequalities)

# %%
# Two directions alone are always fine.
pair = coupling.lhv_feasibility(coupling.LhvProblem.from_angles(directions[:2]))
for signs, mass in sorted(pair.distribution.items(), reverse=True):
    print(signs, mass)

# %%
# Scan a 20 x 20 x 20 grid and compare the LP with the three cyclic inequalities.
grid = np.linspace(0, 2 * math.pi, 20, endpoint=False)
cc = coupling.lhv_bell_crosscheck(grid)
print(f"{cc.triples} triples, {cc.agree} agree")
print(f"LP infeasible although the cyclic inequalities hold: {len(cc.lp_infeasible_bell_ok)}")
# those triples all break the perimeter inequality p01 + p12 + p02 <= 2
t = cc.lp_infeasible_bell_ok[0]
print(t, coupling.cut_inequalities(coupling.LhvProblem.from_angles(t), 1e-9))
