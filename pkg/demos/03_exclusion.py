"""
Antisymmetrization and exclusion
================================
"""

import math

import numpy as np

from spincouple import hilbert, statistics

plus, minus = hilbert.basis_plus(), hilbert.basis_minus()

# Two different spins give the singlet, two equal ones give nothing.
print(statistics.antisymmetrize([plus, minus]))
print(statistics.antisymmetrize([plus, plus]).is_zero())

# %%
# Three particles in orthonormal 3-level states: unit norm, and the six
# coefficients alternate with parity.
q, _ = np.linalg.qr(np.random.default_rng(0).normal(size=(3, 3)))
parts = [hilbert.Ket(q[:, i]) for i in range(3)]
state = statistics.antisymmetrize(parts)
coeffs = statistics.permutation_coefficients(state, parts)
print(f"norm {hilbert.norm(state):.12f}")
print(np.round(np.real(coeffs) * math.sqrt(6), 12))
print(statistics.classify_permutable(coeffs).kind)

# %%
# A sign pattern that is neither all-equal nor parity-alternating.
w = 1 / math.sqrt(6)
print(statistics.classify_permutable([w, w, w, w, w, -w]).kind)

# %%
# Fock spin states: one spinor per measurement direction.
dirs = (0.0, math.pi / 3, 2 * math.pi / 3)
a = statistics.FockSpinState(dirs, (plus, plus, minus))
b = statistics.FockSpinState(dirs, (minus, plus, plus))
c = statistics.FockSpinState(dirs, (plus, minus, plus))
# each flattened Fock vector has norm sqrt(m), so the result is not unit norm
print("distinct:", hilbert.norm(statistics.fock_antisymmetrize([a, b, c])))
print("repeated:", hilbert.norm(statistics.fock_antisymmetrize([a, a, c])))
