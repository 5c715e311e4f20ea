"""
Rotationally invariant two-spin states
======================================

Rotate both spins by the same angle and see which states come back unchanged.
"""

import math

import numpy as np

from spincouple import hilbert, spin

# The singlet and the parallel-correlated state, and a product state for contrast.
states = {
    "singlet": spin.make_singlet(),
    "parallel": spin.make_parallel_isc(),
    "mixed sum": spin.make_state2(),
    "|++>": hilbert.tensor(hilbert.basis_plus(), hilbert.basis_plus()),
}

# %%
# Residual of (R x R) psi - psi over the default 80-point angle grid.
grid = spin.default_grid()
for name, k in states.items():
    res = spin.invariance_residual(k, grid=grid)
    print(f"{name:10s} max residual {res:.2e}  invariant={spin.is_rotationally_invariant(k)}")

# %%
# Invariance alone is not enough: the mixed sum cannot be written as
# (s s + s- s-)/sqrt 2 along every axis.
for name in ("singlet", "parallel", "mixed sum"):
    print(f"{name:10s} isc form: {spin.is_isc_form(states[name])}")

# %%
# A half-turn (cθ = π/2) sends |++> to |-->.
print(spin.rotate_all(states["|++>"], math.pi))

# %%
# Conjugating the second spinor turns the parallel state into a singlet.
print(np.round(spin.conjugate_second(states["parallel"]).amplitudes.real, 6))
