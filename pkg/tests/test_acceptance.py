"""Acceptance suite: one test per criterion, each at its stated tolerance.

A pass/fail line per criterion is printed in the terminal summary.
"""
import itertools
import math
import time
from fractions import Fraction as F

import numpy as np
import pytest

from spincouple.coupling import LhvProblem, bell_check, constraint_system, lhv_bell_crosscheck, lhv_feasibility
from spincouple.experiments import (
    deuteron_exact, deuteron_simulate, discrimination_power, fermi_ground_energy, mgf_check,
    sample_measurements, total_variation,
)
from spincouple.hilbert import Ket, basis_plus, norm, spinor, tensor
from spincouple.simplex import check_farkas
from spincouple.spin import (
    conditional, default_grid, invariance_residual, is_isc_form, is_rotationally_invariant,
    make_parallel_isc, make_singlet, make_state2, spectral_probability,
)
from spincouple.statistics import (
    FockSpinState, Kind, antisymmetrize, check_group, classify_permutable, compose_statistics,
    permutations, fock_antisymmetrize,
)

CANONICAL = (F(0), F(1, 3), F(2, 3))  # directions in units of pi


def criterion(number, name):
    return pytest.mark.criterion(number, name)


@criterion(1, "Bell canonical violation")
def test_bell_canonical_violation():
    r = bell_check(*CANONICAL, c=F(1, 2))
    assert r.lhs == F(3, 8) and r.rhs == F(1, 4)
    assert 2 * r.lhs == F(3, 4) and 2 * r.rhs == F(1, 2)
    assert r.violated is True


@criterion(2, "Coupling principle as LP infeasibility")
def test_coupling_principle():
    three = LhvProblem.from_angles(CANONICAL)
    res = lhv_feasibility(three, "exact")
    A, b = constraint_system(three)
    assert not res.feasible
    assert all(isinstance(v, F) for v in res.farkas)
    assert check_farkas(A, b, res.farkas)
    two = LhvProblem.from_angles(CANONICAL[:2])
    res2 = lhv_feasibility(two, "exact")
    assert res2.feasible
    # re-evaluate every constraint from the returned masses
    dist = res2.distribution
    assert all(v >= 0 for v in dist.values()) and sum(dist.values()) == 1
    disagree = sum(p for s, p in dist.items() if s[0] != s[1])
    assert disagree == two.disagreement[(0, 1)] == F(1, 4)


@criterion(3, "Rotational invariance and ISC form")
def test_rotational_invariance():
    grid = default_grid()
    assert len(grid) == 80
    for make in (make_parallel_isc, make_singlet):
        assert invariance_residual(make(), grid=grid) < 1e-12
        assert is_rotationally_invariant(make(), grid=grid, tol=1e-12)
        assert is_isc_form(make(), grid=grid)
    pp = tensor(basis_plus(), basis_plus())
    assert invariance_residual(pp, grid=[math.pi]) > 1
    assert not is_rotationally_invariant(pp, grid=grid)
    assert is_rotationally_invariant(make_state2(), grid=grid, tol=1e-12)
    assert not is_isc_form(make_state2(), grid=grid)


@criterion(4, "Common-axis determinism and singlet exclusion")
def test_common_axis_determinism():
    for theta in default_grid():
        for make in (make_parallel_isc, make_singlet):
            d = spectral_probability(make(), (theta, theta))
            for v in (1, -1):
                second = conditional(d, 0, v).marginal([1])
                assert max(p for _, p in second) >= 1 - 1e-12
        d = spectral_probability(make_singlet(), (theta, theta))
        assert d.probability(lambda o: o[0] == o[1]) < 1e-12


@criterion(5, "Exclusion and permutation statistics")
def test_exclusion_and_statistics():
    x = spinor(1.3)
    assert norm(antisymmetrize([x, x])) < 1e-12
    q, _ = np.linalg.qr(np.random.default_rng(0).normal(size=(3, 3)))
    p1, p2, p3 = (Ket(q[:, i]) for i in range(3))
    expected = (tensor(p1, p2, p3) - tensor(p1, p3, p2) + tensor(p2, p3, p1)
                - tensor(p2, p1, p3) + tensor(p3, p1, p2) - tensor(p3, p2, p1)) / math.sqrt(6)
    assert np.max(np.abs(antisymmetrize([p1, p2, p3]).amplitudes - expected.amplitudes)) < 1e-12
    w = 1 / math.sqrt(6)
    alternating = [s.parity * w for s in permutations(3)]
    assert classify_permutable(alternating).kind is Kind.FERMI
    assert classify_permutable([w] * 6).kind is Kind.BOSE
    assert classify_permutable([w, w, w, w, w, -w]).kind is Kind.NOT_PERMUTABLE


@criterion(6, "Fock-space antisymmetrization")
def test_fock_antisymmetrization():
    dirs = (0.0, math.pi / 3, 2 * math.pi / 3)
    rng = np.random.default_rng(1)
    states = [FockSpinState(dirs, tuple(spinor(t) for t in rng.uniform(0, 4 * math.pi, 3))) for _ in range(3)]
    s1, s2, s3 = (s.flatten() for s in states)
    expansion = (tensor(s1, s2, s3) - tensor(s2, s1, s3) + tensor(s2, s3, s1)
               - tensor(s3, s2, s1) + tensor(s3, s1, s2) - tensor(s1, s3, s2)) / math.sqrt(6)
    got = fock_antisymmetrize(states)
    assert np.max(np.abs(got.amplitudes - expansion.amplitudes)) < 1e-12
    assert norm(fock_antisymmetrize([states[0], states[0], states[2]])) < 1e-12


@criterion(7, "Mixed statistics groups")
def test_mixed_statistics():
    for expr, order in (("a2xa3", 12), ("s3o(a2xa2xa2)", 48)):
        group = dict(compose_statistics(expr))
        assert len(group) == order
        check_group(group)
        # full multiplication table
        for (g, cg), (h, ch) in itertools.product(group.items(), repeat=2):
            assert group[g * h] == cg * ch


@criterion(8, "Fermi ground energy")
def test_fermi_energy():
    assert fermi_ground_energy([1, 2, 3], 4) == 6
    rng = np.random.default_rng(8)
    for _ in range(200):
        size = int(rng.integers(1, 6))
        lv = sorted(F(int(rng.integers(-50, 50)), int(rng.integers(1, 9))) for _ in range(size))
        n = int(rng.integers(0, size + 1))
        # brute force: cheapest 2n distinct (level, spin) orbitals
        orbitals = [e for e in lv for _ in (1, -1)]
        best = min((sum(c) for c in itertools.combinations(orbitals, 2 * n)), default=0)
        assert fermi_ground_energy(lv, 2 * n) == best == 2 * sum(lv[:n])


@criterion(9, "Deuteron distributions, sampling and power")
def test_deuteron(record_property):
    assert deuteron_exact("paper") == {1: F(1, 4), 0: F(1, 2), -1: F(1, 4)}
    assert deuteron_exact("conventional") == {1: F(1, 3), 0: F(1, 3), -1: F(1, 3)}
    for model in ("independent", "conventional"):
        exact = deuteron_exact(model)
        rep = deuteron_simulate(model, 10**6, seed=42)
        assert max(abs(rep.frequencies[k] - float(exact[k])) for k in exact) < 0.002
    power = discrimination_power(10**4, 0.001, trials=1000, seed=42)
    record_property("power (reject conventional, reject independent)",
                    f"{power.reject_conventional:.4f}, {power.reject_independent:.4f}")
    assert power.reject_conventional > 0.99 and power.reject_independent > 0.99


@criterion(10, "Moment generating functions")
def test_mgf():
    ts = np.linspace(-10, 10, 100)
    assert 0.0 not in ts
    for t in ts:
        r = mgf_check(float(t))
        assert abs(r.product_of_marginals - r.independent_product) < 1e-12
        # the bound is attained exactly, so compare at the relative 1e-12 scale
        gap = math.cosh(t / 2) ** 2 - 1
        assert gap > 0
        assert abs(r.coupled_value - r.product_of_marginals) >= gap - 1e-12 * max(1.0, r.product_of_marginals)


@criterion(11, "Property suite: LP cross-check and sampler convergence")
def test_property_suite(record_property):
    grid = np.linspace(0, 2 * math.pi, 20, endpoint=False)
    start = time.perf_counter()
    cc = lhv_bell_crosscheck(grid, c=0.5)
    elapsed = time.perf_counter() - start
    assert cc.triples == 8000
    record_property("cross-check triples", cc.triples)
    record_property("agree", cc.agree)
    record_property("LP infeasible, cyclic inequalities hold", len(cc.lp_infeasible_bell_ok))
    record_property("LP feasible, cyclic inequalities violated", len(cc.lp_feasible_bell_violated))
    record_property("cross-check seconds", f"{elapsed:.2f}")
    # sampler convergence, averaged over 10 seeds
    k = tensor(spinor(0.4), spinor(2.1))
    for state, axes in ((k, (0.3, 1.7)), (make_singlet(), (0.0, 2 * math.pi / 3))):
        dist = spectral_probability(state, axes)
        tv = np.mean([total_variation(sample_measurements(state, axes, 10**5, seed=s), dist)
                      for s in range(10)])
        record_property(f"mean TV at 1e5 samples, axes {axes[0]:.3f},{axes[1]:.3f}", f"{tv:.5f}")
        assert tv < 0.01
