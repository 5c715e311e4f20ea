import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spincouple.experiments import (
    DeuteronModel, EnergyLevels, deuteron_exact, deuteron_simulate, discrimination_power,
    fermi_ground_energy, filled_state, ground_occupation, independent_pair_distribution,
    mgf_check, noncentral_power, rng_stream, sample_measurements, spin_orbital, total_variation,
)
from spincouple.hilbert import norm, spinor, tensor
from spincouple.spin import make_singlet, spectral_probability

levels = st.lists(st.fractions(-10, 10), min_size=1, max_size=8).map(sorted)


def test_energy_examples():
    assert fermi_ground_energy([1, 2, 3], 4) == 6
    assert fermi_ground_energy([5], 2) == 10
    with pytest.raises(ValueError):
        fermi_ground_energy([1, 2, 3], 3)
    with pytest.raises(ValueError):
        fermi_ground_energy([1], 4)
    with pytest.raises(ValueError):
        EnergyLevels((2, 1))


@given(levels, st.data())
def test_energy_is_twice_filled_sum(lv, data):
    n = data.draw(st.integers(0, len(lv)))
    assert fermi_ground_energy(lv, 2 * n) == sum(2 * e for e in lv[:n])


@given(levels, st.data(), st.fractions(0, 5))
def test_energy_monotone_in_each_level(lv, data, bump):
    n = data.draw(st.integers(0, len(lv)))
    i = data.draw(st.integers(0, len(lv) - 1))
    raised = sorted(lv[:i] + [lv[i] + bump] + lv[i + 1:])
    assert fermi_ground_energy(raised, 2 * n) >= fermi_ground_energy(lv, 2 * n)


@given(levels, levels)
def test_energy_additive_over_concatenation(a, b):
    b = [x + max(a) - min(b) for x in b]  # keep the joined list sorted
    joined = a + b
    assert fermi_ground_energy(joined, 2 * len(joined)) == \
        fermi_ground_energy(a, 2 * len(a)) + fermi_ground_energy(b, 2 * len(b))


def test_filling_state_energy_matches():
    # each occupied spin-orbital contributes its level energy
    energies = [1, 2, 3]
    occ = ground_occupation(4)
    assert sum(energies[lv] for lv, _ in occ) == fermi_ground_energy(energies, 4)
    assert abs(norm(filled_state(occ, 3)) - 1) < 1e-12
    assert spin_orbital(1, 3, -1).amplitudes[3] == 1


def test_deuteron_exact():
    assert deuteron_exact("independent") == {1: F(1, 4), 0: F(1, 2), -1: F(1, 4)}
    assert deuteron_exact(DeuteronModel("paper")) is not None
    assert deuteron_exact(DeuteronModel.CONVENTIONAL) == {1: F(1, 3), 0: F(1, 3), -1: F(1, 3)}
    brute = {1: 0, 0: 0, -1: 0}
    for s1 in (F(1, 2), F(-1, 2)):
        for s2 in (F(1, 2), F(-1, 2)):
            brute[int(s1 + s2)] += F(1, 4)
    assert independent_pair_distribution() == brute


def test_deuteron_custom_distribution():
    d = deuteron_exact({1: 0.2, 0: 0.6, -1: 0.2})
    assert d == {1: 0.2, 0: 0.6, -1: 0.2}
    with pytest.raises(ValueError):
        deuteron_exact({1: 0.5, 0: 0.6, -1: 0.2})


def test_deuteron_simulate():
    a = deuteron_simulate("independent", 1000, seed=7)
    assert a == deuteron_simulate("independent", 1000, seed=7)
    assert sum(a.counts.values()) == 1000
    one = deuteron_simulate("conventional", 1, seed=1)
    assert sum(one.counts.values()) == 1
    with pytest.raises(ValueError):
        deuteron_simulate("conventional", 0)


def test_streams_sum_to_requested_size():
    r = deuteron_simulate("independent", 10_001, seed=3, streams=4)
    assert sum(r.counts.values()) == 10_001


def test_power():
    r = discrimination_power(10_000, 0.001, trials=200)
    assert r.reject_conventional > 0.99 and r.reject_independent > 0.99
    with pytest.warns(UserWarning):
        small = discrimination_power(10, 0.001, trials=1000)
    assert small.reject_conventional < 0.05 and small.reject_independent < 0.05
    assert discrimination_power(200, 1.0, trials=50).reject_conventional == 1.0


def test_noncentral_power_tracks_simulation():
    r = discrimination_power(300, 0.01, trials=2000)
    assert abs(r.reject_conventional - r.noncentral_conventional) < 0.05
    assert noncentral_power(10_000, 0.001, [0.25, 0.5, 0.25], [1 / 3] * 3) > 0.999


def test_mgf_examples():
    r0 = mgf_check(0.0)
    for v in (r0.marginal, r0.independent_product, r0.coupled_value, r0.product_of_marginals):
        assert abs(v - 1) < 1e-12
    r = mgf_check(2.0)
    assert abs(r.independent_product - math.cosh(1) ** 2) < 1e-12 and r.independent_holds
    assert abs(r.coupled_value - 1) < 1e-12 and not r.coupled_holds
    assert abs(r.product_of_marginals - 2.381) < 1e-3
    with pytest.raises(ValueError):
        mgf_check(51)


@given(st.floats(-50, 50, allow_nan=False))
def test_mgf_independent_factorizes(t):
    r = mgf_check(t)
    assert abs(r.marginal - math.cosh(t / 2)) <= 1e-12 * r.marginal
    assert abs(r.independent_product - r.product_of_marginals) <= 1e-12 * r.product_of_marginals


def test_sample_measurements_singlet():
    counts = sample_measurements(make_singlet(), (0.4, 0.4), 5000, seed=1)
    assert counts[(1, 1)] == 0 and counts[(-1, -1)] == 0
    assert sum(counts.values()) == 5000
    assert sample_measurements(make_singlet(), (0, 0), 0) == {}
    with pytest.raises(ValueError):
        sample_measurements(make_singlet() * 2, (0, 0), 10)


def test_sample_disagreement_frequency():
    delta = 2 * math.pi / 3
    counts = sample_measurements(make_singlet(), (0.0, delta), 100_000, seed=2)
    born = spectral_probability(make_singlet(), (0.0, delta))
    disagree = (counts[(1, -1)] + counts[(-1, 1)]) / 100_000
    assert abs(born[(1, -1)] + born[(-1, 1)] - 0.25) < 1e-12
    assert abs(disagree - 0.25) < 0.01


@settings(max_examples=10, deadline=None)
@given(st.floats(0, 6.3), st.floats(0, 6.3), st.floats(0, 6.3), st.floats(0, 6.3))
def test_sampler_converges(t1, t2, a, b):
    k = tensor(spinor(t1), spinor(t2))
    dist = spectral_probability(k, (a, b))
    tv = np.mean([total_variation(sample_measurements(k, (a, b), 100_000, seed=s), dist)
                  for s in range(3)])
    assert tv < 0.01


def test_rng_streams_are_independent_and_reproducible():
    a = rng_stream(5, 0).integers(0, 1 << 30, 4)
    assert np.array_equal(a, rng_stream(5, 0).integers(0, 1 << 30, 4))
    assert not np.array_equal(a, rng_stream(5, 1).integers(0, 1 << 30, 4))
