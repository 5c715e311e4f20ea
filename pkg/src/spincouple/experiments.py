"""Quantitative checks: Fermi filling energy, the deuteron spin-split
prediction, moment generating functions, and Monte Carlo measurement.

Random numbers come from NumPy's PCG64 bit generator.  Stream ``k`` of seed
``s`` is seeded with ``SeedSequence([s, k])``, so chunked sampling is
reproducible regardless of how the chunks are scheduled.
"""
from __future__ import annotations

import enum
import math
import warnings
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from .hilbert import Ket, norm, spinor, tensor
from .spin import MeasurementAxes, make_singlet, spectral_probability
from .statistics import antisymmetrize

OUTCOMES = (1, 0, -1)


def rng_stream(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(stream)])))


# -- Fermi gas ---------------------------------------------------------------


@dataclass(frozen=True)
class EnergyLevels:
    levels: tuple

    def __post_init__(self):
        lv = tuple(self.levels)
        if any(isinstance(e, float) and not math.isfinite(e) for e in lv):
            raise ValueError("energy levels must be finite")
        if any(b < a for a, b in zip(lv, lv[1:])):
            raise ValueError("energy levels must be sorted ascending")
        object.__setattr__(self, "levels", lv)


def fermi_ground_energy(levels: EnergyLevels | Sequence, particles: int):
    """Lowest energy of ``2n`` spin-paired fermions: ``2 (E_1 + ... + E_n)``.

    Exact for ``int`` and ``Fraction`` levels.
    """
    if not isinstance(levels, EnergyLevels):
        levels = EnergyLevels(tuple(levels))
    if particles < 0 or particles % 2:
        raise ValueError(f"need an even particle count, got {particles}")
    n = particles // 2
    if n > len(levels.levels):
        raise ValueError(f"{particles} particles need {n} levels, only {len(levels.levels)} given")
    return 2 * sum(levels.levels[:n])


def spin_orbital(level: int, n_levels: int, spin: int) -> Ket:
    """Single-particle state ``|level> (x) |spin>`` on ``C^n_levels (x) C^2``."""
    if not 0 <= level < n_levels:
        raise IndexError(f"level {level} out of range")
    amps = np.zeros(2 * n_levels)
    amps[2 * level + (0 if spin > 0 else 1)] = 1.0
    return Ket(amps, (2 * n_levels,))


def filled_state(occupation: Sequence[tuple[int, int]], n_levels: int) -> Ket:
    """Antisymmetrized product of the given ``(level, spin)`` occupations."""
    return antisymmetrize([spin_orbital(lv, n_levels, s) for lv, s in occupation])


def ground_occupation(particles: int) -> list[tuple[int, int]]:
    """Each of the lowest ``particles/2`` levels holds one up and one down spin."""
    if particles % 2:
        raise ValueError("need an even particle count")
    return [(lv, s) for lv in range(particles // 2) for s in (1, -1)]


# -- deuteron ----------------------------------------------------------------


class DeuteronModel(enum.Enum):
    """Spin-1 split of a triplet deuteron.

    ``INDEPENDENT`` treats the two spin-1/2 constituents as independent
    uniform variables; ``CONVENTIONAL`` is uniform over ``+1, 0, -1``.
    """

    INDEPENDENT = "independent"
    CONVENTIONAL = "conventional"

    @classmethod
    def _missing_(cls, value):
        if value in ("paper", "paper-model"):
            return cls.INDEPENDENT
        return None


def independent_pair_distribution() -> dict[int, Fraction]:
    """Distribution of ``S_1 + S_2`` for two independent uniform spin-1/2 values."""
    half = Fraction(1, 2)
    out = {x: Fraction(0) for x in OUTCOMES}
    for s1 in (half, -half):
        for s2 in (half, -half):
            out[int(s1 + s2)] += Fraction(1, 4)
    return out


def deuteron_exact(model: DeuteronModel | str | Mapping[int, float]) -> dict[int, Fraction | float]:
    """Probabilities of the observed spin values ``+1, 0, -1``.

    ``model`` may also be a user distribution over those outcomes, e.g. a
    dependent but non-deterministic pairing.
    """
    if isinstance(model, Mapping):
        dist = {int(k): v for k, v in model.items()}
        if set(dist) != set(OUTCOMES):
            raise ValueError(f"distribution must cover exactly {OUTCOMES}")
        if any(v < 0 for v in dist.values()) or abs(float(sum(dist.values())) - 1) > 1e-12:
            raise ValueError("not a probability distribution")
        return {k: dist[k] for k in OUTCOMES}
    model = DeuteronModel(model)
    if model is DeuteronModel.INDEPENDENT:
        return independent_pair_distribution()
    return {k: Fraction(1, 3) for k in OUTCOMES}


def _probs(model) -> np.ndarray:
    d = deuteron_exact(model)
    return np.array([float(d[k]) for k in OUTCOMES])


def chi_square(counts: Sequence[int], probs: Sequence[float]) -> tuple[float, float]:
    """Pearson statistic and p-value, ``len(counts) - 1`` degrees of freedom."""
    counts = np.asarray(counts, dtype=float)
    expected = counts.sum() * np.asarray(probs, dtype=float)
    stat = float(np.sum((counts - expected) ** 2 / expected))
    return stat, float(stats.chi2.sf(stat, len(counts) - 1))


@dataclass
class SampleReport:
    model: str
    samples: int
    seed: int
    counts: dict[int, int]
    frequencies: dict[int, float]
    chi2: dict[str, float] = field(default_factory=dict)
    p_values: dict[str, float] = field(default_factory=dict)


def _multinomial(samples: int, probs: np.ndarray, seed: int, streams: int) -> np.ndarray:
    total = np.zeros(len(probs), dtype=np.int64)
    sizes = [samples // streams + (k < samples % streams) for k in range(streams)]
    for k, size in enumerate(sizes):
        if size:
            total += rng_stream(seed, k).multinomial(size, probs)
    return total


def deuteron_simulate(model: DeuteronModel | str | Mapping[int, float], samples: int,
                      seed: int = 42, streams: int = 1) -> SampleReport:
    """Simulate a Stern-Gerlach split of ``samples`` deuterons.

    Chi-square statistics are reported against both built-in models.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    probs = _probs(model)
    counts = _multinomial(samples, probs, seed, streams)
    name = "custom" if isinstance(model, Mapping) else DeuteronModel(model).value
    report = SampleReport(
        model=name, samples=samples, seed=seed,
        counts={k: int(c) for k, c in zip(OUTCOMES, counts)},
        frequencies={k: float(c) / samples for k, c in zip(OUTCOMES, counts)},
    )
    for ref in DeuteronModel:
        stat, p = chi_square(counts, _probs(ref))
        report.chi2[ref.value] = stat
        report.p_values[ref.value] = p
    return report


@dataclass
class PowerReport:
    samples: int
    alpha: float
    trials: int
    seed: int
    # rejection rate of the conventional model when data follow the independent one
    reject_conventional: float
    # and the reverse direction
    reject_independent: float
    noncentral_conventional: float
    noncentral_independent: float


def noncentral_power(samples: int, alpha: float, true: Sequence[float], null: Sequence[float]) -> float:
    """Large-sample power of Pearson's test via the noncentral chi-square."""
    true, null = np.asarray(true, float), np.asarray(null, float)
    df = len(true) - 1
    nc = samples * float(np.sum((true - null) ** 2 / null))
    if alpha >= 1:
        return 1.0
    crit = stats.chi2.isf(alpha, df)
    return float(stats.ncx2.sf(crit, df, nc))


def discrimination_power(samples: int, alpha: float, trials: int = 1000, seed: int = 42) -> PowerReport:
    """Fraction of simulated experiments whose chi-square test at level
    ``alpha`` rejects the wrong model, in both directions."""
    if samples < 100:
        warnings.warn(f"{samples} samples is too few for the chi-square approximation", stacklevel=2)
    if samples < 1 or trials < 1:
        raise ValueError("samples and trials must be positive")
    indep, conv = _probs(DeuteronModel.INDEPENDENT), _probs(DeuteronModel.CONVENTIONAL)

    def rate(true, null, stream):
        counts = rng_stream(seed, stream).multinomial(samples, true, size=trials)
        expected = samples * null
        stat = np.sum((counts - expected) ** 2 / expected, axis=1)
        p = stats.chi2.sf(stat, len(true) - 1)
        return float(np.mean(p <= alpha))

    return PowerReport(
        samples=samples, alpha=alpha, trials=trials, seed=seed,
        reject_conventional=rate(indep, conv, 0),
        reject_independent=rate(conv, indep, 1),
        noncentral_conventional=noncentral_power(samples, alpha, indep, conv),
        noncentral_independent=noncentral_power(samples, alpha, conv, indep),
    )


# -- moment generating functions ---------------------------------------------


@dataclass(frozen=True)
class MgfReport:
    t: float
    marginal: float
    product_of_marginals: float
    independent_product: float
    coupled_value: float

    @property
    def independent_holds(self) -> bool:
        return abs(self.independent_product - self.product_of_marginals) < 1e-12 * max(1.0, self.product_of_marginals)

    @property
    def coupled_holds(self) -> bool:
        return abs(self.coupled_value - self.product_of_marginals) < 1e-12 * max(1.0, self.product_of_marginals)


def _mgf(dist, t: float) -> float:
    # outcomes are +-1 spin labels, i.e. spin values +-1/2
    return math.fsum(p * math.exp(t * sum(o) / 2) for o, p in dist)


def mgf_check(t: float) -> MgfReport:
    """Compare ``M(S_1) M(S_2)`` with ``M(S_1 + S_2)`` for two spin-1/2 values.

    Both joint laws come from Born probabilities along a common axis:
    independent spins from two transversely polarized particles, coupled
    spins from the singlet.
    """
    if abs(t) > 50:
        raise ValueError("|t| must be <= 50")
    transverse = spinor(math.pi / 2)
    independent = spectral_probability(tensor(transverse, transverse), (0.0, 0.0))
    coupled = spectral_probability(make_singlet(), (0.0, 0.0))
    m1 = _mgf(independent.marginal([0]), t)
    m2 = _mgf(independent.marginal([1]), t)
    return MgfReport(
        t=t,
        marginal=m1,
        product_of_marginals=m1 * m2,
        independent_product=_mgf(independent, t),
        coupled_value=_mgf(coupled, t),
    )


# -- sampling ------------------------------------------------------------------


def sample_measurements(k: Ket, axes: MeasurementAxes | Sequence[float], samples: int,
                        seed: int = 42, c: float = 0.5, streams: int = 1) -> Counter:
    """Counts of ``samples`` i.i.d. Born-rule outcomes; zero counts are omitted."""
    if abs(norm(k) - 1) > 1e-12:
        raise ValueError(f"state must be normalized, norm is {norm(k)!r}")
    if samples < 0:
        raise ValueError("samples must be >= 0")
    dist = spectral_probability(k, axes, c)
    outcomes = list(dist.probs)
    probs = np.array([dist.probs[o] for o in outcomes])
    probs = np.clip(probs, 0.0, None)
    probs /= probs.sum()
    counts = _multinomial(samples, probs, seed, streams) if samples else np.zeros(len(outcomes), int)
    return Counter({o: int(n) for o, n in zip(outcomes, counts) if n})


def total_variation(counts: Mapping[tuple, int], dist) -> float:
    n = sum(counts.values())
    keys = set(counts) | set(dist.probs)
    return 0.5 * sum(abs(counts.get(o, 0) / n - dist[o]) for o in keys)
