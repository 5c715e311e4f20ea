"""Rotations, rotational invariance, ISC states and Born-rule measures."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .hilbert import (
    ATOL,
    Ket,
    Operator,
    apply,
    identity,
    inner,
    kron,
    norm,
    orthogonal_spinor,
    spinor,
    tensor,
)

SPIN_HALF = 0.5
PHOTON = 1.0

_SQRT_HALF = 1 / math.sqrt(2)


@dataclass(frozen=True)
class RotationSpec:
    theta: float
    c: float = SPIN_HALF

    def operator(self) -> Operator:
        return rotation(self.theta, self.c)


@dataclass(frozen=True)
class MeasurementAxes:
    """One measurement direction per particle (radians)."""

    axes: tuple[float, ...]
    c: float = SPIN_HALF

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(float(a) for a in self.axes))


def rotation(theta: float, c: float = SPIN_HALF) -> Operator:
    """``[[cos(c theta), sin(c theta)], [-sin(c theta), cos(c theta)]]``."""
    co, si = math.cos(c * theta), math.sin(c * theta)
    return Operator([[co, si], [-si, co]])


def default_grid(uniform: int = 64, random: int = 16, seed: int = 0) -> np.ndarray:
    """Angles on which "for all theta" is decided.

    ``uniform`` equally spaced points in ``[0, 2 pi)`` followed by ``random``
    points drawn from a seeded PCG64 generator.
    """
    rng = np.random.default_rng(seed)
    return np.concatenate([
        np.linspace(0.0, 2 * math.pi, uniform, endpoint=False),
        rng.uniform(0.0, 2 * math.pi, random),
    ])


def _two_level(k: Ket) -> None:
    if any(d != 2 for d in k.dims):
        raise ValueError(f"expected two-level factors only, got dims {k.dims}")


def rotate_all(k: Ket, theta: float, c: float = SPIN_HALF) -> Ket:
    """Apply the same rotation to every factor of ``k``."""
    _two_level(k)
    return apply(kron([rotation(theta, c)] * k.factors), k)


def invariance_residual(k: Ket, c: float = SPIN_HALF, grid: Iterable[float] | None = None,
                        up_to_phase: bool = False) -> float:
    """Largest ``|| (R (x) ... (x) R) k - k ||`` over ``grid``.

    With ``up_to_phase`` the rotated state is first aligned to ``k`` by the
    best global phase.
    """
    grid = default_grid() if grid is None else grid
    worst = 0.0
    for theta in grid:
        rk = rotate_all(k, theta, c)
        if up_to_phase:
            ov = inner(rk, k)
            phase = ov / abs(ov) if abs(ov) > 0 else 1.0
            rk = rk * phase
        worst = max(worst, norm(rk - k))
    return worst


def is_rotationally_invariant(k: Ket, c: float = SPIN_HALF, grid: Iterable[float] | None = None,
                              tol: float = ATOL, up_to_phase: bool = False) -> bool:
    """Whether simultaneous rotation of every factor leaves ``k`` unchanged.

    Exact equality is required unless ``up_to_phase`` is set.
    """
    if k.factors < 2:
        raise ValueError("rotational invariance is defined for two or more factors")
    return invariance_residual(k, c, grid, up_to_phase) < tol


def make_singlet() -> Ket:
    """``(|+-> - |-+>) / sqrt 2``."""
    return Ket([0, _SQRT_HALF, -_SQRT_HALF, 0])


def make_parallel_isc() -> Ket:
    """``(|++> + |-->) / sqrt 2``."""
    return Ket([_SQRT_HALF, 0, 0, _SQRT_HALF])


def make_state2() -> Ket:
    """``(|++> + |--> + |+-> - |-+>) / 2``: invariant, but not ISC."""
    return Ket([0.5, 0.5, -0.5, 0.5])


def _isc_fit(k: Ket, s: Ket, t: Ket) -> tuple[float, float, float]:
    """Project ``k`` onto ``{s (x) t, s- (x) t-}``; return |coefficients| and residual."""
    e1 = tensor(s, t)
    e2 = tensor(orthogonal_spinor(s), orthogonal_spinor(t))
    a, b = inner(e1, k), inner(e2, k)
    resid = norm(k - e1 * a - e2 * b)
    return abs(a), abs(b), resid


def is_isc_form(k: Ket, c: float = SPIN_HALF, grid: Iterable[float] | None = None,
                tol: float = ATOL) -> bool:
    """Whether ``k`` can be written as ``(s1 s2 +- s1- s2-)/sqrt 2`` along every axis.

    Along axis ``theta`` particle 1 is expanded in ``s = spinor(theta, c)``
    and particle 2 either in the same spinor (parallel correlation) or in its
    orthogonal one (anti-parallel correlation).  The correlation type must be
    the same for every axis of ``grid``.
    """
    if k.dims != (2, 2):
        raise ValueError(f"expected a two-particle spin state, got dims {k.dims}")
    if abs(norm(k) - 1) > tol:
        raise ValueError("is_isc_form expects a normalized state")
    grid = default_grid() if grid is None else grid
    pairings = {"parallel": True, "anti-parallel": True}
    for theta in grid:
        s = spinor(theta, c)
        for name in pairings:
            if not pairings[name]:
                continue
            t = s if name == "parallel" else orthogonal_spinor(s)
            a, b, resid = _isc_fit(k, s, t)
            ok = resid < tol and abs(a - _SQRT_HALF) < tol and abs(b - _SQRT_HALF) < tol
            pairings[name] = ok
        if not any(pairings.values()):
            return False
    return any(pairings.values())


# |+> -> |->, |-> -> -|+>: re-reads particle 2 along theta + pi
_CONJUGATOR = Operator([[0, -1], [1, 0]])


def conjugate_second(k: Ket) -> Ket:
    """Replace the second spinor by its spinor conjugate.

    Maps the parallel ISC state onto the singlet (the improper singlet).
    """
    if k.dims != (2, 2):
        raise ValueError(f"expected a two-particle spin state, got dims {k.dims}")
    return apply(kron(identity(2), _CONJUGATOR), k)


@dataclass(frozen=True)
class JointDistribution:
    """Probabilities of outcome tuples over ``{+1, -1}``.

    Particle positions in the tuples are 0-based.
    """

    probs: Mapping[tuple[int, ...], float] = field(default_factory=dict)
    atol: float = 1e-12

    def __post_init__(self):
        probs = {tuple(int(v) for v in o): float(p) for o, p in self.probs.items()}
        if not probs:
            raise ValueError("empty distribution")
        for o, p in probs.items():
            if any(v not in (1, -1) for v in o):
                raise ValueError(f"outcome {o} is not over {{+1, -1}}")
            if not (-self.atol <= p <= 1 + self.atol):
                raise ValueError(f"probability {p} of {o} outside [0, 1]")
        total = math.fsum(probs.values())
        if abs(total - 1) > self.atol:
            raise ValueError(f"total mass {total!r} differs from 1")
        object.__setattr__(self, "probs", probs)

    @property
    def particles(self) -> int:
        return len(next(iter(self.probs)))

    def __getitem__(self, outcome: Sequence[int]) -> float:
        return self.probs.get(tuple(outcome), 0.0)

    def __iter__(self):
        return iter(self.probs.items())

    def probability(self, event: Callable[[tuple[int, ...]], bool]) -> float:
        return math.fsum(p for o, p in self.probs.items() if event(o))

    def marginal(self, particles: Sequence[int]) -> JointDistribution:
        out: dict[tuple[int, ...], float] = {}
        for o, p in self.probs.items():
            key = tuple(o[i] for i in particles)
            out[key] = out.get(key, 0.0) + p
        return JointDistribution(out, self.atol)

    def total(self) -> float:
        return math.fsum(self.probs.values())


def measurement_basis(theta: float, c: float = SPIN_HALF) -> dict[int, Ket]:
    """``{+1: spinor(theta), -1: its orthogonal spinor}``."""
    s = spinor(theta, c)
    return {1: s, -1: orthogonal_spinor(s)}


def spectral_probability(k: Ket, axes: MeasurementAxes | Sequence[float],
                         c: float = SPIN_HALF, atol: float = 1e-12) -> JointDistribution:
    """Born-rule distribution of the spin values measured along ``axes``.

    Particle ``n`` is measured along ``axes[n]``; outcome ``+1`` projects on
    ``spinor(axis, c)`` and ``-1`` on the orthogonal spinor.
    """
    if isinstance(axes, MeasurementAxes):
        axes, c = axes.axes, axes.c
    axes = tuple(axes)
    _two_level(k)
    if len(axes) != k.factors:
        raise ValueError(f"{len(axes)} axes for a {k.factors}-particle state")
    if abs(norm(k) - 1) > atol:
        raise ValueError(f"state must be normalized, norm is {norm(k)!r}")
    bases = [measurement_basis(a, c) for a in axes]
    # amplitude of each outcome tuple: contract k with the conjugated basis vectors
    t = k.amplitudes.reshape(k.dims)
    probs = {}
    for outcome in itertools.product((1, -1), repeat=k.factors):
        amp = t
        for b, v in zip(bases, outcome):
            amp = np.tensordot(np.conj(b[v].amplitudes), amp, axes=(0, 0))
        probs[outcome] = float(abs(complex(amp)) ** 2)
    return JointDistribution(probs, atol)


def conditional(d: JointDistribution, particle: int, value: int) -> JointDistribution:
    """Restrict ``d`` to outcomes with ``particle == value`` and renormalize."""
    if value not in (1, -1):
        raise ValueError("value must be +1 or -1")
    if not 0 <= particle < d.particles:
        raise IndexError(f"particle {particle} out of range for {d.particles} particles")
    mass = d.probability(lambda o: o[particle] == value)
    if mass <= 0.0:
        raise ValueError(f"conditioning event S[{particle}] = {value:+d} has zero probability")
    return JointDistribution({o: p / mass for o, p in d if o[particle] == value}, d.atol)
