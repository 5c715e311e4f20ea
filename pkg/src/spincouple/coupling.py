"""Wigner-type Bell inequality and local-hidden-variable feasibility.

Angles may be given either as floats (radians) or, for exact rational
arithmetic, as :class:`fractions.Fraction` multiples of pi.  Exact mode
only works where ``sin^2`` of the scaled angle is rational, which by
Niven's theorem means ``c * angle`` is a multiple of ``pi/6`` or ``pi/4``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np
from scipy.optimize import linprog

from .simplex import check_farkas, phase_one

Number = float | Fraction

MAX_DIRECTIONS = 20

# cos(2 pi r) for the rationals r in [0, 1) where it is rational
_RATIONAL_COS = {
    Fraction(0): Fraction(1),
    Fraction(1, 6): Fraction(1, 2),
    Fraction(1, 4): Fraction(0),
    Fraction(1, 3): Fraction(-1, 2),
    Fraction(1, 2): Fraction(-1),
    Fraction(2, 3): Fraction(-1, 2),
    Fraction(3, 4): Fraction(0),
    Fraction(5, 6): Fraction(1, 2),
}


def exact_sin_squared(x: Fraction) -> Fraction:
    """``sin^2(pi x)`` as an exact rational.

    Raises ``ValueError`` when the value is irrational.
    """
    r = Fraction(x) % 1
    try:
        cos2 = _RATIONAL_COS[r]
    except KeyError:
        raise ValueError(f"sin^2(pi * {x}) is irrational") from None
    return (1 - cos2) / 2


def as_pi_fraction(theta: float, max_denominator: int = 360, atol: float = 1e-9) -> Fraction | None:
    """Snap a radian angle to a rational multiple of pi, or ``None``."""
    q = Fraction(theta / math.pi).limit_denominator(max_denominator)
    return q if abs(float(q) * math.pi - theta) <= atol else None


def _is_exact(*values) -> bool:
    return all(isinstance(v, (Fraction, int)) and not isinstance(v, bool) for v in values)


def _exact_c(c: Number) -> Number:
    # default spin constants 0.5 and 1.0 are exact binary floats
    if isinstance(c, float) and c.is_integer() or isinstance(c, float) and (2 * c).is_integer():
        return Fraction(c)
    return c


def pair_disagreement(delta: Number, c: Number = 0.5) -> Number:
    """Probability ``sin^2(c delta)`` that two parallel-correlated spins
    measured ``delta`` apart disagree.

    ``Fraction`` arguments (``delta`` in units of pi) give an exact result.
    """
    if _is_exact(delta):
        c = _exact_c(c)
    if _is_exact(delta, c):
        return exact_sin_squared(Fraction(c) * Fraction(delta))
    return math.sin(float(c) * float(delta)) ** 2


def _angle_to_radians(theta: Number) -> float:
    return float(theta) * math.pi if isinstance(theta, Fraction) else float(theta)


@dataclass(frozen=True)
class BellReport:
    theta_i: Number
    theta_j: Number
    theta_k: Number
    c: Number
    lhs: Number
    rhs: Number
    violated: bool

    @property
    def exact(self) -> bool:
        return isinstance(self.lhs, Fraction)

    @property
    def margin(self) -> Number:
        """``lhs - rhs``; positive means the inequality fails."""
        return self.lhs - self.rhs


def bell_check(theta_i: Number, theta_j: Number, theta_k: Number, c: Number = 0.5,
               tol: float = 1e-12) -> BellReport:
    """Evaluate ``sin^2(c t_ki)/2 <= sin^2(c t_jk)/2 + sin^2(c t_ij)/2``.

    ``t_ab`` is ``|theta_b - theta_a|``.  With all-``Fraction`` inputs the
    comparison is exact and ``tol`` is ignored; equality never counts as a
    violation.
    """
    if _is_exact(theta_i, theta_j, theta_k):
        c = _exact_c(c)
    exact = _is_exact(theta_i, theta_j, theta_k, c)
    if not exact:
        theta_i, theta_j, theta_k, c = map(float, (theta_i, theta_j, theta_k, c))
    half = Fraction(1, 2) if exact else 0.5
    t_ij, t_jk, t_ki = abs(theta_j - theta_i), abs(theta_k - theta_j), abs(theta_i - theta_k)
    lhs = half * pair_disagreement(t_ki, c)
    rhs = half * pair_disagreement(t_jk, c) + half * pair_disagreement(t_ij, c)
    violated = lhs > rhs if exact else lhs > rhs + tol
    return BellReport(theta_i, theta_j, theta_k, c, lhs, rhs, bool(violated))


def bell_scan(grid: Sequence[Number], c: Number = 0.5, tol: float = 1e-12) -> list[BellReport]:
    """``bell_check`` for every ordered triple drawn from ``grid``.

    Reports come out in ``itertools.product`` order over the grid.
    """
    grid = list(grid)
    if not grid:
        raise ValueError("empty angle grid")
    return [bell_check(a, b, k, c, tol) for a, b, k in itertools.product(grid, repeat=3)]


# -- local hidden variables --------------------------------------------------

Pair = tuple[int, int]


@dataclass(frozen=True)
class LhvProblem:
    """Pairwise disagreement probabilities to be reproduced by a classical
    mixture of deterministic sign assignments."""

    directions: tuple[Number, ...]
    disagreement: Mapping[Pair, Number]

    def __post_init__(self):
        m = len(self.directions)
        if m < 2:
            raise ValueError("need at least two directions")
        d = {}
        for (a, b), p in self.disagreement.items():
            key = (min(a, b), max(a, b))
            if key[0] == key[1] or not 0 <= key[0] < key[1] < m:
                raise ValueError(f"bad pair {(a, b)} for {m} directions")
            if key in d and d[key] != p:
                raise ValueError(f"conflicting values for pair {key}")
            if not 0 <= p <= 1:
                raise ValueError(f"disagreement {p} for pair {key} outside [0, 1]")
            d[key] = p
        missing = [pr for pr in self.pairs_for(m) if pr not in d]
        if missing:
            raise ValueError(f"missing constraints for pairs {missing}")
        object.__setattr__(self, "directions", tuple(self.directions))
        object.__setattr__(self, "disagreement", d)

    @staticmethod
    def pairs_for(m: int) -> list[Pair]:
        return list(itertools.combinations(range(m), 2))

    @property
    def m(self) -> int:
        return len(self.directions)

    @property
    def pairs(self) -> list[Pair]:
        return self.pairs_for(self.m)

    @property
    def exact(self) -> bool:
        return _is_exact(*self.disagreement.values())

    @classmethod
    def from_angles(cls, directions: Sequence[Number], c: Number = 0.5) -> LhvProblem:
        """Constraints from parallel-correlated spins measured along ``directions``."""
        directions = tuple(directions)
        return cls(directions, {
            (a, b): pair_disagreement(abs(directions[b] - directions[a]), c)
            for a, b in cls.pairs_for(len(directions))
        })


@dataclass
class LhvResult:
    """Outcome of :func:`lhv_feasibility`.

    ``distribution`` maps sign assignments (one ``+1``/``-1`` per direction)
    to masses when feasible.  When infeasible, ``farkas`` holds one weight per
    constraint row (normalization first, then pairs in ``problem.pairs``
    order) such that every assignment column scores ``<= 0`` while the
    right-hand side scores ``> 0``.
    """

    problem: LhvProblem
    mode: str
    feasible: bool
    distribution: dict[tuple[int, ...], Number] | None = None
    farkas: list[Number] | None = None
    violated_inequalities: list[str] = field(default_factory=list)

    def verify(self, tol: float = 1e-9) -> bool:
        """Re-check the distribution or the certificate from scratch."""
        A, b = constraint_system(self.problem)
        exact = self.mode == "exact"
        t = 0 if exact else tol
        if self.feasible:
            assignments = list(itertools.product((1, -1), repeat=self.problem.m))
            x = [self.distribution.get(s, 0) for s in assignments]
            if any(v < -t for v in x):
                return False
            for row, bi in zip(A, b):
                lhs = sum(r * v for r, v in zip(row, x))
                if (lhs != bi) if exact else abs(lhs - bi) > t:
                    return False
            return True
        return check_farkas(A, b, self.farkas, t)


def constraint_system(problem: LhvProblem) -> tuple[list[list[int]], list[Number]]:
    """Rows ``A`` and right-hand side ``b`` over the ``2**m`` assignment masses."""
    assignments = list(itertools.product((1, -1), repeat=problem.m))
    A = [[1] * len(assignments)]
    b: list[Number] = [Fraction(1) if problem.exact else 1.0]
    for a, c in problem.pairs:
        A.append([int(s[a] != s[c]) for s in assignments])
        b.append(problem.disagreement[(a, c)])
    return A, b


def cut_inequalities(problem: LhvProblem, tol: float = 0.0) -> list[str]:
    """Named triangle and perimeter inequalities violated by ``problem``.

    These are necessary for a classical model on any three directions.
    """
    p = problem.disagreement
    exact = problem.exact
    tol = 0 if exact else tol
    out = []
    for a, b, c in itertools.combinations(range(problem.m), 3):
        ab, bc, ac = p[(a, b)], p[(b, c)], p[(a, c)]
        for name, (lhs, r1, r2) in (
            (f"p{a}{c} <= p{a}{b} + p{b}{c}", (ac, ab, bc)),
            (f"p{a}{b} <= p{a}{c} + p{b}{c}", (ab, ac, bc)),
            (f"p{b}{c} <= p{a}{b} + p{a}{c}", (bc, ab, ac)),
        ):
            if lhs > r1 + r2 + tol:
                out.append(f"{name}: {lhs} > {r1} + {r2}")
        if ab + bc + ac > 2 + tol:
            out.append(f"p{a}{b} + p{b}{c} + p{a}{c} <= 2: {ab + bc + ac} > 2")
    return out


def bell_triangle_holds(problem: LhvProblem, tol: float = 0.0) -> bool:
    """The three cyclic (triangle) inequalities for a three-direction problem."""
    if problem.m != 3:
        raise ValueError("cyclic inequalities are defined for three directions")
    tol = 0 if problem.exact else tol
    p = [problem.disagreement[pr] for pr in ((0, 1), (1, 2), (0, 2))]
    return all(p[i] <= p[(i + 1) % 3] + p[(i + 2) % 3] + tol for i in range(3))


def _flip_symmetric(assignments, x) -> dict:
    # constraints only see whether signs differ, so averaging a solution with
    # its global sign flip stays feasible
    mass = dict(zip(assignments, x))
    out = {}
    for s, v in mass.items():
        w = (v + mass[tuple(-t for t in s)]) / 2
        if w != 0:
            out[s] = w
    return out


def lhv_feasibility(problem: LhvProblem, mode: Literal["exact", "float"] = "exact",
                    tol: float = 1e-9) -> LhvResult:
    """Search for a mixture of deterministic assignments matching ``problem``.

    ``exact`` runs a rational simplex and needs rational constraint values;
    ``float`` uses HiGHS through :func:`scipy.optimize.linprog`.
    """
    if problem.m > MAX_DIRECTIONS:
        raise ValueError(f"{problem.m} directions exceeds the limit of {MAX_DIRECTIONS}")
    A, b = constraint_system(problem)
    assignments = list(itertools.product((1, -1), repeat=problem.m))
    if mode == "exact":
        if not problem.exact:
            raise TypeError("exact mode needs Fraction constraint values")
        res = phase_one(A, b)
        if res.feasible:
            return LhvResult(problem, mode, True, distribution=_flip_symmetric(assignments, res.x))
        return LhvResult(problem, mode, False, farkas=res.farkas,
                         violated_inequalities=cut_inequalities(problem))
    if mode != "float":
        raise ValueError(f"unknown mode {mode!r}")

    A_np = np.asarray(A, dtype=float)
    b_np = np.asarray([float(v) for v in b])
    m, n = A_np.shape
    flip = np.where(b_np < 0, -1.0, 1.0)
    A_eq = np.hstack([A_np * flip[:, None], np.eye(m)])
    cost = np.concatenate([np.zeros(n), np.ones(m)])
    lp = linprog(cost, A_eq=A_eq, b_eq=b_np * flip, bounds=(0, None), method="highs")
    if lp.status != 0:
        raise RuntimeError(f"phase-one LP failed: {lp.message}")
    if lp.fun <= tol:
        x = [max(float(v), 0.0) for v in lp.x[:n]]
        dist = {s: v for s, v in _flip_symmetric(assignments, x).items() if v > tol}
        return LhvResult(problem, mode, True, distribution=dist)
    y = (lp.eqlin.marginals * flip).tolist()
    return LhvResult(problem, mode, False, farkas=y,
                     violated_inequalities=cut_inequalities(problem, tol))


def anticorrelated_variant(problem: LhvProblem, particle: int = 1) -> LhvProblem:
    """Flip the sign convention of one particle of a three-direction problem.

    Every pair involving ``particle`` (0-based) has its disagreement
    replaced by the agreement probability.
    """
    if problem.m != 3:
        raise ValueError("the anti-correlated variant is defined for three directions")
    if not 0 <= particle < 3:
        raise IndexError(f"particle {particle} out of range")
    one = Fraction(1) if problem.exact else 1.0
    return LhvProblem(problem.directions, {
        pr: (one - p if particle in pr else p) for pr, p in problem.disagreement.items()
    })


@dataclass
class CrossCheck:
    """Agreement between LP feasibility and the three cyclic inequalities."""

    triples: int
    agree: int
    lp_infeasible_bell_ok: list[tuple[float, float, float]]
    lp_feasible_bell_violated: list[tuple[float, float, float]]

    @property
    def mismatches(self) -> int:
        return self.triples - self.agree


def lhv_bell_crosscheck(grid: Iterable[float], c: float = 0.5, tol: float = 1e-9) -> CrossCheck:
    """Run float LP feasibility and the cyclic inequalities on every grid triple.

    Mismatches are collected, not raised: the inequalities are only known to
    be necessary.
    """
    grid = [float(g) for g in grid]
    cache: dict[tuple[float, ...], bool] = {}
    agree = 0
    a_list, b_list = [], []
    triples = 0
    for t in itertools.product(grid, repeat=3):
        triples += 1
        prob = LhvProblem.from_angles(t, c)
        key = tuple(round(prob.disagreement[pr], 12) for pr in prob.pairs)
        if key not in cache:
            cache[key] = lhv_feasibility(prob, "float", tol).feasible
        lp_ok = cache[key]
        bell_ok = bell_triangle_holds(prob, tol)
        if lp_ok == bell_ok:
            agree += 1
        elif bell_ok:
            a_list.append(t)
        else:
            b_list.append(t)
    return CrossCheck(triples, agree, a_list, b_list)
