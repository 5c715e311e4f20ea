"""Permutations, wedge and symmetric products, Fock spin states and
Fermi/Bose classification, including mixed statistics over particle blocks.

Permutations are 0-based.  The term of a permutation ``sigma`` in a
(anti)symmetrized product is ``parts[sigma(0)] (x) ... (x) parts[sigma(n-1)]``,
and permutations are always enumerated in lexicographic order.
"""
from __future__ import annotations

import enum
import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .hilbert import ATOL, Ket, inner, norm, orthogonal_spinor, permute_factors, tensor

MAX_PERMUTATION_SIZE = 10
MAX_FOCK_PARTICLES = 6
MAX_COMPOSE_PARTICLES = 8


@dataclass(frozen=True)
class Permutation:
    """Bijection ``i -> mapping[i]`` on ``{0, ..., n-1}``."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        mapping = tuple(int(v) for v in self.mapping)
        if sorted(mapping) != list(range(len(mapping))):
            raise ValueError(f"{mapping} is not a permutation")
        object.__setattr__(self, "mapping", mapping)

    @property
    def n(self) -> int:
        return len(self.mapping)

    @property
    def parity(self) -> int:
        """``+1`` for even, ``-1`` for odd permutations."""
        seen = [False] * self.n
        cycles = 0
        for i in range(self.n):
            if not seen[i]:
                cycles += 1
                j = i
                while not seen[j]:
                    seen[j] = True
                    j = self.mapping[j]
        return -1 if (self.n - cycles) % 2 else 1

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def __mul__(self, other: Permutation) -> Permutation:
        """Composition: ``(self * other)(i) == self(other(i))``."""
        if other.n != self.n:
            raise ValueError("permutations of different size")
        return Permutation(tuple(self.mapping[j] for j in other.mapping))

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return Permutation(tuple(inv))

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> Permutation:
        m = list(range(n))
        m[i], m[j] = m[j], m[i]
        return cls(tuple(m))


def permutations(n: int) -> Iterator[Permutation]:
    """All ``n!`` permutations of ``range(n)`` in lexicographic order."""
    if n < 0 or n > MAX_PERMUTATION_SIZE:
        raise ValueError(f"n must be in [0, {MAX_PERMUTATION_SIZE}], got {n}")
    for p in itertools.permutations(range(n)):
        yield Permutation(p)


def _check_parts(parts: Sequence[Ket]) -> list[Ket]:
    parts = list(parts)
    if not parts:
        raise ValueError("need at least one part")
    if len(parts) > MAX_PERMUTATION_SIZE:
        raise ValueError(f"at most {MAX_PERMUTATION_SIZE} parts")
    dims = parts[0].dims
    for p in parts[1:]:
        if p.dims != dims:
            raise ValueError(f"dimension mismatch: {dims} vs {p.dims}")
    return parts


def weighted_sum(parts: Sequence[Ket], coefficients: Sequence[complex]) -> Ket:
    """``sum_sigma c_sigma * parts[sigma(0)] (x) ... (x) parts[sigma(n-1)]``.

    ``coefficients`` follow the lexicographic order of :func:`permutations`.
    """
    parts = _check_parts(parts)
    n = len(parts)
    coefficients = list(coefficients)
    if len(coefficients) != math.factorial(n):
        raise ValueError(f"expected {math.factorial(n)} coefficients, got {len(coefficients)}")
    total = np.zeros(parts[0].dim ** n, dtype=complex)
    for sigma, c in zip(permutations(n), coefficients):
        if c != 0:
            total += c * tensor([parts[i] for i in sigma.mapping]).amplitudes
    return Ket(total, parts[0].dims * n)


def antisymmetrize(parts: Sequence[Ket]) -> Ket:
    """``sqrt(n!) p_1 ^ ... ^ p_n = (1/sqrt n!) sum_sigma sign(sigma) (x) sigma(parts)``.

    Vanishes whenever two parts coincide.
    """
    parts = _check_parts(parts)
    n = len(parts)
    w = 1 / math.sqrt(math.factorial(n))
    return weighted_sum(parts, [w * s.parity for s in permutations(n)])


def symmetrize(parts: Sequence[Ket]) -> Ket:
    """``(1/sqrt n!) sum_sigma (x) sigma(parts)``, not renormalized."""
    parts = _check_parts(parts)
    n = len(parts)
    w = 1 / math.sqrt(math.factorial(n))
    return weighted_sum(parts, [w] * math.factorial(n))


def permutation_coefficients(state: Ket, parts: Sequence[Ket]) -> list[complex]:
    """Recover ``c_sigma`` of ``state`` when the permuted products are orthonormal."""
    parts = _check_parts(parts)
    return [inner(tensor([parts[i] for i in s.mapping]), state) for s in permutations(len(parts))]


class Kind(enum.Enum):
    FERMI = "fermi"
    BOSE = "bose"
    NOT_PERMUTABLE = "not-permutable"
    # internal node joining distinguishable blocks, no exchange between them
    DISTINGUISHABLE = "distinguishable"


@dataclass(frozen=True)
class StatisticsLabel:
    """Classification of a state, or a tree describing mixed statistics.

    A leaf carries the particle indices of one block.  An internal node
    combines its children: ``DISTINGUISHABLE`` forbids exchanging them,
    ``BOSE`` allows unsigned and ``FERMI`` parity-signed exchanges of
    whole (identically shaped) children.
    """

    kind: Kind
    block: tuple[int, ...] | None = None
    children: tuple[StatisticsLabel, ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def particles(self) -> list[int]:
        if self.is_leaf:
            return list(self.block or ())
        return [p for ch in self.children for p in ch.particles()]

    def shape(self):
        if self.is_leaf:
            return (self.kind, len(self.block or ()))
        return (self.kind, tuple(ch.shape() for ch in self.children))

    def __str__(self) -> str:
        sym = {Kind.FERMI: "a", Kind.BOSE: "s"}
        if self.is_leaf:
            if self.kind not in sym:
                return self.kind.value
            return f"{sym[self.kind]}{len(self.block)}"
        inner_ = "⊗".join(str(c) for c in self.children)
        if self.kind is Kind.DISTINGUISHABLE:
            return inner_
        return f"{sym[self.kind]}{len(self.children)}∘({inner_})"


def classify_permutable(coefficients: Sequence[complex], tol: float = ATOL) -> StatisticsLabel:
    """Classify the sign pattern of a permutable superposition.

    Fermi when ``c_sigma = u * sign(sigma) / sqrt(n!)`` and Bose when
    ``c_sigma = u / sqrt(n!)`` for one unit-modulus ``u``; anything else is
    not permutable.
    """
    coefficients = np.asarray(coefficients, dtype=complex)
    size = coefficients.size
    n = next((k for k in range(1, MAX_PERMUTATION_SIZE + 1) if math.factorial(k) == size), None)
    if n is None:
        raise ValueError(f"{size} coefficients is not n! for any n <= {MAX_PERMUTATION_SIZE}")
    w = math.sqrt(size)
    signs = np.array([s.parity for s in permutations(n)])
    unit = coefficients[0] * w
    block = tuple(range(n))
    if abs(abs(unit) - 1) > tol:
        return StatisticsLabel(Kind.NOT_PERMUTABLE, block)
    if n > 1 and np.max(np.abs(coefficients - unit * signs / w)) <= tol:
        return StatisticsLabel(Kind.FERMI, block)
    if np.max(np.abs(coefficients - unit / w)) <= tol:
        return StatisticsLabel(Kind.BOSE, block)
    return StatisticsLabel(Kind.NOT_PERMUTABLE, block)


def is_exchange_symmetric(k: Ket, atol: float = ATOL) -> int | None:
    """``+1`` if swapping any two particles fixes ``k``, ``-1`` if it negates
    it, ``None`` otherwise.  Zero vectors count as ``-1``."""
    n = k.factors
    verdict = None
    for i, j in itertools.combinations(range(n), 2):
        swapped = permute_factors(k, Permutation.transposition(n, i, j).mapping)
        if swapped.allclose(-k, atol):
            sign = -1
        elif swapped.allclose(k, atol):
            sign = 1
        else:
            return None
        if verdict is None:
            verdict = sign
        elif verdict != sign and not k.is_zero(atol):
            return None
    return verdict if verdict is not None else 1


# -- Fock spin spaces --------------------------------------------------------


@dataclass(frozen=True)
class FockSpinState:
    """A spinor for each of ``m`` measurement directions."""

    directions: tuple[float, ...]
    spinors: tuple[Ket, ...]

    def __post_init__(self):
        dirs = tuple(float(d) for d in self.directions)
        sp = tuple(self.spinors)
        if not dirs or len(dirs) != len(sp):
            raise ValueError("need equally many (>= 1) directions and spinors")
        for s in sp:
            if s.dims != (2,) or abs(norm(s) - 1) > 1e-12:
                raise ValueError("each component must be a unit single spinor")
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "spinors", sp)

    @property
    def m(self) -> int:
        return len(self.directions)

    def flatten(self) -> Ket:
        """Direct-sum vector of length ``2m``, direction-major."""
        return Ket(np.concatenate([s.amplitudes for s in self.spinors]), (2 * self.m,))

    def opposite(self) -> FockSpinState:
        return FockSpinState(self.directions, tuple(orthogonal_spinor(s) for s in self.spinors))


def _same_directions(a: FockSpinState, b: FockSpinState) -> None:
    if a.m != b.m or not np.allclose(a.directions, b.directions, atol=0, rtol=0):
        raise ValueError("Fock states are defined over different directions")


def fock_inner(a: FockSpinState, b: FockSpinState) -> float | complex:
    """``sum_k <a(theta_k), b(theta_k)>``."""
    _same_directions(a, b)
    total = sum(inner(x, y) for x, y in zip(a.spinors, b.spinors))
    return total.real if abs(total.imag) < ATOL else total


def fock_same(a: FockSpinState, b: FockSpinState, tol: float = ATOL) -> bool:
    _same_directions(a, b)
    return all(x.allclose(y, tol) for x, y in zip(a.spinors, b.spinors))


def fock_opposite(a: FockSpinState, b: FockSpinState, tol: float = ATOL) -> bool:
    _same_directions(a, b)
    return all(abs(inner(x, y)) < tol for x, y in zip(a.spinors, b.spinors))


def fock_antisymmetrize(fock_states: Sequence[FockSpinState]) -> Ket:
    """Antisymmetrized spin part ``sqrt(n!) s_1 ^ ... ^ s_n`` over Fock states.

    Zero exactly when two of the Fock states coincide.
    """
    states = list(fock_states)
    n = len(states)
    if not 1 <= n <= MAX_FOCK_PARTICLES:
        raise ValueError(f"need 1 to {MAX_FOCK_PARTICLES} Fock states, got {n}")
    m = states[0].m
    for s in states[1:]:
        if s.m != m:
            raise ValueError(f"mismatched direction counts {m} and {s.m}")
    if m < n:
        raise ValueError(f"need at least as many directions ({m}) as particles ({n})")
    return antisymmetrize([s.flatten() for s in states])


theorem3_state = fock_antisymmetrize


# -- spatial (q) factor ------------------------------------------------------


def two_particle_state(spatial: np.ndarray, s1: Ket, s2: Ket, c1: complex, c2: complex,
                       swap_spatial: bool = True) -> Ket:
    """``c1 psi(q1,q2) s1 (x) s2 + c2 psi(q2,q1) s2 (x) s1``.

    ``spatial`` is a ``d x d`` array holding ``psi(q1, q2)``; the result
    lives on ``C^d (x) C^d (x) H_1 (x) H_2`` (both q factors first).  With
    ``swap_spatial=False`` the second term keeps ``psi(q1, q2)``.
    """
    spatial = np.asarray(spatial, dtype=complex)
    if spatial.ndim != 2 or spatial.shape[0] != spatial.shape[1]:
        raise ValueError("spatial factor must be a square d x d array")
    d = spatial.shape[0]
    q12 = Ket(spatial.reshape(-1), (d, d))
    q21 = Ket(spatial.T.reshape(-1), (d, d)) if swap_spatial else q12
    return tensor(q12, s1, s2) * c1 + tensor(q21, s2, s1) * c2


def spin_singlet_state(spatial: np.ndarray, s1: Ket, s2: Ket) -> Ket:
    """Two particles whose spins form a singlet, with an arbitrary spatial weight:
    ``(psi(q1,q2) s1 (x) s2 - psi(q1,q2) s2 (x) s1) / sqrt 2``."""
    return two_particle_state(spatial, s1, s2, 1 / math.sqrt(2), -1 / math.sqrt(2), swap_spatial=False)


def decoupled_state(spatial: np.ndarray, s1: Ket, s2: Ket) -> Ket:
    """``(psi(q1,q2) s1 (x) s2 + psi(q2,q1) s2 (x) s1) / sqrt 2``."""
    return two_particle_state(spatial, s1, s2, 1 / math.sqrt(2), 1 / math.sqrt(2))


# -- mixed statistics --------------------------------------------------------


def fermi(block: Sequence[int]) -> StatisticsLabel:
    return StatisticsLabel(Kind.FERMI, tuple(block))


def bose(block: Sequence[int]) -> StatisticsLabel:
    return StatisticsLabel(Kind.BOSE, tuple(block))


def product(*labels: StatisticsLabel) -> StatisticsLabel:
    return StatisticsLabel(Kind.DISTINGUISHABLE, children=tuple(labels))


def exchange(kind: Kind, *labels: StatisticsLabel) -> StatisticsLabel:
    """Allow exchanging whole, identically shaped blocks (``s_k∘(...)``)."""
    return StatisticsLabel(kind, children=tuple(labels))


_TOKEN = re.compile(r"\s*(?:([as])_?(\d+)|(\()|(\))|([x⊗*])|([o∘]))")


def parse_statistics(expr: str) -> StatisticsLabel:
    """Parse expressions such as ``a2⊗a3`` or ``s3∘(a2⊗a2⊗a2)``.

    ASCII ``x``/``*`` and ``o`` may replace ``⊗`` and ``∘``.  Particles are
    numbered left to right from 0.
    """
    tokens = []
    pos = 0
    expr = expr.strip()
    while pos < len(expr):
        m = _TOKEN.match(expr, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected input at {expr[pos:]!r}")
        tokens.append(m.groups())
        pos = m.end()
    counter = itertools.count()

    def peek():
        return tokens[0] if tokens else None

    def take():
        if not tokens:
            raise ValueError(f"unexpected end of {expr!r}")
        return tokens.pop(0)

    def parse_product():
        terms = [parse_term()]
        while peek() and peek()[4]:
            take()
            terms.append(parse_term())
        return terms[0] if len(terms) == 1 else product(*terms)

    def parse_term():
        tok = take()
        if tok[2]:
            node = parse_product()
            if not (tok := take())[3]:
                raise ValueError(f"expected ')' in {expr!r}")
            return node
        if not tok[0]:
            raise ValueError(f"expected a_n or s_n in {expr!r}")
        kind = Kind.FERMI if tok[0] == "a" else Kind.BOSE
        size = int(tok[1])
        if size < 1:
            raise ValueError("block size must be positive")
        if peek() and peek()[5]:
            take()
            inner_ = parse_term()
            kids = inner_.children if inner_.kind is Kind.DISTINGUISHABLE else (inner_,)
            if len(kids) != size:
                raise ValueError(f"{tok[0]}{size}∘ needs {size} blocks, got {len(kids)}")
            return exchange(kind, *kids)
        return StatisticsLabel(kind, tuple(next(counter) for _ in range(size)))

    label = parse_product()
    if tokens:
        raise ValueError(f"trailing input in {expr!r}")
    return label


def _validate_tree(label: StatisticsLabel) -> int:
    parts = label.particles()
    n = len(parts)
    if sorted(parts) != list(range(n)):
        raise ValueError(f"leaf blocks {parts} do not partition range({n})")
    if n > MAX_COMPOSE_PARTICLES:
        raise ValueError(f"at most {MAX_COMPOSE_PARTICLES} particles, got {n}")

    def walk(node):
        if node.is_leaf:
            if node.kind not in (Kind.FERMI, Kind.BOSE) or not node.block:
                raise ValueError(f"malformed leaf {node}")
            return
        if node.kind is Kind.NOT_PERMUTABLE:
            raise ValueError("not-permutable node in a statistics tree")
        if node.kind in (Kind.FERMI, Kind.BOSE):
            shapes = {ch.shape() for ch in node.children}
            if len(shapes) != 1:
                raise ValueError(f"exchanged blocks must share one shape: {node}")
        for ch in node.children:
            walk(ch)

    walk(label)
    return n


def _elements(node: StatisticsLabel) -> list[tuple[dict[int, int], int]]:
    """Group elements of ``node`` as partial maps on its particles, with characters."""
    if node.is_leaf:
        block = node.block
        out = []
        for s in permutations(len(block)):
            chi = s.parity if node.kind is Kind.FERMI else 1
            out.append(({block[i]: block[s(i)] for i in range(len(block))}, chi))
        return out
    kid_elems = [_elements(ch) for ch in node.children]
    internal = []
    for combo in itertools.product(*kid_elems):
        g: dict[int, int] = {}
        chi = 1
        for mp, c in combo:
            g.update(mp)
            chi *= c
        internal.append((g, chi))
    if node.kind is Kind.DISTINGUISHABLE:
        return internal
    # block exchange: child i's k-th particle goes to child pi(i)'s k-th particle
    lists = [ch.particles() for ch in node.children]
    out = []
    for pi in permutations(len(lists)):
        move = {p: lists[pi(i)][k] for i, lst in enumerate(lists) for k, p in enumerate(lst)}
        top = pi.parity if node.kind is Kind.FERMI else 1
        for g, chi in internal:
            out.append(({p: move[g[p]] for p in g}, chi * top))
    return out


def compose_statistics(label: StatisticsLabel | str,
                       verify: bool = True) -> list[tuple[Permutation, int]]:
    """Permutations allowed by a mixed-statistics tree with their sign characters.

    Fermi blocks contribute their internal permutations with the parity
    character, Bose blocks the same permutations unsigned, and exchange nodes
    add whole-block swaps.  With ``verify`` the closure of the set and the
    multiplicativity of the character are checked, exhaustively for groups of
    order up to 2000 and through a generating set otherwise.
    """
    if isinstance(label, str):
        label = parse_statistics(label)
    n = _validate_tree(label)
    group = {}
    for mp, chi in _elements(label):
        p = Permutation(tuple(mp[i] for i in range(n)))
        if group.setdefault(p, chi) != chi:
            raise ValueError(f"character is not well defined on {p}")
    if verify:
        check_group(group, _generators(label, n))
    return sorted(group.items(), key=lambda e: e[0].mapping)


def _generators(node: StatisticsLabel, n: int) -> list[Permutation]:
    """Adjacent transpositions inside leaves and adjacent block swaps."""
    gens = []
    if node.is_leaf:
        b = node.block
        for i in range(len(b) - 1):
            gens.append(Permutation.transposition(n, b[i], b[i + 1]))
        return gens
    for ch in node.children:
        gens.extend(_generators(ch, n))
    if node.kind is not Kind.DISTINGUISHABLE:
        lists = [ch.particles() for ch in node.children]
        for a, b in zip(lists, lists[1:]):
            m = list(range(n))
            for x, y in zip(a, b):
                m[x], m[y] = y, x
            gens.append(Permutation(tuple(m)))
    return gens


def check_group(group: dict[Permutation, int], generators: Sequence[Permutation] | None = None,
                exhaustive_limit: int = 2000) -> None:
    """Raise ``ValueError`` unless ``group`` is closed and its character multiplicative.

    Small sets are checked against the full multiplication table.  Larger
    ones need ``generators``: the set must equal the closure of the
    generators, and ``chi(g h) = chi(g) chi(h)`` must hold for every element
    ``g`` and generator ``h``, which forces multiplicativity everywhere.
    """
    if not group:
        raise ValueError("empty group")
    n = next(iter(group)).n
    if group.get(Permutation.identity(n)) != 1:
        raise ValueError("identity missing or with character != 1")
    if len(group) <= exhaustive_limit or generators is None:
        right = list(group.items())
    else:
        right = [(h, group.get(h)) for h in generators]
        if any(c is None for _, c in right):
            raise ValueError("generator outside the set")
        seen = {Permutation.identity(n)}
        frontier = list(seen)
        while frontier:
            nxt = []
            for g in frontier:
                for h, _ in right:
                    gh = g * h
                    if gh not in seen:
                        seen.add(gh)
                        nxt.append(gh)
            frontier = nxt
        if seen != set(group):
            raise ValueError("set differs from the group its generators span")
    for g, cg in group.items():
        for h, ch in right:
            gh = g * h
            if gh not in group:
                raise ValueError(f"not closed: {g.mapping} * {h.mapping}")
            if group[gh] != cg * ch:
                raise ValueError(f"character not multiplicative at {g.mapping} * {h.mapping}")
