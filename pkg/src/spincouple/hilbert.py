"""Dense complex state vectors over tensor products of small factors.

Amplitudes are stored as a flat complex vector in lexicographic order with
particle 1 as the most significant index.  For two-level factors ``|+>`` is
index 0 and ``|->`` is index 1, so ``|+->`` sits at position 1 of a
two-particle vector.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

ATOL = 1e-12


@dataclass(frozen=True, eq=False)
class Ket:
    """A state vector on ``H_1 (x) ... (x) H_n``.

    Parameters
    ----------
    amplitudes : array_like
        Complex amplitudes, length ``prod(dims)``.
    dims : tuple of int, optional
        Dimension of each tensor factor.  Defaults to two-level factors when
        the length is a power of two, else a single factor.
    """

    amplitudes: np.ndarray
    dims: tuple[int, ...] = ()

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            n = amps.size.bit_length() - 1
            if amps.size < 1:
                raise ValueError("empty amplitude vector")
            dims = (2,) * n if amps.size > 1 and 1 << n == amps.size else (amps.size,)
        if any(d < 1 for d in dims) or math.prod(dims) != amps.size:
            raise ValueError(f"dims {dims} do not match {amps.size} amplitudes")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)

    @property
    def factors(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def __len__(self) -> int:
        return self.dim

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def _check(self, other: Ket) -> None:
        if not isinstance(other, Ket):
            raise TypeError(f"expected Ket, got {type(other).__name__}")
        if other.dims != self.dims:
            raise ValueError(f"dimension mismatch: {self.dims} vs {other.dims}")

    def __add__(self, other: Ket) -> Ket:
        self._check(other)
        return Ket(self.amplitudes + other.amplitudes, self.dims)

    def __sub__(self, other: Ket) -> Ket:
        self._check(other)
        return Ket(self.amplitudes - other.amplitudes, self.dims)

    def __neg__(self) -> Ket:
        return Ket(-self.amplitudes, self.dims)

    def __mul__(self, scalar: complex) -> Ket:
        return Ket(self.amplitudes * complex(scalar), self.dims)

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> Ket:
        return Ket(self.amplitudes / complex(scalar), self.dims)

    def allclose(self, other: Ket, atol: float = ATOL) -> bool:
        """Amplitude-wise equality within ``atol``."""
        self._check(other)
        return bool(np.max(np.abs(self.amplitudes - other.amplitudes), initial=0.0) <= atol)

    def is_zero(self, atol: float = ATOL) -> bool:
        return norm(self) < atol

    def __repr__(self) -> str:
        body = np.array2string(self.amplitudes, precision=6, suppress_small=True)
        return f"Ket({body}, dims={self.dims})"


@dataclass(frozen=True, eq=False)
class Operator:
    """A square complex matrix acting on kets of matching dimension."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got shape {m.shape}")
        d = m.shape[0]
        if d < 2 or d & (d - 1):
            raise ValueError(f"operator dimension {d} is not 2**k with k >= 1")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __matmul__(self, other):
        if isinstance(other, Operator):
            if other.dim != self.dim:
                raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
            return Operator(self.entries @ other.entries)
        if isinstance(other, Ket):
            return apply(self, other)
        return NotImplemented

    def allclose(self, other: Operator, atol: float = ATOL) -> bool:
        return self.dim == other.dim and bool(np.max(np.abs(self.entries - other.entries)) <= atol)

    def __repr__(self) -> str:
        return f"Operator({np.array2string(self.entries, precision=6, suppress_small=True)})"


def basis_plus() -> Ket:
    return Ket([1, 0])


def basis_minus() -> Ket:
    return Ket([0, 1])


def spinor(theta: float, c: float = 0.5) -> Ket:
    """Single spin pointing along ``theta``: ``cos(c theta)|+> + sin(c theta)|->``."""
    if not math.isfinite(c):
        raise ValueError("spin constant must be finite")
    return Ket([math.cos(c * theta), math.sin(c * theta)])


def orthogonal_spinor(s: Ket, atol: float = ATOL) -> Ket:
    """The spin state orthogonal to ``s``, using the phase ``[a, b] -> [-conj(b), conj(a)]``."""
    if s.dims != (2,):
        raise ValueError(f"expected a single two-level factor, got dims {s.dims}")
    if abs(norm(s) - 1.0) > atol:
        raise ValueError(f"spinor must have unit norm, got {norm(s)!r}")
    a, b = s.amplitudes
    return Ket([-np.conj(b), np.conj(a)])


def tensor(*parts: Ket | Sequence[Ket]) -> Ket:
    """Kronecker product in particle order.

    Accepts either several kets or a single list of kets.
    """
    if len(parts) == 1 and not isinstance(parts[0], Ket):
        parts = tuple(parts[0])
    if not parts:
        raise ValueError("tensor of an empty list")
    amps = reduce(np.kron, (p.amplitudes for p in parts))
    dims = tuple(d for p in parts for d in p.dims)
    return Ket(amps, dims)


def inner(a: Ket, b: Ket) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    a._check(b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def norm(a: Ket) -> float:
    return float(np.sqrt(np.vdot(a.amplitudes, a.amplitudes).real))


def normalize(a: Ket) -> Ket:
    n = norm(a)
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return a / n


def zero_ket(dims: Iterable[int]) -> Ket:
    dims = tuple(dims)
    return Ket(np.zeros(math.prod(dims)), dims)


def identity(dim: int = 2) -> Operator:
    return Operator(np.eye(dim))


def apply(op: Operator, k: Ket) -> Ket:
    if op.dim != k.dim:
        raise ValueError(f"operator of dim {op.dim} cannot act on ket of dim {k.dim}")
    return Ket(op.entries @ k.amplitudes, k.dims)


def kron(*ops: Operator | Sequence[Operator]) -> Operator:
    """Kronecker product of operators in particle order."""
    if len(ops) == 1 and not isinstance(ops[0], Operator):
        ops = tuple(ops[0])
    if not ops:
        raise ValueError("kron of an empty list")
    return Operator(reduce(np.kron, (o.entries for o in ops)))


def permute_factors(k: Ket, perm: Sequence[int]) -> Ket:
    """Reorder tensor factors so that new factor ``i`` is old factor ``perm[i]``.

    For a product state ``a (x) b (x) c`` and ``perm = (2, 0, 1)`` the
    result is ``c (x) a (x) b``.
    """
    perm = tuple(perm)
    if sorted(perm) != list(range(k.factors)):
        raise ValueError(f"{perm} is not a permutation of {k.factors} factors")
    t = k.amplitudes.reshape(k.dims).transpose(perm)
    return Ket(t.reshape(-1), tuple(k.dims[p] for p in perm))
