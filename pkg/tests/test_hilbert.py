import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spincouple.hilbert import (
    Ket, Operator, apply, basis_minus, basis_plus, identity, inner, kron, norm,
    orthogonal_spinor, permute_factors, spinor, tensor, zero_ket,
)
from spincouple.spin import rotation

angles = st.floats(-20, 20, allow_nan=False)
reals = st.floats(-3, 3, allow_nan=False)


def random_ket(rng, dims=(2,)):
    d = int(np.prod(dims))
    return Ket(rng.normal(size=d) + 1j * rng.normal(size=d), dims)


@st.composite
def qubit_kets(draw, factors=1):
    vals = draw(st.lists(reals, min_size=2 * 2 ** factors, max_size=2 * 2 ** factors))
    amps = np.array(vals[::2]) + 1j * np.array(vals[1::2])
    return Ket(amps, (2,) * factors)


def test_basis_vectors():
    assert np.array_equal(basis_plus().amplitudes, [1, 0])
    assert np.array_equal(basis_minus().amplitudes, [0, 1])
    assert inner(basis_plus(), basis_minus()) == 0


@pytest.mark.parametrize("theta, c, expected", [
    (0.0, 0.5, [1, 0]),
    (math.pi, 0.5, [0, 1]),
    (math.pi / 2, 1.0, [0, 1]),
])
def test_spinor_values(theta, c, expected):
    assert spinor(theta, c).allclose(Ket(expected))


@given(angles, st.sampled_from([0.5, 1.0, 2.0]))
def test_spinor_is_unit(theta, c):
    assert abs(norm(spinor(theta, c)) - 1) < 1e-14


def test_orthogonal_spinor_examples():
    assert orthogonal_spinor(basis_plus()).allclose(basis_minus())
    t = 0.37
    assert orthogonal_spinor(Ket([math.cos(t), math.sin(t)])).allclose(Ket([-math.sin(t), math.cos(t)]))


@given(qubit_kets())
def test_orthogonal_spinor_properties(k):
    if norm(k) < 1e-3:
        return
    s = k / norm(k)
    o = orthogonal_spinor(s)
    assert abs(inner(s, o)) < 1e-14
    assert abs(norm(o) - 1) < 1e-14
    assert orthogonal_spinor(o).allclose(-s)


def test_orthogonal_spinor_rejects_bad_input():
    with pytest.raises(ValueError):
        orthogonal_spinor(Ket([1.0, 1.0]))
    with pytest.raises(ValueError):
        orthogonal_spinor(tensor(basis_plus(), basis_plus()))


def test_tensor_index_convention():
    assert np.array_equal(tensor(basis_plus(), basis_minus()).amplitudes, [0, 1, 0, 0])
    assert np.array_equal(tensor([basis_plus(), basis_plus()]).amplitudes, [1, 0, 0, 0])
    assert tensor(basis_minus(), basis_plus()).dims == (2, 2)
    with pytest.raises(ValueError):
        tensor()


@given(qubit_kets(), qubit_kets(), qubit_kets())
def test_tensor_associative_and_multiplicative(a, b, c):
    assert np.array_equal(tensor(tensor(a, b), c).amplitudes, tensor(a, b, c).amplitudes)
    assert math.isclose(norm(tensor(a, b)), norm(a) * norm(b), rel_tol=1e-12, abs_tol=1e-12)


def test_inner_and_norm():
    x = spinor(0.9)
    assert abs(inner(x, x) - 1) < 1e-15
    assert norm(zero_ket((2, 2))) == 0
    with pytest.raises(ValueError):
        inner(basis_plus(), tensor(basis_plus(), basis_plus()))


def test_inner_is_conjugate_linear_in_first():
    a, b = Ket([1j, 0]), Ket([1, 0])
    assert inner(a, b) == -1j
    assert inner(a * 2j, b) == np.conj(2j) * inner(a, b)


def test_apply_and_kron():
    k = random_ket(np.random.default_rng(1), (2, 2))
    assert apply(identity(4), k).allclose(k)
    assert apply(rotation(math.pi, 0.5), basis_plus()).allclose(Ket([0, -1]))
    th = 0.8
    rotated = apply(kron([rotation(th)] * 3), tensor(spinor(0.1), spinor(0.2), spinor(0.3)))
    expected = tensor(*(apply(rotation(th), spinor(a)) for a in (0.1, 0.2, 0.3)))
    assert rotated.allclose(expected)
    with pytest.raises(ValueError):
        apply(identity(2), k)
    with pytest.raises(ValueError):
        kron()


@given(qubit_kets(2), qubit_kets(2), angles, st.sampled_from([0.5, 1.0]))
def test_rotations_preserve_inner_products(a, b, theta, c):
    u = kron(rotation(theta, c), rotation(theta, c))
    assert abs(inner(apply(u, a), apply(u, b)) - inner(a, b)) < 1e-12 * max(1.0, norm(a) * norm(b))


def test_operator_shape_checks():
    with pytest.raises(ValueError):
        Operator([[1, 0, 0]])


def test_permute_factors_swaps_particles():
    k = tensor(basis_plus(), basis_minus())
    assert permute_factors(k, [1, 0]).allclose(tensor(basis_minus(), basis_plus()))


def test_ket_arithmetic_checks_dims():
    with pytest.raises(ValueError):
        basis_plus() + tensor(basis_plus(), basis_plus())
    assert (basis_plus() - basis_plus()).is_zero()
