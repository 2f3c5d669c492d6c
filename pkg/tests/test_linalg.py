import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dftpaving.construction import FrameParams, build_stack
from dftpaving.dft import dft
from dftpaving.linalg import (adjoint, as_matrix, matmul, min_eigenpair_hermitian,
                              min_eigenvalue_hermitian, nullspace_vector, operator_norm)
from oracles import rayleigh_upper_bound


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_adjoint_examples():
    assert adjoint(np.array([[1 + 0j]]))[0, 0] == 1
    assert adjoint(np.array([[1j]]))[0, 0] == -1j
    a = crandn(np.random.default_rng(0), 3, 2)
    assert adjoint(a).shape == (2, 3)
    assert np.array_equal(adjoint(adjoint(a)), a)


def test_matmul_examples():
    rng = np.random.default_rng(1)
    a = crandn(rng, 3, 4)
    assert np.array_equal(matmul(np.eye(3), a), a)
    assert np.max(np.abs(matmul(dft(2), adjoint(dft(2))) - np.eye(2))) <= 1e-12
    x, y, z = crandn(rng, 2, 3), crandn(rng, 3, 2), crandn(rng, 2, 2)
    assert np.allclose(matmul(matmul(x, y), z), matmul(x, matmul(y, z)), atol=1e-10, rtol=0)


def test_matmul_shape_error_names_both_shapes():
    with pytest.raises(ValueError, match=r"2x3.*2x2"):
        matmul(np.ones((2, 3)), np.ones((2, 2)))


def test_adjoint_of_product():
    rng = np.random.default_rng(2)
    a, b = crandn(rng, 4, 4), crandn(rng, 4, 4)
    assert np.max(np.abs(adjoint(a @ b) - adjoint(b) @ adjoint(a))) <= 1e-10


def test_as_matrix_rejects_bad_input():
    with pytest.raises(ValueError):
        as_matrix([[np.nan]])
    with pytest.raises(ValueError):
        as_matrix([1, 2])
    with pytest.raises(ValueError):
        as_matrix(np.zeros((0, 3)))


def test_min_eigenvalue_examples():
    assert min_eigenvalue_hermitian(np.eye(4)) == pytest.approx(1.0, abs=1e-8)
    assert min_eigenvalue_hermitian(np.diag([0.25, 1.0, 2.0])) == pytest.approx(0.25, abs=1e-8)


def test_min_eigenvalue_gram_against_random_rayleigh():
    B = build_stack(FrameParams(2, 2)).B
    F = B[:4]
    H = np.conj(F) @ F.T
    lam = min_eigenvalue_hermitian(H)
    upper = rayleigh_upper_bound(H, 10**6, np.random.default_rng(3))
    assert upper >= lam - 1e-12
    assert upper - lam <= 1e-3
    # the four rows are a scaled DFT: spectrum {2, 2/3, 2/3, 2/3}
    assert lam == pytest.approx(2 / 3, abs=1e-12)


def test_min_eigenvalue_rejects_bad_input():
    with pytest.raises(ValueError, match="square"):
        min_eigenvalue_hermitian(np.ones((2, 3)))
    with pytest.raises(ValueError, match="Hermitian.*1.000e\\+00"):
        min_eigenvalue_hermitian(np.array([[0, 1], [0, 0]]))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_min_eigenpair_residual(size, seed):
    a = crandn(np.random.default_rng(seed), size, size)
    h = a + adjoint(a)
    lam, v = min_eigenpair_hermitian(h)
    assert abs(np.linalg.norm(v) - 1) <= 1e-12
    assert np.linalg.norm(h @ v - lam * v) <= 1e-7
    assert abs(min_eigenvalue_hermitian(h) - lam) <= 1e-10


def test_nullspace_examples():
    v = nullspace_vector(np.zeros((2, 3)))
    assert v.shape == (3,) and np.linalg.norm(v) == pytest.approx(1.0)
    assert nullspace_vector(np.eye(2)) is None
    v = nullspace_vector(np.array([[1.0, 1.0]]))
    phase = v[0] / abs(v[0])
    assert np.allclose(v / phase, np.array([1, -1]) / np.sqrt(2), atol=1e-12)
    assert abs(v[0] + v[1]) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 8), st.integers(0, 4), st.integers(0, 2**32 - 1))
def test_nullspace_contract(rows, cols, rank, seed):
    rng = np.random.default_rng(seed)
    rank = min(rank, rows, cols)
    a = crandn(rng, rows, rank) @ crandn(rng, rank, cols) if rank else np.zeros((rows, cols), complex)
    v = nullspace_vector(a)
    if cols > rank:
        assert v is not None
        assert abs(np.linalg.norm(v) - 1) <= 1e-12
        assert np.linalg.norm(a @ v) <= 1e-9 * max(1.0, np.linalg.norm(a))
    else:
        assert v is None


def test_operator_norm_examples():
    assert operator_norm(np.eye(5)) == pytest.approx(1.0, abs=1e-8)
    assert operator_norm(np.zeros((3, 2))) == 0.0
    assert abs(operator_norm(dft(8)) - 1.0) <= 1e-10


def test_deterministic():
    rng = np.random.default_rng(4)
    a = crandn(rng, 5, 7)
    h = a @ adjoint(a)
    assert min_eigenvalue_hermitian(h) == min_eigenvalue_hermitian(h.copy())
    assert np.array_equal(nullspace_vector(a), nullspace_vector(a.copy()))
    assert operator_norm(a) == operator_norm(a.copy())
