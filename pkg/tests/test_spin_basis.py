"""Generator matrices: algebra, normalization, rotations."""

import numpy as np
import pytest

from qdiff import SpinBasis, build_spin_basis, generator_matrices, spin_matrices
from qdiff.spin_basis import ladder_amplitudes


def comm(a, b):
    return a @ b - b @ a


def test_ladder_amplitudes_small():
    # s = 1/2: single amplitude sqrt(3/4 - (-1/2)(1/2)) = 1
    assert np.allclose(ladder_amplitudes(2), [1.0])
    # s = 1: amplitudes sqrt(2), sqrt(2)
    assert np.allclose(ladder_amplitudes(3), [np.sqrt(2), np.sqrt(2)])


def test_j3_ascending_order():
    b = SpinBasis(5)
    d = np.diag(b.j3).real
    assert np.allclose(d, [-2, -1, 0, 1, 2])
    assert d[-1] == b.s  # north end carries +s


def test_jplus_on_subdiagonal():
    b = SpinBasis(4)
    assert np.allclose(np.triu(b.jp), 0)
    assert np.allclose(b.jm, b.jp.conj().T)


@pytest.mark.parametrize("N", [2, 3, 4, 8, 16, 32, 64])
def test_su2_commutators(N):
    j1, j2, j3 = spin_matrices(N)
    assert np.linalg.norm(comm(j1, j2) - 1j * j3) <= 1e-13 * N
    assert np.linalg.norm(comm(j2, j3) - 1j * j1) <= 1e-13 * N
    assert np.linalg.norm(comm(j3, j1) - 1j * j2) <= 1e-13 * N


@pytest.mark.parametrize("N", [2, 3, 4, 8, 16, 32, 64])
def test_scaled_generator_commutators(N):
    x1, x2, x3 = generator_matrices(N)
    assert np.linalg.norm(comm(x1, x2) - x3 / N) <= 1e-13 * N
    assert np.linalg.norm(comm(x2, x3) - x1 / N) <= 1e-13 * N
    assert np.linalg.norm(comm(x3, x1) - x2 / N) <= 1e-13 * N


@pytest.mark.parametrize("N", [2, 5, 16, 64])
def test_casimir(N):
    x1, x2, x3 = generator_matrices(N)
    lhs = N * N * (x1 @ x1 + x2 @ x2 + x3 @ x3)
    assert np.linalg.norm(lhs + (N * N - 1) / 4.0 * np.eye(N)) <= 1e-11 * N * N


def test_generators_antihermitian_tracefree():
    for x in SpinBasis(9).x:
        assert np.linalg.norm(x + x.conj().T) < 1e-14
        assert abs(np.trace(x)) < 1e-13


def test_coordinate_matrices_sum_of_squares():
    b = SpinBasis(7)
    c1, c2, c3 = b.coordinate_matrices()
    assert np.allclose(c1 @ c1 + c2 @ c2 + c3 @ c3, np.eye(7), atol=1e-12)


def test_coordinate_matrices_n2():
    # (2/sqrt(3)) J3 at N=2 is diag(-1,1)/sqrt(3)
    _, _, c3 = SpinBasis(2).coordinate_matrices()
    assert np.allclose(c3, np.diag([-1.0, 1.0]) / np.sqrt(3))


def test_build_spin_basis_rejects_small():
    with pytest.raises(ValueError):
        build_spin_basis(1)
    with pytest.raises(ValueError):
        build_spin_basis(0)
    assert build_spin_basis(2).N == 2


def test_rotation_operator_unitary(rng):
    b = SpinBasis(6)
    for _ in range(5):
        axis = rng.standard_normal(3)
        angle = rng.uniform(-np.pi, np.pi)
        R = b.rotation_operator(axis, angle)
        assert np.allclose(R @ R.conj().T, np.eye(6), atol=1e-12)


def test_rotation_about_z_phases():
    b = SpinBasis(4)
    R = b.rotation_operator([0.0, 0.0, 1.0], 0.9)
    expect = np.diag(np.exp(-1j * 0.9 * np.diag(b.j3)))
    assert np.allclose(R, expect, atol=1e-13)


def test_rotate_moves_j3_like_a_vector(rng):
    # z-hat rotated by +a about x-hat is (0, -sin a, cos a), and the
    # operator triple must transform the same way under conjugation
    b = SpinBasis(8)
    a = 0.6
    got = b.rotate(b.j3, [1.0, 0.0, 0.0], a)
    assert np.allclose(got, np.cos(a) * b.j3 - np.sin(a) * b.j2, atol=1e-12)


def test_rotation_composition(rng):
    b = SpinBasis(5)
    axis = rng.standard_normal(3)
    R1 = b.rotation_operator(axis, 0.3)
    R2 = b.rotation_operator(axis, 0.5)
    assert np.allclose(R1 @ R2, b.rotation_operator(axis, 0.8), atol=1e-12)


def test_zero_axis_rejected():
    with pytest.raises(ValueError):
        SpinBasis(3).rotation_operator([0.0, 0.0, 0.0], 1.0)
