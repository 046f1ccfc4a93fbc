"""Quantized Laplacian, its eigen-matrix basis, and the elliptic solvers."""

import numpy as np
import pytest

from qdiff import (
    SpinBasis,
    apply_laplacian,
    apply_laplacian_band,
    build_eigenbasis,
    quantized_gradient,
    sh_index,
    solve_poisson,
    solve_stream,
)
from conftest import eigenbasis


def test_sh_index_layout():
    assert sh_index(0, 0) == 0
    assert sh_index(1, -1) == 1
    assert sh_index(1, 0) == 2
    assert sh_index(1, 1) == 3
    assert sh_index(2, -2) == 4
    # l-major, m ascending inside each degree
    assert sh_index(3, 3) + 1 == sh_index(4, -4)


def test_spectrum_small_superoperator():
    # independent check: the dense commutator superoperator
    # K(J) = kron(J, I) - kron(I, J^T) satisfies
    # vec(apply_laplacian(M)) = -sum_k K(J_k)^2 vec(M)
    N = 8
    b = SpinBasis(N)
    I = np.eye(N)
    S = np.zeros((N * N, N * N), dtype=np.complex128)
    for Jk in b.j:
        K = np.kron(Jk, I) - np.kron(I, Jk.T)
        S -= K @ K
    vals = np.sort(np.linalg.eigvalsh(S))
    expect = np.sort(np.concatenate([[-l * (l + 1.0)] * (2 * l + 1) for l in range(N)]))
    assert np.max(np.abs(vals - expect)) < 1e-10


@pytest.mark.parametrize("N", [2, 5, 16, 33])
def test_band_orthonormality(N):
    eig = eigenbasis(N)
    for m in range(N):
        V = eig.bands[m]
        assert np.max(np.abs(V.T @ V - np.eye(N - m))) < 1e-12


@pytest.mark.parametrize("N", [2, 5, 16, 33, 64])
def test_eigen_residual_all_bands(N):
    eig = eigenbasis(N)
    for m in range(N):
        V = eig.bands[m]
        ls = np.arange(m, N)
        res = apply_laplacian_band(N, m, V) + V * (ls * (ls + 1.0))
        assert np.max(np.abs(res)) < 1e-10


def test_band_apply_matches_dense(rng):
    N = 9
    for m in range(N):
        t = rng.standard_normal(N - m)
        M = np.diag(t.astype(np.complex128), -m)
        dense = apply_laplacian(M)
        band = apply_laplacian_band(N, m, t)
        assert np.allclose(np.diagonal(dense, -m), band, atol=1e-12)
        # the Laplacian never leaks into other bands
        M2 = dense - np.diag(np.diagonal(dense, -m), -m)
        assert np.linalg.norm(M2) < 1e-12


def test_matrix_eigenproperty_dense(eig16):
    for l, m in [(0, 0), (1, 0), (1, 1), (2, -1), (7, 4), (15, -15), (15, 0)]:
        T = eig16.matrix(l, m)
        assert np.linalg.norm(apply_laplacian(T) + l * (l + 1.0) * T) < 1e-11


def test_canonical_low_matrices(eig8):
    b = SpinBasis(8)
    assert np.allclose(eig8.matrix(0, 0), np.eye(8) / np.sqrt(8))
    assert np.allclose(eig8.matrix(1, 0), b.j3 / np.linalg.norm(b.j3))
    assert np.allclose(eig8.matrix(1, 1), -b.jp / np.linalg.norm(b.jp))


def test_conjugation_symmetry(eig16):
    for l in range(16):
        for m in range(l + 1):
            lhs = eig16.matrix(l, -m)
            rhs = (-1.0) ** m * eig16.matrix(l, m).conj().T
            assert np.max(np.abs(lhs - rhs)) == 0.0


def test_frobenius_orthonormality(eig8):
    # cross-degree and cross-band inner products all vanish
    picks = [(0, 0), (1, 0), (1, -1), (2, 2), (3, 1), (5, -4), (7, 0)]
    mats = {p: eig8.matrix(*p) for p in picks}
    for i, p in enumerate(picks):
        for q in picks[i:]:
            ip = np.trace(mats[p].conj().T @ mats[q])
            want = 1.0 if p == q else 0.0
            assert abs(ip - want) < 1e-12


def test_decompose_compose_roundtrip(eig16, rng):
    M = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    c = eig16.decompose(M)
    assert c.shape == (256,)
    assert np.max(np.abs(eig16.compose(c) - M)) < 1e-12


def test_decompose_picks_out_basis_vectors(eig8):
    for l, m in [(0, 0), (2, 1), (3, -3), (7, 5)]:
        c = eig8.decompose(eig8.matrix(l, m))
        e = np.zeros(64)
        e[sh_index(l, m)] = 1.0
        assert np.max(np.abs(c - e)) < 1e-12


def test_rotation_equivariance_of_eigenspaces(eig16, rng):
    # each degree-l subspace is invariant under conjugation by rotations
    b = SpinBasis(16)
    axis = rng.standard_normal(3)
    T = eig16.matrix(3, 1)
    R = b.rotate(T, axis, 0.8)
    c = eig16.decompose(R)
    mask = np.ones(256, dtype=bool)
    mask[sh_index(3, -3) : sh_index(3, 3) + 1] = False
    assert np.max(np.abs(c[mask])) < 1e-12
    assert abs(np.linalg.norm(c) - 1.0) < 1e-12


def test_integration_by_parts(eig8, rng):
    # Tr((Delta F) G) = -N^2 sum_k Tr([X_k, F][X_k, G])
    N = 8
    b = SpinBasis(N)
    F = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    G = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    lhs = np.trace(apply_laplacian(F) @ G)
    rhs = 0.0
    for x in b.x:
        rhs -= np.trace((x @ F - F @ x) @ (x @ G - G @ x))
    rhs *= N * N
    assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))


def test_laplacian_of_commutator_with_j3(eig8):
    # Delta commutes with the rotation action: Delta [J3, T] = [J3, Delta T]
    T = eig8.matrix(4, 2)
    b = SpinBasis(8)
    lhs = apply_laplacian(b.j3 @ T - T @ b.j3)
    rhs = -4 * 5.0 * (b.j3 @ T - T @ b.j3)
    assert np.linalg.norm(lhs - rhs) < 1e-11


def test_solve_poisson_inverts_laplacian(eig16, rng):
    c = rng.standard_normal(256) + 1j * rng.standard_normal(256)
    c[0] = 0.0  # no mean
    W = eig16.compose(c)
    P = solve_poisson(W, eig16)
    assert np.linalg.norm(apply_laplacian(P) - W) < 1e-9
    assert abs(np.trace(P)) < 1e-10


def test_solve_poisson_drops_mean(eig8):
    W = np.eye(8, dtype=np.complex128)
    assert np.linalg.norm(solve_poisson(W, eig8)) < 1e-13


def test_solve_stream_models(eig8):
    T = eig8.matrix(1, 0)
    euler = solve_stream(T, eig8, model="euler")
    ep = solve_stream(T, eig8, model="epdiff")
    assert abs(np.trace(euler.conj().T @ T).real + 0.5) < 1e-12
    assert abs(np.trace(ep.conj().T @ T).real + 1.0 / 6.0) < 1e-12
    with pytest.raises(ValueError):
        solve_stream(T, eig8, model="navier")


def test_epdiff_factor_general_degree(eig16):
    # degree l: euler -1/(l(l+1)), extra helmholtz factor 1/(1 + l(l+1))
    for l in (2, 5):
        T = eig16.matrix(l, 1)
        got = np.trace(solve_stream(T, eig16, model="epdiff").conj().T @ T).real
        lam = l * (l + 1.0)
        assert abs(got + 1.0 / (lam * (1.0 + lam))) < 1e-12


def test_quantized_gradient_of_x3_generator():
    # P = X3 has quantized gradient (-X2, X1, 0)
    N = 10
    b = SpinBasis(N)
    x1, x2, x3 = b.x
    g1, g2, g3 = quantized_gradient(x3)
    assert np.linalg.norm(g1 + x2) < 1e-13
    assert np.linalg.norm(g2 - x1) < 1e-13
    assert np.linalg.norm(g3) < 1e-13
