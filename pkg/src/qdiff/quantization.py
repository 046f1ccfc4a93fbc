"""Maps between functions on the sphere and N x N matrices, plus blobs.

Function-side representations:

* HarmonicCoefficients: complex coefficients a_lm of an expansion in
  L2-orthonormal spherical harmonics with the Condon-Shortley phase,
  packed flat by sh_index(l, m) = l*l + l + m.  A real-valued function
  has a_{l,-m} = (-1)^m conj(a_lm).
* GridField: samples on a Gauss-Legendre (colatitude) x uniform
  (longitude) grid; this quadrature integrates band-limited functions
  exactly when nlat >= lmax+1 and nlon >= 2*lmax+1.

Matrix-side conventions:

* quantize sends a_lm to sum a_lm T_lm; it is C-linear, so a real
  function lands in u(N) only after multiplying its coefficients by i
  (quantize(1j * a)), which is the convention used for vorticity.
* quantize_generator builds the stream matrix P of a complex generator
  psi.  Its scale bracket_scale(N) is calibrated so that the generator
  whose classical flow is unit-speed rotation about the z-axis yields
  exp(P t) = rotation by t exactly; equivalently lambda_N [W_f, W_g]
  matches the quantized Poisson bracket {f, g} exactly on degree-1
  functions.
* blobs are rank-one skew-Hermitian point masses with Tr(B) = i.
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from ._accel import legendre_table, legendre_dtheta_table, pair_index, synth_points
from .laplacian import sh_index


@dataclass
class HarmonicCoefficients:
    """Flat complex coefficient vector of length (lmax+1)^2."""

    lmax: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != ((self.lmax + 1) ** 2,):
            raise ValueError("coefficient vector length does not match lmax")

    @classmethod
    def zeros(cls, lmax):
        return cls(lmax, np.zeros((lmax + 1) ** 2, dtype=np.complex128))

    def copy(self):
        return HarmonicCoefficients(self.lmax, self.values.copy())

    def __getitem__(self, lm):
        l, m = lm
        if not (0 <= l <= self.lmax and abs(m) <= l):
            raise IndexError("harmonic index out of range")
        return self.values[sh_index(l, m)]

    def __setitem__(self, lm, v):
        l, m = lm
        if not (0 <= l <= self.lmax and abs(m) <= l):
            raise IndexError("harmonic index out of range")
        self.values[sh_index(l, m)] = v

    def is_real_function(self, tol=1e-12):
        """Whether a_{l,-m} = (-1)^m conj(a_lm) holds within tol."""
        scale = max(1.0, float(np.linalg.norm(self.values)))
        for l in range(self.lmax + 1):
            for m in range(l + 1):
                lhs = self.values[sh_index(l, -m)]
                rhs = (-1.0) ** m * np.conj(self.values[sh_index(l, m)])
                if abs(lhs - rhs) > tol * scale:
                    return False
        return True


def random_coefficients(lmax, rng, real=True):
    """Seeded random band-limited coefficients; real=True makes them the
    coefficients of a real-valued function."""
    n = (lmax + 1) ** 2
    values = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    if real:
        for l in range(lmax + 1):
            values[sh_index(l, 0)] = values[sh_index(l, 0)].real
            for m in range(1, l + 1):
                values[sh_index(l, -m)] = (-1.0) ** m * np.conj(values[sh_index(l, m)])
    return HarmonicCoefficients(lmax, values)


@dataclass
class GridField:
    """Samples on a Gauss-Legendre x uniform-longitude grid.

    colat is ordered north to south; weights are the Gauss-Legendre
    quadrature weights (summing to 2) so that integral() is exact for
    resolved band-limited integrands.
    """

    colat: np.ndarray
    lon: np.ndarray
    weights: np.ndarray
    values: np.ndarray

    @property
    def nlat(self):
        return self.colat.shape[0]

    @property
    def nlon(self):
        return self.lon.shape[0]

    def with_values(self, values):
        values = np.asarray(values, dtype=np.complex128)
        if values.shape != (self.nlat, self.nlon):
            raise ValueError("value array does not match the grid")
        return GridField(self.colat, self.lon, self.weights, values)

    def integral(self):
        """Integral over the sphere (solid-angle measure)."""
        return (2.0 * np.pi / self.nlon) * np.sum(self.weights @ self.values)

    def norm(self):
        """L2 norm over the sphere."""
        dens = np.abs(self.values) ** 2
        return float(np.sqrt((2.0 * np.pi / self.nlon) * np.sum(self.weights @ dens)))

    def points(self):
        """Unit vectors of all grid nodes, shape (nlat, nlon, 3)."""
        st = np.sin(self.colat)[:, None]
        ct = np.cos(self.colat)[:, None]
        cp = np.cos(self.lon)[None, :]
        sp = np.sin(self.lon)[None, :]
        return np.stack([st * cp, st * sp, np.broadcast_to(ct, (self.nlat, self.nlon))], axis=-1)


def gauss_grid(nlat, nlon, values=None):
    """Empty (or filled) GridField with Gauss-Legendre colatitudes."""
    if nlat < 1 or nlon < 1:
        raise ValueError("grid must have at least one node per direction")
    x, w = leggauss(nlat)
    # leggauss orders x ascending, i.e. south to north; flip to north first
    colat = np.arccos(x[::-1]).copy()
    weights = w[::-1].copy()
    lon = 2.0 * np.pi * np.arange(nlon) / nlon
    if values is None:
        values = np.zeros((nlat, nlon), dtype=np.complex128)
    return GridField(colat, lon, weights, np.asarray(values, dtype=np.complex128))


def harmonic(l, m, colat, lon):
    """Y_lm at the given colatitude/longitude (scalars or arrays)."""
    if abs(m) > l:
        raise ValueError("need |m| <= l")
    colat, lon = np.broadcast_arrays(
        np.asarray(colat, dtype=np.float64), np.asarray(lon, dtype=np.float64)
    )
    shape = colat.shape
    colat = np.ravel(colat)
    if colat.size and (colat.min() < -1e-12 or colat.max() > np.pi + 1e-12):
        raise ValueError("colatitude outside [0, pi]")
    table = legendre_table(np.cos(colat), l)
    p = table[:, pair_index(l, abs(m))]
    val = p * np.exp(1j * m * np.ravel(lon))
    if m < 0:
        val = val * (-1.0) ** m
    val = val.reshape(shape)
    return complex(val) if val.shape == () else val


def _fourier_slots(lmax, nlon):
    if nlon < 2 * lmax + 1:
        raise ValueError("nlon too small for lmax (need nlon >= 2*lmax+1)")


def synthesize(coeffs, nlat, nlon):
    """GridField of sum a_lm Y_lm on an (nlat, nlon) Gauss grid."""
    lmax = coeffs.lmax
    _fourier_slots(lmax, nlon)
    grid = gauss_grid(nlat, nlon)
    table = legendre_table(np.cos(grid.colat), lmax)
    modes = np.zeros((nlat, nlon), dtype=np.complex128)
    for m in range(-lmax, lmax + 1):
        am = abs(m)
        ls = np.arange(am, lmax + 1)
        cols = ls * (ls + 1) // 2 + am
        sel = coeffs.values[ls * ls + ls + m]
        if m < 0:
            sel = sel * (-1.0) ** m
        modes[:, m % nlon] += table[:, cols] @ sel
    values = np.fft.ifft(modes, axis=1) * nlon
    return grid.with_values(values)


def analyze(field, lmax):
    """Coefficients a_lm = integral of f * conj(Y_lm); exact for resolved input."""
    if field.nlat < lmax + 1:
        raise ValueError("nlat too small for lmax (need nlat >= lmax+1)")
    _fourier_slots(lmax, field.nlon)
    table = legendre_table(np.cos(field.colat), lmax)
    fhat = np.fft.fft(field.values, axis=1) * (2.0 * np.pi / field.nlon)
    out = HarmonicCoefficients.zeros(lmax)
    for m in range(-lmax, lmax + 1):
        am = abs(m)
        ls = np.arange(am, lmax + 1)
        cols = ls * (ls + 1) // 2 + am
        proj = table[:, cols].T @ (field.weights * fhat[:, m % field.nlon])
        if m < 0:
            proj = proj * (-1.0) ** m
        out.values[ls * ls + ls + m] = proj
    return out


def evaluate(coeffs, colat, lon):
    """Pointwise values of sum a_lm Y_lm at arbitrary points."""
    colat = np.asarray(colat, dtype=np.float64)
    lon = np.asarray(lon, dtype=np.float64)
    if colat.shape != lon.shape:
        raise ValueError("colat and lon must have matching shapes")
    flat = synth_points(colat.ravel(), lon.ravel(), coeffs.values, coeffs.lmax)
    if colat.shape == ():
        return complex(flat[0])
    return flat.reshape(colat.shape)


def synthesize_dtheta(coeffs, grid):
    """Samples of the colatitude derivative of sum a_lm Y_lm on a grid."""
    lmax = coeffs.lmax
    _fourier_slots(lmax, grid.nlon)
    x = np.cos(grid.colat)
    dtable = legendre_dtheta_table(x, lmax)
    modes = np.zeros((grid.nlat, grid.nlon), dtype=np.complex128)
    for m in range(-lmax, lmax + 1):
        am = abs(m)
        ls = np.arange(am, lmax + 1)
        cols = ls * (ls + 1) // 2 + am
        sel = coeffs.values[ls * ls + ls + m]
        if m < 0:
            sel = sel * (-1.0) ** m
        modes[:, m % grid.nlon] += dtable[:, cols] @ sel
    values = np.fft.ifft(modes, axis=1) * grid.nlon
    return grid.with_values(values)


def _flat_for_size(coeffs, N):
    """Coefficient vector truncated/padded to the first N^2 entries."""
    src = coeffs.values if isinstance(coeffs, HarmonicCoefficients) else np.asarray(coeffs)
    out = np.zeros(N * N, dtype=np.complex128)
    n = min(out.shape[0], src.shape[0])
    out[:n] = src[:n]
    return out


def quantize(coeffs, eig):
    """sum a_lm T_lm; degrees above N-1 are silently truncated.

    C-linear: pass 1j * a to land real functions in u(N).
    """
    return eig.compose(_flat_for_size(coeffs, eig.N))


def dequantize(M, eig, lmax=None):
    """a_lm = Tr(T_lm^dagger M); exact left inverse of quantize."""
    flat = eig.decompose(M)
    if lmax is None:
        lmax = eig.N - 1
    out = HarmonicCoefficients.zeros(lmax)
    n = min(flat.shape[0], out.values.shape[0])
    out.values[:n] = flat[:n]
    return out


def bracket_scale(N):
    """lambda_N with {f,g} -> lambda_N [W_f, W_g], exact on degree 1.

    lambda_N = -sqrt(N(N^2-1)/(16 pi)); the sign and magnitude are fixed
    by the rigid-rotation calibration (see quantize_generator).
    """
    return -np.sqrt(N * (N * N - 1.0) / (16.0 * np.pi))


def quantize_generator(coeffs, eig):
    """Stream matrix P of a complex generator psi, trace-free.

    P = bracket_scale(N) * quantize(i * a) with the constant component
    dropped.  Calibration: psi whose classical flow is unit-speed
    rotation about the z-axis gives exp(P t) = rotation_operator(z, t)
    exactly, so quantized flows run at classical speed.  The real part
    of psi lands in the skew-Hermitian part of P (Hamiltonian
    component), the imaginary part in the Hermitian part (gradient
    component).
    """
    flat = _flat_for_size(coeffs, eig.N) * 1j
    flat[0] = 0.0
    return bracket_scale(eig.N) * eig.compose(flat)


def blob_north(N):
    """Skew-Hermitian point mass at the north pole: i at entry (N, N)."""
    if N < 2:
        raise ValueError("blobs need N >= 2")
    B = np.zeros((N, N), dtype=np.complex128)
    B[N - 1, N - 1] = 1j
    return B


def blob_at(basis, y0):
    """Blob centered at the unit vector y0 (rotated north blob)."""
    y0 = np.asarray(y0, dtype=np.float64)
    if abs(np.linalg.norm(y0) - 1.0) > 1e-6:
        raise ValueError("blob center must be a unit vector")
    z0 = np.clip(y0[2], -1.0, 1.0)
    axis = np.array([-y0[1], y0[0], 0.0])  # z-hat cross y0
    nrm = np.linalg.norm(axis)
    if nrm < 1e-15:
        axis = np.array([1.0, 0.0, 0.0])  # antipodal/aligned: any axis works
    else:
        axis = axis / nrm
    R = basis.rotation_operator(axis, np.arccos(z0))
    B = blob_north(basis.N)
    return R @ B @ R.conj().T


def blob_center(basis, B):
    """Center of mass of a blob via the coordinate matrices, unit length.

    c_k = Tr(C_k (B / Tr B)), real up to roundoff for any rotated blob,
    then normalized.  Raises for matrices without a usable center (for
    example multiples of the identity).
    """
    t = np.trace(B)
    nrm = np.linalg.norm(B)
    if nrm == 0.0 or abs(t) < 1e-12 * nrm:
        raise ValueError("degenerate blob: trace too small to normalize")
    D = B / t
    c = np.array([np.trace(Ck @ D).real for Ck in basis.coordinate_matrices()])
    n = np.linalg.norm(c)
    if n < 1e-8:
        raise ValueError("degenerate blob: center vector vanishes")
    return c / n
