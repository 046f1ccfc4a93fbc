"""Hot kernels: normalized associated Legendre tables and point synthesis.

Two implementations of each kernel: a numba @njit lane and a pure numpy
lane.  The numba lane is used when numba imports cleanly and the
environment variable QDIFF_NO_NUMBA is unset; QDIFF_NO_NUMBA=1 forces the
numpy lane.  Both lanes are importable directly for benchmarking.

Legendre functions are fully normalized (including the Condon-Shortley
sign) so that Y_lm = table[l,m] * exp(i*m*lon) has unit L2 norm on the
sphere.
"""

import os

import numpy as np

_env_off = os.environ.get("QDIFF_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _env_off


def pair_index(l, m):
    # packed index for m >= 0 tables: row l holds entries l*(l+1)/2 .. +l
    return l * (l + 1) // 2 + m


def _legendre_table_py(x, lmax):
    """All normalized P_lm(x) for 0 <= m <= l <= lmax.

    x is a 1-d array of cos(colatitude) values; returns an array of shape
    (len(x), (lmax+1)(lmax+2)/2) packed by pair_index.
    """
    x = np.asarray(x, dtype=np.float64)
    npts = x.shape[0]
    npairs = (lmax + 1) * (lmax + 2) // 2
    out = np.empty((npts, npairs), dtype=np.float64)
    sx = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    out[:, 0] = 1.0 / np.sqrt(4.0 * np.pi)
    for m in range(1, lmax + 1):
        # diagonal term carries the Condon-Shortley sign
        out[:, pair_index(m, m)] = (
            -np.sqrt((2.0 * m + 1.0) / (2.0 * m)) * sx * out[:, pair_index(m - 1, m - 1)]
        )
    for m in range(0, lmax):
        out[:, pair_index(m + 1, m)] = np.sqrt(2.0 * m + 3.0) * x * out[:, pair_index(m, m)]
    for m in range(0, lmax + 1):
        for l in range(m + 2, lmax + 1):
            a = np.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
            b = np.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
            out[:, pair_index(l, m)] = a * (
                x * out[:, pair_index(l - 1, m)] - b * out[:, pair_index(l - 2, m)]
            )
    return out


def _legendre_dtheta_table_py(x, lmax, table=None):
    """d/dtheta of the normalized P_lm at x = cos(theta), theta away from poles."""
    x = np.asarray(x, dtype=np.float64)
    if table is None:
        table = _legendre_table_py(x, lmax)
    npts = x.shape[0]
    npairs = (lmax + 1) * (lmax + 2) // 2
    out = np.zeros((npts, npairs), dtype=np.float64)
    sx = np.sqrt(np.maximum(1e-300, 1.0 - x * x))
    for m in range(0, lmax + 1):
        for l in range(m, lmax + 1):
            acc = l * x * table[:, pair_index(l, m)]
            if l > m:
                e = np.sqrt((2.0 * l + 1.0) * (l * l - m * m) / (2.0 * l - 1.0))
                acc = acc - e * table[:, pair_index(l - 1, m)]
            out[:, pair_index(l, m)] = acc / sx
    return out


def _synth_points_py(colat, lon, coeffs, lmax):
    """Evaluate sum_lm a_lm Y_lm at arbitrary points.

    coeffs is flat complex, index l*l + l + m.  Vectorized over points;
    loops over (l, m).
    """
    colat = np.asarray(colat, dtype=np.float64).ravel()
    lon = np.asarray(lon, dtype=np.float64).ravel()
    x = np.cos(colat)
    table = _legendre_table_py(x, lmax)
    val = np.zeros(colat.shape, dtype=np.complex128)
    for l in range(lmax + 1):
        val += coeffs[l * l + l] * table[:, pair_index(l, 0)]
    for m in range(1, lmax + 1):
        eim = np.exp(1j * m * lon)
        sgn = (-1.0) ** m
        for l in range(m, lmax + 1):
            p = table[:, pair_index(l, m)]
            val += p * (coeffs[l * l + l + m] * eim + coeffs[l * l + l - m] * sgn * np.conj(eim))
    return val


if USE_NUMBA:
    _njit = numba.njit(cache=True, fastmath=False)

    @_njit
    def _legendre_point_nb(x, lmax, buf):
        sx = np.sqrt(max(0.0, 1.0 - x * x))
        buf[0] = 1.0 / np.sqrt(4.0 * np.pi)
        for m in range(1, lmax + 1):
            buf[m * (m + 1) // 2 + m] = (
                -np.sqrt((2.0 * m + 1.0) / (2.0 * m)) * sx * buf[(m - 1) * m // 2 + m - 1]
            )
        for m in range(0, lmax):
            buf[(m + 1) * (m + 2) // 2 + m] = np.sqrt(2.0 * m + 3.0) * x * buf[m * (m + 1) // 2 + m]
        for m in range(0, lmax + 1):
            for l in range(m + 2, lmax + 1):
                a = np.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
                b = np.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
                buf[l * (l + 1) // 2 + m] = a * (
                    x * buf[(l - 1) * l // 2 + m] - b * buf[(l - 2) * (l - 1) // 2 + m]
                )

    @_njit
    def _legendre_table_nb(x, lmax):
        npts = x.shape[0]
        npairs = (lmax + 1) * (lmax + 2) // 2
        out = np.empty((npts, npairs), dtype=np.float64)
        buf = np.empty(npairs, dtype=np.float64)
        for i in range(npts):
            _legendre_point_nb(x[i], lmax, buf)
            out[i, :] = buf
        return out

    @numba.njit(cache=True, parallel=True)
    def _synth_points_nb(colat, lon, coeffs, lmax):
        npts = colat.shape[0]
        npairs = (lmax + 1) * (lmax + 2) // 2
        val = np.empty(npts, dtype=np.complex128)
        for i in numba.prange(npts):
            buf = np.empty(npairs, dtype=np.float64)
            _legendre_point_nb(np.cos(colat[i]), lmax, buf)
            acc = 0.0 + 0.0j
            for l in range(lmax + 1):
                acc += coeffs[l * l + l] * buf[l * (l + 1) // 2]
            for m in range(1, lmax + 1):
                eim = np.exp(1j * m * lon[i])
                sgn = 1.0 if m % 2 == 0 else -1.0
                for l in range(m, lmax + 1):
                    p = buf[l * (l + 1) // 2 + m]
                    acc += p * (
                        coeffs[l * l + l + m] * eim + coeffs[l * l + l - m] * sgn * np.conj(eim)
                    )
            val[i] = acc
        return val

    def legendre_table(x, lmax):
        return _legendre_table_nb(np.ascontiguousarray(x, dtype=np.float64), lmax)

    def synth_points(colat, lon, coeffs, lmax):
        return _synth_points_nb(
            np.ascontiguousarray(colat, dtype=np.float64).ravel(),
            np.ascontiguousarray(lon, dtype=np.float64).ravel(),
            np.ascontiguousarray(coeffs, dtype=np.complex128),
            lmax,
        )

else:
    legendre_table = _legendre_table_py
    synth_points = _synth_points_py

legendre_dtheta_table = _legendre_dtheta_table_py


def set_threads(nthreads):
    """Cap kernel parallelism; 0 means automatic."""
    if nthreads and USE_NUMBA:
        numba.set_num_threads(int(nthreads))
