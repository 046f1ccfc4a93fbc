"""Dense matrix exponential via Pade approximation with scaling and squaring."""

import numpy as np

# degree-13 Pade coefficients
_B13 = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)

# 1-norm thresholds for the lower-degree approximants
_THETA = {3: 1.495585217958292e-2, 5: 2.539398330063230e-1, 7: 9.504178996162932e-1, 9: 2.097847961257068e0}
_THETA13 = 5.371920351148152e0

_B = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (
        17643225600.0,
        8821612800.0,
        2075673600.0,
        302702400.0,
        30270240.0,
        2162160.0,
        110880.0,
        3960.0,
        90.0,
        1.0,
    ),
}


def _pade_low(A, m):
    b = _B[m]
    n = A.shape[0]
    ident = np.eye(n, dtype=A.dtype)
    A2 = A @ A
    U = b[1] * ident
    V = b[0] * ident
    P = ident
    for k in range(1, m // 2 + 1):
        P = P @ A2
        U = U + b[2 * k + 1] * P
        V = V + b[2 * k] * P
    U = A @ U
    return U, V


def _pade13(A):
    b = _B13
    n = A.shape[0]
    ident = np.eye(n, dtype=A.dtype)
    A2 = A @ A
    A4 = A2 @ A2
    A6 = A4 @ A2
    U = A @ (A6 @ (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * ident)
    V = A6 @ (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * ident
    return U, V


def expm(A):
    """exp(A) for a square complex or real matrix."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("expm needs a square matrix")
    dtype = np.complex128 if np.iscomplexobj(A) else np.float64
    A = A.astype(dtype, copy=False)
    if A.shape[0] == 0:
        return np.zeros_like(A)
    nrm = np.linalg.norm(A, 1)
    if nrm <= _THETA[9]:
        for m in (3, 5, 7, 9):
            if nrm <= _THETA[m]:
                U, V = _pade_low(A, m)
                return np.linalg.solve(V - U, V + U)
    s = max(0, int(np.ceil(np.log2(nrm / _THETA13))))
    As = A / (2.0**s)
    U, V = _pade13(As)
    R = np.linalg.solve(V - U, V + U)
    for _ in range(s):
        R = R @ R
    return R
