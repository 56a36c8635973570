"""Dense complex linear algebra used by the rest of the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; the helpers
here validate them, solve systems with a condition estimate attached,
measure spectral norms and compute matrix exponentials.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.linalg import lapack

from .errors import DimensionMismatch, NumericalOverflow, SingularMatrix

__all__ = [
    "as_matrix",
    "as_vector",
    "LU",
    "lu_factor",
    "lu_solve",
    "op_norm",
    "norm_1",
    "norm_inf",
    "mat_exp",
    "random_unitary",
]

PIVOT_FLOOR = 1e-300


def as_matrix(a, *, square: bool = False) -> np.ndarray:
    """Return ``a`` as a 2-D complex128 array, rejecting NaN/Inf entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def as_vector(v) -> np.ndarray:
    x = np.asarray(v, dtype=np.complex128).reshape(-1)
    if not np.all(np.isfinite(x)):
        raise ValueError("vector has non-finite entries")
    return x


@dataclass(frozen=True)
class LU:
    """Partial-pivoting LU factorization with a 1-norm condition estimate."""

    lu: np.ndarray
    piv: np.ndarray
    cond: float

    def solve(self, b) -> np.ndarray:
        b = np.asarray(b, dtype=np.complex128)
        if b.shape[0] != self.lu.shape[0]:
            raise DimensionMismatch(
                f"right-hand side has {b.shape[0]} rows, matrix has {self.lu.shape[0]}"
            )
        return scipy.linalg.lu_solve((self.lu, self.piv), b, check_finite=False)


def lu_factor(a) -> LU:
    a = as_matrix(a, square=True)
    with warnings.catch_warnings():
        # exact singularity is reported through the pivot check below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.size and pivots.min() < PIVOT_FLOOR:
        raise SingularMatrix(f"pivot magnitude {pivots.min():.3e} below {PIVOT_FLOOR}")
    anorm = np.abs(a).sum(axis=0).max() if a.size else 0.0
    rcond, info = lapack.zgecon(lu, anorm, norm="1")
    cond = np.inf if rcond == 0 else 1.0 / rcond
    return LU(lu, piv, float(cond))


def lu_solve(a, b) -> np.ndarray:
    """Solve ``a @ x = b`` by LU with partial pivoting.

    Raises :class:`SingularMatrix` when a pivot falls below 1e-300 and
    :class:`DimensionMismatch` when the shapes disagree.
    """
    a = as_matrix(a, square=True)
    b = np.asarray(b, dtype=np.complex128)
    if b.shape[0] != a.shape[0]:
        raise DimensionMismatch(f"b has {b.shape[0]} rows, a has {a.shape[0]}")
    return lu_factor(a).solve(b)


def op_norm(a) -> float:
    """Spectral norm (largest singular value)."""
    a = np.asarray(a, dtype=np.complex128)
    if a.size == 0:
        raise DimensionMismatch("empty matrix has no norm")
    if a.ndim == 1:
        return float(np.linalg.norm(a))
    return float(np.linalg.norm(a, 2))


def norm_1(a) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=np.complex128), 1))


def norm_inf(a) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=np.complex128), np.inf))


# Pade coefficients and 1-norm thresholds from Higham, SIAM J. Matrix Anal.
# Appl. 26 (2005), table 2.3.
_PADE = {
    3: (1.495585217958292e-2, [120.0, 60.0, 12.0, 1.0]),
    5: (2.539398330063230e-1, [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0]),
    7: (
        9.504178996162932e-1,
        [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0],
    ),
    9: (
        2.097847961257068,
        [
            17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
            2162160.0, 110880.0, 3960.0, 90.0, 1.0,
        ],
    ),
}
_THETA13 = 5.371920351148152
_B13 = [
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0, 129060195264000.0, 10559470521600.0, 670442572800.0,
    33522128640.0, 1323241920.0, 40840800.0, 960960.0, 16380.0, 182.0, 1.0,
]


def _pade_uv(a: np.ndarray, m: int):
    ident = np.eye(a.shape[0], dtype=np.complex128)
    if m == 13:
        b = _B13
        a2 = a @ a
        a4 = a2 @ a2
        a6 = a4 @ a2
        u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
                 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
        v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
             + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
        return u, v
    b = _PADE[m][1]
    a2 = a @ a
    power = ident
    u_sum = np.zeros_like(a)
    v_sum = np.zeros_like(a)
    for j in range(0, m + 1, 2):
        v_sum = v_sum + b[j] * power
        u_sum = u_sum + b[j + 1] * power
        power = power @ a2
    return a @ u_sum, v_sum


def mat_exp(a) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a diagonal Pade approximant.

    Degree and scaling follow Higham's 2005 algorithm: the smallest Pade
    degree whose 1-norm threshold covers ``a`` is used, otherwise ``a`` is
    scaled by ``2**-s`` into the degree-13 range and the result squared
    ``s`` times.
    """
    a = as_matrix(a, square=True)
    n = a.shape[0]
    if n == 0:
        return a.copy()
    norm = norm_1(a)
    if norm == 0.0:
        return np.eye(n, dtype=np.complex128)
    for m in (3, 5, 7, 9):
        if norm <= _PADE[m][0]:
            u, v = _pade_uv(a, m)
            return _pade_solve(u, v)
    s = max(0, int(np.ceil(np.log2(norm / _THETA13))))
    u, v = _pade_uv(a / 2.0**s, 13)
    r = _pade_solve(u, v)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(s):
            r = r @ r
            if not np.all(np.isfinite(r)):
                raise NumericalOverflow(f"exponential overflowed (||A||_1 = {norm:.3e})")
    return r


def _pade_solve(u, v):
    with np.errstate(over="ignore", invalid="ignore"):
        r = lu_solve(v - u, v + u)
    if not np.all(np.isfinite(r)):
        raise NumericalOverflow("Pade approximant overflowed")
    return r


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary matrix from the QR factorization of a Ginibre matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
