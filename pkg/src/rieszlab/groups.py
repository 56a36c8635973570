"""n-times integrated groups generated by matrices.

For a matrix ``A`` the n-times integrated group is

    S(t) = int_0^t (t - s)^(n-1) / (n-1)! e^{sA} ds,      S(t) = e^{tA} for n = 0,

defined for all real ``t``. It is read off as the top-right block of
``exp(t B)`` with ``B`` the block upper-bidiagonal matrix carrying ``A`` in
the first diagonal block and identities on the superdiagonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .errors import TruncationInsufficient
from .numerics import as_matrix, lu_solve, mat_exp, op_norm

__all__ = [
    "IntegratedGroupSample",
    "BoundFit",
    "integrated_group",
    "integrated_group_closed_form",
    "sample_integrated_group",
    "laplace_transform",
    "laplace_check",
    "laplace_tail_estimate",
    "fit_polynomial_bound",
]

LAPLACE_TAIL_TOL = 1e-9


@dataclass
class IntegratedGroupSample:
    order: int
    times: np.ndarray
    values: list
    norms: np.ndarray


@dataclass
class BoundFit:
    M: float
    m: float
    residual: float

    @property
    def degree(self) -> int:
        return int(round(self.m))


def _generator_block(a: np.ndarray, n: int) -> np.ndarray:
    d = a.shape[0]
    big = np.zeros(((n + 1) * d, (n + 1) * d), dtype=np.complex128)
    big[:d, :d] = a
    for j in range(n):
        big[j * d:(j + 1) * d, (j + 1) * d:(j + 2) * d] = np.eye(d)
    return big


def integrated_group(a, n: int, t: float) -> np.ndarray:
    """``S(t)`` of order ``n`` via the block exponential."""
    if n < 0:
        raise ValueError("integration order must be nonnegative")
    a = as_matrix(a, square=True)
    d = a.shape[0]
    e = mat_exp(t * _generator_block(a, n))
    return e[:d, n * d:]


def integrated_group_closed_form(a, n: int, t: float) -> np.ndarray:
    """``A^{-n} (e^{tA} - sum_{j<n} t^j A^j / j!)`` for invertible ``A``."""
    a = as_matrix(a, square=True)
    d = a.shape[0]
    acc = mat_exp(t * a)
    power = np.eye(d, dtype=np.complex128)
    for j in range(n):
        acc = acc - (t**j / factorial(j)) * power
        power = power @ a
    for _ in range(n):
        acc = lu_solve(a, acc)
    return acc


def sample_integrated_group(a, n: int, times) -> IntegratedGroupSample:
    times = np.asarray(times, dtype=float)
    values = [integrated_group(a, n, t) for t in times]
    return IntegratedGroupSample(n, times, values, np.array([op_norm(v) for v in values]))


def _time_rule(T: float, per_unit: int = 32):
    """Composite Gauss-Legendre on [0, T]: unit panels, the first one halved."""
    edges = list(np.arange(0.0, T, 1.0)) + [T]
    if len(edges) > 1:
        edges.insert(1, 0.5 * edges[1])
    t, w = np.polynomial.legendre.leggauss(per_unit)
    xs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi <= lo:
            continue
        half = 0.5 * (hi - lo)
        xs.append(lo + half * (t + 1.0))
        ws.append(half * w)
    return np.concatenate(xs), np.concatenate(ws)


def laplace_tail_estimate(a, n: int, lam: complex, T: float) -> float:
    """Size of the neglected ``|lam|^n int_T^inf e^{-lam t} S(t) dt``.

    Estimated as ``|lam|^n e^{-Re(lam) T} (1 + ||S(T)||) / Re(lam)``, i.e. the
    tail of a polynomially growing integrand treated as frozen at ``T``.
    """
    s_norm = op_norm(integrated_group(a, n, T))
    return abs(lam) ** n * np.exp(-lam.real * T) * (1.0 + s_norm) / lam.real


def laplace_transform(a, n: int, lam: complex, T: float, per_unit: int = 32) -> np.ndarray:
    """``lam^n int_0^T e^{-lam t} S(t) dt`` by composite Gauss-Legendre."""
    a = as_matrix(a, square=True)
    ts, ws = _time_rule(T, per_unit)
    total = np.zeros_like(a)
    for t, w in zip(ts, ws):
        total = total + (w * np.exp(-lam * t)) * integrated_group(a, n, t)
    return lam**n * total


def laplace_check(a, n: int, lam: complex, T: float | None = None) -> float:
    """``||lam^n int_0^T e^{-lam t} S(t) dt - (lam - A)^{-1}||``.

    Without ``T`` the horizon is doubled from 8 until the tail estimate is
    below 1e-9; an explicit ``T`` whose tail estimate exceeds that raises
    :class:`TruncationInsufficient`.
    """
    a = as_matrix(a, square=True)
    lam = complex(lam)
    growth = np.max(np.linalg.eigvals(a).real)
    if lam.real <= max(growth, 0.0):
        raise ValueError(f"Re(lambda) = {lam.real} must exceed the growth bound {growth:.3g}")
    if T is None:
        T = 8.0
        while laplace_tail_estimate(a, n, lam, T) > LAPLACE_TAIL_TOL:
            T *= 2.0
            if T > 1e5:
                raise TruncationInsufficient("no horizon up to 1e5 meets the tail tolerance")
    else:
        tail = laplace_tail_estimate(a, n, lam, T)
        if tail > LAPLACE_TAIL_TOL:
            raise TruncationInsufficient(f"tail estimate {tail:.3e} at T = {T} exceeds 1e-9")
    d = a.shape[0]
    direct = lu_solve(lam * np.eye(d) - a, np.eye(d, dtype=np.complex128))
    return op_norm(laplace_transform(a, n, lam, T) - direct)


def fit_polynomial_bound(sample: IntegratedGroupSample) -> BoundFit:
    """Fit ``||S(t)|| <= M (1 + |t|^m)``.

    The degree is the least-squares slope of ``log ||S||`` against
    ``log(1 + |t|)`` over the top decade of ``|t|``; ``M`` is then the
    smallest constant making the bound hold on every sample.
    """
    t = np.abs(sample.times)
    norms = np.asarray(sample.norms, dtype=float)
    window = (t >= 0.1 * t.max()) & (norms > 0)
    x, y = np.log1p(t[window]), np.log(norms[window])
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    m = float(slope)
    M = float(np.max(norms / (1.0 + t ** m)))
    return BoundFit(M=M, m=m, residual=residual)
