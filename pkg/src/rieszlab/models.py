"""Finite-dimensional operator models with prescribed spectrum and Jordan structure.

A model is ``A = T J T^{-1}`` with ``J`` a direct sum of Jordan blocks at
purely imaginary eigenvalues ``i lambda_k`` and ``T`` a similarity whose
condition number is set explicitly, so the non-normality of ``A`` (and with
it the size of its spectral projectors) is a tunable parameter.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .contours import CirclePath
from .errors import DegenerateSpectrum, NotNilpotent
from .numerics import as_matrix, as_vector, lu_solve, op_norm, random_unitary
from .projectors import (
    ProjectorResult,
    local_part,
    partial_sum_plain,
    riesz_projector,
    spectral_order,
)
from .spectra import gap_profile

__all__ = [
    "OperatorModel",
    "jordan_block",
    "build_model",
    "fourier_derivative_model",
    "smooth_vector",
    "model_projectors",
    "DecompositionCurve",
    "decomposition_experiment",
    "bundled_models",
]


@dataclass
class OperatorModel:
    A: np.ndarray
    spectrum: list
    similarity_condition: float
    n_declared: int
    notes: str = ""
    similarity: np.ndarray | None = field(default=None, repr=False)
    seed: int | None = None

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([lam for lam, _ in self.spectrum], dtype=float)

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def multiplicity(self, k: int) -> int:
        return int(sum(self.spectrum[k][1]))

    def gaps(self) -> np.ndarray:
        """Half-gaps ``delta_k`` in the order of :attr:`spectrum`."""
        lams = self.lambdas
        order = np.argsort(lams)
        deltas = np.empty_like(lams)
        if lams.size == 1:
            deltas[:] = max(1.0, abs(lams[0])) * 0.5
        else:
            deltas[order] = gap_profile(lams[order]).deltas
        return deltas


def jordan_block(eigenvalue: complex, size: int) -> np.ndarray:
    return eigenvalue * np.eye(size, dtype=np.complex128) + np.eye(size, k=1)


def _similarity(dim: int, kappa: float, rng: np.random.Generator) -> np.ndarray:
    """``U diag(s) V^H`` with singular values ramped geometrically from 1 to ``kappa``."""
    u = random_unitary(dim, rng)
    v = random_unitary(dim, rng)
    s = np.geomspace(1.0, kappa, dim) if dim > 1 else np.ones(1)
    return (u * s) @ v.conj().T


def build_model(spectrum, kappa: float = 1.0, seed: int = 0, n_declared: int | None = None,
                notes: str = "") -> OperatorModel:
    """Assemble ``T (+)_k (+)_blocks J_size(i lambda_k) T^{-1}``.

    ``spectrum`` is a list of ``(lambda_k, [block sizes])``. ``n_declared``
    defaults to the largest block size minus one and may not be smaller.
    """
    spectrum = [(float(lam), [int(b) for b in blocks]) for lam, blocks in spectrum]
    lams = [lam for lam, _ in spectrum]
    if len(set(lams)) != len(lams):
        raise DegenerateSpectrum(f"repeated eigenvalue in {lams}")
    if any(lam == 0 for lam in lams):
        raise DegenerateSpectrum("0 may not be an eigenvalue of a model")
    if kappa < 1:
        raise ValueError("kappa must be at least 1")
    if any(not blocks or min(blocks) < 1 for _, blocks in spectrum):
        raise ValueError("each eigenvalue needs at least one block of positive size")
    biggest = max(max(blocks) for _, blocks in spectrum)
    if n_declared is None:
        n_declared = biggest - 1
    if biggest > n_declared + 1:
        raise ValueError(f"block of size {biggest} exceeds n_declared + 1 = {n_declared + 1}")
    blocks = [jordan_block(1j * lam, b) for lam, sizes in spectrum for b in sizes]
    dim = sum(b.shape[0] for b in blocks)
    j = np.zeros((dim, dim), dtype=np.complex128)
    pos = 0
    for blk in blocks:
        s = blk.shape[0]
        j[pos:pos + s, pos:pos + s] = blk
        pos += s
    rng = np.random.default_rng(seed)
    t = _similarity(dim, kappa, rng)
    a = t @ lu_solve(t.T, j.T).T  # T J T^{-1} without forming the inverse
    return OperatorModel(a, spectrum, float(np.linalg.cond(t)), n_declared, notes, t, seed)


def fourier_derivative_model(grid_size: int) -> OperatorModel:
    """Spectral differentiation matrix on ``grid_size`` equispaced points of ``[0, 2 pi)``.

    For odd ``M`` the entries are ``(1/2) (-1)^(j-l) / sin((j - l) pi / M)``
    off the diagonal; the eigenvalues are ``i k`` for ``|k| <= (M - 1)/2``
    with the discrete Fourier modes as eigenvectors. The constant mode
    makes 0 an eigenvalue, so this model cannot be inverted.
    """
    if grid_size < 3 or grid_size % 2 == 0:
        raise ValueError("grid size must be odd and at least 3")
    M = grid_size
    idx = np.arange(M)
    diff = idx[:, None] - idx[None, :]
    with np.errstate(divide="ignore"):
        d = 0.5 * (-1.0) ** diff / np.sin(diff * np.pi / M)
    d[diff == 0] = 0.0
    K = (M - 1) // 2
    modes = np.exp(1j * np.outer(idx * 2 * np.pi / M, np.arange(-K, K + 1))) / np.sqrt(M)
    spectrum = [(float(k), [1]) for k in range(-K, K + 1)]
    return OperatorModel(d.astype(np.complex128), spectrum, 1.0, 0,
                         "Fourier differentiation matrix", modes)


def smooth_vector(model, power: int, y) -> np.ndarray:
    """``A^{-power} y`` by ``power`` successive solves."""
    a = model.A if isinstance(model, OperatorModel) else as_matrix(model, square=True)
    x = as_vector(y)
    for _ in range(power):
        x = lu_solve(a, x)
    return x


def model_projectors(model: OperatorModel, nodes: int = 64, radius_factor: float = 0.5,
                     workers: int | None = None) -> list[ProjectorResult]:
    """Riesz projector for every spectral point, circle radius ``radius_factor * delta_k``."""
    out = []
    for (lam, _), delta in zip(model.spectrum, model.gaps()):
        path = CirclePath(1j * lam, radius_factor * delta, nodes)
        out.append(riesz_projector(model.A, path, label=1j * lam, workers=workers))
    return out


@dataclass
class DecompositionCurve:
    N: np.ndarray
    error: np.ndarray
    tail: np.ndarray
    ratio: np.ndarray
    x_norm: float

    def rows(self):
        for N, e, t, r in zip(self.N, self.error, self.tail, self.ratio):
            yield int(N), float(e), float(t), float(r)


def decomposition_experiment(model: OperatorModel, ell: int, n: int, n_max: int | None = None,
                             seed: int = 0, projectors=None, y=None) -> DecompositionCurve:
    """Truncation error of ``sum_{k <= N} P_k x`` for ``x = A^{-(n + ell)} y``.

    ``y`` is a random unit vector unless given; ``tail(N)`` is
    ``sum_{N < k <= n_max} 1/(|lambda_k|^ell delta_k^n)`` in the same
    ``|lambda|`` order as the partial sums, and ``ratio = error / tail`` (NaN
    once the tail is empty, in particular at ``N = n_max``). Raises :class:`NotNilpotent` if some local part is not
    annihilated by its ``(n + 1)``-th power, i.e. a block exceeds ``n + 1``.
    """
    lams = model.lambdas
    n_max = len(lams) if n_max is None else n_max
    if n_max > len(lams):
        raise ValueError(f"model has {len(lams)} spectral points, asked for {n_max}")
    if projectors is None:
        projectors = model_projectors(model)
    for proj in projectors:
        part = local_part(model.A, proj)
        if part.nilpotency_index > n + 1:
            raise NotNilpotent(
                f"local part at {proj.eigenvalue_label:.6g} has nilpotency index "
                f"{part.nilpotency_index} > n + 1 = {n + 1}"
            )
    if y is None:
        rng = np.random.default_rng(seed)
        y = rng.standard_normal(model.dim) + 1j * rng.standard_normal(model.dim)
        y = y / np.linalg.norm(y)
    x = smooth_vector(model, n + ell, y)
    deltas = model.gaps()
    order = spectral_order(lams)
    order = order[:n_max]
    terms = 1.0 / (np.abs(lams[order]) ** ell * deltas[order] ** n)
    tails = np.concatenate([np.cumsum(terms[::-1])[::-1], [0.0]])
    Ns = np.arange(n_max + 1)
    errors = np.array([op_norm(partial_sum_plain(model.A, projectors, N) @ x - x) for N in Ns])
    tail = tails[Ns]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(tail > 0, errors / np.where(tail > 0, tail, 1.0), np.nan)
    return DecompositionCurve(Ns, errors, tail, ratio, float(np.linalg.norm(x)))


def bundled_models() -> dict[str, OperatorModel]:
    """Small reference models used by the verification suite and the CLI."""
    return {
        "diagonal": build_model([(1, [1]), (2, [1]), (3, [1])], kappa=1.0, seed=1,
                                notes="normal, three simple eigenvalues"),
        "jordan2": build_model([(2, [2]), (5, [1])], kappa=1.0, seed=2,
                               notes="one 2x2 Jordan block"),
        "mixed_jordan": build_model([(-3, [1]), (-1, [2]), (2, [1, 1]), (4, [3])], kappa=10.0,
                                    seed=3, notes="mixed signs, blocks up to size 3"),
        "nonnormal": build_model([(-4, [1]), (-2, [1]), (1, [1]), (3, [1]), (6, [1]), (10, [1])],
                                 kappa=100.0, seed=4, notes="kappa = 100, simple spectrum"),
        "oscillator": build_model([(2 * k + 1, [1]) for k in range(8)], kappa=10.0, seed=5,
                                  notes="harmonic-oscillator levels 1, 3, ..., 15"),
        "fourier7": fourier_derivative_model(7),
    }
