"""Contour-integral spectral projectors and the operators built from them.

All projectors are resolvent integrals ``(1/2 pi i) oint w(z) (z - A)^{-1} dz``
evaluated with the trapezoidal rule on circles (see :mod:`rieszlab.contours`).
Besides the plain Riesz projector this module provides

* the weighted projector with weight ``1 + (z - c)^2 / r^2``, whose norm is
  controlled by ``sup |Re z| ||(z - A)^{-1}||`` on the circle;
* plain and weighted partial sums over the spectrum in ``|lambda|`` order;
* the half-plane separation operator, realized as the bounded composite
  ``P A^{-m-1}`` from an integral along the real axis;
* the nilpotent local parts ``(A - i lambda_k) P_k`` and diagnostic checks of
  the local Laurent expansion and the resolvent bound outside ``gamma_k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .contours import CirclePath, SeparationPath, integrate_circle, integrate_separation
from .errors import (
    ContourTooCloseToSpectrum,
    InvalidProjector,
    NotNilpotent,
    SpectrumNotZero,
    SpectrumOnPath,
)
from .numerics import as_matrix, lu_factor, lu_solve, op_norm

__all__ = [
    "ProjectorResult",
    "LocalPart",
    "ResolventBoundReport",
    "resolvent",
    "spectral_order",
    "riesz_projector",
    "weighted_projector_bounded",
    "bounded_group_constant",
    "local_part",
    "local_resolvent_expansion_check",
    "partial_sum_plain",
    "partial_sum_weighted",
    "weighted_partial_sum_nodes",
    "default_separation_path",
    "separation_operator",
    "separation_truncation_estimate",
    "separation_projector",
    "split_spectrum",
    "resolvent_bound_check",
    "gelfand_nilpotency_check",
]

CLEARANCE = 0.05


@dataclass
class ProjectorResult:
    matrix: np.ndarray
    eigenvalue_label: complex
    contour: CirclePath
    idempotence_defect: float
    trace: complex
    condition: float = 1.0

    @property
    def multiplicity(self) -> int:
        return int(round(self.trace.real))

    @property
    def trace_defect(self) -> float:
        return abs(self.trace - round(self.trace.real))


@dataclass
class LocalPart:
    matrix: np.ndarray
    nilpotency_index: int


@dataclass
class ResolventBoundReport:
    C_k: float
    sample_points: list = field(default_factory=list)
    violations: int = 0


def resolvent(a: np.ndarray, z: complex, rhs=None) -> np.ndarray:
    """``(z - a)^{-1} rhs`` (``rhs`` defaults to the identity)."""
    n = a.shape[0]
    if rhs is None:
        rhs = np.eye(n, dtype=np.complex128)
    return lu_solve(z * np.eye(n) - a, rhs)


def spectral_order(values) -> np.ndarray:
    """Indices sorting real ``values`` by ``|v|`` ascending, positive first on ties."""
    values = np.asarray(values, dtype=float)
    return np.array(sorted(range(len(values)), key=lambda i: (abs(values[i]), values[i] < 0)),
                    dtype=int)


def _check_clearance(eigs, path: CirclePath):
    rel = np.abs(np.abs(eigs - path.center) - path.radius) / path.radius
    if rel.size and rel.min() < CLEARANCE:
        worst = eigs[int(np.argmin(rel))]
        raise ContourTooCloseToSpectrum(
            f"eigenvalue {worst:.6g} lies within {rel.min():.3g} (relative) of the circle "
            f"|z - ({path.center:.6g})| = {path.radius:.6g}"
        )


def _contour_operator(a, path, weight=None, workers=None):
    n = a.shape[0]
    ident = np.eye(n, dtype=np.complex128)
    conds = []

    def integrand(z):
        lu = lu_factor(z * ident - a)
        conds.append(lu.cond)
        r = lu.solve(ident)
        return r if weight is None else weight(z) * r

    p = integrate_circle(integrand, path, workers)
    return p, max(conds)


def _package(a, p, path, cond, label, tol, check):
    defect = op_norm(p @ p - p)
    tr = complex(np.trace(p))
    if label is None:
        enclosed = np.trace(a @ p)
        label = complex(enclosed / tr) if abs(tr) > 0.5 else path.center
    if check and defect > tol:
        raise InvalidProjector(f"idempotence defect {defect:.3e} exceeds {tol:.1e}")
    return ProjectorResult(p, complex(label), path, defect, tr, cond)


def riesz_projector(a, path: CirclePath, *, label=None, tol: float = 1e-8,
                    workers: int | None = None) -> ProjectorResult:
    """Riesz projector onto the generalized eigenspace enclosed by ``path``.

    ``label`` is the eigenvalue assigned to the result; by default it is the
    mean of the enclosed eigenvalues, ``tr(A P) / tr(P)``.
    """
    a = as_matrix(a, square=True)
    _check_clearance(np.linalg.eigvals(a), path)
    p, cond = _contour_operator(a, path, workers=workers)
    return _package(a, p, path, cond, label, tol, check=True)


def weighted_projector_bounded(a, path: CirclePath, *, label=None,
                               workers: int | None = None) -> ProjectorResult:
    """Circle integral of ``(z - A)^{-1} [1 + (z - c)^2 / r^2]``.

    The extra term integrates to ``(A - c)^2 P / r^2``, so the result is the
    Riesz projector whenever the enclosed pole has order at most two. It is
    not forced to be idempotent; ``idempotence_defect`` reports how far off
    it is.
    """
    a = as_matrix(a, square=True)
    _check_clearance(np.linalg.eigvals(a), path)
    c, r = path.center, path.radius
    p, cond = _contour_operator(a, path, weight=lambda z: 1.0 + (z - c) ** 2 / r**2,
                                workers=workers)
    return _package(a, p, path, cond, label, tol=np.inf, check=False)


def bounded_group_constant(a, path: CirclePath, samples: int = 1024) -> float:
    """``sup_z ||Re(z - c) (z - A)^{-1}||`` over the circle, sampled densely.

    The sample grid contains the quadrature nodes of ``path``, so the bound
    ``||weighted projector|| <= 2 c`` also holds for the discrete rule.
    """
    a = as_matrix(a, square=True)
    samples = max(samples, path.nodes) // path.nodes * path.nodes
    dense = CirclePath(path.center, path.radius, samples).points()
    return max(abs((z - path.center).real) * op_norm(resolvent(a, z)) for z in dense)


def local_part(a, proj: ProjectorResult, tol: float = 1e-8) -> LocalPart:
    """``(A - lambda_k) P_k`` and the smallest power at which it vanishes."""
    a = as_matrix(a, square=True)
    n = a.shape[0]
    ak = (a - proj.eigenvalue_label * np.eye(n)) @ proj.matrix
    power = np.eye(n, dtype=np.complex128)
    for j in range(1, n + 2):
        power = power @ ak
        if op_norm(power) <= tol:
            return LocalPart(ak, j)
    raise NotNilpotent(
        f"no power up to {n + 1} of the local part at {proj.eigenvalue_label:.6g} "
        f"drops below {tol:.1e}; the contour may enclose several eigenvalues"
    )


def local_resolvent_expansion_check(a, proj: ProjectorResult, eigenvalue=None,
                                    n_terms: int | None = None, radius: float | None = None,
                                    samples: int = 32) -> float:
    """Max over ``|z| = radius`` of ``||R(l + z) P - sum_j A_k^j z^{-(j+1)} P||``.

    The sum runs over ``j = 0 .. n_terms - 1`` (the nilpotency index by
    default), which is the full Laurent expansion of the resolvent on the
    range of ``P``.
    """
    a = as_matrix(a, square=True)
    n = a.shape[0]
    lam = proj.eigenvalue_label if eigenvalue is None else complex(eigenvalue)
    ak = (a - lam * np.eye(n)) @ proj.matrix
    if n_terms is None:
        n_terms = local_part(a, proj).nilpotency_index
    if radius is None:
        radius = proj.contour.radius
    powers = [proj.matrix]
    for _ in range(1, n_terms):
        powers.append(ak @ powers[-1])
    worst = 0.0
    for z in radius * np.exp(2j * np.pi * np.arange(samples) / samples):
        direct = resolvent(a, lam + z, proj.matrix)
        series = sum(pk / z ** (j + 1) for j, pk in enumerate(powers))
        worst = max(worst, op_norm(direct - series))
    return worst


def partial_sum_plain(a, projectors, n_terms: int) -> np.ndarray:
    """Sum of the first ``n_terms`` projectors in ``|lambda|`` order."""
    a = as_matrix(a, square=True)
    order = spectral_order([p.eigenvalue_label.imag for p in projectors])
    total = np.zeros_like(a)
    for i in order[:n_terms]:
        total = total + projectors[i].matrix
    return total


def weighted_partial_sum_nodes(n: int) -> int:
    """Trapezoid node count that keeps aliasing of the polynomial weight below 1e-12."""
    degree = 2 * (2 * n + 1) * (n + 1)
    return max(64, 8 * ((degree + 48 + 7) // 8))


def partial_sum_weighted(a, spectrum, gaps, n: int, n_terms: int, *,
                         nodes: int | None = None, workers: int | None = None) -> np.ndarray:
    """Sum over the first ``n_terms`` spectral points of the weighted circle integrals.

    For each point ``i lambda_k`` the circle ``|z - i lambda_k| = delta_k``
    carries the weight ``[1 + ((z - i lambda_k)/delta_k)^(2(2n+1))]^(n+1)``.
    The weight differs from 1 by a term of order ``2(2n+1)`` at the centre,
    so each integral equals the Riesz projector when the pole order is at
    most ``n + 1``.
    """
    a = as_matrix(a, square=True)
    spectrum = np.asarray(spectrum, dtype=np.complex128)
    gaps = np.asarray(gaps, dtype=float)
    if nodes is None:
        nodes = weighted_partial_sum_nodes(n)
    eigs = np.linalg.eigvals(a)
    power = 2 * (2 * n + 1)
    total = np.zeros_like(a)
    for i in spectral_order(spectrum.imag)[:n_terms]:
        c, d = spectrum[i], gaps[i]
        path = CirclePath(c, d, nodes)
        _check_clearance(eigs, path)
        p, _ = _contour_operator(
            a, path, weight=lambda z, c=c, d=d: (1.0 + ((z - c) / d) ** power) ** (n + 1),
            workers=workers,
        )
        total = total + p
    return total


def default_separation_path(a, segment_nodes: int = 128, arc_nodes: int = 32) -> SeparationPath:
    """Cut radius half the smallest ``|eigenvalue|``; outer radius ``max(1e4, 100 max|eig|)``."""
    mags = np.abs(np.linalg.eigvals(as_matrix(a, square=True)))
    if mags.min() == 0.0:
        raise SpectrumOnPath("0 is an eigenvalue; shift the operator first")
    return SeparationPath(0.5 * mags.min(), max(1e4, 100.0 * mags.max()),
                          segment_nodes, arc_nodes)


def _distance_to_path(z: complex, path: SeparationPath) -> float:
    d, big = path.cut_radius, path.outer_radius
    x, y = z.real, z.imag
    ax = abs(x)
    if d <= ax <= big:
        seg = abs(y)
    else:
        seg = min(abs(z - d), abs(z + d), abs(z - big), abs(z + big))
    arc = abs(abs(z) - d) if y >= 0 else min(abs(z - d), abs(z + d))
    return min(seg, arc)


def _inverse_power(a, p: int) -> np.ndarray:
    x = np.eye(a.shape[0], dtype=np.complex128)
    for _ in range(p):
        x = lu_solve(a, x)
    return x


def _tail_correction(a, x, outer_radius: float, nodes: int = 32) -> np.ndarray:
    """``(1/2 pi i) int_{|t| > R} (t - A)^{-1} x dt`` on the real axis.

    With ``t = R/u`` the two half-lines combine into
    ``int_0^1 (1/R)(I - sA)^{-1} 2A (I + sA)^{-1} x du`` with ``s = u / R``,
    an integrand smooth up to ``u = 0``.
    """
    n = a.shape[0]
    ident = np.eye(n, dtype=np.complex128)
    t, w = np.polynomial.legendre.leggauss(nodes)
    u = 0.5 * (t + 1.0)
    total = np.zeros_like(x)
    for ui, wi in zip(u, 0.5 * w):
        s = ui / outer_radius
        inner = lu_solve(ident + s * a, x)
        total = total + wi * lu_solve(ident - s * a, 2.0 * (a @ inner)) / outer_radius
    return total / (2j * np.pi)


def separation_truncation_estimate(a, m: int, outer_radius: float) -> float:
    """Leading error ``||A^{-m}|| / (pi R)`` of cutting the real-axis integral at ``R``."""
    return op_norm(_inverse_power(as_matrix(a, square=True), m)) / (np.pi * outer_radius)


def separation_operator(a, m: int, path: SeparationPath | None = None, *,
                        close_tail: bool = True, workers: int | None = None) -> np.ndarray:
    """The bounded composite ``P A^{-m-1}`` of the half-plane separation operator.

    ``Q = (1/2 pi i) int_Gamma (z - A)^{-1} A^{-m-1} dz`` along the real axis
    (semicircle above 0) tends to ``+1/2 A^{-m-1}`` on the generalized
    eigenspaces of eigenvalues with positive imaginary part and to
    ``-1/2 A^{-m-1}`` on the others, so ``Q + A^{-m-1}/2`` keeps the
    upper-half-plane part and annihilates the lower one.

    With ``close_tail`` the part of the real axis beyond ``outer_radius`` is
    added in closed quadrature form, which removes the ``O(1/R)`` truncation
    error reported by :func:`separation_truncation_estimate`.
    """
    a = as_matrix(a, square=True)
    eigs = np.linalg.eigvals(a)
    if np.min(np.abs(eigs)) == 0.0:
        raise SpectrumOnPath("0 is an eigenvalue; shift the operator first")
    if path is None:
        path = default_separation_path(a)
    for z in eigs:
        if _distance_to_path(complex(z), path) < CLEARANCE * abs(z):
            raise SpectrumOnPath(f"eigenvalue {z:.6g} lies too close to the separation path")
    ainv = _inverse_power(a, m + 1)
    n = a.shape[0]
    ident = np.eye(n, dtype=np.complex128)
    q = integrate_separation(lambda z: lu_solve(z * ident - a, ainv), path, workers)
    if close_tail:
        q = q + _tail_correction(a, ainv, path.outer_radius)
    return q + 0.5 * ainv


def separation_projector(a, m: int = 0, path: SeparationPath | None = None, **kw) -> np.ndarray:
    """Projector onto the upper-half-plane spectral subspace, ``(P A^{-m-1}) A^{m+1}``."""
    a = as_matrix(a, square=True)
    return separation_operator(a, m, path, **kw) @ np.linalg.matrix_power(a, m + 1)


def split_spectrum(a, projector, tol: float = 1e-8):
    """Eigenvalues of ``A`` compressed to the range and to the kernel of ``projector``."""
    a = as_matrix(a, square=True)
    p = as_matrix(projector, square=True)
    n = a.shape[0]
    rank = int(round(np.trace(p).real))

    def compress(op, r):
        if r == 0:
            return np.array([], dtype=np.complex128)
        u = np.linalg.svd(op)[0][:, :r]
        return np.linalg.eigvals(u.conj().T @ a @ u)

    return compress(p, rank), compress(np.eye(n) - p, n - rank)


def resolvent_bound_check(a, proj: ProjectorResult, sample_count: int = 200, *,
                          seed: int = 0, sup_samples: int = 512) -> ResolventBoundReport:
    """Compare ``||R(z) P||`` with ``C_k / dist(z, gamma_k)`` outside the circle.

    ``C_k = eps_k sup_{gamma_k} ||R||`` with the supremum sampled at
    ``sup_samples`` points. Samples lie on rings of radius 2, 4 and 8
    ``eps_k`` plus random exterior points; points within 5% of ``eps_k`` of
    the circle or of another eigenvalue are skipped.
    """
    a = as_matrix(a, square=True)
    c, eps = proj.contour.center, proj.contour.radius
    ring = CirclePath(c, eps, sup_samples).points()
    ck = eps * max(op_norm(resolvent(a, z)) for z in ring)
    others = np.array([e for e in np.linalg.eigvals(a) if abs(e - c) > eps])
    rng = np.random.default_rng(seed)
    per_ring = sample_count // 4

    def admissible(z):
        dist = abs(z - c) - eps
        if dist < CLEARANCE * eps:
            return False
        return not (others.size and np.min(np.abs(others - z)) < CLEARANCE * eps)

    points = []
    for factor in (2.0, 4.0, 8.0):
        theta = 2.0 * np.pi * (np.arange(per_ring) + 0.5) / per_ring
        points.extend(z for z in c + factor * eps * np.exp(1j * theta) if admissible(z))
    # random exterior points fill up to sample_count, replacing skipped ring points
    while len(points) < sample_count:
        z = c + eps * 10.0 ** rng.uniform(0.02, 1.0) * np.exp(2j * np.pi * rng.uniform())
        if admissible(z):
            points.append(z)

    report = ResolventBoundReport(C_k=float(ck))
    for z in points:
        lhs = op_norm(resolvent(a, z, proj.matrix))
        rhs = ck / (abs(z - c) - eps)
        report.sample_points.append((complex(z), lhs, rhs))
        if lhs > rhs * (1.0 + 1e-6):
            report.violations += 1
    return report


def gelfand_nilpotency_check(a, m: float, n: int, tol: float = 1e-8) -> float:
    """``||A^(m - n + 1)||`` for a matrix whose spectrum is ``{0}``.

    Zero spectrum is tested through the power traces ``tr(A^j)``,
    ``j = 1..dim``, which all vanish exactly for nilpotent matrices and are
    far better conditioned than computed eigenvalues of a Jordan block.
    """
    a = as_matrix(a, square=True)
    dim = a.shape[0]
    scale = max(1.0, op_norm(a)) if dim else 1.0
    power = np.eye(dim, dtype=np.complex128)
    for j in range(1, dim + 1):
        power = power @ a
        if abs(np.trace(power)) > tol * scale**j:
            raise SpectrumNotZero(f"tr(A^{j}) = {np.trace(power):.3e}; spectrum is not {{0}}")
    exponent = max(0, int(round(m)) - n + 1)
    return op_norm(np.linalg.matrix_power(a, exponent))
