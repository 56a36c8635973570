"""Exact eigenvalue sequences, gap profiles and summability diagnostics.

Spectrum models cover the Laplacian on the sphere ``S^N``, the harmonic
oscillator on ``R^N``, flat 2-tori and arbitrary user lists. Eigenvalues
are stored without multiplicity together with a multiplicity array; a
``shift`` moves them off zero where the decomposition machinery needs an
invertible operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded, RationalAlpha

__all__ = [
    "SpectrumModel",
    "GapProfile",
    "SummabilityReport",
    "DiophantineEstimate",
    "PerturbationBracket",
    "sphere_multiplicity",
    "sphere_spectrum",
    "oscillator_spectrum",
    "torus_spectrum",
    "custom_spectrum",
    "gap_profile",
    "summability",
    "continued_fraction",
    "convergents",
    "diophantine_constant",
    "torus_alpha",
    "torus_gap_bound_check",
    "weyl_fit",
    "perturbation_bracket",
    "log_log_slope",
]

LATTICE_BUDGET = 10**8
DEDUP_RTOL = 1e-9
QMAX_FLOAT = 10**6


@dataclass
class SpectrumModel:
    kind: str
    raw: np.ndarray
    multiplicities: np.ndarray
    shift: float = 0.0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.raw = np.asarray(self.raw, dtype=float)
        self.multiplicities = np.asarray(self.multiplicities, dtype=np.int64)
        if self.raw.shape != self.multiplicities.shape:
            raise ValueError("eigenvalues and multiplicities differ in length")
        if np.any(np.diff(self.raw) <= 0):
            raise ValueError("eigenvalues must be strictly increasing")
        if np.any(self.multiplicities < 1):
            raise ValueError("multiplicities must be at least 1")
        if np.any(self.eigenvalues == 0):
            raise ValueError("0 is an eigenvalue after the shift; choose another shift")

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.raw + self.shift

    def __len__(self):
        return self.raw.size

    def expanded(self) -> np.ndarray:
        """Raw eigenvalues repeated according to multiplicity."""
        return np.repeat(self.raw, self.multiplicities)


def _auto_shift(values, shift):
    if shift is not None:
        return float(shift)
    return 1.0 if np.any(np.asarray(values) == 0) else 0.0


def sphere_multiplicity(N: int, k: int) -> int:
    """``(N + 2k - 1) (N + k - 2)! / (k! (N - 1)!)``, the degree-k harmonic count on ``S^N``."""
    value = Fraction((N + 2 * k - 1) * math.factorial(N + k - 2),
                     math.factorial(k) * math.factorial(N - 1))
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral multiplicity for N={N}, k={k}")
    return int(value)


def sphere_spectrum(N: int, K: int, shift: float | None = None) -> SpectrumModel:
    """Eigenvalues ``k(k + N - 1)``, ``k = 0..K``, of the Laplacian on ``S^N``."""
    if N < 2 or K < 0:
        raise ValueError("need N >= 2 and K >= 0")
    k = np.arange(K + 1)
    raw = k * (k + N - 1)
    mult = [sphere_multiplicity(N, int(j)) for j in k]
    return SpectrumModel("sphere", raw, mult, _auto_shift(raw, shift), {"N": N, "K": K})


def oscillator_spectrum(N: int, K: int, shift: float | None = None) -> SpectrumModel:
    """Eigenvalues ``2k + N``, ``k = 0..K``; level k has ``C(k + N - 1, N - 1)`` states."""
    if N < 1 or K < 0:
        raise ValueError("need N >= 1 and K >= 0")
    k = np.arange(K + 1)
    mult = [math.comb(int(j) + N - 1, N - 1) for j in k]
    raw = 2 * k + N
    return SpectrumModel("oscillator", raw, mult, _auto_shift(raw, shift), {"N": N, "K": K})


def torus_spectrum(a: float, b: float, lam_max: float, shift: float | None = None) -> SpectrumModel:
    """Values ``a' m^2 + b' n^2 <= lam_max`` with ``a' = (2 pi / a)^2``, ``b' = (2 pi / b)^2``.

    Values agreeing to a relative 1e-9 are merged; multiplicities count the
    lattice points ``(m, n)`` behind each value.
    """
    if a <= 0 or b <= 0 or lam_max <= 0:
        raise ValueError("a, b and lam_max must be positive")
    ap, bp = (2 * np.pi / a) ** 2, (2 * np.pi / b) ** 2
    mmax = int(np.floor(np.sqrt(lam_max / ap)))
    nmax = int(np.floor(np.sqrt(lam_max / bp)))
    size = (2 * mmax + 1) * (2 * nmax + 1)
    if size > LATTICE_BUDGET:
        raise BudgetExceeded(f"lattice of {size} points exceeds budget {LATTICE_BUDGET}")
    m2 = np.arange(-mmax, mmax + 1, dtype=float) ** 2
    n2 = np.arange(-nmax, nmax + 1, dtype=float) ** 2
    vals = (ap * m2[:, None] + bp * n2[None, :]).ravel()
    vals = np.sort(vals[vals <= lam_max * (1 + DEDUP_RTOL)])
    # start a new group wherever the relative jump exceeds the merge tolerance
    jumps = np.diff(vals) > DEDUP_RTOL * np.maximum(np.abs(vals[1:]), 1.0)
    starts = np.concatenate([[0], np.flatnonzero(jumps) + 1])
    distinct = vals[starts]
    mult = np.diff(np.concatenate([starts, [vals.size]]))
    return SpectrumModel("torus", distinct, mult, _auto_shift(distinct, shift),
                         {"a": a, "b": b, "lam_max": lam_max})


def custom_spectrum(values, multiplicities=None, shift: float = 0.0) -> SpectrumModel:
    values = np.sort(np.asarray(values, dtype=float))
    if multiplicities is None:
        multiplicities = np.ones(values.size, dtype=np.int64)
    return SpectrumModel("custom", values, multiplicities, float(shift), {})


@dataclass
class GapProfile:
    deltas: np.ndarray
    boundary: str = "single-gap"


def gap_profile(model) -> GapProfile:
    """Half the smaller neighbouring gap for each eigenvalue.

    The first and last eigenvalues have one neighbour; half of that single
    gap is used.
    """
    values = model.raw if isinstance(model, SpectrumModel) else np.sort(np.asarray(model, float))
    if values.size < 2:
        raise ValueError("need at least two distinct eigenvalues")
    gaps = np.diff(values)
    left = np.concatenate([[gaps[0]], gaps])
    right = np.concatenate([gaps, [gaps[-1]]])
    return GapProfile(0.5 * np.minimum(left, right))


def log_log_slope(x, y):
    """Least-squares slope and intercept of ``log y`` against ``log x`` over the top decade of ``x``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    window = (x >= 0.1 * x.max()) & (y > 0)
    slope, intercept = np.polyfit(np.log(x[window]), np.log(y[window]), 1)
    return float(slope), float(intercept)


@dataclass
class SummabilityReport:
    ell: int
    n: int
    terms: np.ndarray
    partial_sums: np.ndarray
    fitted_tail_exponent: float
    verdict: str


def summability(model: SpectrumModel, ell: int, n: int, K: int | None = None,
                margin: float = 0.1) -> SummabilityReport:
    """Partial sums of ``1 / (|lambda_k|^ell delta_k^n)`` over the first ``K`` eigenvalues.

    The verdict is a heuristic from the log-log slope of the terms over the
    top decade of ``k``: ``converging`` below ``-1 - margin``, ``diverging``
    above ``-1 + margin``, ``inconclusive`` in between.
    """
    K = len(model) if K is None else K
    if K > len(model):
        raise ValueError(f"model has {len(model)} eigenvalues, asked for {K}")
    deltas = gap_profile(model).deltas[:K]
    lam = np.abs(model.eigenvalues[:K])
    terms = 1.0 / (lam**ell * deltas**n)
    slope, _ = log_log_slope(np.arange(1, K + 1), terms)
    if slope < -1.0 - margin:
        verdict = "converging"
    elif slope > -1.0 + margin:
        verdict = "diverging"
    else:
        verdict = "inconclusive"
    return SummabilityReport(ell, n, terms, np.cumsum(terms), slope, verdict)


def continued_fraction(alpha: float, max_terms: int = 64, qmax: float = 1e15):
    """Partial quotients of ``alpha`` until the convergent denominators pass ``qmax``."""
    quotients = []
    x = alpha
    q_prev, q = 1, 0
    for _ in range(max_terms):
        a = math.floor(x)
        quotients.append(a)
        q_prev, q = q, a * q + q_prev
        frac = x - a
        if q > qmax or frac < 1e-15:
            break
        x = 1.0 / frac
    return quotients


def convergents(alpha: float, qmax: int):
    """Convergents ``(p, q)`` of ``alpha`` with ``q <= qmax``."""
    out = []
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    for a in continued_fraction(alpha, qmax=qmax):
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        if q > qmax:
            break
        out.append((p, q))
    return out


def _check_irrational(alpha: float):
    for q in range(1, 101):
        p = round(alpha * q)
        if abs(alpha - p / q) < 1e-14:
            raise RationalAlpha(f"alpha = {alpha!r} is within 1e-14 of {p}/{q}")


@dataclass
class DiophantineEstimate:
    alpha: float
    degree: int
    qmax: int
    c_est: float
    p: int
    q: int

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "degree": self.degree, "qmax": self.qmax,
                "c_est": self.c_est, "p": self.p, "q": self.q}


def diophantine_constant(alpha: float, d: int, qmax: int, sweep: int = 10**4) -> DiophantineEstimate:
    """``min_{q <= qmax} q^d |alpha - p/q|`` with ``p`` the nearest integer to ``q alpha``.

    Candidates are every ``q`` up to ``min(qmax, sweep)`` plus the
    continued-fraction convergent denominators up to ``qmax``; for ``d >= 2``
    the best approximation property means no other ``q`` can do better.
    """
    if d < 2:
        raise ValueError("degree must be at least 2")
    if qmax < 10:
        raise ValueError("qmax must be at least 10")
    if qmax > QMAX_FLOAT:
        # |q alpha - p| ~ 1/q falls below q * ulp(alpha) beyond this point
        raise ValueError(f"qmax above {QMAX_FLOAT} exceeds double precision of alpha")
    alpha = float(alpha)
    _check_irrational(alpha)
    qs = np.arange(1, min(qmax, sweep) + 1, dtype=np.int64)
    qs = np.union1d(qs, [q for _, q in convergents(alpha, qmax)])
    ps = np.rint(qs * alpha)
    values = qs.astype(float) ** (d - 1) * np.abs(qs * alpha - ps)
    i = int(np.argmin(values))
    return DiophantineEstimate(alpha, d, int(qmax), float(values[i]), int(ps[i]), int(qs[i]))


def torus_alpha(a: float, b: float) -> float:
    """``b^2 / a^2``, which equals ``a' / b'`` for the torus with periods ``a``, ``b``."""
    return (b / a) ** 2


def torus_gap_bound_check(a: float, b: float, d: int, lam_max: float):
    """Minimum of ``lambda^(d-1) (lambda - lambda_prev) / 2`` over successive nonzero eigenvalues.

    Returns ``(c_min, violations)`` where violations counts pairs whose
    product is below 1e-12. Rational ``b^2/a^2`` is rejected.
    """
    _check_irrational(torus_alpha(a, b))
    model = torus_spectrum(a, b, lam_max)
    vals = model.raw[model.raw > 0]
    if vals.size < 2:
        return float("inf"), 0
    products = vals[1:] ** (d - 1) * 0.5 * np.diff(vals)
    return float(products.min()), int(np.count_nonzero(products < 1e-12))


def weyl_fit(model: SpectrumModel, K: int | None = None):
    """Fit ``mu_j ~ C j^e`` to the first ``K`` eigenvalues counted with multiplicity.

    Returns ``(C, e)`` from a log-log regression over the top decade of ``j``.
    """
    mu = model.expanded()
    K = mu.size if K is None else K
    if K > mu.size:
        raise ValueError(f"model has {mu.size} eigenvalues with multiplicity, asked for {K}")
    slope, intercept = log_log_slope(np.arange(1, K + 1), mu[:K])
    return float(np.exp(intercept)), slope


@dataclass
class PerturbationBracket:
    V_inf: float
    brackets: np.ndarray
    overlaps: list


def perturbation_bracket(model: SpectrumModel, V_inf: float) -> PerturbationBracket:
    """Intervals ``[mu_k - ||V||, mu_k + ||V||]`` and the adjacent pairs that overlap."""
    if V_inf < 0:
        raise ValueError("V_inf must be nonnegative")
    mu = model.raw
    brackets = np.column_stack([mu - V_inf, mu + V_inf])
    overlaps = [(k, k + 1) for k in range(len(mu) - 1) if brackets[k, 1] > brackets[k + 1, 0]]
    return PerturbationBracket(float(V_inf), brackets, overlaps)
