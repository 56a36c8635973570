"""Verification suite: every quantitative exit criterion of the package.

Each criterion is a function ``(seed, tol_override) -> CriterionResult``
registered in :data:`CRITERIA`. :func:`run_suite` evaluates a selection
and :func:`format_report` renders the deterministic pass/fail table used
by ``rieszlab verify``. No timings or other run-dependent values enter the
report text.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .contours import CirclePath, SeparationPath
from .groups import (
    fit_polynomial_bound,
    integrated_group,
    integrated_group_closed_form,
    laplace_check,
    sample_integrated_group,
)
from .models import (
    build_model,
    bundled_models,
    decomposition_experiment,
    jordan_block,
    model_projectors,
)
from .numerics import lu_solve, op_norm
from .projectors import (
    bounded_group_constant,
    gelfand_nilpotency_check,
    local_part,
    partial_sum_plain,
    partial_sum_weighted,
    resolvent_bound_check,
    separation_operator,
    weighted_projector_bounded,
)
from .spectra import (
    custom_spectrum,
    diophantine_constant,
    gap_profile,
    oscillator_spectrum,
    sphere_spectrum,
    summability,
    torus_gap_bound_check,
    torus_spectrum,
    weyl_fit,
)

__all__ = ["CriterionResult", "CRITERIA", "run_suite", "format_report", "select"]


@dataclass
class CriterionResult:
    number: int
    key: str
    group: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number}. {self.key} ({self.group}): {self.detail}"


class _Checks:
    """Collects named sub-checks of one criterion."""

    def __init__(self):
        self.failed = []
        self.notes = []

    def le(self, name, value, bound):
        ok = bool(value <= bound)
        self.notes.append(f"{name}={value:.3e}<={bound:.1e}")
        if not ok:
            self.failed.append(name)
        return ok

    def true(self, name, ok, note=None):
        self.notes.append(note if note is not None else f"{name}={'yes' if ok else 'no'}")
        if not ok:
            self.failed.append(name)
        return ok

    def result(self, number, key, group):
        detail = "; ".join(self.notes)
        if self.failed:
            detail = "failed " + ", ".join(self.failed) + " | " + detail
        return CriterionResult(number, key, group, not self.failed, detail)


def _tol(default, override):
    return default if override is None else override


def _oracle_projector(model, k):
    """``T E_k T^{-1}`` from the stored similarity of a block-diagonal model."""
    t = model.similarity
    start = sum(sum(b) for _, b in model.spectrum[:k])
    stop = start + sum(model.spectrum[k][1])
    tinv = lu_solve(t, np.eye(t.shape[0], dtype=np.complex128))
    return t[:, start:stop] @ tinv[start:stop, :]


def _random_spectrum(rng, count, span):
    pool = np.array([v for v in range(-span, span + 1) if v != 0])
    return sorted(int(v) for v in rng.choice(pool, size=count, replace=False))


def criterion_projector_oracle(seed, override):
    tol = _tol(1e-8, override)
    worst = 0.0
    for i in range(20):
        rng = np.random.default_rng([seed, 1, i])
        lams = _random_spectrum(rng, 8, 12)
        kappa = (1.0, 10.0, 100.0)[i % 3]
        model = build_model([(lam, [1]) for lam in lams], kappa=kappa, seed=int(rng.integers(2**31)))
        for k, proj in enumerate(model_projectors(model, nodes=64)):
            worst = max(worst, op_norm(proj.matrix - _oracle_projector(model, k)))
    c = _Checks()
    c.le("max ||P_contour - P_eig||", worst, tol)
    return c.result(1, "projector_oracle", "projectors")


def criterion_projector_algebra(seed, override):
    tol = _tol(1e-8, override)
    trace_tol = _tol(1e-6, override)
    idem = pair = comp = tr = 0.0
    mult_ok = True
    for model in bundled_models().values():
        projs = model_projectors(model)
        idem = max(idem, max(p.idempotence_defect for p in projs))
        for i, p in enumerate(projs):
            for q in projs[i + 1:]:
                pair = max(pair, op_norm(p.matrix @ q.matrix), op_norm(q.matrix @ p.matrix))
        comp = max(comp, op_norm(sum(p.matrix for p in projs) - np.eye(model.dim)))
        tr = max(tr, max(p.trace_defect for p in projs))
        mult_ok &= all(p.multiplicity == model.multiplicity(k) for k, p in enumerate(projs))
    c = _Checks()
    c.le("idempotence", idem, tol)
    c.le("pairwise", pair, tol)
    c.le("completeness", comp, tol)
    c.le("trace integrality", tr, trace_tol)
    c.true("trace == multiplicity", mult_ok)
    return c.result(2, "projector_algebra", "projectors")


def criterion_bounded_group(seed, override):
    tol = _tol(1e-7, override)
    ratio = 0.0
    recon = 0.0
    for i in range(10):
        rng = np.random.default_rng([seed, 3, i])
        lams = _random_spectrum(rng, 6, 9)
        model = build_model([(lam, [1]) for lam in lams], kappa=1.0, seed=int(rng.integers(2**31)))
        a = model.A
        for (lam, _), delta in zip(model.spectrum, model.gaps()):
            path = CirclePath(1j * lam, 0.5 * delta, 64)
            w = weighted_projector_bounded(a, path, label=1j * lam)
            ratio = max(ratio, op_norm(w.matrix) / (2.0 * bounded_group_constant(a, path)))
        y = rng.standard_normal(model.dim) + 1j * rng.standard_normal(model.dim)
        y /= np.linalg.norm(y)
        x = lu_solve(a, lu_solve(a, y))
        projs = model_projectors(model)
        ax = sum(p.eigenvalue_label * (p.matrix @ x) for p in projs)
        recon = max(recon, op_norm(ax - a @ x))
    c = _Checks()
    c.le("max ||P_weighted|| / 2c", ratio, 1.0)
    c.le("||sum i lambda_k P_k x - Ax||", recon, tol)
    return c.result(3, "bounded_group_projector", "projectors")


# (spectrum, kappa, seed, n, ell) of the integrated-group decomposition fixtures
DECOMPOSITION_FIXTURES = [
    ([(1, [2]), (-2, [1]), (3, [2]), (-5, [1]), (8, [2]), (-12, [1]), (17, [1]), (-23, [2])],
     1.0, 0, 1, 1),
    ([(1, [3]), (3, [1]), (-4, [2]), (7, [3]), (-10, [1]), (14, [2])], 1.0, 0, 2, 1),
    ([(2 * k + 1, [2 if k % 2 else 1]) for k in range(8)], 10.0, 1, 1, 2),
]


def criterion_integrated_decomposition(seed, override):
    tol = _tol(1e-8, override)
    nil = weighted_gap = final = 0.0
    spread = 0.0
    decreasing = True
    for spectrum, kappa, mseed, n, ell in DECOMPOSITION_FIXTURES:
        model = build_model(spectrum, kappa=kappa, seed=mseed)
        projs = model_projectors(model)
        for p in projs:
            ak = local_part(model.A, p).matrix
            nil = max(nil, op_norm(np.linalg.matrix_power(ak, n + 1)))
        K = len(projs)
        lam_i = 1j * model.lambdas
        for N in range(K + 1):
            plain = partial_sum_plain(model.A, projs, N)
            weighted = partial_sum_weighted(model.A, lam_i, model.gaps(), n, N)
            weighted_gap = max(weighted_gap, op_norm(weighted - plain))
        curve = decomposition_experiment(model, ell, n, seed=seed, projectors=projs)
        decreasing &= bool(np.all(np.diff(curve.error) < 0))
        final = max(final, curve.error[-1])
        r = curve.ratio[~np.isnan(curve.ratio)]
        spread = max(spread, r.max() / np.median(r))
    c = _Checks()
    c.le("||A_k^(n+1)||", nil, tol)
    c.le("||weighted - plain partial sums||", weighted_gap, tol)
    c.true("error(N) strictly decreasing", decreasing)
    c.le("error(K)", final, tol)
    c.le("ratio max/median", spread, 50.0)
    return c.result(4, "integrated_group_decomposition", "projectors")


def criterion_separation(seed, override):
    tol = _tol(1e-5, override)
    m = 1
    model = build_model([(lam, [1]) for lam in (-5, -2, -1, 1.5, 3, 6)], kappa=10.0, seed=7)
    a = model.A
    path = SeparationPath(0.5, 1e4)
    sep = separation_operator(a, m, path)
    ainv = np.linalg.matrix_power(lu_solve(a, np.eye(model.dim, dtype=np.complex128)), m + 1)
    rng = np.random.default_rng([seed, 5])
    neg = pos = 0.0
    for lam, p in zip(model.lambdas, model_projectors(model)):
        v = p.matrix @ (rng.standard_normal(model.dim) + 1j * rng.standard_normal(model.dim))
        v /= np.linalg.norm(v)
        if lam < 0:
            neg = max(neg, op_norm(sep @ v))
        else:
            pos = max(pos, op_norm(sep @ v - ainv @ v))
    square = op_norm(sep @ sep - separation_operator(a, 2 * m + 1, path))
    c = _Checks()
    c.le("negative part", neg, tol)
    c.le("positive part", pos, tol)
    c.le("(PA^-m-1)^2 - PA^-2m-2", square, tol)
    return c.result(5, "separation", "projectors")


def criterion_integrated_groups(seed, override):
    tol_block = _tol(1e-9, override)
    tol_laplace = _tol(1e-6, override)
    rng = np.random.default_rng([seed, 6])
    lams = _random_spectrum(rng, 5, 3)
    model = build_model([(lam, [1]) for lam in lams], kappa=3.0, seed=int(rng.integers(2**31)))
    a = model.A
    block = 0.0
    for n in (1, 2, 3):
        for t in (-20.0, -7.5, -1.3, 0.4, 2.9, 11.0, 20.0):
            ref = integrated_group_closed_form(a, n, t)
            err = op_norm(integrated_group(a, n, t) - ref) / max(1.0, op_norm(ref))
            block = max(block, err)
    laplace = max(
        laplace_check(np.array([[1j]]), 0, 1.0),
        laplace_check(np.diag([1j, 2j]), 1, 2.0),
        laplace_check(jordan_block(1j, 2), 1, 1.0),
    )
    j5 = jordan_block(0.0, 5)
    fit = fit_polynomial_bound(sample_integrated_group(j5, 0, np.linspace(-100, 100, 401)))
    nilp = gelfand_nilpotency_check(j5, fit.degree, 0)
    c = _Checks()
    c.true("||A|| <= 10", op_norm(a) <= 10.0, f"||A||={op_norm(a):.3f}<=10")
    c.le("block vs closed form", block, tol_block)
    c.le("Laplace defect", laplace, tol_laplace)
    c.true("J5 fitted m = 4 +- 0.2", abs(fit.m - 4.0) <= 0.2, f"fitted m={fit.m:.4f}")
    c.true("||A^(m-n+1)|| = 0", nilp == 0.0, f"||A^(m-n+1)||={nilp:.1e}")
    return c.result(6, "integrated_groups", "groups")


def criterion_resolvent_bound(seed, override):
    violations = 0
    checked = 0
    for name, model in bundled_models().items():
        for k, p in enumerate(model_projectors(model)):
            report = resolvent_bound_check(model.A, p, 200, seed=seed + k)
            violations += report.violations
            checked += len(report.sample_points)
    c = _Checks()
    c.true("zero violations", violations == 0, f"violations={violations} over {checked} samples")
    return c.result(7, "resolvent_bound", "projectors")


def criterion_applications(seed, override):
    c = _Checks()
    sphere = sphere_spectrum(2, 60)
    c.true("sphere multiplicities 2k+1",
           np.array_equal(sphere.multiplicities, 2 * np.arange(61) + 1))
    osc = gap_profile(oscillator_spectrum(1, 200)).deltas
    c.true("oscillator delta == 1", bool(np.all(osc == 1.0)))
    est = diophantine_constant(np.sqrt(2.0), 2, 10**5)
    c.true("c_est(sqrt2) in [0.34, 0.36]", 0.34 <= est.c_est <= 0.36,
           f"c_est={est.c_est:.6f} at p/q={est.p}/{est.q}")
    start = time.perf_counter()
    cmin, bad = torus_gap_bound_check(2 * np.pi, 2 * np.pi / 2**0.25, 2, 1e3)
    elapsed = time.perf_counter() - start
    c.true("torus violations == 0", bad == 0, f"torus violations={bad}")
    c.true("torus c_min > 1e-6", cmin > 1e-6, f"c_min={cmin:.6f}")
    c.true("torus runtime <= 60 s", elapsed <= 60.0)
    _, e_sphere = weyl_fit(sphere_spectrum(2, 200), 3000)
    _, e_osc = weyl_fit(oscillator_spectrum(1, 3000), 3000)
    _, e_torus = weyl_fit(torus_spectrum(2 * np.pi, 2 * np.pi, 2000), 3000)
    c.true("Weyl sphere N=2", abs(e_sphere - 1.0) <= 0.1, f"weyl sphere={e_sphere:.4f} (1+-0.1)")
    c.true("Weyl oscillator N=1", abs(e_osc - 1.0) <= 0.1, f"weyl oscillator={e_osc:.4f} (1+-0.1)")
    c.true("Weyl torus", abs(e_torus - 1.0) <= 0.15, f"weyl torus={e_torus:.4f} (1+-0.15)")
    v1 = summability(sphere_spectrum(2, 100), 1, 1).verdict
    v2 = summability(oscillator_spectrum(1, 100), 2, 1).verdict
    v3 = summability(custom_spectrum(np.arange(1, 102)), 1, 0, 100).verdict
    c.true("sphere l=1 n=1 converging", v1 == "converging", f"sphere verdict={v1}")
    c.true("oscillator l=2 n=1 converging", v2 == "converging", f"oscillator verdict={v2}")
    c.true("harmonic boundary inconclusive", v3 == "inconclusive", f"harmonic verdict={v3}")
    return c.result(8, "applications", "spectra")


CRITERIA = [
    (1, "projector_oracle", "projectors", criterion_projector_oracle),
    (2, "projector_algebra", "projectors", criterion_projector_algebra),
    (3, "bounded_group_projector", "projectors", criterion_bounded_group),
    (4, "integrated_group_decomposition", "projectors", criterion_integrated_decomposition),
    (5, "separation", "projectors", criterion_separation),
    (6, "integrated_groups", "groups", criterion_integrated_groups),
    (7, "resolvent_bound", "projectors", criterion_resolvent_bound),
    (8, "applications", "spectra", criterion_applications),
]


def select(filter_text: str | None = None):
    """Criteria whose group, key or number matches ``filter_text`` (all when empty)."""
    if not filter_text:
        return list(CRITERIA)
    f = filter_text.lower()
    return [c for c in CRITERIA if f in (c[2], str(c[0])) or f in c[1]]


def run_suite(seed: int = 42, tol_override: float | None = None,
              filter_text: str | None = None, determinism: bool = True) -> list[CriterionResult]:
    """Evaluate the selected criteria; with ``determinism`` also rerun and compare.

    The determinism criterion renders the selected report twice with the
    same seed and requires byte-identical text.
    """
    chosen = select(filter_text)
    results = [fn(seed, tol_override) for _, _, _, fn in chosen]
    if determinism and (not filter_text or select(filter_text) == list(CRITERIA)
                        or filter_text.lower() in ("determinism", "9", "cli")):
        first = format_report(results)
        again = format_report([fn(seed, tol_override) for _, _, _, fn in chosen])
        same = first == again
        results.append(CriterionResult(
            9, "determinism", "cli", same,
            f"identical reports for seed {seed}: {'yes' if same else 'no'}"))
    return results


def format_report(results) -> str:
    lines = [r.line() for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    return "\n".join(lines) + "\n"
