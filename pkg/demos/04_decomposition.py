"""
Spectral decomposition of smooth vectors
========================================

Partial sums of Riesz projectors converge on vectors in the range of a
power of A^(-1). The error tracks the tail of sum 1/(|lambda_k|^l delta_k^n),
where delta_k is half the gap to the nearest other eigenvalue.
"""

import numpy as np

from rieszlab import build_model, decomposition_experiment, model_projectors, partial_sum_weighted
from rieszlab.numerics import op_norm
from rieszlab.projectors import partial_sum_plain

# eigenvalues of a harmonic oscillator, odd levels carrying 2x2 Jordan blocks
spectrum = [(2 * k + 1, [2 if k % 2 else 1]) for k in range(8)]
model = build_model(spectrum, kappa=10.0, seed=1)
projs = model_projectors(model)

curve = decomposition_experiment(model, ell=2, n=1, seed=0, projectors=projs)
print(" N      error        tail        ratio")
for N, err, tail, ratio in curve.rows():
    print(f"{N:2d}  {err:.3e}  {tail:.3e}  {ratio:.3f}")

# the weighted circles give the same partial sums once pole orders are <= n + 1
lam = 1j * model.lambdas
gap = max(op_norm(partial_sum_weighted(model.A, lam, model.gaps(), 1, N)
                  - partial_sum_plain(model.A, projs, N)) for N in range(9))
print(f"max ||weighted - plain|| = {gap:.2e}")
