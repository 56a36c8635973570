"""
Integrated groups and their polynomial growth
=============================================

The n-times integrated group S(t) is the n-fold time integral of e^(tA).
For a matrix it is a block of one larger exponential, and its norm growth
reveals the Jordan structure of A.
"""

import numpy as np

from rieszlab import (
    fit_polynomial_bound,
    integrated_group,
    integrated_group_closed_form,
    jordan_block,
    laplace_check,
    sample_integrated_group,
)
from rieszlab.numerics import op_norm
from rieszlab.projectors import gelfand_nilpotency_check

a = np.diag([1j, -2j, 3j]) + np.diag([0.5, 0.0], k=1)
for n in (0, 1, 2):
    s = integrated_group(a, n, 4.0)
    ref = integrated_group_closed_form(a, n, 4.0)
    print(f"n={n}: ||S(4)|| = {op_norm(s):8.4f}, block vs closed form {op_norm(s - ref):.1e}")

# the Laplace transform of S reproduces the resolvent for Re(lambda) > 0
print(f"Laplace defect at lambda = 1: {laplace_check(jordan_block(1j, 2), 1, 1.0):.2e}")

# growth degree of e^(tJ) for a nilpotent 5x5 block is 4
j5 = jordan_block(0.0, 5)
fit = fit_polynomial_bound(sample_integrated_group(j5, 0, np.linspace(-100, 100, 401)))
print(f"J5: fitted degree m = {fit.m:.3f}, M = {fit.M:.3f}")
print("||J5^(m+1)|| =", gelfand_nilpotency_check(j5, fit.degree, 0))

# a unitary group does not grow; integrating once gives linear growth at most
rng = np.random.default_rng(0)
h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
skew = 1j * (h + h.conj().T)
for n in (0, 1):
    fit = fit_polynomial_bound(sample_integrated_group(skew, n, np.linspace(-200, 200, 801)))
    print(f"skew-Hermitian, n={n}: m = {fit.m:.3f}")
