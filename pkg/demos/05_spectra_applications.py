"""
Gap conditions on model spectra
===============================

Spheres, oscillators and flat tori give explicit spectra. Their gaps decide
whether the summability condition behind the spectral decomposition holds.
For the torus the gaps are controlled by how well the ratio of the squared
periods is approximated by rationals.
"""

import math

import numpy as np

from rieszlab import diophantine_constant, oscillator_spectrum, sphere_spectrum, summability, torus_spectrum
from rieszlab.spectra import gap_profile, torus_gap_bound_check, weyl_fit

s2 = sphere_spectrum(2, 6)
print("S^2 eigenvalues:", s2.raw, "multiplicities:", s2.multiplicities)

for label, model, ell, n in [("sphere", sphere_spectrum(2, 400), 1, 1),
                             ("oscillator", oscillator_spectrum(1, 400), 2, 1),
                             ("oscillator", oscillator_spectrum(1, 400), 0, 1)]:
    r = summability(model, ell, n)
    print(f"{label:10s} l={ell} n={n}: tail exponent {r.fitted_tail_exponent:6.3f} -> {r.verdict}")

est = diophantine_constant(math.sqrt(2), 2, 10**5)
print(f"sqrt2: min q|q alpha - p| = {est.c_est:.6f} at {est.p}/{est.q}")

b = 2 * np.pi / 2**0.25  # squared period ratio sqrt2
cmin, bad = torus_gap_bound_check(2 * np.pi, b, 2, 1e3)
print(f"torus gaps: min lambda (gap/2) = {cmin:.6f}, violations {bad}")
torus = torus_spectrum(2 * np.pi, b, 200)
print("smallest torus half-gaps:", np.round(np.sort(gap_profile(torus).deltas)[:4], 6))

for label, model in [("sphere", sphere_spectrum(2, 200)),
                     ("oscillator", oscillator_spectrum(1, 3000)),
                     ("square torus", torus_spectrum(2 * np.pi, 2 * np.pi, 2000))]:
    C, e = weyl_fit(model, 3000)
    print(f"Weyl fit {label:12s}: mu_j ~ {C:.3f} j^{e:.3f}")
