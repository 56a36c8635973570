"""
Separating the upper and lower half-plane spectrum
==================================================

The resolvent integrated along the real axis, with a small arc above the
origin, splits the spectrum of a matrix by the sign of the imaginary part.
It is unbounded on its own, so we integrate against A^(-m-1).
"""

import numpy as np

from rieszlab import SeparationPath, build_model, separation_operator, separation_projector
from rieszlab.numerics import op_norm
from rieszlab.projectors import separation_truncation_estimate, split_spectrum

model = build_model([(lam, [1]) for lam in (-5, -2, -1, 1.5, 3, 6)], kappa=10.0, seed=7)
a, m = model.A, 1
path = SeparationPath(cut_radius=0.5, outer_radius=1e4)

s = separation_operator(a, m, path)
p = separation_projector(a, m, path)
print(f"rank of the upper projector: {np.trace(p).real:.8f}")
upper, lower = split_spectrum(a, p)
print("upper part:", np.round(np.sort_complex(upper), 8))
print("lower part:", np.round(np.sort_complex(lower), 8))

# cutting the real axis at R costs about ||A^-m|| / (pi R); the closed tail removes it
open_ = separation_operator(a, m, path, close_tail=False)
print(f"truncation effect {op_norm(open_ - s):.2e}, "
      f"estimate {separation_truncation_estimate(a, m, 1e4):.2e}")

# the composite operators multiply like powers of A^-1
s3 = separation_operator(a, 2 * m + 1, path)
print(f"||S_m^2 - S_(2m+1)|| = {op_norm(s @ s - s3):.2e}")
