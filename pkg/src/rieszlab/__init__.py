"""rieszlab: spectral projectors, separation operators and integrated groups for matrices.

Finite-dimensional laboratory for Riesz-projector expansions of generators of
polynomially bounded integrated groups, with spectral models (spheres, tori,
oscillators) for the gap and summability conditions that govern them.
"""

__version__ = "0.1.0"

from .contours import CirclePath, SeparationPath
from .errors import RieszLabError
from .groups import (
    fit_polynomial_bound,
    integrated_group,
    integrated_group_closed_form,
    laplace_check,
    sample_integrated_group,
)
from .models import (
    OperatorModel,
    build_model,
    bundled_models,
    decomposition_experiment,
    fourier_derivative_model,
    jordan_block,
    model_projectors,
)
from .projectors import (
    local_part,
    partial_sum_plain,
    partial_sum_weighted,
    resolvent_bound_check,
    riesz_projector,
    separation_operator,
    separation_projector,
    weighted_projector_bounded,
)
from .spectra import (
    diophantine_constant,
    gap_profile,
    oscillator_spectrum,
    sphere_spectrum,
    summability,
    torus_spectrum,
)

__all__ = [name for name in dir() if not name.startswith("_")]
