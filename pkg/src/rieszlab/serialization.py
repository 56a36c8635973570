"""JSON and CSV formats for matrices, projector sets, models and reports.

Matrix JSON::

    {"rows": 2, "cols": 2, "data": [[re, im], ...]}   # row-major

Vectors use the same layout with ``cols = 1``. CSV files start with a
``#`` comment line recording tool version, seed and parameters, then a
header row; floats are written with 17 significant digits.
"""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from . import __version__
from .numerics import as_matrix

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "load_matrix",
    "save_matrix",
    "projectors_to_json",
    "model_to_json",
    "model_from_json",
    "format_float",
    "parse_complex",
    "format_complex",
    "write_csv",
]


def matrix_to_json(a) -> dict:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in a.ravel()],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"matrix JSON needs rows, cols and data: {exc}") from exc
    if len(data) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, found {len(data)}")
    flat = np.array([complex(re, im) for re, im in data], dtype=np.complex128)
    return as_matrix(flat.reshape(rows, cols))


def load_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return matrix_from_json(json.load(fh))


def save_matrix(path, a) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_to_json(a), fh)


def projectors_to_json(projectors, lambdas=None) -> dict:
    """Projector matrices plus a manifest of ``(k, lambda, eps, trace, idempotence_defect)``."""
    manifest = []
    for k, p in enumerate(projectors):
        lam = p.eigenvalue_label.imag if lambdas is None else lambdas[k]
        manifest.append({
            "k": k,
            "lambda": float(lam),
            "eps": p.contour.radius,
            "trace": [p.trace.real, p.trace.imag],
            "idempotence_defect": p.idempotence_defect,
        })
    return {"manifest": manifest, "projectors": [matrix_to_json(p.matrix) for p in projectors]}


def model_to_json(model) -> dict:
    return {
        "spectrum": [{"lambda": lam, "blocks": list(blocks)} for lam, blocks in model.spectrum],
        "kappa": model.similarity_condition,
        "seed": model.seed,
        "matrix": matrix_to_json(model.A),
    }


def model_from_json(obj: dict):
    """Rebuild a model from its spectrum, kappa and seed, or wrap an embedded matrix."""
    from .models import OperatorModel, build_model

    spectrum = [(float(e["lambda"]), [int(b) for b in e["blocks"]]) for e in obj["spectrum"]]
    if "matrix" in obj and obj.get("seed") is None:
        a = matrix_from_json(obj["matrix"])
        n = max(max(b) for _, b in spectrum) - 1
        return OperatorModel(a, spectrum, float(obj.get("kappa", 1.0)), n)
    return build_model(spectrum, kappa=float(obj.get("kappa", 1.0)), seed=int(obj.get("seed", 0)))


def format_float(x) -> str:
    x = float(x)
    if math.isnan(x):
        return ""
    return f"{x:.16e}"


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` style tokens such as ``0+2i``, ``-1.5-0.5i``, ``3i`` or ``2``."""
    token = text.strip().replace(" ", "").replace("I", "i").replace("j", "i")
    if not token:
        raise ValueError("empty complex literal")
    try:
        return complex(token.replace("i", "j"))
    except ValueError:
        pass
    if token.endswith("i") and token[:-1] in ("", "+", "-"):
        return complex(0, -1 if token.startswith("-") else 1)
    raise ValueError(f"cannot parse complex number {text!r}; use the form a+bi")


def format_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.16e}{z.imag:+.16e}i"


def write_csv(fh, header, rows, meta: dict) -> None:
    """Write a comment line, a header and rows; floats get 17 significant digits."""
    params = " ".join(f"{k}={meta[k]}" for k in sorted(meta))
    fh.write(f"# rieszlab {__version__} {params}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v
                         for v in row])


def csv_text(header, rows, meta: dict) -> str:
    buf = io.StringIO()
    write_csv(buf, header, rows, meta)
    return buf.getvalue()
