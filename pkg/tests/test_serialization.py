import io
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rieszlab import __version__
from rieszlab.contours import CirclePath
from rieszlab.models import build_model, bundled_models, model_projectors
from rieszlab.projectors import riesz_projector
from rieszlab.serialization import (
    csv_text,
    format_complex,
    format_float,
    load_matrix,
    matrix_from_json,
    matrix_to_json,
    model_from_json,
    model_to_json,
    parse_complex,
    projectors_to_json,
    save_matrix,
)

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_matrix_round_trip(rows, cols, data):
    vals = data.draw(st.lists(st.tuples(finite, finite), min_size=rows * cols,
                              max_size=rows * cols))
    a = np.array([complex(r, i) for r, i in vals]).reshape(rows, cols)
    obj = json.loads(json.dumps(matrix_to_json(a)))
    np.testing.assert_array_equal(matrix_from_json(obj), a)


def test_layout_is_row_major():
    obj = matrix_to_json(np.array([[1, 2j], [3, 4]]))
    assert obj == {"rows": 2, "cols": 2,
                   "data": [[1.0, 0.0], [0.0, 2.0], [3.0, 0.0], [4.0, 0.0]]}


def test_vector_is_column():
    obj = matrix_to_json(np.array([1, 2]))
    assert (obj["rows"], obj["cols"]) == (2, 1)


def test_bad_payloads():
    with pytest.raises(ValueError):
        matrix_from_json({"rows": 2, "cols": 2, "data": [[0, 0]]})
    with pytest.raises(ValueError):
        matrix_from_json({"rows": 1})


def test_file_round_trip(tmp_path):
    a = np.array([[1 + 1j, 0], [2, -3j]])
    save_matrix(tmp_path / "a.json", a)
    np.testing.assert_array_equal(load_matrix(tmp_path / "a.json"), a)


def test_projector_manifest():
    model = bundled_models()["jordan2"]
    obj = projectors_to_json(model_projectors(model), list(model.lambdas))
    assert [e["k"] for e in obj["manifest"]] == [0, 1]
    assert obj["manifest"][0]["lambda"] == 2.0
    assert obj["manifest"][0]["trace"][0] == pytest.approx(2.0)
    assert set(obj["manifest"][0]) == {"k", "lambda", "eps", "trace", "idempotence_defect"}
    p = matrix_from_json(obj["projectors"][0])
    assert np.abs(p @ p - p).max() <= 1e-8


def test_projector_label_default():
    p = riesz_projector(np.diag([2j, 5j]), CirclePath(5j, 1.0))
    assert projectors_to_json([p])["manifest"][0]["lambda"] == pytest.approx(5.0)


def test_model_round_trip():
    model = build_model([(1, [2]), (-3, [1])], kappa=10.0, seed=5)
    obj = json.loads(json.dumps(model_to_json(model)))
    again = model_from_json(obj)
    np.testing.assert_array_equal(again.A, model.A)
    assert again.spectrum == model.spectrum


def test_model_from_embedded_matrix():
    model = build_model([(1, [2]), (-3, [1])], kappa=10.0, seed=5)
    obj = model_to_json(model)
    obj["seed"] = None
    again = model_from_json(obj)
    np.testing.assert_array_equal(again.A, model.A)
    assert again.n_declared == 1


@pytest.mark.parametrize("text,value", [
    ("0+2i", 2j), ("-1.5-0.5i", -1.5 - 0.5j), ("3i", 3j), ("2", 2), ("i", 1j), ("-i", -1j),
    ("1e-3+1e2i", 1e-3 + 100j),
])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("text", ["", "abc", "1+2k"])
def test_parse_complex_errors(text):
    with pytest.raises(ValueError):
        parse_complex(text)


def test_complex_round_trip():
    z = 0.1 - 1 / 3j
    assert parse_complex(format_complex(z)) == z


def test_float_format():
    assert format_float(0.1) == "1.0000000000000001e-01"
    assert float(format_float(np.pi)) == np.pi
    assert format_float(float("nan")) == ""


def test_csv_header():
    text = csv_text(["N", "error"], [(0, 0.5), (1, float("nan"))], {"seed": 42, "n": 1})
    lines = text.splitlines()
    assert lines[0] == f"# rieszlab {__version__} n=1 seed=42"
    assert lines[1] == "N,error"
    assert lines[2] == "0,5.0000000000000000e-01"
    assert lines[3] == "1,"
