import csv
import io
import json
import math

import numpy as np
import pytest

from rieszlab.cli import main
from rieszlab.models import jordan_block
from rieszlab.serialization import matrix_from_json, save_matrix


def read_csv(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


@pytest.fixture
def files(tmp_path):
    save_matrix(tmp_path / "diag.json", np.diag([1j, 2j, -3j]))
    save_matrix(tmp_path / "j2.json", jordan_block(0.0, 2))
    return tmp_path


def test_project(files, capsys):
    out = files / "P.json"
    code = main(["project", "--matrix", str(files / "diag.json"), "--center", "0+2i",
                 "--radius", "0.5", "--nodes", "64", "--out", str(out)])
    assert code == 0
    obj = json.loads(out.read_text())
    p = matrix_from_json(obj["projectors"][0])
    assert np.abs(p @ p - p).max() <= 1e-10
    assert obj["manifest"][0]["trace"][0] == pytest.approx(1.0)


def test_project_bundled_model(files):
    out = files / "all.json"
    assert main(["project", "--model", "jordan2", "--out", str(out)]) == 0
    assert len(json.loads(out.read_text())["projectors"]) == 2


def test_project_through_eigenvalue(files, capsys):
    code = main(["project", "--matrix", str(files / "diag.json"), "--center", "0+1.5i",
                 "--radius", "0.5"])
    assert code == 2
    assert "ContourTooCloseToSpectrum" in capsys.readouterr().err


def test_project_missing_file(files):
    assert main(["project", "--matrix", str(files / "nope.json"), "--center", "0+2i",
                 "--radius", "0.5"]) == 1


def test_usage_errors(files):
    assert main(["bogus"]) == 1
    assert main(["project", "--matrix", str(files / "diag.json"), "--center", "0+2i"]) == 1
    assert main(["project", "--matrix", str(files / "diag.json"), "--center", "x",
                 "--radius", "1"]) == 1
    assert main(["gaps", "--spectrum", "oscillator", "--dim", "1", "--count", "0"]) == 1


def test_decompose_full(files, capsys):
    out = files / "d.csv"
    assert main(["decompose", "--model", "oscillator", "--out", str(out)]) == 0
    rows = read_csv(out.read_text())
    assert float(rows[-1]["error"]) <= 1e-8
    assert "error(Nmax)=" in capsys.readouterr().out


def test_decompose_no_terms(files):
    out = files / "d0.csv"
    assert main(["decompose", "--model", "oscillator", "--nmax", "0", "--out", str(out)]) == 0
    rows = read_csv(out.read_text())
    assert len(rows) == 1 and rows[0]["ratio"] == ""
    from rieszlab.models import bundled_models, decomposition_experiment
    x_norm = decomposition_experiment(bundled_models()["oscillator"], 1, 0, n_max=0,
                                      seed=42).x_norm
    assert float(rows[0]["error"]) == pytest.approx(x_norm, rel=1e-15)


def test_decompose_not_nilpotent(capsys):
    assert main(["decompose", "--model", "mixed_jordan", "--n", "0"]) == 2
    assert "NotNilpotent" in capsys.readouterr().err


def test_gaps_oscillator(capsys):
    assert main(["gaps", "--spectrum", "oscillator", "--dim", "1", "--count", "100",
                 "--l", "2", "--n", "1"]) == 0
    captured = capsys.readouterr()
    rows = read_csv(captured.out)
    assert len(rows) == 100
    assert all(float(r["delta"]) == 1.0 for r in rows)
    assert list(rows[0]) == ["k", "lambda", "multiplicity", "delta", "term", "partial_sum"]
    assert "verdict=converging" in captured.err


def test_gaps_torus_and_custom(capsys):
    assert main(["gaps", "--spectrum", "torus", "--a", "6.283185307179586",
                 "--b", "6.283185307179586", "--lam-max", "5"]) == 0
    rows = read_csv(capsys.readouterr().out)
    assert [int(r["multiplicity"]) for r in rows] == [1, 4, 4, 4, 8]
    assert main(["gaps", "--spectrum", "custom", "--values", "1,2,10", "--n", "0"]) == 0
    rows = read_csv(capsys.readouterr().out)
    assert [float(r["delta"]) for r in rows] == [0.5, 0.5, 4.0]


def test_diophantine(capsys):
    assert main(["diophantine", "--alpha", "sqrt2", "--degree", "2", "--qmax", "100000"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert 0.34 <= report["c_est"] <= 0.36
    assert set(report) == {"alpha", "degree", "qmax", "c_est", "p", "q"}


def test_diophantine_rational(capsys):
    assert main(["diophantine", "--alpha", "1.5"]) == 2
    assert "RationalAlpha" in capsys.readouterr().err


def test_group_fit(files, capsys):
    assert main(["group", "--matrix", str(files / "j2.json"), "--n", "1", "--tmax", "50",
                 "--fit"]) == 0
    captured = capsys.readouterr()
    # S(t) = t I + t^2/2 J for the nilpotent 2x2 block: degree 2
    m = float(captured.err.split("m=")[1].split()[0])
    assert abs(m - 2.0) <= 0.2
    rows = read_csv(captured.out)
    assert len(rows) == 401
    assert float(rows[-1]["norm"]) == pytest.approx(np.linalg.norm([[50, 1250], [0, 50]], 2))


def test_group_full_columns(files, capsys):
    assert main(["group", "--matrix", str(files / "j2.json"), "--samples", "3", "--full"]) == 0
    rows = read_csv(capsys.readouterr().out)
    assert "re0_1" in rows[0] and "im1_1" in rows[0]
    assert float(rows[2]["re0_1"]) == pytest.approx(50.0)


def test_separate(files, capsys):
    out = files / "s.json"
    assert main(["separate", "--model", "nonnormal", "--m", "1", "--projector",
                 "--out", str(out)]) == 0
    obj = json.loads(out.read_text())
    assert obj["rank"] == 4
    p = matrix_from_json(obj["matrix"])
    assert np.abs(p @ p - p).max() <= 1e-5


def test_separate_zero_eigenvalue(files, capsys):
    save_matrix(files / "z.json", np.diag([0.0, 1j]))
    assert main(["separate", "--matrix", str(files / "z.json")]) == 2
    assert "SpectrumOnPath" in capsys.readouterr().err


def test_config_with_flag_precedence(files, capsys):
    cfg = files / "cfg.json"
    cfg.write_text(json.dumps({"spectrum": "oscillator", "dim": 1, "count": 10, "l": 2}))
    assert main(["gaps", "--config", str(cfg)]) == 0
    assert len(read_csv(capsys.readouterr().out)) == 10
    assert main(["gaps", "--config", str(cfg), "--count", "5"]) == 0
    assert len(read_csv(capsys.readouterr().out)) == 5


def test_config_errors(files):
    bad = files / "bad.json"
    bad.write_text(json.dumps({"nonsense": 1}))
    assert main(["gaps", "--config", str(bad)]) == 1
    assert main(["gaps", "--config", str(files / "missing.json")]) == 1


def test_csv_byte_identical(files):
    outs = []
    for i in range(2):
        path = files / f"run{i}.csv"
        assert main(["decompose", "--model", "mixed_jordan", "--n", "2", "--threads", "3",
                     "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0].startswith(b"# rieszlab ")
    assert b"seed=42" in outs[0]


def test_seed_changes_output(files):
    texts = []
    for seed in ("1", "2"):
        path = files / f"s{seed}.csv"
        main(["decompose", "--model", "diagonal", "--seed", seed, "--out", str(path)])
        texts.append(path.read_text())
    assert texts[0] != texts[1]


def test_verify_filter(capsys):
    assert main(["verify", "--filter", "groups"]) == 0
    out = capsys.readouterr().out
    assert "integrated_groups" in out and "projector_oracle" not in out


def test_verify_projector_filter(capsys):
    assert main(["verify", "--filter", "projectors"]) == 0
    lines = [ln for ln in capsys.readouterr().out.splitlines() if ln.startswith("[")]
    assert len(lines) == 6 and all("(projectors)" in ln for ln in lines)


def test_verify_forced_failure(capsys):
    assert main(["verify", "--filter", "groups", "--tolerance", "1e-16"]) == 3
    assert "[FAIL]" in capsys.readouterr().out


def test_verify_bad_filter():
    assert main(["verify", "--filter", "nothing-matches"]) == 1
