import json
from io import StringIO

import pandas as pd
import pytest

from quartic_curvature.cli import EXIT_INPUT, EXIT_OK, REPORT_COLUMNS, get_parser, main
from quartic_curvature.data_models import DEFAULT_TOL
from quartic_curvature.tests import sample_ball, named_invariants


def _read_tsv(text: str) -> pd.DataFrame:
    return pd.read_csv(StringIO(text), sep="\t", dtype=str, keep_default_na=False)


def test_named_then_curvature(tmp_path, capsys):
    path = tmp_path / "q4.txt"
    assert main(["named", "Q4", "--emit-edges", str(path)]) == EXIT_OK
    assert path.read_text().startswith("n 16\n")

    assert main(["--jobs", "1", "curvature", "--input", str(path)]) == EXIT_OK
    frame = _read_tsv(capsys.readouterr().out)
    assert list(frame.columns) == REPORT_COLUMNS
    assert len(frame) == 16
    assert set(frame["k_infinity"]) == {"2.0"}
    assert set(frame["sharp"]) == {"True"}
    assert set(frame["ball_type"]) == {"4.5"}


def test_named_to_stdout(capsys):
    assert main(["named", "K5"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n 5"
    assert len(lines) == 11


def test_curvature_single_vertex_json(tmp_path, capsys):
    path = tmp_path / "k3xk3.txt"
    main(["named", "K3xK3", "--emit-edges", str(path)])
    assert main(["curvature", "--input", str(path), "--vertex", "3", "--format", "json"]) == EXIT_OK
    reports = json.loads(capsys.readouterr().out)
    assert len(reports) == 1
    assert reports[0]["vertex"] == 3
    assert reports[0]["k_infinity"] == named_invariants["K3xK3"][1]
    assert reports[0]["ball_type"] == "3.3"


def test_ball_command(tmp_path, capsys):
    path = tmp_path / "sample.json"
    path.write_text(json.dumps(sample_ball))
    assert main(["ball", "--json", str(path), "--format", "json"]) == EXIT_OK
    (report,) = json.loads(capsys.readouterr().out)
    assert report["upper_bound"] == 2.5
    assert report["sharp"] is False
    assert report["triangles_vertex"] == 2

    sharp = tmp_path / "k44.json"
    sharp.write_text(json.dumps({"s1": [0] * 6, "s1s2": [[1, 2, 3, 4]] * 3}))
    assert main(["ball", "--json", str(sharp)]) == EXIT_OK
    frame = _read_tsv(capsys.readouterr().out)
    assert frame["sharp"].tolist() == ["True"]
    assert frame["ball_type"].tolist() == ["4.10"]


def test_input_errors(tmp_path):
    bad_json = tmp_path / "bad.json"
    bad_json.write_text('{"s1": [0, 1, 0], "s1s2": [[1, 5]]}')
    assert main(["ball", "--json", str(bad_json)]) == EXIT_INPUT
    bad_json.write_text("{not json")
    assert main(["ball", "--json", str(bad_json)]) == EXIT_INPUT

    assert main(["curvature", "--input", str(tmp_path / "missing.txt")]) == EXIT_INPUT
    bad_edges = tmp_path / "bad.txt"
    bad_edges.write_text("n 3\n0 3\n")
    assert main(["curvature", "--input", str(bad_edges)]) == EXIT_INPUT
    bad_edges.write_text("n 3\n0 1\n1 2\n")
    assert main(["curvature", "--input", str(bad_edges), "--vertex", "7"]) == EXIT_INPUT

    assert main(["search", "--seed", "4.5", "--max-vertices", "10"]) == EXIT_INPUT
    assert main(["search", "--seed", "9.9"]) == EXIT_INPUT
    assert main(["no-such-command"]) == EXIT_INPUT
    assert main([]) == EXIT_INPUT


def test_version(capsys):
    assert main(["--version"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("quartic-curvature")


def test_search_command(tmp_path, capsys):
    out_dir = tmp_path / "graphs"
    assert main(["--jobs", "1", "search", "--seed", "2.1", "--out-dir", str(out_dir)]) == EXIT_OK
    outcome = json.loads(capsys.readouterr().out)
    assert outcome["seed"] == "2.1"
    assert [g["name"] for g in outcome["completed_graphs"]] == ["O"]
    assert outcome["pruned_by"]["truncated"] == 0
    assert (out_dir / "2.1_O.txt").read_text().startswith("n 6\n")


def test_verify_classification(capsys):
    assert main(["--jobs", "1", "verify-classification"]) == EXIT_OK
    frame = _read_tsv(capsys.readouterr().out)
    assert list(frame.columns) == [
        "name",
        "|V|",
        "K_infinity",
        "diameter",
        "sharp_everywhere",
        "ball_type",
        "bonnet_myers_slack",
    ]
    assert frame["name"].tolist() == list(named_invariants)
    assert set(frame["sharp_everywhere"]) == {"True"}


@pytest.mark.slow
def test_enumerate_sharp(tmp_path):
    out = tmp_path / "sharp.tsv"
    assert main(["enumerate", "--filter", "sharp", "--out", str(out)]) == EXIT_OK
    frame = _read_tsv(out.read_text())
    assert len(frame) == 22
    assert set(frame["sharp"]) == {"True"}
    assert sorted(frame["ball_type"]) == sorted(
        ["1.1", "2.1", "2.2", "2.3", "2.4", "2.5", "2.6", "2.7", "3.1", "3.2", "3.3"]
        + ["3.4", "4.1", "4.2", "4.3", "4.4", "4.5", "4.6", "4.7", "4.8", "4.9", "4.10"]
    )


def test_common_options_after_subcommand(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["search", "--seed", "1.1", "--jobs", "1"]) == EXIT_OK
    outcome = json.loads(capsys.readouterr().out)
    assert [g["name"] for g in outcome["completed_graphs"]] == ["K5"]
    # Without --out-dir the graphs land in the working directory
    assert (tmp_path / "1.1_K5.txt").read_text().startswith("n 5\n")

    path = tmp_path / "k5.txt"
    assert main(["named", "K5", "--emit-edges", str(path)]) == EXIT_OK
    argv = ["curvature", "--input", str(path), "--all", "--tol", "1e-9", "--eigen-method", "jacobi", "--progress"]
    assert main(argv) == EXIT_OK
    frame = _read_tsv(capsys.readouterr().out)
    assert len(frame) == 5
    assert set(frame["k_infinity"]) == {"3.5"}
    assert set(frame["sharp"]) == {"True"}


def test_common_options_placement():
    parser = get_parser()
    before = parser.parse_args(["--jobs", "3", "--tol", "1e-6", "--progress", "search", "--seed", "1.1"])
    assert (before.jobs, before.tol, before.progress) == (3, 1e-6, True)
    after = parser.parse_args(["search", "--seed", "1.1", "--jobs", "2", "--eigen-method", "jacobi"])
    assert (after.jobs, after.tol, after.eigen_method, after.progress) == (2, DEFAULT_TOL, "jacobi", False)
    assert parser.parse_args(["--jobs", "4", "ball", "--json", "b.json"]).jobs == 4
