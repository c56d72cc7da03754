import json

import pytest

from sketchlab.io.results import load_results_csv
from sketchlab.main import main

GRID = ["--seed", "1", "--n1", "20", "--n2", "20", "--r0", "2", "--trials", "2"]


def test_matrix_experiment_writes_csv(tmp_path):
    out = tmp_path / "matrix.csv"
    code = main(["matrix-exp", *GRID, "--r", "4", "6", "--eps1", "0.01", "--eps2", "0.01", "--out", str(out)])
    assert code == 0
    rows = load_results_csv(out)
    assert [row["r"] for row in rows] == [4, 6]
    assert all(row["trials"] == 2 and row["master_seed"] == 1 for row in rows)


def test_matrix_experiment_to_stdout(capsys):
    assert main(["matrix-exp", *GRID, "--r", "4", "--eps1", "0.0", "--eps2", "0.0", "--workers", "2"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("kind,n1,n2,n3")
    assert len(out.splitlines()) == 2


def test_svg_output(tmp_path):
    out = tmp_path / "matrix.svg"
    assert main(["matrix-exp", *GRID, "--r", "4", "--eps1", "0.01", "0.1", "--format", "svg", "--out", str(out)]) == 0
    assert "<svg" in out.read_text()


def test_approx_experiment_json(tmp_path):
    out = tmp_path / "approx.json"
    code = main(["matrix-exp", *GRID, "--approx", "--r", "12", "--eps1", "0.01", "--eps2", "0.01", "--format", "json", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["metadata"]["kind"] == "approx"
    assert payload["metadata"]["sigma_tail"] == pytest.approx(0.5)


def test_tensor_bound_check(tmp_path):
    out = tmp_path / "check.json"
    code = main(["tensor-exp", *GRID, "--r", "12", "--n3", "2", "--eps1", "0.01", "--eps2", "0.01", "--check-bound", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["kind"] == "tensor"
    assert payload["bound"]["valid"] is True
    assert payload["trials"] == 2


def test_invalid_spec_exits_with_2(capsys):
    assert main(["matrix-exp", *GRID, "--r", "0"]) == 2
    assert "invalid experiment spec" in capsys.readouterr().err


def test_unparseable_arguments_exit_through_argparse():
    with pytest.raises(SystemExit) as info:
        main(["matrix-exp"])
    assert info.value.code == 2


def test_generated_tensor_feeds_data_compare(tmp_path):
    tensor = tmp_path / "x.tns"
    report = tmp_path / "report.json"
    assert main(["gen-tensor", "--seed", "3", "--n1", "12", "--n2", "10", "--n3", "3", "--r0", "2", "--out", str(tensor)]) == 0
    assert tensor.read_bytes()[:5] == b"TNS1\x00"
    assert main(["data-compare", str(tensor), "--seed", "4", "--r", "5", "--eps1", "0", "--eps2", "0", "--out", str(report)]) == 0
    payload = json.loads(report.read_text())
    counts = {item["strategy"]: item["sketch_matrix_count"] for item in payload["outcomes"]}
    assert counts == {"tensor": 1, "slicewise-fresh": 3, "slicewise-shared": 1}


def test_gen_tensor_needs_an_output_path():
    assert main(["gen-tensor", "--seed", "3"]) == 2


def test_file_errors_exit_with_4(tmp_path):
    assert main(["data-compare", str(tmp_path / "missing.tns"), "--seed", "1", "--r", "2"]) == 4
    bad = tmp_path / "bad.tns"
    bad.write_bytes(b"TNS1")
    assert main(["data-compare", str(bad), "--seed", "1", "--r", "2"]) == 4
    assert main(["matrix-exp", *GRID, "--r", "4", "--out", str(tmp_path / "nowhere" / "x.csv")]) == 4


def test_bound_subcommand(tmp_path):
    out = tmp_path / "bound.json"
    args = ["bound", "--n1", "100", "--n2", "100", "--r-low", "10", "--delta1", "0.05", "--delta2", "0.05", "--epsilon", "0.05"]
    assert main([*args, "--r", "40", "--z-norm", "0.01", "--z-tilde-norm", "0.01", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["valid"] is True
    assert payload["value"] == pytest.approx(1.81, abs=0.01)
    assert payload["variant"] == "robust"

    assert main([*args, "--r", "20", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["valid"] is False
    assert payload["value"] is None
    assert "delta2_above_threshold" in payload["reason"]


def test_validate_lemmas(tmp_path):
    out = tmp_path / "lemmas.json"
    code = main(["validate-lemmas", "--seed", "2", "--lemma", "haar", "--n", "8", "--r", "2", "--samples", "50", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert {row["lemma"] for row in payload["checks"]} == {"truncated-haar"}
    assert len(payload["checks"]) == 2
