"""End-to-end tests of the rolltree command line."""

import json
from pathlib import Path
from typing import TYPE_CHECKING

import pytest

from src.rolltree.cli import build_parser, main, parse_depths, parse_methods
from src.rolltree.schemas.binarization import BinarizationSchema
from src.rolltree.services.serialization import load_model

if TYPE_CHECKING:
    from _pytest.capture import CaptureFixture
    from _pytest.logging import LogCaptureFixture


def test_fit_gini_reaches_full_accuracy(toy_csv: Path, capsys: "CaptureFixture[str]") -> None:
    """Gini lookahead separates the toy data at depth 3."""
    assert main(["fit", "--input", str(toy_csv), "--label", "y", "--method", "rst-g", "--depth", "3"]) == 0
    assert "training accuracy: 1.000" in capsys.readouterr().out


def test_fit_misclassification_warns(
    toy_csv: Path, capsys: "CaptureFixture[str]", caplog: "LogCaptureFixture"
) -> None:
    """Misclassification stops at the root with a warning."""
    assert main(["fit", "--input", str(toy_csv), "--method", "rst-m", "--depth", "3"]) == 0
    assert "training accuracy: 0.750" in capsys.readouterr().out
    assert "Premature termination at root" in caplog.text


def test_fit_then_predict(toy_csv: Path, tmp_path: Path) -> None:
    """A saved model labels raw records."""
    model = tmp_path / "model.json"
    predictions = tmp_path / "predictions.csv"
    assert main(["fit", "--input", str(toy_csv), "--depth", "3", "--output", str(model)]) == 0
    assert load_model(model).n_leaves >= 2

    code = main(["predict", "--model", str(model), "--input", str(toy_csv), "--output", str(predictions)])
    assert code == 0
    assert predictions.read_text(encoding="utf-8").split() == ["y", "A", "B", "B", "B"]


def test_predict_schema_mismatch(
    toy_csv: Path, tmp_path: Path, capsys: "CaptureFixture[str]"
) -> None:
    """Records lacking a model feature fail with exit status 1."""
    model = tmp_path / "model.json"
    assert main(["fit", "--input", str(toy_csv), "--depth", "2", "--output", str(model)]) == 0
    records = tmp_path / "records.csv"
    records.write_text("x1,x2,z\n1,0,1\n", encoding="utf-8")
    assert main(["predict", "--model", str(model), "--input", str(records)]) == 1
    assert "error:" in capsys.readouterr().err


def test_predict_rejects_unknown_columns(toy_csv: Path, tmp_path: Path) -> None:
    """Columns the model never saw are rejected."""
    model = tmp_path / "model.json"
    assert main(["fit", "--input", str(toy_csv), "--depth", "2", "--output", str(model)]) == 0
    records = tmp_path / "records.csv"
    records.write_text("x1,x2,x3,x4\n1,0,1,0\n", encoding="utf-8")
    assert main(["predict", "--model", str(model), "--input", str(records)]) == 1


def test_predict_rejects_short_rows(
    toy_csv: Path, tmp_path: Path, capsys: "CaptureFixture[str]"
) -> None:
    """A record missing a field is an error, not an unseen category."""
    model = tmp_path / "model.json"
    assert main(["fit", "--input", str(toy_csv), "--depth", "2", "--output", str(model)]) == 0
    records = tmp_path / "records.csv"
    records.write_text("x1,x2,x3\n1,0,1\n1,0\n", encoding="utf-8")
    assert main(["predict", "--model", str(model), "--input", str(records)]) == 1
    assert "error:" in capsys.readouterr().err


def test_threads_flag_scope(capsys: "CaptureFixture[str]") -> None:
    """Thread counts apply to cross-validation and are documented as such."""
    args = build_parser().parse_args(["cv", "--input", "data.csv", "--threads", "3"])
    assert args.threads == 3
    assert main(["cv", "--help"]) == 0
    help_text = " ".join(capsys.readouterr().out.split())
    assert "fit and bench always run on one thread" in help_text


def test_missing_input_file(tmp_path: Path) -> None:
    """A missing file is a handled error."""
    assert main(["fit", "--input", str(tmp_path / "absent.csv")]) == 1


def test_usage_errors_exit_2(toy_csv: Path) -> None:
    """Unknown flags, methods and depths are usage errors."""
    assert main(["fit", "--input", str(toy_csv), "--bogus"]) == 2
    assert main(["fit", "--input", str(toy_csv), "--method", "c4.5"]) == 2
    assert main(["cv", "--input", str(toy_csv), "--depth", "0"]) == 2
    assert main([]) == 2


def test_binarize_writes_data_and_schema(toy_csv: Path, tmp_path: Path) -> None:
    """The binarized table and its schema are written."""
    output = tmp_path / "binary.csv"
    schema_path = tmp_path / "schema.json"
    code = main(["binarize", "--input", str(toy_csv), "--output", str(output), "--schema", str(schema_path)])
    assert code == 0
    header = output.read_text(encoding="utf-8").splitlines()[0].split(",")
    schema = BinarizationSchema.model_validate_json(schema_path.read_text(encoding="utf-8"))
    assert header == schema.feature_names() + ["y"]
    assert len(output.read_text(encoding="utf-8").splitlines()) == 5


def test_cv_then_compare_from_report(
    toy_csv: Path, tmp_path: Path, capsys: "CaptureFixture[str]"
) -> None:
    """A saved CV report feeds the comparison."""
    report = tmp_path / "cv.json"
    args = ["cv", "--input", str(toy_csv), "--method", "rst-m,rst-g", "--depth", "2-3", "--folds", "2"]
    assert main(args + ["--output", str(report)]) == 0
    assert "Test accuracy (%)" in capsys.readouterr().out

    payload = json.loads(report.read_text(encoding="utf-8"))
    assert len(payload["records"]) == 2 * 2 * 2

    table = tmp_path / "wins.json"
    assert main(["compare", "--report", str(report), "--output", str(table)]) == 0
    entries = json.loads(table.read_text(encoding="utf-8"))["entries"]
    assert {(e["depth"], e["method"]) for e in entries} == {
        (d, m) for d in (2, 3) for m in ("rst-m", "rst-g")
    }
    for e in entries:
        assert e["wins"] + e["ties_for_best"] + e["losses"] == e["instances"]


def test_compare_runs_cv(toy_csv: Path, capsys: "CaptureFixture[str]") -> None:
    """Without a report, compare cross-validates first."""
    code = main(["compare", "--input", str(toy_csv), "--method", "cart-m,rst-m", "--depth", "2", "--folds", "2"])
    assert code == 0
    assert "ties_for_best" in capsys.readouterr().out


def test_compare_missing_report(tmp_path: Path) -> None:
    """A missing report file exits 1."""
    assert main(["compare", "--report", str(tmp_path / "none.json")]) == 1


def test_bench_small(tmp_path: Path) -> None:
    """A tiny timing sweep writes one entry per depth."""
    output = tmp_path / "bench.json"
    code = main(["bench", "--n", "200", "--p", "8", "--depth", "2,3", "--loss", "misclassification", "--output", str(output)])
    assert code == 0
    assert [r["depth"] for r in json.loads(output.read_text(encoding="utf-8"))] == [2, 3]


@pytest.mark.parametrize("value, expected", [("3", [3]), ("2-4", [2, 3, 4]), ("2,6", [2, 6])])
def test_parse_depths(value: str, expected: list) -> None:
    """Single depths, ranges and lists."""
    assert parse_depths(value) == expected


def test_parse_methods_normalizes_case() -> None:
    """Method names are case-insensitive."""
    assert parse_methods("RST-G, hybrid") == ["rst-g", "hybrid"]
