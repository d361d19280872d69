"""Tests for model JSON documents."""

import json
from pathlib import Path

import numpy as np
import pytest

from src.rolltree.exceptions import ModelFormatError
from src.rolltree.models.dataset import BinaryDataset
from src.rolltree.services.rst import method_config, rst_fit
from src.rolltree.services.serialization import deserialize, load_model, save_model, serialize


def test_document_layout(toy_onehot: BinaryDataset) -> None:
    """Features are referenced by name and children by id."""
    tree = rst_fit(toy_onehot, method_config("rst-g", 2))
    doc = serialize(tree)
    assert doc["format_version"] == 1
    assert doc["classes"] == ["A", "B"]
    assert doc["features"] == list(toy_onehot.feature_names)
    assert doc["schema"]["label_column"] == "y"
    assert 1 < len(doc["nodes"]) <= 7
    root = doc["nodes"][0]
    assert root["kind"] == "internal"
    assert root["split_feature"] in doc["features"]
    assert len(root["children"]) == 2
    assert all("label" in n for n in doc["nodes"] if n["kind"] == "leaf")


def test_round_trip_predicts_identically(toy_onehot: BinaryDataset) -> None:
    """Deserialized trees route every row the same way."""
    tree = rst_fit(toy_onehot, method_config("rst-g", 3))
    restored = deserialize(json.dumps(serialize(tree)))
    assert restored.nodes == tree.nodes
    assert np.array_equal(restored.predict_many(toy_onehot.X), tree.predict_many(toy_onehot.X))
    assert restored.schema == tree.schema


def test_round_trip_random_vectors() -> None:
    """Predictions survive the round trip on arbitrary inputs."""
    rng = np.random.default_rng(0)
    X = rng.integers(0, 2, size=(80, 7))
    ds = BinaryDataset.from_arrays(X, rng.integers(0, 3, size=80))
    tree = rst_fit(ds, method_config("rst-g", 4))
    restored = deserialize(serialize(tree))
    records = rng.integers(0, 2, size=(200, 7))
    assert np.array_equal(restored.predict_many(records), tree.predict_many(records))


def test_save_and_load(tmp_path: Path, toy_onehot: BinaryDataset) -> None:
    """Models persist as UTF-8 JSON files."""
    tree = rst_fit(toy_onehot, method_config("rst-g", 3))
    path = tmp_path / "model.json"
    save_model(tree, path)
    assert load_model(path).nodes == tree.nodes


def test_load_missing_file(tmp_path: Path) -> None:
    """Missing model files raise FileNotFoundError."""
    with pytest.raises(FileNotFoundError):
        load_model(tmp_path / "absent.json")


@pytest.mark.parametrize("text", ["", "{not json", "[]", '{"format_version": 1}'])
def test_corrupt_documents(text: str) -> None:
    """Unparseable or incomplete documents are rejected."""
    with pytest.raises(ModelFormatError):
        deserialize(text)


def test_unknown_feature_rejected(toy_onehot: BinaryDataset) -> None:
    """Split features must be listed in the document."""
    doc = serialize(rst_fit(toy_onehot, method_config("rst-g", 2)))
    doc["nodes"][0]["split_feature"] = "x9=1"
    with pytest.raises(ModelFormatError):
        deserialize(doc)


def test_wrong_version_rejected(toy_onehot: BinaryDataset) -> None:
    """Only the current format version loads."""
    doc = serialize(rst_fit(toy_onehot, method_config("rst-g", 2)))
    doc["format_version"] = 99
    with pytest.raises(ModelFormatError):
        deserialize(doc)


def test_broken_structure_rejected(toy_onehot: BinaryDataset) -> None:
    """Children must point at existing nodes exactly once."""
    doc = serialize(rst_fit(toy_onehot, method_config("rst-g", 2)))
    doc["nodes"][0]["children"] = [1, 1]
    with pytest.raises(ModelFormatError):
        deserialize(doc)


def test_label_must_match_counts(toy_onehot: BinaryDataset) -> None:
    """A stored label that is not the majority is rejected."""
    doc = serialize(rst_fit(toy_onehot, method_config("rst-m", 3)))
    doc["nodes"][0]["label"] = "A"
    with pytest.raises(ModelFormatError):
        deserialize(doc)
