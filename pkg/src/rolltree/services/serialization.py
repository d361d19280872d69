"""Model JSON documents: serialize, deserialize, save and load."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

from pydantic import ValidationError

from src.rolltree.config import MODEL_FORMAT_VERSION
from src.rolltree.exceptions import ModelFormatError
from src.rolltree.models.tree import DecisionTree, TreeNode, majority_label
from src.rolltree.schemas.tree import NodeEntry, NodeKind, TreeDocument

logger = logging.getLogger(__name__)


def serialize(tree: DecisionTree) -> Dict[str, Any]:
    """Convert a tree to its JSON document.

    Args:
        tree: The fitted tree.

    Returns:
        Dict[str, Any]: JSON-ready document.
    """
    entries = []
    for node in tree.nodes:
        if node.is_leaf:
            entry = NodeEntry(
                id=node.id,
                kind=NodeKind.LEAF,
                depth=node.depth,
                label=tree.class_names[node.label],
                counts=list(node.class_counts),
            )
        else:
            entry = NodeEntry(
                id=node.id,
                kind=NodeKind.INTERNAL,
                depth=node.depth,
                split_feature=tree.feature_names[node.split_feature],
                label=tree.class_names[node.label],
                counts=list(node.class_counts),
                children=[node.left, node.right],
            )
        entries.append(entry)

    document = TreeDocument(
        format_version=MODEL_FORMAT_VERSION,
        classes=list(tree.class_names),
        features=list(tree.feature_names),
        binarization=tree.schema,
        nodes=entries,
    )
    return document.model_dump(mode="json", by_alias=True, exclude_none=True)


def _check_structure(document: TreeDocument) -> None:
    ids = [entry.id for entry in document.nodes]
    if ids != list(range(len(ids))):
        raise ModelFormatError("Node ids must be 0..n-1 in order")

    parent_count = [0] * len(ids)
    for entry in document.nodes:
        for child in entry.children:
            if not 0 <= child < len(ids) or child == 0:
                raise ModelFormatError(f"Node {entry.id} has invalid child {child}")
            parent_count[child] += 1
            if document.nodes[child].depth != entry.depth + 1:
                raise ModelFormatError(f"Child {child} of node {entry.id} has wrong depth")
    if any(count != 1 for count in parent_count[1:]) or document.nodes[0].depth != 0:
        raise ModelFormatError("Nodes do not form a single tree rooted at node 0")


def deserialize(doc: Union[Dict[str, Any], str]) -> DecisionTree:
    """Rebuild a tree from its JSON document.

    Args:
        doc: Parsed document or JSON text.

    Returns:
        DecisionTree: The tree.

    Raises:
        ModelFormatError: If the document is malformed or references unknown
            features or classes.
    """
    try:
        if isinstance(doc, str):
            doc = json.loads(doc)
        document = TreeDocument.model_validate(doc)
    except (json.JSONDecodeError, ValidationError, TypeError) as e:
        raise ModelFormatError(f"Malformed model document: {e}") from e

    if document.format_version != MODEL_FORMAT_VERSION:
        raise ModelFormatError(
            f"Unsupported model format version {document.format_version}; "
            f"expected {MODEL_FORMAT_VERSION}"
        )
    _check_structure(document)

    feature_index = {name: j for j, name in enumerate(document.features)}
    class_index = {name: c for c, name in enumerate(document.classes)}
    if document.binarization is not None and document.binarization.feature_names() != document.features:
        raise ModelFormatError("Feature list does not match the stored binarization")

    nodes = []
    for entry in document.nodes:
        if len(entry.counts) != len(document.classes):
            raise ModelFormatError(f"Node {entry.id} has {len(entry.counts)} class counts")
        if entry.label is not None and entry.label not in class_index:
            raise ModelFormatError(f"Node {entry.id} has unknown class '{entry.label}'")
        label = class_index[entry.label] if entry.label is not None else majority_label(entry.counts)
        if sum(entry.counts) > 0 and label != majority_label(entry.counts):
            raise ModelFormatError(f"Node {entry.id} label disagrees with its class counts")

        if entry.kind == NodeKind.INTERNAL:
            if entry.split_feature not in feature_index:
                raise ModelFormatError(
                    f"Node {entry.id} splits on unknown feature '{entry.split_feature}'"
                )
            nodes.append(
                TreeNode(
                    id=entry.id,
                    depth=entry.depth,
                    class_counts=tuple(entry.counts),
                    label=label,
                    split_feature=feature_index[entry.split_feature],
                    left=entry.children[0],
                    right=entry.children[1],
                )
            )
        else:
            nodes.append(
                TreeNode(id=entry.id, depth=entry.depth, class_counts=tuple(entry.counts), label=label)
            )

    return DecisionTree(
        nodes=tuple(nodes),
        class_names=tuple(document.classes),
        feature_names=tuple(document.features),
        schema=document.binarization,
    )


def save_model(tree: DecisionTree, path: Union[str, Path]) -> None:
    """Write a tree as UTF-8 JSON."""
    path = Path(path)
    path.write_text(json.dumps(serialize(tree), indent=2), encoding="utf-8")
    logger.info(f"Saved model with {len(tree.nodes)} nodes to {path}")


def load_model(path: Union[str, Path]) -> DecisionTree:
    """Read a tree written by ``save_model``.

    Raises:
        FileNotFoundError: If the file does not exist.
        ModelFormatError: If the file is not a valid model document.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Model file not found: {path}")
    return deserialize(path.read_text(encoding="utf-8"))
