"""JSON persistence for boosted learners and K-segment ensembles."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError

from ..dataset.records import DatasetError, build_quantile_index
from ..runtime.gbm import GBMConfig, GBMModel, TreeLeaf, TreeNode, TreeSplit, TrainingError
from ..runtime.ksegment import KSegmentModel
from ..runtime.segmentation import SegmentationScheme, SmoothingSpec

logger = logging.getLogger(__name__)

GBM_VERSION = "gbm/1"
KSEGMENT_VERSION = "ksegment/1"


class SerializationError(RuntimeError):
    """Raised when a stored model is unreadable, truncated or of a foreign version."""


def _node_to_document(node: TreeNode) -> dict[str, Any]:
    if isinstance(node, TreeLeaf):
        return {"leaf": node.value}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "left": _node_to_document(node.left),
        "right": _node_to_document(node.right),
    }


def _node_from_document(document: dict[str, Any]) -> TreeNode:
    if "leaf" in document:
        return TreeLeaf(value=float(document["leaf"]))
    return TreeSplit(
        feature=int(document["feature"]),
        threshold=float(document["threshold"]),
        left=_node_from_document(document["left"]),
        right=_node_from_document(document["right"]),
    )


def to_document(model: GBMModel) -> dict[str, Any]:
    return {
        "version": GBM_VERSION,
        "config": model.config.model_dump(mode="json"),
        "base_score": model.base_score,
        "feature_dim": model.feature_dim,
        "trees": [_node_to_document(tree) for tree in model.trees],
    }


def _check_version(document: Any, expected: str) -> None:
    if not isinstance(document, dict):
        raise SerializationError(f"Expected a JSON object for {expected}, got {type(document).__name__}")
    found = document.get("version")
    if found != expected:
        raise SerializationError(f"Unsupported model version {found!r}; expected {expected!r}")


def from_document(document: dict[str, Any]) -> GBMModel:
    _check_version(document, GBM_VERSION)
    try:
        return GBMModel(
            base_score=float(document["base_score"]),
            trees=tuple(_node_from_document(tree) for tree in document["trees"]),
            config=GBMConfig.model_validate(document["config"]),
            feature_dim=int(document["feature_dim"]),
        )
    except (KeyError, TypeError, ValueError, ValidationError) as exc:
        raise SerializationError(f"Malformed {GBM_VERSION} document: {exc}") from exc


def ksegment_to_document(model: KSegmentModel) -> dict[str, Any]:
    return {
        "version": KSEGMENT_VERSION,
        "scheme": model.scheme.model_dump(mode="json"),
        "spec": model.spec.model_dump(mode="json", by_alias=True),
        "prior_index": model.prior_index.sorted_values.tolist(),
        "feature_dim": model.feature_dim,
        "segment_counts": list(model.segment_counts),
        "submodels": [to_document(sub) for sub in model.submodels],
    }


def ksegment_from_document(document: dict[str, Any]) -> KSegmentModel:
    _check_version(document, KSEGMENT_VERSION)
    try:
        return KSegmentModel(
            scheme=SegmentationScheme.model_validate(document["scheme"]),
            spec=SmoothingSpec.model_validate(document["spec"]),
            submodels=tuple(from_document(sub) for sub in document["submodels"]),
            prior_index=build_quantile_index(np.asarray(document["prior_index"], dtype=float)),
            feature_dim=int(document["feature_dim"]),
            segment_counts=tuple(int(c) for c in document.get("segment_counts", ())),
        )
    except SerializationError:
        raise
    except (KeyError, TypeError, ValueError, ValidationError, DatasetError, TrainingError) as exc:
        raise SerializationError(f"Malformed {KSEGMENT_VERSION} document: {exc}") from exc


def save_model(model: KSegmentModel, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(ksegment_to_document(model), allow_nan=False) + "\n", encoding="utf-8")
    logger.debug("Saved K=%d model to %s", model.K, path)
    return path


def load_model(path: str | Path) -> KSegmentModel:
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise SerializationError(f"Model file {path} does not exist") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SerializationError(f"Model file {path} is truncated or not JSON: {exc}") from exc
    return ksegment_from_document(document)


class ModelStore:
    """Named ensembles kept as ``<root>/models/<name>.json``."""

    DIRECTORY = "models"

    def __init__(self, root: str | Path):
        self.root = Path(root) / self.DIRECTORY

    def path_for(self, name: str) -> Path:
        return self.root / f"{name}.json"

    def save(self, name: str, model: KSegmentModel) -> Path:
        return save_model(model, self.path_for(name))

    def load(self, name: str) -> KSegmentModel:
        return load_model(self.path_for(name))

    def names(self) -> list[str]:
        if not self.root.exists():
            return []
        return sorted(path.stem for path in self.root.glob("*.json"))
