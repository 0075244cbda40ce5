"""Reference estimators, model persistence, and model explanation.

linreg.Regressor solves ordinary least squares via the normal equations
(optional ridge term from the "l2" attribute); majority.Classifier stores
the modal label. Explanation applies only to the linear model: the
contribution of feature j on row i is w_j * (x_ij - mean_j) with the
training means, which for a linear model under feature independence is
the exact Shapley decomposition.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from ..errors import ExecutionError
from ..extension import AttrMap, AttrValue, ModelRef
from ..features import (
    CategoricalFeature,
    FLOAT,
    FeatureSet,
    FieldDesc,
    NumericFeature,
    encode_rows,
    encoded_blocks,
)
from ..registry import LINREG, MAJORITY, get_estimator
from .tables import ResultSet


@dataclass
class ModelArtifact:
    estimator: ModelRef
    attributes: AttrMap
    features: FeatureSet
    label: Optional[FieldDesc]
    weights: dict


@dataclass
class ExplanationReport:
    """Per-feature mean absolute contribution, ordered by descending value."""

    ranked: list[tuple[str, float]]
    feature_names: list[str]
    contributions: np.ndarray  # shape (rows, features), report-order columns


def _l2_attribute(attributes: AttrMap) -> float:
    attr = attributes.get("l2")
    if attr is None:
        return 0.0
    if attr.kind not in ("int", "float"):
        raise ExecutionError("attribute l2 must be numeric")
    lam = float(attr.value)
    if lam < 0:
        raise ExecutionError("attribute l2 must be non-negative")
    return lam


def train(features: FeatureSet, label: Optional[FieldDesc], estimator: ModelRef,
          attributes: AttrMap, data: ResultSet) -> ModelArtifact:
    """Fit an estimator on the SELECT result and return the artifact."""
    if not data.rows:
        raise ExecutionError("training data is empty")
    info = get_estimator(estimator)
    if info.kind == LINREG:
        if label is None:
            raise ExecutionError("linreg.Regressor requires LABEL")
        if label.dtype not in ("INT", "FLOAT"):
            raise ExecutionError("linreg.Regressor requires a numeric label")
        label_idx = [f.name for f in data.schema].index(label.name)
        y = np.array([float(r[label_idx]) for r in data.rows])
        x = encode_rows(features, data.schema, data.rows)
        lam = _l2_attribute(attributes)
        design = np.hstack([x, np.ones((x.shape[0], 1))])
        normal = design.T @ design + lam * np.eye(design.shape[1])
        if lam == 0.0 and np.linalg.matrix_rank(normal) < normal.shape[0]:
            raise ExecutionError("singular system; set l2")
        beta = np.linalg.solve(normal, design.T @ y)
        weights = {
            "coefficients": beta[:-1].tolist(),
            "intercept": float(beta[-1]),
            "feature_means": x.mean(axis=0).tolist(),
        }
    elif info.kind == MAJORITY:
        if label is None:
            raise ExecutionError("majority.Classifier requires LABEL")
        label_idx = [f.name for f in data.schema].index(label.name)
        counts = Counter(str(r[label_idx]) for r in data.rows)
        top = max(counts.values())
        modal = min(k for k, v in counts.items() if v == top)  # ties: lexicographic
        weights = {"class": modal, "frequencies": dict(sorted(counts.items()))}
    else:
        raise ExecutionError(f"estimator kind {info.kind!r} has no trainer")
    return ModelArtifact(estimator, attributes, features, label, weights)


def predict(artifact: ModelArtifact, data: ResultSet,
            result_field: Sequence[str]) -> ResultSet:
    """Score rows with a trained model, appending/replacing the output column."""
    info = get_estimator(artifact.estimator)
    out_name = result_field[-1]
    if info.kind == LINREG:
        x = encode_rows(artifact.features, data.schema, data.rows)
        w = np.array(artifact.weights["coefficients"])
        preds = x @ w + artifact.weights["intercept"]
        out_dtype = FLOAT
        values = [float(p) for p in preds]
    elif info.kind == MAJORITY:
        for f in artifact.features:
            if f.name not in [fld.name for fld in data.schema]:
                raise ExecutionError(f"missing feature column {f.name!r}")
        out_dtype = artifact.label.dtype if artifact.label else "STRING"
        constant: object = artifact.weights["class"]
        if out_dtype == "INT":
            constant = int(constant)
        elif out_dtype == FLOAT:
            constant = float(constant)
        values = [constant] * len(data.rows)
    else:
        raise ExecutionError(f"estimator kind {info.kind!r} has no predictor")
    names = [fld.name for fld in data.schema]
    if out_name in names:
        idx = names.index(out_name)
        schema = list(data.schema)
        schema[idx] = FieldDesc(out_name, out_dtype)
        rows = [row[:idx] + (v,) + row[idx + 1:]
                for row, v in zip(data.rows, values)]
    else:
        schema = list(data.schema) + [FieldDesc(out_name, out_dtype)]
        rows = [row + (v,) for row, v in zip(data.rows, values)]
    return ResultSet(schema, rows)


def explain(artifact: ModelArtifact, data: ResultSet) -> ExplanationReport:
    """Per-feature mean absolute contribution of a linear model."""
    info = get_estimator(artifact.estimator)
    if not info.explainable or info.kind != LINREG:
        raise ExecutionError(
            f"explanation unsupported for estimator {artifact.estimator.qualified_name()!r}")
    x = encode_rows(artifact.features, data.schema, data.rows)
    w = np.array(artifact.weights["coefficients"])
    means = np.array(artifact.weights["feature_means"])
    per_column = (x - means) * w
    blocks = encoded_blocks(artifact.features)
    per_feature = np.column_stack(
        [per_column[:, start:stop].sum(axis=1) for _, start, stop in blocks]) \
        if blocks else np.zeros((len(data.rows), 0))
    values = np.abs(per_feature).mean(axis=0) if len(data.rows) else \
        np.zeros(len(blocks))
    if not np.all(np.isfinite(values)):
        raise ExecutionError("non-finite contribution values")
    order = sorted(range(len(blocks)), key=lambda i: (-values[i], blocks[i][0]))
    ranked = [(blocks[i][0], float(values[i])) for i in order]
    return ExplanationReport(
        ranked=ranked,
        feature_names=[blocks[i][0] for i in order],
        contributions=per_feature[:, order] if blocks else per_feature,
    )


def render_ascii_bars(report: ExplanationReport, width: int) -> str:
    """One line per feature: padded name, '|', proportional '#' bar, value."""
    if width < 10:
        raise ExecutionError("width must be at least 10")
    if not report.ranked:
        raise ExecutionError("cannot render an empty explanation report")
    name_field = max(len(name) for name, _ in report.ranked)
    bar_budget = width - name_field - 1
    max_value = max(value for _, value in report.ranked)
    lines = []
    for name, value in report.ranked:
        n = round(value / max_value * bar_budget) if max_value > 0 else 0
        lines.append(f"{name:>{name_field}}|{'#' * n} {value:.4f}")
    return "\n".join(lines) + "\n"


# -- persistence -------------------------------------------------------


def _attr_to_json(value: AttrValue) -> dict:
    if value.kind == "list":
        return {"kind": "list", "value": [_attr_to_json(v) for v in value.value]}
    return {"kind": value.kind, "value": value.value}


def _attr_from_json(data: dict) -> AttrValue:
    if data["kind"] == "list":
        return AttrValue("list", [_attr_from_json(v) for v in data["value"]])
    return AttrValue(data["kind"], data["value"])


class ModelStore:
    """Directory of model artifacts addressed by the INTO/USING name.

    Each model is a directory holding metadata.json and weights.json.
    """

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)

    def model_dir(self, name: str) -> Path:
        return self.root / name

    def exists(self, name: str) -> bool:
        return (self.model_dir(name) / "metadata.json").is_file()

    def save(self, name: str, artifact: ModelArtifact):
        directory = self.model_dir(name)
        directory.mkdir(parents=True, exist_ok=True)
        metadata = {
            "estimator": {
                "image": artifact.estimator.image,
                "package": artifact.estimator.package,
                "name": artifact.estimator.name,
            },
            "attributes": [{"key": k, **_attr_to_json(v)}
                           for k, v in artifact.attributes.items()],
            "features": [
                {"type": "numeric", "name": f.name, "mean": f.mean}
                if isinstance(f, NumericFeature) else
                {"type": "categorical", "name": f.name,
                 "vocabulary": list(f.vocabulary)}
                for f in artifact.features
            ],
            "label": ({"name": artifact.label.name, "dtype": artifact.label.dtype}
                      if artifact.label else None),
        }
        (directory / "metadata.json").write_text(
            json.dumps(metadata, indent=2) + "\n")
        (directory / "weights.json").write_text(
            json.dumps(artifact.weights, indent=2) + "\n")

    def load(self, name: str) -> ModelArtifact:
        directory = self.model_dir(name)
        if not self.exists(name):
            raise ExecutionError(f"model not found: {name}")
        metadata = json.loads((directory / "metadata.json").read_text())
        weights = json.loads((directory / "weights.json").read_text())
        est = metadata["estimator"]
        features: FeatureSet = []
        for f in metadata["features"]:
            if f["type"] == "numeric":
                features.append(NumericFeature(f["name"], f["mean"]))
            else:
                features.append(CategoricalFeature(f["name"], tuple(f["vocabulary"])))
        label = None
        if metadata["label"] is not None:
            label = FieldDesc(metadata["label"]["name"], metadata["label"]["dtype"])
        attributes = {a["key"]: _attr_from_json(a) for a in metadata["attributes"]}
        return ModelArtifact(
            estimator=ModelRef(name=est["name"], package=est["package"],
                               image=est["image"]),
            attributes=attributes,
            features=features,
            label=label,
            weights=weights,
        )
