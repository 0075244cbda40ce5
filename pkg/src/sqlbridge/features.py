"""Automatic feature derivation and the run-time encoding rule.

The rule is deliberately simple and deterministic: numeric columns pass
through (their training mean is stored for explanation), string columns
become one-hot vectors over the sorted distinct training values. A value
unseen at prediction time encodes to an all-zeros block.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import CompileError, ExecutionError
from .extension import TrainClause

INT = "INT"
FLOAT = "FLOAT"
STRING = "STRING"


@dataclass(frozen=True)
class FieldDesc:
    name: str
    dtype: str  # INT | FLOAT | STRING


@dataclass(frozen=True)
class NumericFeature:
    name: str
    mean: float


@dataclass(frozen=True)
class CategoricalFeature:
    name: str
    vocabulary: tuple[str, ...]  # sorted, distinct, nonempty


FeatureSpec = Union[NumericFeature, CategoricalFeature]
FeatureSet = list  # ordered list of FeatureSpec


def derive_features(schema: Sequence[FieldDesc], train: TrainClause,
                    rows: Sequence[tuple]) -> FeatureSet:
    """Derive the feature set for a TRAIN clause from schema plus data.

    Candidates are the COLUMN list when present, otherwise every schema
    column except the label. Pure function of (schema, clause, rows).
    """
    by_name = {f.name: i for i, f in enumerate(schema)}
    if train.columns is not None:
        if train.label is not None and train.label in train.columns:
            raise CompileError(f"label column {train.label!r} may not appear in COLUMN")
        candidates = list(train.columns)
    else:
        candidates = [f.name for f in schema if f.name != train.label]
    if not candidates:
        raise CompileError("no candidate feature columns")
    features: FeatureSet = []
    for name in candidates:
        if name not in by_name:
            raise CompileError(f"COLUMN {name!r} not found in input schema")
        idx = by_name[name]
        fld = schema[idx]
        if fld.dtype in (INT, FLOAT):
            if not rows:
                raise CompileError("empty training sample")
            mean = float(np.mean([float(r[idx]) for r in rows]))
            features.append(NumericFeature(name, mean))
        else:
            if not rows:
                raise CompileError("empty training sample for string column "
                                   f"{name!r}")
            vocab = tuple(sorted({str(r[idx]) for r in rows}))
            features.append(CategoricalFeature(name, vocab))
    return features


def encoded_dim(features: FeatureSet) -> int:
    return sum(1 if isinstance(f, NumericFeature) else len(f.vocabulary)
               for f in features)


def encoded_blocks(features: FeatureSet) -> list[tuple[str, int, int]]:
    """(feature name, start, stop) column ranges in the encoded matrix."""
    blocks = []
    offset = 0
    for f in features:
        width = 1 if isinstance(f, NumericFeature) else len(f.vocabulary)
        blocks.append((f.name, offset, offset + width))
        offset += width
    return blocks


def feature_source_columns(features: FeatureSet) -> list[str]:
    return [f.name for f in features]


def encode_rows(features: FeatureSet, schema: Sequence[FieldDesc],
                rows: Sequence[tuple]) -> np.ndarray:
    """Encode rows to a float matrix of shape (len(rows), encoded_dim)."""
    by_name = {f.name: i for i, f in enumerate(schema)}
    for f in features:
        if f.name not in by_name:
            raise ExecutionError(f"missing feature column {f.name!r}")
    out = np.zeros((len(rows), encoded_dim(features)))
    for r, row in enumerate(rows):
        c = 0
        for f in features:
            value = row[by_name[f.name]]
            if isinstance(f, NumericFeature):
                try:
                    out[r, c] = float(value)
                except (TypeError, ValueError):
                    raise ExecutionError(
                        f"non-numeric value {value!r} in numeric feature {f.name!r}")
                c += 1
            else:
                try:
                    out[r, c + f.vocabulary.index(str(value))] = 1.0
                except ValueError:
                    pass  # unknown category encodes to all zeros
                c += len(f.vocabulary)
    return out
