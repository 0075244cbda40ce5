"""Estimator registry.

Maps the qualified model-definition name used in TO TRAIN to estimator
metadata. The registry is open: additional estimators can be registered
at run time; the reference entries are an exact least-squares regressor
and a majority-class classifier.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CompileError
from .extension import ModelRef

LINREG = "linreg"
MAJORITY = "majority"


@dataclass(frozen=True)
class EstimatorInfo:
    key: str        # qualified name, e.g. "linreg.Regressor"
    kind: str       # implementation selector
    supervised: bool
    explainable: bool


_REGISTRY: dict[str, EstimatorInfo] = {}


def register_estimator(info: EstimatorInfo):
    _REGISTRY[info.key] = info


def get_estimator(ref: ModelRef) -> EstimatorInfo:
    key = ref.qualified_name()
    info = _REGISTRY.get(key)
    if info is None:
        raise CompileError(f"unknown estimator {key!r}")
    return info


register_estimator(EstimatorInfo("linreg.Regressor", LINREG,
                                 supervised=True, explainable=True))
register_estimator(EstimatorInfo("majority.Classifier", MAJORITY,
                                 supervised=True, explainable=False))
