"""Fitted series models: prediction and versioned text serialization.

A model is a base predictor plus an ordered list of terms
``alpha * func(beta * g(x))`` sharing one input transform; term order is the
fitting order and is part of the model identity.  The on-disk format is JSON
with a version gate; floats use Python's shortest round-trip representation,
so parameters survive a serialize/deserialize cycle bit-for-bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .basis import BasisFamily, InputTransform

if TYPE_CHECKING:
    from .fitter import FitReport

__all__ = [
    "BaseModel",
    "Term",
    "ModelMetadata",
    "SeriesModel",
    "predict",
    "predict_many",
    "serialize",
    "deserialize",
    "serialize_report",
    "ParseError",
    "UnsupportedVersionError",
    "FORMAT_VERSION",
]

FORMAT_VERSION = 1


class ParseError(ValueError):
    """Malformed model text; carries a human-readable location."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{message} ({location})" if location else message)
        self.location = location


class UnsupportedVersionError(ValueError):
    """Model text declares a format version this code does not read."""


@dataclass(frozen=True)
class BaseModel:
    """Initial approximation evaluated before any series terms.

    kinds: ``zero`` (predicts 0), ``constant`` (one parameter), ``linear``
    (intercept, slope).
    """

    kind: str
    parameters: tuple[float, ...] = ()

    def __post_init__(self):
        expected = {"zero": 0, "constant": 1, "linear": 2}
        if self.kind not in expected:
            raise ValueError(f"unknown base model kind {self.kind!r}")
        if len(self.parameters) != expected[self.kind]:
            raise ValueError(f"{self.kind} base model takes {expected[self.kind]} parameter(s)")

    def predict(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if self.kind == "zero":
            return np.zeros_like(xs)
        if self.kind == "constant":
            return np.full_like(xs, self.parameters[0])
        return self.parameters[0] + self.parameters[1] * xs


@dataclass(frozen=True)
class Term:
    """One fitted series term: basis kind, frequency beta, amplitude alpha."""

    kind: str
    beta: float
    alpha: float


@dataclass(frozen=True)
class ModelMetadata:
    iterations: int = 0
    final_ss: float | None = None


@dataclass(frozen=True)
class SeriesModel:
    """Base model plus an ordered series of basis terms."""

    base: BaseModel
    transform: InputTransform = field(default_factory=InputTransform)
    terms: tuple[Term, ...] = ()
    metadata: ModelMetadata = field(default_factory=ModelMetadata)

    def predict(self, x: float) -> float:
        return float(self.predict_many(np.asarray([x], dtype=float))[0])

    def predict_many(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        out = self.base.predict(xs)
        if not self.terms:
            return out
        gx = self.transform.apply(xs)
        for term in self.terms:
            family = BasisFamily(term.kind, InputTransform())
            out = out + term.alpha * family.evaluate(term.beta, gx)
        return out


def predict(m: SeriesModel, x: float) -> float:
    """Model value at a single point."""
    return m.predict(x)


def predict_many(m: SeriesModel, xs) -> np.ndarray:
    """Element-wise predictions; output length equals input length."""
    return m.predict_many(xs)


def serialize(m: SeriesModel) -> str:
    """Stable JSON text for the model; identical models serialize identically."""
    doc = {
        "format": "seriesfit-model",
        "version": FORMAT_VERSION,
        "base": {"kind": m.base.kind, "parameters": list(m.base.parameters)},
        "transform": {
            "kind": m.transform.kind,
            "scale": m.transform.scale,
            "offset": m.transform.offset,
        },
        "terms": [{"kind": t.kind, "beta": t.beta, "alpha": t.alpha} for t in m.terms],
        "metadata": {"iterations": m.metadata.iterations, "final_ss": m.metadata.final_ss},
    }
    return json.dumps(doc, indent=2) + "\n"


def _want(obj, key, kinds, where):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"missing field {key!r}", where)
    value = obj[key]
    if not isinstance(value, kinds) or isinstance(value, bool):
        raise ParseError(f"field {key!r} has wrong type", where)
    return value


def _finite(value, key, where) -> float:
    out = float(value)
    if not math.isfinite(out):
        raise ParseError(f"field {key!r} must be finite", where)
    return out


def deserialize(text: str) -> SeriesModel:
    """Rebuild a model from text produced by :func:`serialize`.

    Raises :class:`ParseError` on malformed input (with a location) and
    :class:`UnsupportedVersionError` when the version field is not one this
    reader understands.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top-level JSON object expected", "document root")
    version = doc.get("version")
    if version is None:
        raise ParseError("missing field 'version'", "document root")
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(f"unsupported model format version {version!r}")

    raw_base = _want(doc, "base", dict, "base")
    kind = _want(raw_base, "kind", str, "base")
    params = _want(raw_base, "parameters", list, "base")
    try:
        base = BaseModel(kind, tuple(_finite(p, "parameters", "base") for p in params))
    except ValueError as exc:
        raise ParseError(str(exc), "base") from exc

    raw_tr = _want(doc, "transform", dict, "transform")
    try:
        transform = InputTransform(
            _want(raw_tr, "kind", str, "transform"),
            _finite(_want(raw_tr, "scale", (int, float), "transform"), "scale", "transform"),
            _finite(_want(raw_tr, "offset", (int, float), "transform"), "offset", "transform"),
        )
    except ValueError as exc:
        raise ParseError(str(exc), "transform") from exc

    raw_terms = _want(doc, "terms", list, "terms")
    terms = []
    for i, raw in enumerate(raw_terms):
        where = f"terms[{i}]"
        if not isinstance(raw, dict):
            raise ParseError("term must be an object", where)
        terms.append(
            Term(
                _want(raw, "kind", str, where),
                _finite(_want(raw, "beta", (int, float), where), "beta", where),
                _finite(_want(raw, "alpha", (int, float), where), "alpha", where),
            )
        )

    raw_meta = _want(doc, "metadata", dict, "metadata")
    final_ss = raw_meta.get("final_ss")
    metadata = ModelMetadata(
        iterations=int(_want(raw_meta, "iterations", int, "metadata")),
        final_ss=None if final_ss is None else _finite(final_ss, "final_ss", "metadata"),
    )
    return SeriesModel(base=base, transform=transform, terms=tuple(terms), metadata=metadata)


def serialize_report(report: "FitReport") -> str:
    """Stable JSON text for a fit report (trajectory plus stop reason)."""
    records = []
    for rec in report.records:
        row = {"index": rec.index, "beta": rec.beta, "alpha": rec.alpha, "train_ss": rec.train_ss}
        if rec.validation_ss is not None:
            row["validation_ss"] = rec.validation_ss
        records.append(row)
    doc = {"initial_ss": report.initial_ss}
    if report.initial_validation_ss is not None:
        doc["initial_validation_ss"] = report.initial_validation_ss
    doc["stop_reason"] = report.stop_reason
    doc["records"] = records
    return json.dumps(doc, indent=2) + "\n"
