"""Weighted (x, y, w) observation sets and residual bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Observation",
    "Dataset",
    "DatasetError",
    "EmptyDatasetError",
    "NonPositiveWeightError",
    "NonFiniteValueError",
    "LengthMismatchError",
    "validate_dataset",
    "weighted_ss",
    "residuals",
    "collapse_duplicates",
]


class DatasetError(ValueError):
    """Dataset contents violate an invariant."""


class EmptyDatasetError(DatasetError):
    pass


class NonPositiveWeightError(DatasetError):
    pass


class NonFiniteValueError(DatasetError):
    pass


class LengthMismatchError(ValueError):
    """Prediction vector length does not match the dataset."""


@dataclass(frozen=True)
class Observation:
    """One (x, y, w) sample; weight defaults to 1."""

    x: float
    y: float
    w: float = 1.0


class Dataset:
    """Ordered observations stored as read-only float arrays.

    Observations keep their input order; no sorting is performed. A missing
    weight vector means unit weights. Instances are immutable after
    construction (the backing arrays are marked non-writeable), so they are
    safe to share between threads.
    """

    __slots__ = ("x", "y", "w")

    def __init__(self, x, y, w=None):
        x = np.array(x, dtype=float, ndmin=1)
        y = np.array(y, dtype=float, ndmin=1)
        w = np.ones(x.shape) if w is None else np.array(w, dtype=float, ndmin=1)
        if x.ndim != 1 or y.ndim != 1 or w.ndim != 1:
            raise LengthMismatchError("x, y, w must be one-dimensional")
        if not (x.shape == y.shape == w.shape):
            raise LengthMismatchError(
                f"length mismatch: x has {x.shape[0]}, y has {y.shape[0]}, w has {w.shape[0]}"
            )
        for arr in (x, y, w):
            arr.flags.writeable = False
        self.x = x
        self.y = y
        self.w = w

    @classmethod
    def from_observations(cls, observations: Iterable[Observation]) -> "Dataset":
        obs = list(observations)
        return cls([o.x for o in obs], [o.y for o in obs], [o.w for o in obs])

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def observations(self) -> tuple[Observation, ...]:
        return tuple(Observation(float(a), float(b), float(c)) for a, b, c in zip(self.x, self.y, self.w))

    def subset(self, indices) -> "Dataset":
        idx = np.asarray(indices, dtype=int)
        return Dataset(self.x[idx], self.y[idx], self.w[idx])

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.n == other.n
            and bool(np.array_equal(self.x, other.x))
            and bool(np.array_equal(self.y, other.y))
            and bool(np.array_equal(self.w, other.w))
        )

    def __repr__(self) -> str:
        return f"Dataset(n={self.n})"


def validate_dataset(d: Dataset) -> Dataset:
    """Return ``d`` unchanged if every invariant holds.

    Raises
    ------
    EmptyDatasetError
        No observations.
    NonFiniteValueError
        Any x, y or w is NaN or infinite.
    NonPositiveWeightError
        Any weight is zero or negative.
    """
    if d.n < 1:
        raise EmptyDatasetError("dataset must contain at least one observation")
    if not (np.all(np.isfinite(d.x)) and np.all(np.isfinite(d.y)) and np.all(np.isfinite(d.w))):
        raise NonFiniteValueError("x, y and w must all be finite")
    if np.any(d.w <= 0.0):
        raise NonPositiveWeightError("all weights must be strictly positive")
    return d


def _check_length(d: Dataset, predictions) -> np.ndarray:
    pred = np.asarray(predictions, dtype=float)
    if pred.ndim != 1 or pred.shape[0] != d.n:
        raise LengthMismatchError(f"expected {d.n} predictions, got shape {pred.shape}")
    return pred


def weighted_ss(d: Dataset, predictions) -> float:
    """Weighted sum of squared residuals, sum of w_i * (y_i - pred_i)^2.

    Zero exactly when the predictions match y pointwise; invariant under a
    joint permutation of observations and predictions.
    """
    pred = _check_length(d, predictions)
    diff = d.y - pred
    return float(np.sum(d.w * diff * diff))


def residuals(d: Dataset, predictions) -> np.ndarray:
    """Residual vector y - predictions, length n."""
    pred = _check_length(d, predictions)
    return d.y - pred


def collapse_duplicates(d: Dataset, tol: float = 0.0) -> Dataset:
    """Merge observations that share the same x into single observations.

    Each group of repeated x values is replaced by one observation at the
    group's first-seen x, with y equal to the weighted mean of the group's
    y values and w equal to the summed weight.  That choice minimizes the
    group's contribution to the weighted sum of squares.  Observations with
    unique x pass through unchanged, and first-occurrence order is kept.

    Parameters
    ----------
    d : Dataset
        Valid dataset (validated here).
    tol : float
        Group x values within ``tol`` of a group representative; 0 means
        exact equality.
    """
    validate_dataset(d)
    if tol < 0.0:
        raise ValueError("tol must be non-negative")

    groups: list[list[int]] = []
    if tol == 0.0:
        slot: dict[float, int] = {}
        for i, xv in enumerate(d.x):
            key = float(xv)
            j = slot.get(key)
            if j is None:
                slot[key] = len(groups)
                groups.append([i])
            else:
                groups[j].append(i)
    else:
        reps: list[float] = []
        for i, xv in enumerate(d.x):
            for j, rep in enumerate(reps):
                if abs(xv - rep) <= tol:
                    groups[j].append(i)
                    break
            else:
                reps.append(float(xv))
                groups.append([i])

    if all(len(g) == 1 for g in groups):
        return d

    xs = np.empty(len(groups))
    ys = np.empty(len(groups))
    ws = np.empty(len(groups))
    for j, g in enumerate(groups):
        idx = np.asarray(g, dtype=int)
        wsum = float(np.sum(d.w[idx]))
        xs[j] = d.x[g[0]]
        ys[j] = float(np.dot(d.w[idx], d.y[idx])) / wsum
        ws[j] = wsum
    return Dataset(xs, ys, ws)
