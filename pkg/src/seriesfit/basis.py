"""Parameterized basis-function families evaluated over transformed inputs.

A family maps a scalar frequency parameter ``beta`` and inputs ``x`` to
``func(beta * g(x))`` where ``g`` is an input transform controlling how
sensitive the basis is to variations in x.  Sine and cosine ship built in;
further kinds can be registered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset, validate_dataset

__all__ = [
    "InputTransform",
    "IDENTITY_TRANSFORM",
    "affine_transform",
    "span2pi_transform",
    "BasisFamily",
    "FrequencyBand",
    "register_basis_kind",
    "evaluate_basis",
    "basis_energy",
]

_KIND_FUNCS = {"sine": np.sin, "cosine": np.cos}


def register_basis_kind(name: str, func) -> None:
    """Register a new basis kind; ``func`` must be a vectorized map of beta*g(x)."""
    if name in _KIND_FUNCS:
        raise ValueError(f"basis kind {name!r} already registered")
    _KIND_FUNCS[name] = func


def kind_function(name: str):
    """Vectorized evaluator registered under ``name``."""
    return _KIND_FUNCS[name]


@dataclass(frozen=True)
class InputTransform:
    """Input map g applied before the frequency parameter.

    ``identity`` fixes scale=1, offset=0; ``affine`` computes
    g(x) = scale * x + offset with a nonzero scale.
    """

    kind: str = "identity"
    scale: float = 1.0
    offset: float = 0.0

    def __post_init__(self):
        if self.kind == "identity":
            if self.scale != 1.0 or self.offset != 0.0:
                raise ValueError("identity transform requires scale=1, offset=0")
        elif self.kind == "affine":
            if self.scale == 0.0 or not math.isfinite(self.scale) or not math.isfinite(self.offset):
                raise ValueError("affine transform requires finite parameters and scale != 0")
        else:
            raise ValueError(f"unknown transform kind {self.kind!r}")

    def apply(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if self.kind == "identity":
            return xs
        return self.scale * xs + self.offset


IDENTITY_TRANSFORM = InputTransform()


def affine_transform(scale: float, offset: float) -> InputTransform:
    return InputTransform("affine", scale, offset)


def span2pi_transform(d: Dataset) -> InputTransform:
    """Affine transform mapping the dataset's x range onto [0, 2*pi]."""
    validate_dataset(d)
    lo, hi = float(np.min(d.x)), float(np.max(d.x))
    if hi <= lo:
        raise ValueError("span2pi transform needs at least two distinct x values")
    scale = 2.0 * math.pi / (hi - lo)
    return InputTransform("affine", scale, -lo * scale)


@dataclass(frozen=True)
class BasisFamily:
    """One-parameter function family func(beta * g(x))."""

    kind: str = "sine"
    transform: InputTransform = field(default_factory=InputTransform)

    def __post_init__(self):
        if self.kind not in _KIND_FUNCS:
            raise ValueError(f"unknown basis kind {self.kind!r}; register it first")

    def evaluate(self, beta: float, xs) -> np.ndarray:
        return _KIND_FUNCS[self.kind](beta * self.transform.apply(xs))


@dataclass(frozen=True)
class FrequencyBand:
    """Closed search interval for beta plus a uniform grid density."""

    beta_min: float
    beta_max: float
    grid_points: int

    def __post_init__(self):
        if not (math.isfinite(self.beta_min) and math.isfinite(self.beta_max)):
            raise ValueError("band endpoints must be finite")
        if not self.beta_min < self.beta_max:
            raise ValueError("beta_min must be strictly below beta_max")
        if self.grid_points < 2:
            raise ValueError("grid_points must be at least 2")

    def grid(self) -> np.ndarray:
        return np.linspace(self.beta_min, self.beta_max, self.grid_points)


def evaluate_basis(family: BasisFamily, beta: float, xs) -> np.ndarray:
    """Element-wise family values func(beta * g(x)); length preserved."""
    return family.evaluate(beta, xs)


def basis_energy(family: BasisFamily, beta: float, d: Dataset) -> float:
    """Weighted squared norm sum of w_i * f(beta, x_i)^2 over the dataset.

    Zero exactly when the candidate vanishes at every sample point, which
    marks it as degenerate for coefficient fitting.
    """
    validate_dataset(d)
    f = family.evaluate(beta, d.x)
    return float(np.dot(d.w, f * f))
