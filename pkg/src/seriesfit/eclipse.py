"""Bundled solar-eclipse century counts and the demo fit built on them.

The data file lists the number of solar eclipses per century as a signed
century index (k-th century BC encoded as -k).  The demo fits a constant
base plus six sine terms over the 19th-century-BC-to-20th-century-AD
window; the sinusoid argument is the century index shifted by +20 (an
affine input transform), which maps the training window onto 1..40 so the
series is not constrained to be odd around the calendar origin.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

import numpy as np

from .basis import BasisFamily, FrequencyBand, affine_transform
from .dataset import Dataset
from .fitter import FitConfig

__all__ = [
    "CenturyCount",
    "load_eclipse_data",
    "training_dataset",
    "holdout_dataset",
    "counts_at",
    "TRAIN_WINDOW",
    "SIX_CENTURY_GROUP_A",
    "SIX_CENTURY_GROUP_B",
    "demo_config",
]

DATA_RESOURCE = "eclipse_centuries.csv"

# Demo training window (inclusive); later centuries stay out as a holdout.
TRAIN_WINDOW = (-19, 20)

# Centuries six apart whose counts nearly repeat.
SIX_CENTURY_GROUP_A = (-18, -12, -6, 0, 6, 12, 18)
SIX_CENTURY_GROUP_B = (-15, -9, -3, 3, 9, 15, 21)

ECLIPSE_BAND = FrequencyBand(0.05, 3.2, 4096)
ECLIPSE_SHIFT = 20.0


@dataclass(frozen=True)
class CenturyCount:
    century: int
    count: int


def load_eclipse_data() -> tuple[CenturyCount, ...]:
    """Parse the bundled per-century table (comments and header skipped)."""
    path = resources.files(__package__).joinpath("data", DATA_RESOURCE)
    rows: list[CenturyCount] = []
    with path.open("r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("century"):
                continue
            century_text, count_text = line.split(",")
            rows.append(CenturyCount(int(century_text), int(count_text)))
    return tuple(rows)


def counts_at(data: tuple[CenturyCount, ...], centuries) -> tuple[int, ...]:
    """Counts looked up at the given century indices, in the given order."""
    by_century = {row.century: row.count for row in data}
    return tuple(by_century[c] for c in centuries)


def training_dataset(data: tuple[CenturyCount, ...]) -> Dataset:
    """Unit-weight dataset over the demo training window."""
    lo, hi = TRAIN_WINDOW
    window = [row for row in data if lo <= row.century <= hi]
    return Dataset([row.century for row in window], [row.count for row in window])


def holdout_dataset(data: tuple[CenturyCount, ...]) -> Dataset:
    """Centuries after the training window, kept aside for evaluation."""
    tail = [row for row in data if row.century > TRAIN_WINDOW[1]]
    return Dataset([row.century for row in tail], [row.count for row in tail])


def demo_config(max_iterations: int = 6) -> FitConfig:
    """Fit configuration for the eclipse demo: sine family, shifted index."""
    family = BasisFamily("sine", affine_transform(1.0, ECLIPSE_SHIFT))
    return FitConfig(
        band=ECLIPSE_BAND,
        refine_steps=60,
        max_iterations=max_iterations,
        family=family,
        base_kind="constant",
    )


def group_summary(data: tuple[CenturyCount, ...]) -> list[tuple[str, tuple[int, ...], tuple[int, ...], int]]:
    """(label, centuries, counts, range) rows for the six-century groups."""
    out = []
    for label, group in (("A", SIX_CENTURY_GROUP_A), ("B", SIX_CENTURY_GROUP_B)):
        counts = counts_at(data, group)
        out.append((label, group, counts, max(counts) - min(counts)))
    return out


def count_bounds(data: tuple[CenturyCount, ...]) -> tuple[int, int]:
    counts = np.array([row.count for row in data])
    return int(counts.min()), int(counts.max())
