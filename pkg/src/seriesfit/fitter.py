"""Greedy stagewise fitting loop.

Each iteration searches one frequency parameter over a band, computes the
closed-form amplitude that minimizes the weighted sum of squared residuals
for that candidate, appends the term, and subtracts it from the residuals.
The drop in the sum of squares for a candidate with energy A = sum w*f^2 and
correlation B = sum w*r*f is exactly B^2/A, realized at amplitude B/A.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .basis import BasisFamily, FrequencyBand, evaluate_basis, kind_function
from .dataset import Dataset, LengthMismatchError, validate_dataset, weighted_ss
from .model import BaseModel, ModelMetadata, SeriesModel, Term

__all__ = [
    "BaseModel",
    "make_base_model",
    "FitConfig",
    "IterationRecord",
    "FitReport",
    "BetaSearchResult",
    "EarlyStopDecision",
    "DegenerateBasisError",
    "NoViableCandidateError",
    "TooFewPointsError",
    "MissingValidationSSError",
    "optimal_coefficient",
    "search_beta",
    "split_dataset",
    "early_stopping_check",
    "fit",
    "STOP_SS_TARGET",
    "STOP_MAX_ITERATIONS",
    "STOP_NO_CANDIDATE",
    "STOP_VALIDATION",
]

STOP_SS_TARGET = "ss_target_reached"
STOP_MAX_ITERATIONS = "max_iterations"
STOP_NO_CANDIDATE = "no_improving_candidate"
STOP_VALIDATION = "validation_worsened"

# A candidate is degenerate when its energy falls below this fraction of the
# total weight; double precision leaves ample headroom above rounding noise.
DEGENERACY_REL_TOL = 1e-12

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_F_CACHE_LIMIT = 16_000_000  # grid rows * points; above this, evaluate in chunks


class DegenerateBasisError(ValueError):
    """Candidate basis vanishes at every sample point."""


class NoViableCandidateError(RuntimeError):
    """No beta in the band yields a positive sum-of-squares decrease."""


class TooFewPointsError(ValueError):
    """Dataset too small for the requested split."""


class MissingValidationSSError(ValueError):
    """Iteration records carry no validation sum of squares."""


def make_base_model(d: Dataset, kind: str = "constant") -> BaseModel:
    """Fit the requested base model to the dataset.

    ``constant`` is the weighted mean of y, ``zero`` ignores the data, and
    ``linear`` is the weighted least-squares line (falling back to a flat
    line when all x coincide).
    """
    validate_dataset(d)
    if kind == "zero":
        return BaseModel("zero")
    if kind == "constant":
        mean = float(np.dot(d.w, d.y) / np.sum(d.w))
        return BaseModel("constant", (mean,))
    if kind == "linear":
        sw = float(np.sum(d.w))
        sx = float(np.dot(d.w, d.x))
        sy = float(np.dot(d.w, d.y))
        sxx = float(np.dot(d.w, d.x * d.x))
        sxy = float(np.dot(d.w, d.x * d.y))
        denom = sw * sxx - sx * sx
        if denom <= 0.0:  # all x identical: slope is unidentifiable
            return BaseModel("linear", (sy / sw, 0.0))
        slope = (sw * sxy - sx * sy) / denom
        return BaseModel("linear", ((sy - slope * sx) / sw, slope))
    raise ValueError(f"unknown base model kind {kind!r}")


@dataclass(frozen=True)
class FitConfig:
    """Knobs for one fitting run.

    ``base`` overrides the initial approximation; when None it is built from
    the training split with ``base_kind``.  ``ss_target``,
    ``min_relative_decrease``, ``max_iterations`` and the validation patience
    are combined with OR semantics: the first rule to fire stops the loop.
    """

    band: FrequencyBand
    refine_steps: int = 40
    max_iterations: int = 50
    ss_target: float = 0.0
    min_relative_decrease: float = 0.0
    validation_fraction: float = 0.0
    validation_patience: int = 5
    seed: int = 0
    family: BasisFamily = field(default_factory=BasisFamily)
    base: BaseModel | None = None
    base_kind: str = "constant"

    def __post_init__(self):
        if self.refine_steps < 0:
            raise ValueError("refine_steps must be non-negative")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.ss_target < 0.0:
            raise ValueError("ss_target must be non-negative")
        if self.min_relative_decrease < 0.0:
            raise ValueError("min_relative_decrease must be non-negative")
        if not 0.0 <= self.validation_fraction < 1.0:
            raise ValueError("validation_fraction must lie in [0, 1)")
        if self.validation_patience < 1:
            raise ValueError("validation_patience must be positive")


@dataclass(frozen=True)
class IterationRecord:
    index: int
    beta: float
    alpha: float
    train_ss: float
    validation_ss: float | None = None


@dataclass(frozen=True)
class FitReport:
    """Per-iteration trajectory plus the reason the loop stopped."""

    initial_ss: float
    records: tuple[IterationRecord, ...]
    stop_reason: str
    initial_validation_ss: float | None = None

    @property
    def final_ss(self) -> float:
        return self.records[-1].train_ss if self.records else self.initial_ss


class BetaSearchResult(NamedTuple):
    beta: float
    alpha: float
    ss_decrease: float


class EarlyStopDecision(NamedTuple):
    stop: bool
    best_count: int


def optimal_coefficient(residual_values, weights, basis_values) -> float:
    """Closed-form amplitude minimizing sum of w*(r - t*f)^2 over t.

    The objective is the quadratic E(t) = t^2 * sum(w f^2) - 2 t * sum(w r f)
    with positive curvature, so the unique minimizer is
    sum(w r f) / sum(w f^2); the resulting decrease in the weighted sum of
    squares equals that ratio squared times sum(w f^2).

    Raises
    ------
    DegenerateBasisError
        The candidate vanishes at all sample points (zero energy), telling
        the caller to skip this beta.
    """
    r = np.asarray(residual_values, dtype=float)
    w = np.asarray(weights, dtype=float)
    f = np.asarray(basis_values, dtype=float)
    if not (r.shape == w.shape == f.shape) or r.ndim != 1:
        raise LengthMismatchError("residuals, weights and basis values must have equal length")
    energy = float(np.dot(w, f * f))
    if energy < DEGENERACY_REL_TOL * float(np.sum(w)):
        raise DegenerateBasisError("basis candidate has (numerically) zero energy")
    return float(np.dot(w * r, f) / energy)


class _CandidateGrid:
    """Precomputed basis values over the frequency grid for one dataset.

    Grid candidates are pure, independent evaluations; results are reduced
    deterministically (ties pick the smallest beta), so repeated searches on
    identical inputs are bit-identical.
    """

    def __init__(self, d: Dataset, family: BasisFamily, band: FrequencyBand):
        self.w = d.w
        self.gx = family.transform.apply(d.x)
        self.func = kind_function(family.kind)
        self.betas = band.grid()
        self.floor = DEGENERACY_REL_TOL * float(np.sum(d.w))
        if self.betas.size * self.gx.size <= _F_CACHE_LIMIT:
            self._basis_rows = self.func(np.outer(self.betas, self.gx))
            self.energy = (self._basis_rows * self._basis_rows) @ self.w
        else:
            self._basis_rows = None
            self.energy = self._chunked(lambda rows: (rows * rows) @ self.w)
        self.viable = self.energy >= self.floor

    def _chunked(self, reducer) -> np.ndarray:
        out = np.empty(self.betas.size)
        step = max(1, _F_CACHE_LIMIT // max(1, self.gx.size))
        for start in range(0, self.betas.size, step):
            rows = self.func(np.outer(self.betas[start : start + step], self.gx))
            out[start : start + step] = reducer(rows)
        return out

    def _correlations(self, wr: np.ndarray) -> np.ndarray:
        if self._basis_rows is not None:
            return self._basis_rows @ wr
        return self._chunked(lambda rows: rows @ wr)

    def _candidate_at(self, beta: float, wr: np.ndarray) -> tuple[float, float]:
        f = self.func(beta * self.gx)
        energy = float(np.dot(self.w, f * f))
        if energy < self.floor:
            return 0.0, 0.0
        corr = float(np.dot(wr, f))
        return corr * corr / energy, corr / energy

    def search(self, residual_values, refine_steps: int) -> BetaSearchResult:
        r = np.asarray(residual_values, dtype=float)
        wr = self.w * r
        corr = self._correlations(wr)
        decrease = np.zeros(self.betas.size)
        np.divide(corr * corr, self.energy, out=decrease, where=self.viable)
        k = int(np.argmax(decrease))  # argmax takes the first (smallest beta) on ties
        best_delta = float(decrease[k])
        if best_delta <= 0.0:
            raise NoViableCandidateError("every candidate is degenerate or yields zero decrease")
        best_beta = float(self.betas[k])
        best_alpha = float(corr[k] / self.energy[k])

        if refine_steps > 0:
            lo = float(self.betas[k - 1]) if k > 0 else float(self.betas[0])
            hi = float(self.betas[k + 1]) if k + 1 < self.betas.size else float(self.betas[-1])
            best_beta, best_alpha, best_delta = self._refine(
                lo, hi, wr, refine_steps, best_beta, best_alpha, best_delta
            )
        return BetaSearchResult(best_beta, best_alpha, best_delta)

    def _refine(self, a, b, wr, steps, beta0, alpha0, delta0):
        # Golden-section maximization of the decrease within the bracket;
        # the incumbent grid point is never discarded.
        best = (delta0, beta0, alpha0)
        c = b - _GOLDEN * (b - a)
        e = a + _GOLDEN * (b - a)
        dc, ac = self._candidate_at(c, wr)
        de, ae = self._candidate_at(e, wr)
        if dc > best[0]:
            best = (dc, c, ac)
        if de > best[0]:
            best = (de, e, ae)
        for _ in range(steps):
            if dc >= de:
                b, e, de, ae = e, c, dc, ac
                c = b - _GOLDEN * (b - a)
                dc, ac = self._candidate_at(c, wr)
                if dc > best[0]:
                    best = (dc, c, ac)
            else:
                a, c, dc, ac = c, e, de, ae
                e = a + _GOLDEN * (b - a)
                de, ae = self._candidate_at(e, wr)
                if de > best[0]:
                    best = (de, e, ae)
        return best[1], best[2], best[0]


def search_beta(
    d: Dataset,
    residual_values,
    family: BasisFamily,
    band: FrequencyBand,
    refine_steps: int = 40,
) -> BetaSearchResult:
    """Best frequency in the band for the current residuals.

    Evaluates the closed-form decrease B(beta)^2 / A(beta) on the uniform
    grid (skipping degenerate candidates), then refines inside the two grid
    cells around the winner by golden-section search.  The returned decrease
    is never below the best coarse-grid value.

    Raises
    ------
    NoViableCandidateError
        All candidates degenerate, or the residuals are orthogonal to every
        candidate (zero residuals included).
    """
    validate_dataset(d)
    r = np.asarray(residual_values, dtype=float)
    if r.shape != d.x.shape:
        raise LengthMismatchError("residual length must equal dataset size")
    return _CandidateGrid(d, family, band).search(r, refine_steps)


def split_dataset(d: Dataset, fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Seeded random train/validation partition.

    Training size is round(n * (1 - fraction)); the remainder validates.
    Both parts keep the original observation order.
    """
    validate_dataset(d)
    if not 0.0 < fraction < 1.0:
        raise ValueError("fraction must lie strictly between 0 and 1")
    n_train = int(round(d.n * (1.0 - fraction)))
    n_val = d.n - n_train
    if n_train < 1 or n_val < 1:
        raise TooFewPointsError(f"cannot split {d.n} points into {n_train} train / {n_val} validation")
    perm = np.random.default_rng(seed).permutation(d.n)
    return d.subset(np.sort(perm[:n_train])), d.subset(np.sort(perm[n_train:]))


def early_stopping_check(
    records: Sequence[IterationRecord],
    patience: int,
    baseline: float | None = None,
) -> EarlyStopDecision:
    """Stop once the best validation SS has stalled for ``patience`` steps.

    ``baseline`` is the validation SS of the bare base model; with it, a
    first term that does not improve already counts against patience.
    Returns whether to stop and how many leading terms achieve the best
    validation SS (0 means base only).
    """
    if patience < 1:
        raise ValueError("patience must be positive")
    best = math.inf if baseline is None else baseline
    best_count = 0
    streak = 0
    for count, rec in enumerate(records, start=1):
        if rec.validation_ss is None:
            raise MissingValidationSSError(f"record {rec.index} has no validation SS")
        if rec.validation_ss < best:
            best = rec.validation_ss
            best_count = count
            streak = 0
        else:
            streak += 1
        if streak >= patience:
            return EarlyStopDecision(True, best_count)
    return EarlyStopDecision(False, best_count)


def fit(d: Dataset, cfg: FitConfig) -> tuple[SeriesModel, FitReport]:
    """Run the stagewise loop and return the fitted series with its report.

    Starting from the base model's residuals, each iteration searches the
    band for the frequency with the largest closed-form decrease, appends
    the term, and updates residuals; the training SS is strictly decreasing
    across accepted terms and the per-iteration drop equals
    alpha^2 * sum(w f^2) up to rounding.  When a validation split is
    configured the returned model is truncated to the term count with the
    best validation SS if patience runs out.
    """
    validate_dataset(d)
    if cfg.validation_fraction > 0.0:
        if d.n < 4:
            raise TooFewPointsError("validation split needs at least 4 observations")
        train, val = split_dataset(d, cfg.validation_fraction, cfg.seed)
    else:
        train, val = d, None

    base = cfg.base if cfg.base is not None else make_base_model(train, cfg.base_kind)
    r = train.y - base.predict(train.x)
    ss = float(np.sum(train.w * r * r))
    initial_ss = ss

    val_pred = None
    initial_val_ss = None
    if val is not None:
        val_pred = base.predict(val.x)
        initial_val_ss = weighted_ss(val, val_pred)

    records: list[IterationRecord] = []
    terms: list[Term] = []
    stop = STOP_SS_TARGET if ss <= cfg.ss_target else None
    grid = _CandidateGrid(train, cfg.family, cfg.band) if stop is None else None

    while stop is None:
        try:
            beta, alpha, _ = grid.search(r, cfg.refine_steps)
        except NoViableCandidateError:
            stop = STOP_NO_CANDIDATE
            break
        f = evaluate_basis(cfg.family, beta, train.x)
        new_r = r - alpha * f
        new_ss = float(np.sum(train.w * new_r * new_r))
        if not new_ss < ss:  # guards monotonicity against rounding-level candidates
            stop = STOP_NO_CANDIDATE
            break
        prev_ss, r, ss = ss, new_r, new_ss
        terms.append(Term(cfg.family.kind, beta, alpha))

        val_ss = None
        if val is not None:
            val_pred = val_pred + alpha * evaluate_basis(cfg.family, beta, val.x)
            val_ss = weighted_ss(val, val_pred)
        records.append(IterationRecord(len(records) + 1, beta, alpha, ss, val_ss))

        if ss <= cfg.ss_target:
            stop = STOP_SS_TARGET
        elif val is not None and early_stopping_check(
            records, cfg.validation_patience, baseline=initial_val_ss
        ).stop:
            stop = STOP_VALIDATION
        elif cfg.min_relative_decrease > 0.0 and prev_ss - ss < cfg.min_relative_decrease * prev_ss:
            stop = STOP_NO_CANDIDATE
        elif len(records) >= cfg.max_iterations:
            stop = STOP_MAX_ITERATIONS

    kept = len(terms)
    if stop == STOP_VALIDATION:
        kept = early_stopping_check(records, cfg.validation_patience, baseline=initial_val_ss).best_count
        terms = terms[:kept]
    final_ss = records[kept - 1].train_ss if kept else initial_ss
    model = SeriesModel(
        base=base,
        transform=cfg.family.transform,
        terms=tuple(terms),
        metadata=ModelMetadata(iterations=kept, final_ss=final_ss),
    )
    report = FitReport(
        initial_ss=initial_ss,
        records=tuple(records),
        stop_reason=stop,
        initial_validation_ss=initial_val_ss,
    )
    return model, report
