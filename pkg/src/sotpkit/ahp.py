"""Analytic Hierarchy Process ranking of packages by quality scores.

For every quality the per-package scores become a pairwise reciprocal matrix
whose principal eigenvector (found by power iteration) gives that quality's
priorities. Priorities are combined with criteria weights into one aggregate
score per package.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .catalog import QUALITIES
from .errors import (
    DegenerateInput,
    DimensionMismatch,
    InvalidMatrix,
    NonConvergence,
    OutOfRangeScore,
)

log = logging.getLogger(__name__)

MODES = ("ratio", "saaty-diff")
CR_THRESHOLD = 0.1
SCORE_RANGE = (1.0, 10.0)
TIE_TOL = 1e-12

# Saaty's random consistency index; 1.49 is reused beyond n = 10.
RANDOM_INDEX = {1: 0.0, 2: 0.0, 3: 0.58, 4: 0.90, 5: 1.12, 6: 1.24, 7: 1.32,
                8: 1.41, 9: 1.45, 10: 1.49}


def random_index(n: int) -> float:
    return RANDOM_INDEX.get(n, 1.49)


class ConsistencyWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class ReciprocalMatrix:
    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise InvalidMatrix(f"matrix must be square and nonempty, got shape {a.shape}")
        if not np.all(np.isfinite(a)) or np.any(a <= 0):
            raise InvalidMatrix("entries must be finite and positive")
        if not np.allclose(np.diag(a), 1.0, rtol=0, atol=1e-12):
            raise InvalidMatrix("diagonal entries must be 1")
        if not np.allclose(a.T * a, 1.0, rtol=0, atol=1e-12):
            raise InvalidMatrix("matrix is not reciprocal: a[j][i] != 1/a[i][j]")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_weights(cls, weights: Sequence[float]) -> "ReciprocalMatrix":
        w = np.asarray(weights, dtype=float)
        return cls(w[:, None] / w[None, :])


@dataclass(frozen=True, eq=False)
class PriorityResult:
    priorities: np.ndarray
    lambda_max: float
    consistency_index: float
    consistency_ratio: float
    iterations: int = 0
    converged: bool = True

    @property
    def consistent(self) -> bool:
        return self.consistency_ratio <= CR_THRESHOLD

    def to_dict(self) -> dict:
        return {
            "priorities": [float(p) for p in self.priorities],
            "lambda_max": float(self.lambda_max),
            "consistency_index": float(self.consistency_index),
            "consistency_ratio": float(self.consistency_ratio),
        }


def matrix_from_scores(scores: Sequence[float], mode: str = "ratio") -> ReciprocalMatrix:
    """Pairwise judgments from one quality's scores.

    ``ratio``: a[i][j] = s_i / s_j. Only positivity is required, since the
    construction is scale free.
    ``saaty-diff``: a[i][j] = min(9, 1 + |s_i - s_j|) for s_i >= s_j and the
    reciprocal otherwise; scores must lie in [1, 10].
    """
    s = np.asarray(scores, dtype=float)
    if s.ndim != 1 or s.size < 2:
        raise DegenerateInput(f"need at least two scores, got {s.size}")
    if not np.all(np.isfinite(s)):
        raise OutOfRangeScore("scores must be finite")
    if mode == "ratio":
        if np.any(s <= 0):
            raise OutOfRangeScore("ratio mode needs positive scores")
        return ReciprocalMatrix(s[:, None] / s[None, :])
    if mode == "saaty-diff":
        lo, hi = SCORE_RANGE
        if np.any(s < lo) or np.any(s > hi):
            raise OutOfRangeScore(f"scores must lie in [{lo:g}, {hi:g}]")
        diff = s[:, None] - s[None, :]
        up = np.minimum(9.0, 1.0 + np.abs(diff))
        return ReciprocalMatrix(np.where(diff >= 0, up, 1.0 / up))
    raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


def priority_vector(m: ReciprocalMatrix, tol: float = 1e-10,
                    max_iter: int = 10_000) -> PriorityResult:
    """Principal right eigenvector by power iteration, normalised to sum 1.

    Iteration stops once no component moves by ``tol`` or more. ``lambda_max``
    is the mean of (A w)_i / w_i at the final iterate.
    """
    a = m.entries
    n = m.n
    x = np.full(n, 1.0 / n)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        y = a @ x
        y /= y.sum()
        step = np.max(np.abs(y - x))
        x = y
        if step < tol:
            converged = True
            break

    lam = float(np.mean((a @ x) / x))
    ci = (lam - n) / (n - 1) if n > 1 else 0.0
    ri = random_index(n)
    cr = ci / ri if n > 2 and ri > 0 else 0.0
    result = PriorityResult(x, lam, ci, cr, it, converged)
    if not converged:
        raise NonConvergence(f"power iteration did not converge in {max_iter} steps", result)
    return result


def rank_order(values: Sequence[float], ids: Sequence[str],
               tol: float = TIE_TOL) -> tuple[tuple[str, ...], tuple[tuple[str, ...], ...]]:
    """Descending order; values within ``tol`` tie and are ordered by id."""
    vals = np.asarray(values, dtype=float)
    idx = sorted(range(len(ids)), key=lambda i: (-vals[i], ids[i]))
    groups: list[list[int]] = []
    for i in idx:
        if groups and vals[groups[-1][0]] - vals[i] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    order, ties = [], []
    for g in groups:
        names = sorted(ids[i] for i in g)
        order.extend(names)
        if len(names) > 1:
            ties.append(tuple(names))
    return tuple(order), tuple(ties)


def _weights_vector(weights, keys: Sequence[str]) -> np.ndarray:
    if isinstance(weights, Mapping):
        if set(weights) != set(keys):
            raise DimensionMismatch("criteria weights must cover exactly the ranked qualities")
        w = np.array([weights[k] for k in keys], dtype=float)
    else:
        w = np.asarray(weights, dtype=float)
    if w.shape != (len(keys),):
        raise DimensionMismatch(f"expected {len(keys)} criteria weights, got {w.shape}")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
        raise ValueError("criteria weights must be non-negative and sum to 1")
    return w


@dataclass(frozen=True, eq=False)
class Aggregate:
    vector: np.ndarray
    order: tuple[str, ...]
    ties: tuple[tuple[str, ...], ...]


def aggregate(per_quality: Mapping[str, PriorityResult], criteria_weights,
              package_ids: Sequence[str] | None = None) -> Aggregate:
    """Weighted sum of per-quality priorities: agg_i = sum_q w_q * p_{q,i}."""
    keys = list(per_quality)
    if not keys:
        raise DimensionMismatch("no qualities to aggregate")
    dims = {per_quality[k].priorities.shape for k in keys}
    if len(dims) != 1:
        raise DimensionMismatch(f"priority vectors differ in length: {sorted(dims)}")
    n = dims.pop()[0]
    ids = list(package_ids) if package_ids is not None else [str(i) for i in range(n)]
    if len(ids) != n:
        raise DimensionMismatch(f"{len(ids)} package ids for {n} priorities")
    w = _weights_vector(criteria_weights, keys)
    p = np.vstack([per_quality[k].priorities for k in keys])
    vec = w @ p
    order, ties = rank_order(vec, ids)
    return Aggregate(vec, order, ties)


def equal_weights(n: int = len(QUALITIES)) -> np.ndarray:
    return np.full(n, 1.0 / n)


def criteria_weights_from_matrix(m: ReciprocalMatrix | None = None,
                                 n: int = len(QUALITIES)) -> np.ndarray:
    """Criteria weights from a pairwise matrix over the qualities.

    Without a matrix every quality weighs the same. An inconsistent matrix
    (CR above 0.1) only raises a :class:`ConsistencyWarning`.
    """
    if m is None:
        return equal_weights(n)
    if m.n != n:
        raise DimensionMismatch(f"criteria matrix must be {n}x{n}, got {m.n}x{m.n}")
    res = priority_vector(m)
    if not res.consistent:
        warnings.warn(f"criteria matrix is inconsistent (CR={res.consistency_ratio:.3f})",
                      ConsistencyWarning, stacklevel=2)
    return res.priorities


# -- ranking packages --------------------------------------------------------


def _score_table(scores: Mapping[str, object],
                 qualities: Sequence[str]) -> tuple[list[str], np.ndarray]:
    ids = sorted(scores)
    rows = []
    for pid in ids:
        s = scores[pid]
        s = getattr(s, "scores", s)
        rows.append([float(s[q]) for q in qualities])
    return ids, np.array(rows, dtype=float).reshape(len(ids), len(qualities))


@dataclass(frozen=True, eq=False)
class AhpRanking:
    package_ids: tuple[str, ...]
    qualities: tuple[str, ...]
    per_quality: Mapping[str, PriorityResult]
    criteria_weights: np.ndarray
    aggregate: np.ndarray
    order: tuple[str, ...]
    ties: tuple[tuple[str, ...], ...] = ()
    mode: str = "ratio"
    inconsistent: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "packages": list(self.package_ids),
            "criteria_weights": {q: float(w) for q, w in zip(self.qualities,
                                                             self.criteria_weights)},
            "per_quality": {q: self.per_quality[q].to_dict() for q in self.qualities},
            "aggregate": {p: float(v) for p, v in zip(self.package_ids, self.aggregate)},
            "order": list(self.order),
            "ties": [list(t) for t in self.ties],
            "inconsistent_qualities": list(self.inconsistent),
        }


def _rank_table(ids, table, qualities, weights, mode) -> AhpRanking:
    per_quality = {}
    for j, q in enumerate(qualities):
        per_quality[q] = priority_vector(matrix_from_scores(table[:, j], mode))
    agg = aggregate(per_quality, weights, ids)
    bad = tuple(q for q in qualities if not per_quality[q].consistent)
    for q in bad:
        log.warning("%s: pairwise matrix inconsistent (CR=%.3f)", q,
                    per_quality[q].consistency_ratio)
    return AhpRanking(tuple(ids), tuple(qualities), per_quality, np.asarray(weights, float),
                      agg.vector, agg.order, agg.ties, mode, bad)


def rank_packages(scores: Mapping[str, object], weights=None, mode: str = "ratio",
                  qualities: Sequence[str] = QUALITIES) -> AhpRanking:
    """Rank packages given ``{package_id: QualityScores or {quality: score}}``."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    ids, table = _score_table(scores, qualities)
    w = equal_weights(len(qualities)) if weights is None else _weights_vector(weights, qualities)
    return _rank_table(ids, table, qualities, w, mode)


# -- sensitivity -------------------------------------------------------------


@dataclass(frozen=True)
class Perturbation:
    package: str
    quality: str
    direction: int
    original: float
    perturbed: float
    order: tuple[str, ...]
    changed: bool
    top_changed: bool

    @property
    def applied(self) -> float:
        return abs(self.perturbed - self.original)


@dataclass(frozen=True)
class SensitivityReport:
    delta: float
    mode: str
    baseline: tuple[str, ...]
    perturbations: tuple[Perturbation, ...]

    @property
    def stability(self) -> float:
        """Fraction of perturbations that leave the full order intact."""
        if not self.perturbations:
            return 1.0
        kept = sum(1 for p in self.perturbations if not p.changed)
        return kept / len(self.perturbations)

    @property
    def min_flip(self) -> float | None:
        """Smallest applied score change that displaces the top package."""
        flips = [p.applied for p in self.perturbations if p.top_changed]
        return min(flips) if flips else None

    def changes(self) -> tuple[Perturbation, ...]:
        return tuple(p for p in self.perturbations if p.changed)

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "mode": self.mode,
            "baseline": list(self.baseline),
            "stability": self.stability,
            "min_flip": self.min_flip,
            "perturbations": len(self.perturbations),
            "changes": [
                {"package": p.package, "quality": p.quality,
                 "direction": "+" if p.direction > 0 else "-",
                 "score": [p.original, p.perturbed], "order": list(p.order)}
                for p in self.changes()
            ],
        }


def sensitivity(scores: Mapping[str, object], weights=None, delta: float = 1.0,
                mode: str = "ratio", qualities: Sequence[str] = QUALITIES) -> SensitivityReport:
    """Perturb each (package, quality) score by +delta and -delta, clamped to
    [1, 10], and re-rank after each single perturbation."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    ids, table = _score_table(scores, qualities)
    w = equal_weights(len(qualities)) if weights is None else _weights_vector(weights, qualities)
    base = _rank_table(ids, table, qualities, w, mode).order
    lo, hi = SCORE_RANGE
    records = []
    for i, pid in enumerate(ids):
        for j, q in enumerate(qualities):
            for sign in (1, -1):
                t = table.copy()
                t[i, j] = min(hi, max(lo, table[i, j] + sign * delta))
                order = _rank_table(ids, t, qualities, w, mode).order
                records.append(Perturbation(pid, q, sign, float(table[i, j]), float(t[i, j]),
                                            order, order != base, order[0] != base[0]))
    return SensitivityReport(float(delta), mode, base, tuple(records))
