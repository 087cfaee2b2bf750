"""Rank aggregation, weighted feature inference, and divergence k-means.

The representative ("mean") ordering of a score collection has a closed
form: it is the ordering of the (weighted) arithmetic mean, independent of
the generator. `brute_force_mean` is the enumeration oracle that validates
this.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .permutation import Permutation, TieRule, all_permutations, induced_ordering
from .submodular import SetFunction
from .divergence import lb_divergence_batch
from .lovasz import extreme_subgradient

BRUTE_FORCE_LIMIT = 8


@dataclass(frozen=True)
class ScoreMatrix:
    """A stack of real score vectors over a shared item set."""

    rows: np.ndarray
    row_ids: tuple | None = None

    def __post_init__(self):
        rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if rows.size == 0:
            raise ValueError("need at least one row")
        object.__setattr__(self, "rows", rows)
        if self.row_ids is not None:
            ids = tuple(self.row_ids)
            if len(ids) != rows.shape[0]:
                raise ValueError("one id per row required")
            object.__setattr__(self, "row_ids", ids)

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def n_items(self) -> int:
        return self.rows.shape[1]

    @classmethod
    def from_csv(cls, text: str) -> "ScoreMatrix":
        from .dataio import parse_csv_matrix

        rows, header = parse_csv_matrix(text)
        return cls(rows)

    @classmethod
    def from_json(cls, text: str) -> "ScoreMatrix":
        raw = json.loads(text)
        if isinstance(raw, dict):
            return cls(raw["rows"], tuple(raw["row_ids"]) if "row_ids" in raw else None)
        return cls(raw)


def _resolve_weights(matrix: ScoreMatrix, weights):
    if weights is None:
        return np.ones(matrix.n_rows)
    w = np.asarray(weights, dtype=float)
    if w.size != matrix.n_rows:
        raise ValueError("one weight per row required")
    if np.any(w <= 0):
        raise ValueError("weights must be positive")
    return w


def mean_ordering(matrix: ScoreMatrix, weights=None,
                  rule: TieRule = TieRule.LOWEST_INDEX_FIRST):
    """The divergence-minimizing representative ordering and the mean itself.

    Returns (sigma_mu, mu) with mu the weighted arithmetic mean of the
    rows. The minimizer does not depend on the generator.
    """
    w = _resolve_weights(matrix, weights)
    mu = w @ matrix.rows / w.sum()
    return induced_ordering(mu, rule), mu


def aggregation_objective(matrix: ScoreMatrix, f: SetFunction,
                          sigma: Permutation, weights=None) -> float:
    """Weighted total divergence of the rows to sigma."""
    w = _resolve_weights(matrix, weights)
    return float(w @ lb_divergence_batch(f, matrix.rows, sigma))


def brute_force_mean(matrix: ScoreMatrix, f: SetFunction,
                     weights=None) -> Permutation:
    """Enumeration oracle: argmin of the aggregation objective over all
    permutations, ties broken lexicographically. Limited to n <= 8."""
    n = matrix.n_items
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_LIMIT}")
    w = _resolve_weights(matrix, weights)
    fhat = lb_divergence_batch(f, matrix.rows, Permutation.identity(n)) \
        + matrix.rows @ extreme_subgradient(f, Permutation.identity(n)).values
    best, best_obj = None, math.inf
    for sigma in all_permutations(n):
        h = extreme_subgradient(f, sigma).values
        obj = float(w @ (fhat - matrix.rows @ h))
        if obj < best_obj:  # strict improvement keeps the lexicographically first
            best, best_obj = sigma, obj
    return best


def feature_inference(features: ScoreMatrix, w,
                      rule: TieRule = TieRule.LOWEST_INDEX_FIRST) -> Permutation:
    """Ordering minimizing the weighted per-feature divergence total.

    Each row of `features` is one feature's score vector over the items;
    for nonnegative weights the minimizer is the ordering of the weighted
    sum of the rows, i.e. of the linear scores w . x_i per item.
    """
    w = np.asarray(w, dtype=float)
    if w.size != features.n_rows:
        raise ValueError("one weight per feature required")
    return induced_ordering(w @ features.rows, rule)


@dataclass(frozen=True)
class ClusteringResult:
    """Outcome of divergence k-means: representatives are permutations."""

    assignments: tuple
    representatives: tuple
    objective: float
    iterations: int
    converged: bool

    def to_dict(self) -> dict:
        return {
            "assignments": list(self.assignments),
            "representatives": [list(s.items) for s in self.representatives],
            "objective": self.objective,
            "iterations": self.iterations,
            "converged": self.converged,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def lb_kmeans(matrix: ScoreMatrix, f: SetFunction, k: int, init="sample",
              max_iter: int = 100, tol: float = 1e-9, seed: int = 0,
              rule: TieRule = TieRule.LOWEST_INDEX_FIRST) -> ClusteringResult:
    """Alternating assignment/update clustering of score rows.

    Representatives are permutations; the update step replaces each with
    the ordering of its cluster mean, so the objective never increases.
    init is "sample" (k distinct seeded rows) or an explicit list of k
    permutations. Empty clusters are reseeded with the row farthest from
    its current representative.
    """
    rows = matrix.rows
    m, n = rows.shape
    if not 1 <= k <= m:
        raise ValueError(f"k={k} outside 1..{m}")
    if max_iter < 1 or tol < 0:
        raise ValueError("max_iter >= 1 and tol >= 0 required")

    if init == "sample":
        rng = np.random.default_rng(seed)
        chosen = rng.choice(m, size=k, replace=False)
        reps = [induced_ordering(rows[i], rule) for i in chosen]
        # re-draw duplicated orderings a few times, then accept
        for _ in range(n):
            if len(set(reps)) == k:
                break
            chosen = rng.choice(m, size=k, replace=False)
            reps = [induced_ordering(rows[i], rule) for i in chosen]
    else:
        reps = list(init)
        if len(reps) != k or any(len(s) != n for s in reps):
            raise ValueError("init must provide k permutations of the items")

    assignments = np.zeros(m, dtype=int)
    objective = math.inf
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        # assignment step; argmin breaks ties toward the lowest cluster index
        dists = np.column_stack([lb_divergence_batch(f, rows, s, rule)
                                 for s in reps])
        assignments = np.argmin(dists, axis=1)
        for j in range(k):
            if not np.any(assignments == j):
                worst = int(np.argmax(dists[np.arange(m), assignments]))
                assignments[worst] = j
        new_objective = float(dists[np.arange(m), assignments].sum())
        # update step
        reps = [induced_ordering(rows[assignments == j].mean(axis=0), rule)
                for j in range(k)]
        if objective - new_objective < tol:
            objective = new_objective
            converged = True
            break
        objective = new_objective

    # report the objective consistent with the final assignments
    dists = np.column_stack([lb_divergence_batch(f, rows, s, rule) for s in reps])
    assignments = np.argmin(dists, axis=1)
    objective = float(dists[np.arange(m), assignments].sum())
    return ClusteringResult(tuple(int(a) for a in assignments), tuple(reps),
                            objective, iterations, converged)
