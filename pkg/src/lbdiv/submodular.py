"""Ground-set functions: built-in submodular generators and structural checks.

Subsets are any iterable of 1-based item indices. Every built-in is
normalized so that f(empty) = 0.
"""

from __future__ import annotations

import json
import math

import numpy as np

_CHECK_LIMIT = 20  # exhaustive structural checks are 2^n
_TOL = 1e-9


def _as_subset(A, n: int) -> frozenset:
    S = frozenset(int(i) for i in A)
    for i in S:
        if not 1 <= i <= n:
            raise ValueError(f"item {i} outside ground set 1..{n}")
    return S


class SetFunction:
    """Base class: a real-valued function on subsets of {1..n}."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("ground set must have n >= 1")
        self.n = int(n)

    def __call__(self, A) -> float:
        raise NotImplementedError

    def marginal(self, j: int, A) -> float:
        """The gain f(A + j) - f(A); j must not already be in A."""
        S = _as_subset(A, self.n)
        j = int(j)
        if j in S:
            raise ValueError(f"item {j} already in the subset")
        return self(S | {j}) - self(S)

    def chain_values(self, order) -> np.ndarray:
        """f evaluated on the prefix chain S_1 subset ... subset S_n of `order`."""
        out = np.empty(self.n)
        prefix = set()
        for k, item in enumerate(order):
            prefix.add(item)
            out[k] = self(prefix)
        return out

    def descriptor(self) -> dict:
        raise NotImplementedError

    def __add__(self, other):
        if not isinstance(other, SetFunction):
            return NotImplemented
        return Sum([self, other])


class CardinalityConcave(SetFunction):
    """f(A) = g(|A|) with concave g given by its gain table.

    `gains[i-1]` is g(i) - g(i-1); concavity means the table is
    non-increasing.
    """

    def __init__(self, gains):
        gains = np.asarray(gains, dtype=float)
        super().__init__(gains.size)
        if np.any(np.diff(gains) > _TOL):
            raise ValueError("gain table must be non-increasing")
        self.gains = gains
        self._cum = np.concatenate(([0.0], np.cumsum(gains)))

    @classmethod
    def sqrt(cls, n: int) -> "CardinalityConcave":
        """g(k) = sqrt(k)."""
        k = np.arange(1, n + 1, dtype=float)
        return cls(np.sqrt(k) - np.sqrt(k - 1))

    @classmethod
    def log(cls, n: int) -> "CardinalityConcave":
        """g(k) = log(1 + k)."""
        k = np.arange(1, n + 1, dtype=float)
        return cls(np.log1p(k) - np.log1p(k - 1))

    def __call__(self, A) -> float:
        return float(self._cum[len(_as_subset(A, self.n))])

    def chain_values(self, order) -> np.ndarray:
        return self._cum[1:].copy()

    def descriptor(self) -> dict:
        return {"kind": "cardinality", "gains": self.gains.tolist()}


class TruncatedCardinality(SetFunction):
    """f(A) = min{g(|A|), g(m)}: the cardinality form cut off at rank m."""

    def __init__(self, gains, m: int):
        gains = np.asarray(gains, dtype=float)
        super().__init__(gains.size)
        if not 1 <= m <= self.n:
            raise ValueError(f"cutoff m={m} outside 1..{self.n}")
        if np.any(np.diff(gains) > _TOL):
            raise ValueError("gain table must be non-increasing")
        self.gains = gains
        self.m = int(m)
        self._cum = np.concatenate(([0.0], np.cumsum(gains)))

    @classmethod
    def top_m(cls, n: int, m: int) -> "TruncatedCardinality":
        """f(A) = min{|A|, m}."""
        return cls(np.ones(n), m)

    def __call__(self, A) -> float:
        k = len(_as_subset(A, self.n))
        return float(min(self._cum[k], self._cum[self.m]))

    def chain_values(self, order) -> np.ndarray:
        return np.minimum(self._cum[1:], self._cum[self.m])

    def descriptor(self) -> dict:
        return {"kind": "truncated_cardinality", "gains": self.gains.tolist(),
                "m": self.m}


class GraphCut(SetFunction):
    """f(A) = sum of W[i, j] over i in A, j outside A.

    W must be symmetric and nonnegative with a zero diagonal.
    """

    def __init__(self, weights):
        W = np.asarray(weights, dtype=float)
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise ValueError("weight matrix must be square")
        if not np.allclose(W, W.T, atol=0):
            raise ValueError("weight matrix must be symmetric")
        if np.any(W < 0):
            raise ValueError("weights must be nonnegative")
        if np.any(np.diag(W) != 0):
            raise ValueError("diagonal must be zero")
        super().__init__(W.shape[0])
        self.weights = W

    @classmethod
    def uniform(cls, n: int, weight: float = 1.0) -> "GraphCut":
        """All pairs weighted equally: f(A) = weight * |A| * |V \\ A|."""
        W = np.full((n, n), float(weight))
        np.fill_diagonal(W, 0.0)
        return cls(W)

    def __call__(self, A) -> float:
        S = _as_subset(A, self.n)
        inside = np.zeros(self.n, dtype=bool)
        inside[[i - 1 for i in S]] = True
        return float(self.weights[np.ix_(inside, ~inside)].sum())

    def chain_values(self, order) -> np.ndarray:
        # adding item v changes the cut by deg_out(v) - 2 * w(v, prefix)
        out = np.empty(self.n)
        deg = self.weights.sum(axis=1)
        inside = np.zeros(self.n, dtype=bool)
        value = 0.0
        for k, item in enumerate(order):
            v = item - 1
            value += deg[v] - 2.0 * self.weights[v, inside].sum()
            inside[v] = True
            out[k] = value
        return out

    def descriptor(self) -> dict:
        return {"kind": "graph_cut", "weights": self.weights.tolist()}


class MaxTruncation(SetFunction):
    """f(A) = min{|A|, 1}: the generator of the max-value divergence."""

    def __call__(self, A) -> float:
        return float(min(len(_as_subset(A, self.n)), 1))

    def chain_values(self, order) -> np.ndarray:
        return np.ones(self.n)

    def descriptor(self) -> dict:
        return {"kind": "max_truncation", "n": self.n}


class RangeIndicator(SetFunction):
    """f(A) = 1 if 1 <= |A| <= n - 1, else 0 (range divergence generator)."""

    def __call__(self, A) -> float:
        k = len(_as_subset(A, self.n))
        return float(1 <= k <= self.n - 1)

    def chain_values(self, order) -> np.ndarray:
        out = np.ones(self.n)
        out[-1] = 0.0
        return out

    def descriptor(self) -> dict:
        return {"kind": "range_indicator", "n": self.n}


class ProperSubsetIndicator(SetFunction):
    """f(A) = 1 if A is neither empty nor the full ground set."""

    def __call__(self, A) -> float:
        S = _as_subset(A, self.n)
        return float(0 < len(S) < self.n)

    def chain_values(self, order) -> np.ndarray:
        out = np.ones(self.n)
        out[-1] = 0.0
        return out

    def descriptor(self) -> dict:
        return {"kind": "proper_subset_indicator", "n": self.n}


class Modular(SetFunction):
    """f(A) = sum of per-item weights; submodular with equality."""

    def __init__(self, weights):
        w = np.asarray(weights, dtype=float)
        super().__init__(w.size)
        self.item_weights = w

    def __call__(self, A) -> float:
        S = _as_subset(A, self.n)
        return float(sum(self.item_weights[i - 1] for i in S))

    def chain_values(self, order) -> np.ndarray:
        return np.cumsum([self.item_weights[i - 1] for i in order])

    def descriptor(self) -> dict:
        return {"kind": "modular", "weights": self.item_weights.tolist()}


class ExplicitTable(SetFunction):
    """A set function given by its full 2^n value table (n <= 20).

    Values are indexed by subset bitmask (bit i-1 set <=> item i in A) and
    normalized so the empty set maps to 0.
    """

    def __init__(self, n: int, values):
        if n > _CHECK_LIMIT:
            raise ValueError(f"explicit tables limited to n <= {_CHECK_LIMIT}")
        super().__init__(n)
        table = np.asarray(values, dtype=float)
        if table.size != 1 << n:
            raise ValueError(f"expected {1 << n} values, got {table.size}")
        self.table = table - table[0]

    @classmethod
    def from_function(cls, n: int, fn) -> "ExplicitTable":
        """Tabulate fn over all subsets; fn takes a frozenset of items."""
        vals = [fn(_mask_to_set(m)) for m in range(1 << n)]
        return cls(n, vals)

    @classmethod
    def from_json(cls, text: str) -> "ExplicitTable":
        """Parse a JSON object mapping subset bitmask -> value."""
        raw = json.loads(text)
        masks = {int(k): float(v) for k, v in raw.items()}
        n = max(masks).bit_length() if masks else 1
        vals = [masks.get(m, 0.0) for m in range(1 << n)]
        return cls(n, vals)

    def __call__(self, A) -> float:
        S = _as_subset(A, self.n)
        mask = 0
        for i in S:
            mask |= 1 << (i - 1)
        return float(self.table[mask])

    def descriptor(self) -> dict:
        return {"kind": "explicit_table", "n": self.n,
                "values": self.table.tolist()}


class Sum(SetFunction):
    """Pointwise sum of set functions on the same ground set."""

    def __init__(self, terms):
        terms = list(terms)
        if not terms:
            raise ValueError("need at least one term")
        n = terms[0].n
        if any(t.n != n for t in terms):
            raise ValueError("terms live on different ground sets")
        super().__init__(n)
        self.terms = terms

    def __call__(self, A) -> float:
        return sum(t(A) for t in self.terms)

    def chain_values(self, order) -> np.ndarray:
        return np.sum([t.chain_values(order) for t in self.terms], axis=0)

    def descriptor(self) -> dict:
        return {"kind": "sum", "terms": [t.descriptor() for t in self.terms]}


def from_descriptor(desc: dict) -> SetFunction:
    """Rebuild a set function from its serialized descriptor."""
    kind = desc["kind"]
    if kind == "cardinality":
        return CardinalityConcave(desc["gains"])
    if kind == "truncated_cardinality":
        return TruncatedCardinality(desc["gains"], desc["m"])
    if kind == "graph_cut":
        return GraphCut(desc["weights"])
    if kind == "max_truncation":
        return MaxTruncation(desc["n"])
    if kind == "range_indicator":
        return RangeIndicator(desc["n"])
    if kind == "proper_subset_indicator":
        return ProperSubsetIndicator(desc["n"])
    if kind == "modular":
        return Modular(desc["weights"])
    if kind == "explicit_table":
        return ExplicitTable(desc["n"], desc["values"])
    if kind == "sum":
        return Sum([from_descriptor(t) for t in desc["terms"]])
    raise ValueError(f"unknown set function kind: {kind}")


def evaluate(f: SetFunction, A) -> float:
    """f(A) for a subset A of 1-based items."""
    return f(A)


def marginal_gain(f: SetFunction, j: int, A) -> float:
    """f(A + j) - f(A)."""
    return f.marginal(j, A)


def _mask_to_set(mask: int) -> frozenset:
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def _tabulate(f: SetFunction) -> np.ndarray:
    if f.n > _CHECK_LIMIT:
        raise ValueError(
            f"exhaustive check needs n <= {_CHECK_LIMIT}, got {f.n}")
    if isinstance(f, ExplicitTable):
        return f.table
    return np.array([f(_mask_to_set(m)) for m in range(1 << f.n)])


def is_submodular(f: SetFunction, tol: float = _TOL) -> bool:
    """Exhaustively check diminishing returns, within absolute `tol`.

    Uses the equivalent pairwise condition
    f(A + i) + f(A + j) >= f(A + i + j) + f(A) for all A and i != j outside A.
    """
    F = _tabulate(f)
    n = f.n
    for mask in range(1 << n):
        for i in range(n):
            if mask >> i & 1:
                continue
            mi = mask | 1 << i
            for j in range(i + 1, n):
                if mask >> j & 1:
                    continue
                mj = mask | 1 << j
                if F[mi] + F[mj] < F[mi | mj] + F[mask] - tol:
                    return False
    return True


def is_monotone(f: SetFunction, tol: float = _TOL) -> bool:
    """Exhaustively check f(A) <= f(A + j) for all A and j, within `tol`."""
    F = _tabulate(f)
    n = f.n
    for mask in range(1 << n):
        for i in range(n):
            if not mask >> i & 1 and F[mask | 1 << i] < F[mask] - tol:
                return False
    return True
