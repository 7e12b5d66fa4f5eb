"""Regression trees grown by greedy variance reduction (CART style).

The split search is exact and deterministic: every feature is scanned via
presorted order statistics and prefix sums, the chosen split maximizes the
reduction in total squared error, and ties break to the lowest feature
index, then the lowest threshold. Fitting twice on the same matrix yields
byte-identical serialized trees.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


class TreeError(ValueError):
    pass


@dataclass(frozen=True)
class TreeHyperparams:
    max_depth: int = 14
    min_leaf: int = 3
    min_variance_gain: float = 1e-12  # per-sample SSE reduction floor

    def to_dict(self) -> dict:
        return {
            "max_depth": self.max_depth,
            "min_leaf": self.min_leaf,
            "min_variance_gain": self.min_variance_gain,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TreeHyperparams":
        return cls(
            max_depth=int(d["max_depth"]),
            min_leaf=int(d["min_leaf"]),
            min_variance_gain=float(d["min_variance_gain"]),
        )


@dataclass(frozen=True, eq=False)
class RegressionTree:
    """Flat-array tree; ``feature = -1`` marks a leaf node."""

    feature: np.ndarray  # int32, split feature or -1
    threshold: np.ndarray  # float64, split threshold (nan at leaves)
    left: np.ndarray  # int32 child ids (-1 at leaves)
    right: np.ndarray
    value: np.ndarray  # float64 leaf/means
    n_samples: np.ndarray  # int32 training samples per node
    hyperparams: TreeHyperparams
    schema_id: str

    @property
    def n_nodes(self) -> int:
        return int(self.feature.size)

    @property
    def depth(self) -> int:
        depths = np.zeros(self.n_nodes, dtype=int)
        for node in range(self.n_nodes):
            for child in (self.left[node], self.right[node]):
                if child >= 0:
                    depths[child] = depths[node] + 1
        return int(depths.max()) if self.n_nodes else 0

    def predict_one(self, x: np.ndarray) -> float:
        node = 0
        feature = self.feature
        while feature[node] >= 0:
            if x[feature[node]] <= self.threshold[node]:
                node = self.left[node]
            else:
                node = self.right[node]
        return float(self.value[node])

    def predict(self, x: np.ndarray) -> np.ndarray | float:
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            return self.predict_one(x)
        return np.array([self.predict_one(row) for row in x])

    def decision_path(self, x: np.ndarray) -> list[int]:
        node, path = 0, [0]
        while self.feature[node] >= 0:
            node = (
                self.left[node]
                if x[self.feature[node]] <= self.threshold[node]
                else self.right[node]
            )
            path.append(node)
        return path

    def predict_one_masked(self, x: np.ndarray, mask: np.ndarray) -> float:
        """Prediction with known-bad channels: a node testing a masked
        feature sends the probe down both children, weighted by their
        training populations, integrating the split out instead of trusting
        a dead value. Reduces to the plain walk on an all-clear mask."""
        total = 0.0
        stack: list[tuple[int, float]] = [(0, 1.0)]
        feature, threshold = self.feature, self.threshold
        left, right, counts = self.left, self.right, self.n_samples
        while stack:
            node, w = stack.pop()
            feat = feature[node]
            if feat < 0:
                total += w * self.value[node]
                continue
            l, r = left[node], right[node]
            if mask[feat]:
                wl = w * counts[l] / (counts[l] + counts[r])
                stack.append((l, wl))
                stack.append((r, w - wl))
            else:
                stack.append((l if x[feat] <= threshold[node] else r, w))
        return float(total)

    def to_dict(self) -> dict:
        return {
            "feature": [int(v) for v in self.feature],
            "threshold": [None if np.isnan(t) else float(t) for t in self.threshold],
            "left": [int(v) for v in self.left],
            "right": [int(v) for v in self.right],
            "value": [float(v) for v in self.value],
            "n_samples": [int(v) for v in self.n_samples],
            "hyperparams": self.hyperparams.to_dict(),
            "schema_id": self.schema_id,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "RegressionTree":
        return cls(
            feature=np.asarray(d["feature"], dtype=np.int32),
            threshold=np.asarray(
                [np.nan if t is None else t for t in d["threshold"]], dtype=float
            ),
            left=np.asarray(d["left"], dtype=np.int32),
            right=np.asarray(d["right"], dtype=np.int32),
            value=np.asarray(d["value"], dtype=float),
            n_samples=np.asarray(d["n_samples"], dtype=np.int32),
            hyperparams=TreeHyperparams.from_dict(d["hyperparams"]),
            schema_id=d["schema_id"],
        )

    @classmethod
    def from_json(cls, text: str) -> "RegressionTree":
        return cls.from_dict(json.loads(text))


def _best_split(
    x_cols: np.ndarray,  # (n, d) feature values, node subset
    y: np.ndarray,  # (n,)
    sorted_idx: np.ndarray,  # (n, d) row indices sorting each column
    min_leaf: int,
) -> tuple[float, int, float] | None:
    """Best (gain, feature, threshold) over all features, or None.

    Gain is the reduction in total SSE. Candidate cut points sit between
    consecutive distinct sorted values, restricted so both children keep at
    least ``min_leaf`` rows.
    """
    n, d = x_cols.shape
    if n < 2 * min_leaf:
        return None
    x_sorted = np.take_along_axis(x_cols, sorted_idx, axis=0)
    y_sorted = y[sorted_idx]
    csum = np.cumsum(y_sorted, axis=0)
    total = csum[-1, :]
    # SSE_parent - SSE_children = nL*nR/n * (meanL - meanR)^2, maximized
    # via the equivalent score sumL^2/nL + sumR^2/nR.
    k = np.arange(1, n, dtype=float)[:, None]  # left counts per cut
    sum_l = csum[:-1, :]
    sum_r = total[None, :] - sum_l
    score = sum_l**2 / k + sum_r**2 / (n - k)
    valid = x_sorted[:-1, :] < x_sorted[1:, :]
    if min_leaf > 1:
        valid[: min_leaf - 1, :] = False
        valid[n - min_leaf :, :] = False
    score = np.where(valid, score, -np.inf)
    best_per_feature = score.max(axis=0)
    best_overall = best_per_feature.max()
    if not np.isfinite(best_overall):
        return None
    # ties: lowest feature index, then lowest threshold (first valid cut,
    # since values are sorted ascending)
    feature = int(np.argmax(best_per_feature >= best_overall))
    cuts = np.flatnonzero(score[:, feature] >= best_overall)
    cut = int(cuts[0])
    lo_val = float(x_sorted[cut, feature])
    hi_val = float(x_sorted[cut + 1, feature])
    threshold = 0.5 * (lo_val + hi_val)
    if threshold >= hi_val:  # adjacent floats: midpoint rounded up
        threshold = lo_val
    sse_parent = float(np.dot(y, y) - (total[feature] ** 2) / n)
    sse_children = float(np.dot(y, y) - best_overall)
    gain = sse_parent - sse_children
    return gain, feature, threshold


def fit_tree_matrix(
    x: np.ndarray,
    y: np.ndarray,
    hyperparams: TreeHyperparams = TreeHyperparams(),
    schema_id: str = "",
) -> RegressionTree:
    """Grow a tree on a dense (n, d) matrix; deterministic for fixed input."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 2 or x.shape[0] != y.shape[0]:
        raise TreeError("x must be (n, d) with matching target length")
    n, d = x.shape
    if n == 0:
        raise TreeError("empty dataset")
    bad = ~np.isfinite(x)
    if bad.any():
        i = int(np.argwhere(bad.any(axis=1))[0][0])
        raise TreeError(f"non-finite feature in sample {i}")
    if not np.all(np.isfinite(y)):
        i = int(np.argwhere(~np.isfinite(y))[0][0])
        raise TreeError(f"non-finite target in sample {i}")
    if n < 2 * hyperparams.min_leaf:
        raise TreeError(
            f"need at least {2 * hyperparams.min_leaf} samples, got {n}"
        )

    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    value: list[float] = []
    n_samples: list[int] = []

    def new_node(rows: np.ndarray) -> int:
        node = len(feature)
        feature.append(-1)
        threshold.append(np.nan)
        left.append(-1)
        right.append(-1)
        value.append(float(y[rows].mean()))
        n_samples.append(int(rows.size))
        return node

    root_sorted = np.argsort(x, axis=0, kind="stable")
    root_rows = np.arange(n)
    # stack holds (node_id, rows, per-feature sorted row indices, depth)
    stack: list[tuple[int, np.ndarray, np.ndarray, int]] = [
        (new_node(root_rows), root_rows, root_sorted, 0)
    ]
    while stack:
        node, rows, sorted_idx, depth = stack.pop()
        if depth >= hyperparams.max_depth or rows.size < 2 * hyperparams.min_leaf:
            continue
        # sorted_idx holds global row ids; map to node-local positions
        local = np.empty(n, dtype=np.int64)
        local[rows] = np.arange(rows.size)
        split = _best_split(
            x[rows], y[rows], local[sorted_idx], hyperparams.min_leaf
        )
        if split is None:
            continue
        gain, feat, thr = split
        if gain / rows.size < hyperparams.min_variance_gain:
            continue
        go_left = x[rows, feat] <= thr
        mask = np.zeros(n, dtype=bool)
        mask[rows[go_left]] = True
        left_sorted = sorted_idx.T[mask[sorted_idx].T].reshape(d, -1).T
        right_sorted = sorted_idx.T[~mask[sorted_idx].T].reshape(d, -1).T
        feature[node] = feat
        threshold[node] = thr
        left_id = new_node(rows[go_left])
        right_id = new_node(rows[~go_left])
        left[node] = left_id
        right[node] = right_id
        stack.append((right_id, rows[~go_left], right_sorted, depth + 1))
        stack.append((left_id, rows[go_left], left_sorted, depth + 1))

    return RegressionTree(
        feature=np.asarray(feature, dtype=np.int32),
        threshold=np.asarray(threshold, dtype=float),
        left=np.asarray(left, dtype=np.int32),
        right=np.asarray(right, dtype=np.int32),
        value=np.asarray(value, dtype=float),
        n_samples=np.asarray(n_samples, dtype=np.int32),
        hyperparams=hyperparams,
        schema_id=schema_id,
    )
