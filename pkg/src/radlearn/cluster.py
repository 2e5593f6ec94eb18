"""Correlation-distance hierarchical clustering of features.

Distance is 1 - |Pearson correlation|, so strongly anti-correlated features
group together with strongly correlated ones; a zero-variance feature sits at
distance 1 from everything. Agglomeration uses average linkage with a
deterministic tie rule: among minimum-distance pairs, merge the pair whose
(representative, representative) names are lexicographically smallest, where
a cluster's representative is its smallest member name.

Merges use scipy-style node ids: leaves are 0..n-1, the i-th merge creates
node n+i.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DataValidationError
from .table import FeatureTable


@dataclass
class Dendrogram:
    merges: list[tuple[int, int, float]]  # (node_a, node_b, height)
    leaf_names: list[str]


def correlation_distance_matrix(t: FeatureTable, names=None) -> np.ndarray:
    """Symmetric matrix d(f,g) = 1 - |pearson(f,g)| with zero diagonal."""
    names = list(names) if names is not None else list(t.feature_names)
    if len(names) < 2:
        raise DataValidationError("need at least 2 features to build distances")
    if t.n_samples < 2:
        raise DataValidationError("need at least 2 samples to correlate features")
    cols = np.stack([t.column(n) for n in names])
    centered = cols - cols.mean(axis=1, keepdims=True)
    norms = np.sqrt((centered ** 2).sum(axis=1))
    k = len(names)
    dist = np.ones((k, k), dtype=np.float64)
    nonzero = norms > 0
    if nonzero.any():
        sub = centered[nonzero] / norms[nonzero, None]
        corr = np.abs(sub @ sub.T)
        block = np.clip(1.0 - corr, 0.0, None)
        dist[np.ix_(nonzero, nonzero)] = block
    np.fill_diagonal(dist, 0.0)
    return dist


def agglomerate(d: np.ndarray, leaf_names, linkage: str = "average") -> Dendrogram:
    d = np.asarray(d, dtype=np.float64)
    leaf_names = list(leaf_names)
    n = len(leaf_names)
    if d.shape != (n, n):
        raise DataValidationError("distance matrix shape must match leaf count")
    if not np.allclose(d, d.T):
        raise DataValidationError("distance matrix must be symmetric")
    if linkage != "average":
        raise DataValidationError(f"unsupported linkage {linkage!r}")

    # active cluster id -> (size, representative name); distances in a dict
    active: dict[int, tuple[int, str]] = {i: (1, leaf_names[i]) for i in range(n)}
    dist: dict[tuple[int, int], float] = {}
    for i in range(n):
        for j in range(i + 1, n):
            dist[(i, j)] = float(d[i, j])

    merges: list[tuple[int, int, float]] = []
    next_id = n
    while len(active) > 1:
        best_pair = None
        best_d = None
        best_reps = None
        for (a, b), value in dist.items():
            reps = tuple(sorted((active[a][1], active[b][1])))
            if best_d is None or value < best_d or (value == best_d and reps < best_reps):
                best_pair, best_d, best_reps = (a, b), value, reps
        a, b = best_pair
        size_a, rep_a = active[a]
        size_b, rep_b = active[b]
        merged = (next_id, size_a + size_b, min(rep_a, rep_b))
        merges.append((a, b, best_d))
        # Lance-Williams update for average linkage
        for other in list(active):
            if other in (a, b):
                continue
            da = dist.pop((min(a, other), max(a, other)))
            db = dist.pop((min(b, other), max(b, other)))
            new = (size_a * da + size_b * db) / (size_a + size_b)
            dist[(min(next_id, other), max(next_id, other))] = new
        del dist[(a, b)]
        del active[a]
        del active[b]
        active[next_id] = (merged[1], merged[2])
        next_id += 1
    return Dendrogram(merges=merges, leaf_names=leaf_names)


def cut(dg: Dendrogram, k: int) -> list[list[str]]:
    """k clusters obtained by undoing the last k-1 merges.

    Clusters are sorted by their smallest member name; members are sorted.
    """
    n = len(dg.leaf_names)
    if k < 1 or k > n:
        raise DataValidationError(f"k must be in [1, {n}], got {k}")
    parent = list(range(n + len(dg.merges)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for idx, (a, b, _) in enumerate(dg.merges[: n - k]):
        new_id = n + idx
        parent[find(a)] = new_id
        parent[find(b)] = new_id

    groups: dict[int, list[str]] = {}
    for leaf in range(n):
        groups.setdefault(find(leaf), []).append(dg.leaf_names[leaf])
    clusters = [sorted(members) for members in groups.values()]
    return sorted(clusters, key=lambda c: c[0])


def dendrogram_to_json(dg: Dendrogram) -> dict:
    return {
        "leaf_names": dg.leaf_names,
        "merges": [
            {"node_a": a, "node_b": b, "height": h} for a, b, h in dg.merges
        ],
    }


def dendrogram_from_json(doc: dict) -> Dendrogram:
    try:
        return Dendrogram(
            merges=[(m["node_a"], m["node_b"], m["height"]) for m in doc["merges"]],
            leaf_names=list(doc["leaf_names"]),
        )
    except (KeyError, TypeError) as exc:
        raise DataValidationError(f"malformed dendrogram document: {exc}") from exc


def save_dendrogram(dg: Dendrogram, path) -> None:
    with open(str(path), "w", encoding="utf-8") as fh:
        json.dump(dendrogram_to_json(dg), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_dendrogram(path) -> Dendrogram:
    with open(str(path), "r", encoding="utf-8") as fh:
        return dendrogram_from_json(json.load(fh))
