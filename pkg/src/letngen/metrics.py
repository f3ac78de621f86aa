"""Fidelity metrics for comparing temporal networks.

Per-snapshot metrics treat each snapshot as an unweighted simple graph;
aggregated-graph variants use occurrence counts as edge weights. Idle
snapshots score 0 by convention so metric series stay aligned with time,
and degenerate assortativity cases (no edges, single active label) also
score 0 so they can be pooled or excluded downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import (LabelAssignment, Snapshot, SplitConfig, TemporalNetwork,
                   WeightedStaticGraph, aggregate, local_split_of)
from .signature import build_encoding, _signature_from_adjacency

METRIC_IDS = ("modularity", "assortativity", "clustering")
_ALIASES = {"q": "modularity", "r": "assortativity", "c": "clustering",
            "modularity": "modularity", "assortativity": "assortativity",
            "label_assortativity": "assortativity", "clustering": "clustering",
            "clustering_coefficient": "clustering"}


def canonical_metric(name: str) -> str:
    key = name.strip().lower()
    if key not in _ALIASES:
        raise ValueError(f"unknown metric {name!r}")
    return _ALIASES[key]


# -- per-snapshot metrics ---------------------------------------------------

def _mixing_terms(edges, labels: Sequence[int]) -> tuple[int, int, dict[int, int]]:
    """(edge count, within-label edge count, endpoint count per label)."""
    m = 0
    within = 0
    deg: dict[int, int] = {}
    for u, v in edges:
        m += 1
        lu, lv = labels[u], labels[v]
        if lu == lv:
            within += 1
        deg[lu] = deg.get(lu, 0) + 1
        deg[lv] = deg.get(lv, 0) + 1
    return m, within, deg


def modularity(snapshot: Snapshot, labels: Sequence[int]) -> float:
    """Newman-Girvan modularity of the label partition on one snapshot.

    Q = sum_c [ e_cc/M - (d_c / 2M)^2 ]; 0 when the snapshot has no edges.
    """
    m, within, deg = _mixing_terms(snapshot.edges, labels)
    if m == 0:
        return 0.0
    return within / m - sum((d / (2 * m)) ** 2 for d in deg.values())


def label_assortativity(snapshot: Snapshot, labels: Sequence[int]) -> float:
    """Categorical mixing-matrix assortativity of edge endpoint labels.

    r = (sum_i e_ii - sum_i a_i^2) / (1 - sum_i a_i^2) with e the normalized
    mixing matrix and a its marginals; 0 when there are no edges or when all
    endpoint mass sits on one label.
    """
    m, within, deg = _mixing_terms(snapshot.edges, labels)
    if m == 0:
        return 0.0
    sum_a2 = sum((d / (2 * m)) ** 2 for d in deg.values())
    if 1.0 - sum_a2 == 0.0:
        return 0.0
    return (within / m - sum_a2) / (1.0 - sum_a2)


def clustering_coefficient(snapshot: Snapshot) -> float:
    """Mean local clustering coefficient; nodes of degree < 2 contribute 0."""
    adj = snapshot.adjacency()
    if not adj:
        return 0.0
    total = 0.0
    for u, nbrs in adj.items():
        d = len(nbrs)
        if d < 2:
            continue
        links = 0
        for v in nbrs:
            links += len(nbrs & adj[v])
        # each closed pair counted twice in the loop above
        total += links / (d * (d - 1))
    return total / len(adj)


# -- aggregated-graph metrics ----------------------------------------------

def _weighted_mixing(graph: WeightedStaticGraph,
                     labels: Sequence[int]) -> tuple[float, float, dict[int, float]]:
    total = 0.0
    within = 0.0
    strength: dict[int, float] = {}
    for (u, v), w in graph.weights.items():
        total += w
        lu, lv = labels[u], labels[v]
        if lu == lv:
            within += w
        strength[lu] = strength.get(lu, 0.0) + w
        strength[lv] = strength.get(lv, 0.0) + w
    return total, within, strength


def modularity_weighted(graph: WeightedStaticGraph,
                        labels: Sequence[int]) -> float:
    total, within, strength = _weighted_mixing(graph, labels)
    if total == 0.0:
        return 0.0
    return within / total - sum((s / (2 * total)) ** 2 for s in strength.values())


def assortativity_weighted(graph: WeightedStaticGraph,
                           labels: Sequence[int]) -> float:
    total, within, strength = _weighted_mixing(graph, labels)
    if total == 0.0:
        return 0.0
    sum_a2 = sum((s / (2 * total)) ** 2 for s in strength.values())
    if 1.0 - sum_a2 == 0.0:
        return 0.0
    return (within / total - sum_a2) / (1.0 - sum_a2)


# -- series ------------------------------------------------------------------

@dataclass(frozen=True)
class MetricSeries:
    name: str
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))


def metric_series(network: TemporalNetwork, labels: LabelAssignment,
                  metric: str, cfg: SplitConfig | None = None) -> MetricSeries:
    """Apply one metric to every snapshot.

    With a per-split label assignment, the labels used at snapshot t are
    those of its local split (``cfg`` required in that case).
    """
    metric = canonical_metric(metric)
    if labels.mode == "per_split" and cfg is None:
        raise ValueError("per-split labels require a SplitConfig")
    values = np.zeros(network.length)
    static = labels.for_split(0)[0] if labels.mode == "static" else None
    for i, snap in enumerate(network.snapshots):
        if metric == "clustering":
            values[i] = clustering_coefficient(snap)
            continue
        if static is not None:
            node_labels = static
        else:
            split = local_split_of(snap.time_start, cfg)
            node_labels = labels.for_split(split)[0]
        if metric == "modularity":
            values[i] = modularity(snap, node_labels)
        else:
            values[i] = label_assortativity(snap, node_labels)
    return MetricSeries(metric, values)


def series_distance(a: MetricSeries, b: MetricSeries) -> float:
    """Euclidean norm of the difference between two equal-length series."""
    if len(a.values) != len(b.values):
        raise ValueError(f"series lengths differ: {len(a.values)} vs {len(b.values)}")
    return float(np.linalg.norm(a.values - b.values))


# -- label-pair matrices ------------------------------------------------------

def contact_matrix(network: TemporalNetwork, labels: Sequence[int],
                   label_count: int) -> np.ndarray:
    """Number of (edge, snapshot) occurrences per endpoint label pair.

    Symmetric; the upper triangle plus diagonal sums to the total
    interaction count.
    """
    mat = np.zeros((label_count, label_count))
    for snap in network.snapshots:
        for u, v in snap.edges:
            a, b = labels[u], labels[v]
            if a == b:
                mat[a, a] += 1
            else:
                mat[a, b] += 1
                mat[b, a] += 1
    return mat


def _edge_runs(network: TemporalNetwork) -> dict[tuple[int, int], list[int]]:
    """Maximal consecutive-snapshot run lengths per edge."""
    last_seen: dict[tuple[int, int], int] = {}
    run_len: dict[tuple[int, int], int] = {}
    runs: dict[tuple[int, int], list[int]] = {}
    for t, snap in enumerate(network.snapshots):
        for e in snap.edges:
            if last_seen.get(e) == t - 1:
                run_len[e] += 1
            else:
                if e in run_len:
                    runs.setdefault(e, []).append(run_len[e])
                run_len[e] = 1
            last_seen[e] = t
    for e, length in run_len.items():
        runs.setdefault(e, []).append(length)
    return runs


def mean_duration_matrix(network: TemporalNetwork, labels: Sequence[int],
                         label_count: int) -> np.ndarray:
    """Mean length of consecutive-interaction runs per endpoint label pair.

    Runs are pooled over all edges with that label pair; pairs with no runs
    score 0.
    """
    pooled_sum = np.zeros((label_count, label_count))
    pooled_n = np.zeros((label_count, label_count))
    for (u, v), lengths in _edge_runs(network).items():
        a, b = labels[u], labels[v]
        s, n = sum(lengths), len(lengths)
        pooled_sum[a, b] += s
        pooled_n[a, b] += n
        if a != b:
            pooled_sum[b, a] += s
            pooled_n[b, a] += n
    with np.errstate(invalid="ignore"):
        mat = np.where(pooled_n > 0, pooled_sum / np.maximum(pooled_n, 1), 0.0)
    return mat


# -- signature feature vectors ------------------------------------------------

def signature_feature_matrix(network: TemporalNetwork, labels: LabelAssignment,
                             k: int, mode: str = "letn",
                             ) -> tuple[np.ndarray, list[str]]:
    """Count, per node, every distinct full signature it exhibits as ego.

    Columns are the canonical renderings of all signatures observed anywhere
    in the network, in sorted order; every window contributes exactly one
    signature per ego, so each row sums to T - k + 1. Mode "etn" uses the
    single-label encoding regardless of ``labels``.
    """
    if network.length < k:
        raise ValueError("network shorter than window")
    if mode == "etn":
        labels = LabelAssignment.uniform(network.node_count)
    elif mode != "letn":
        raise ValueError(f"unknown mode {mode!r}")
    if labels.mode != "static":
        raise ValueError("feature matrix needs a static label assignment")
    node_labels, names = labels.for_split(0)
    enc = build_encoding(len(names))
    adjs = network.adjacency_sequence()
    counts: list[dict[str, int]] = [dict() for _ in range(network.node_count)]
    for t in range(network.length - k + 1):
        window = adjs[t:t + k]
        for ego in range(network.node_count):
            sig = _signature_from_adjacency(window, node_labels, ego, enc)
            r = sig.render()
            row = counts[ego]
            row[r] = row.get(r, 0) + 1
    columns = sorted(set().union(*[c.keys() for c in counts]))
    index = {s: j for j, s in enumerate(columns)}
    mat = np.zeros((network.node_count, len(columns)), dtype=np.int64)
    for i, row in enumerate(counts):
        for s, n in row.items():
            mat[i, index[s]] = n
    return mat, columns


# -- PCA ----------------------------------------------------------------------

def _power_iteration(mat: np.ndarray, ortho: np.ndarray | None,
                     tol: float = 1e-9, max_iter: int = 200000,
                     ) -> tuple[float, np.ndarray]:
    """Dominant eigenpair of a symmetric PSD matrix, residual-tested.

    Iterates on mat@mat (same eigenvectors, squared ratio) and checks the
    residual against ``mat`` itself every few steps. ``ortho`` deflates a
    known eigenvector by re-orthogonalizing every iterate, which keeps the
    second component clean even when the deflated spectrum is numerically
    zero.
    """
    n = mat.shape[0]
    rng = np.random.default_rng(12345)
    x = rng.standard_normal(n)
    if ortho is not None:
        x -= (x @ ortho) * ortho
    norm = np.linalg.norm(x)
    if norm == 0:
        return 0.0, np.zeros(n)
    x /= norm
    mat2 = mat @ mat
    lam = 0.0
    for it in range(max_iter):
        y = mat2 @ x
        if ortho is not None:
            y -= (y @ ortho) * ortho
        y_norm = np.linalg.norm(y)
        if y_norm == 0.0:
            return 0.0, np.zeros(n)
        x = y / y_norm
        if it % 8 == 7 or it == max_iter - 1:
            z = mat @ x
            lam = float(x @ z)
            if np.linalg.norm(z - lam * x) <= tol * max(1.0, abs(lam)):
                break
    return lam, x


def _fix_sign(vec: np.ndarray) -> np.ndarray:
    if vec[np.argmax(np.abs(vec))] < 0:
        return -vec
    return vec


def pca2(matrix: np.ndarray) -> np.ndarray:
    """Project rows onto the top two principal directions.

    Columns are mean-centered; eigenpairs of the covariance come from power
    iteration (tolerance 1e-9) with deflation for the second component.
    When there are more columns than rows the same eigenpairs are found
    through the row-space Gram matrix, which keeps wide signature-count
    matrices cheap. Component signs are fixed so each component's
    largest-magnitude loading is positive; a rank-0 input maps every row to
    the origin.
    """
    x = np.asarray(matrix, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2 or x.shape[1] < 2:
        raise ValueError("need at least a 2x2 matrix")
    n, p = x.shape
    xc = x - x.mean(axis=0)
    tol = 1e-9
    if p <= n:
        work = (xc.T @ xc) / (n - 1)
    else:
        work = (xc @ xc.T) / (n - 1)
    if not np.any(np.abs(work) > 1e-15):
        return np.zeros((n, 2))

    def loading(vec: np.ndarray) -> np.ndarray:
        if p <= n:
            return vec
        v = xc.T @ vec  # lift a Gram eigenvector into column space
        norm = np.linalg.norm(v)
        return v / norm if norm > 0 else np.zeros(p)

    lam1, u1 = _power_iteration(work, None, tol)
    if lam1 <= tol:
        return np.zeros((n, 2))
    lam2, u2 = _power_iteration(work, u1, tol)
    coords = np.zeros((n, 2))
    coords[:, 0] = xc @ _fix_sign(loading(u1))
    if lam2 > tol * max(1.0, lam1):
        coords[:, 1] = xc @ _fix_sign(loading(u2))
    return coords


# -- reports ------------------------------------------------------------------

@dataclass
class MetricReport:
    """All fidelity measures for one network under one label assignment."""

    provenance: dict
    series: dict[str, np.ndarray]
    aggregated: dict[str, float]
    contact: np.ndarray
    mean_duration: np.ndarray
    label_names: tuple[str, ...]

    def series_stats(self) -> dict[str, dict[str, float]]:
        return {name: {"mean": float(vals.mean()), "std": float(vals.std())}
                for name, vals in self.series.items()}

    def to_dict(self) -> dict:
        return {
            "provenance": self.provenance,
            "series": {k: v.tolist() for k, v in self.series.items()},
            "series_stats": self.series_stats(),
            "aggregated": self.aggregated,
            "matrices": {
                "contact": self.contact.tolist(),
                "mean_duration": self.mean_duration.tolist(),
            },
            "label_names": list(self.label_names),
        }


def network_report(network: TemporalNetwork, labels: LabelAssignment,
                   metrics: Sequence[str] = METRIC_IDS,
                   provenance: dict | None = None) -> MetricReport:
    if labels.mode != "static":
        raise ValueError("reports need a static label assignment")
    node_labels, names = labels.for_split(0)
    if len(node_labels) != network.node_count:
        raise ValueError("label assignment does not cover the node set")
    series = {m: metric_series(network, labels, m).values
              for m in map(canonical_metric, metrics)}
    agg = aggregate(network)
    aggregated = {
        "modularity": modularity_weighted(agg, node_labels),
        "assortativity": assortativity_weighted(agg, node_labels),
    }
    return MetricReport(
        provenance=provenance or {},
        series=series,
        aggregated=aggregated,
        contact=contact_matrix(network, node_labels, len(names)),
        mean_duration=mean_duration_matrix(network, node_labels, len(names)),
        label_names=names,
    )


@dataclass
class ComparisonReport:
    """Original-versus-surrogates comparison."""

    original: MetricReport
    surrogates: list[MetricReport]
    distances: dict[str, dict]
    pooled: dict[str, dict]
    aggregated: dict
    matrices: dict

    def to_dict(self) -> dict:
        return {
            "original": self.original.to_dict(),
            "surrogates": [r.to_dict() for r in self.surrogates],
            "distances": self.distances,
            "pooled": self.pooled,
            "aggregated": self.aggregated,
            "matrices": {
                name: {k: v.tolist() if isinstance(v, np.ndarray) else v
                       for k, v in entry.items()}
                for name, entry in self.matrices.items()
            },
            "conventions": {
                "idle_snapshots": "metrics are 0 on snapshots with no edges",
                "assortativity": "categorical mixing-matrix estimator; "
                                 "degenerate cases score 0",
                "pooled_error": "std over snapshots pooled across surrogates",
                "distance_error": "standard error over surrogates",
            },
        }


def _mean_stderr(values: Sequence[float]) -> tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    if arr.size <= 1:
        return float(arr.mean()) if arr.size else 0.0, 0.0
    return float(arr.mean()), float(arr.std(ddof=1) / np.sqrt(arr.size))


def evaluate(original: TemporalNetwork, surrogates: Sequence[TemporalNetwork],
             labels: LabelAssignment, metrics: Sequence[str] = METRIC_IDS,
             provenance: dict | None = None) -> ComparisonReport:
    """Compare surrogates against the network they imitate.

    Emits per-network reports, per-metric Euclidean series distances
    (mean and standard error over surrogates), aggregated-graph modularity
    and assortativity, and label-pair matrices for the original alongside
    the surrogate mean.
    """
    metric_names = [canonical_metric(m) for m in metrics]
    for i, s in enumerate(surrogates):
        if s.node_count != original.node_count:
            raise ValueError(f"surrogate {i} node count {s.node_count} "
                             f"!= original {original.node_count}")
    orig_report = network_report(original, labels, metric_names,
                                 {"role": "original", **(provenance or {})})
    sur_reports = [network_report(s, labels, metric_names,
                                  {"role": f"surrogate_{i}", **(provenance or {})})
                   for i, s in enumerate(surrogates)]
    distances: dict[str, dict] = {}
    pooled: dict[str, dict] = {}
    for m in metric_names:
        orig_series = MetricSeries(m, orig_report.series[m])
        dists = [series_distance(orig_series, MetricSeries(m, r.series[m]))
                 for r in sur_reports]
        mean, stderr = _mean_stderr(dists)
        distances[m] = {"per_surrogate": dists, "mean": mean, "stderr": stderr}
        pool = (np.concatenate([r.series[m] for r in sur_reports])
                if sur_reports else np.zeros(0))
        pooled[m] = {
            "original_mean": float(orig_report.series[m].mean()),
            "original_std": float(orig_report.series[m].std()),
            "surrogate_mean": float(pool.mean()) if pool.size else 0.0,
            "surrogate_std": float(pool.std()) if pool.size else 0.0,
        }
    agg_sur = {key: [r.aggregated[key] for r in sur_reports]
               for key in ("modularity", "assortativity")}
    aggregated = {
        "original": orig_report.aggregated,
        "surrogates": {
            key: {"values": vals,
                  "mean": float(np.mean(vals)) if vals else 0.0,
                  "std": float(np.std(vals)) if vals else 0.0}
            for key, vals in agg_sur.items()
        },
    }
    matrices = {
        "contact": {
            "original": orig_report.contact,
            "surrogate_mean": (np.mean([r.contact for r in sur_reports], axis=0)
                               if sur_reports else np.zeros_like(orig_report.contact)),
        },
        "mean_duration": {
            "original": orig_report.mean_duration,
            "surrogate_mean": (np.mean([r.mean_duration for r in sur_reports], axis=0)
                               if sur_reports else np.zeros_like(orig_report.mean_duration)),
        },
    }
    return ComparisonReport(orig_report, sur_reports, distances, pooled,
                            aggregated, matrices)
