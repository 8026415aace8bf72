"""Downstream analysis of learned kernels: embedding, component splitting,
multi-layer recursion, geodesic rankings and the bullseye score, plus the
Lloyd baseline whose partition matrices are always feasible for the SDP.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .cgm import CgmConfig, SdpProblem, SolveReport, solve_nomad_cgm
from .datasets import Dataset
from .linalg import SymMatrix, as_matrix, gramian

__all__ = [
    "EmbeddingResult",
    "BullseyeReport",
    "spectral_embedding",
    "manifold_components",
    "multilayer_nomad",
    "similarity_to_distance",
    "geodesic_ranking",
    "bullseye_score",
    "lloyd_kmeans",
    "partition_to_Q",
    "kmeans_objective",
]


@dataclass(frozen=True)
class EmbeddingResult:
    coords: np.ndarray            # n-by-m, columns ordered by eigenvalue
    eigenvalues_used: np.ndarray  # the m leading eigenvalues, clipped at 0


@dataclass(frozen=True)
class BullseyeReport:
    percentiles: list[float]
    scores: list[float]
    n_neighbors: int

    def to_dict(self) -> dict:
        return {
            "percentiles": list(self.percentiles),
            "scores": list(self.scores),
            "n_neighbors": self.n_neighbors,
        }


def spectral_embedding(Q, m: int) -> EmbeddingResult:
    """Embed by the top-m eigenvectors of Q scaled by sqrt(eigenvalue).

    Q is already a learned kernel, so its own eigenvectors are the feature
    map; no graph Laplacian is built. Eigenvalues are clipped at zero
    before the square root.
    """
    q = as_matrix(Q)
    n = q.shape[0]
    if not (1 <= m <= n):
        raise ValueError(f"embedding dimension m={m} must lie in [1, {n}]")
    w, v = np.linalg.eigh(q)
    order = np.argsort(w)[::-1][:m]
    lam = np.clip(w[order], 0.0, None)
    coords = v[:, order] * np.sqrt(lam)[None, :]
    return EmbeddingResult(coords=coords, eigenvalues_used=lam)


def manifold_components(Q, edge_threshold: float = 1e-3) -> np.ndarray:
    """Connected components of Q viewed as a weighted graph.

    Edges exist where Q_ij > edge_threshold; labels are assigned by
    decreasing component size (ties broken by smallest member index).
    """
    q = as_matrix(Q)
    n = q.shape[0]
    adj = q > edge_threshold
    np.fill_diagonal(adj, True)
    labels = np.full(n, -1, dtype=int)
    comp = 0
    for start in range(n):
        if labels[start] >= 0:
            continue
        stack = [start]
        labels[start] = comp
        while stack:
            u = stack.pop()
            for w in np.nonzero(adj[u] & (labels < 0))[0]:
                labels[w] = comp
                stack.append(w)
        comp += 1
    sizes = np.bincount(labels)
    order = np.argsort(-sizes, kind="stable")
    remap = np.empty_like(order)
    remap[order] = np.arange(comp)
    return remap[labels]


def multilayer_nomad(dataset: Dataset, K_schedule, config: CgmConfig | None = None,
                     layer_configs=None) -> list[SolveReport]:
    """Recursive solving with non-increasing K: each layer feeds Q back as D.

    The first layer consumes the Gramian of the data; later layers see the
    previous kernel, which progressively sieves out small eigenvalues and
    disentangles the manifolds. `layer_configs` optionally overrides the
    solver configuration per layer (low-K layers benefit from larger
    iteration budgets).
    """
    ks = [float(k) for k in K_schedule]
    if not ks:
        raise ValueError("K_schedule must contain at least one value")
    if any(b > a for a, b in zip(ks, ks[1:])):
        raise ValueError(f"K_schedule must be non-increasing, got {ks}")
    if ks[-1] < 1:
        raise ValueError("final K must be >= 1")
    if layer_configs is not None and len(layer_configs) != len(ks):
        raise ValueError("layer_configs must match the schedule length")

    d = gramian(dataset.points)
    reports: list[SolveReport] = []
    for i, k in enumerate(ks):
        cfg = layer_configs[i] if layer_configs is not None else config
        report = solve_nomad_cgm(SdpProblem(D=d, K=k), cfg)
        reports.append(report)
        d = report.Q
    return reports


def similarity_to_distance(Q) -> SymMatrix:
    """Kernel-induced squared distances d_ij = Q_ii + Q_jj - 2 Q_ij."""
    q = as_matrix(Q)
    diag = np.diag(q)
    d = diag[:, None] + diag[None, :] - 2.0 * q
    np.fill_diagonal(d, 0.0)
    return SymMatrix(d)


def _pairwise_euclidean(points: np.ndarray) -> np.ndarray:
    sq = np.sum(points**2, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * points @ points.T
    np.fill_diagonal(d2, 0.0)
    return np.sqrt(np.clip(d2, 0.0, None))


def geodesic_ranking(data, n_neighbors: int, *, metric: str = "euclidean",
                     edge_mask=None) -> list[tuple[int, int, float]]:
    """All unordered pairs sorted by geodesic length on a neighborhood graph.

    `data` is either an n-by-d point array (metric='euclidean') or a
    precomputed symmetric distance matrix (metric='precomputed'). Graph
    connectivity is the symmetrized n_neighbors-nearest-neighbor relation
    unless `edge_mask` provides it explicitly (the route used for learned
    kernels, whose nonzero entries define the graph). Unreachable pairs get
    infinite length and rank after every finite pair, ties broken by index
    order.
    """
    if metric == "euclidean":
        dist = _pairwise_euclidean(np.asarray(data, dtype=float))
    elif metric == "precomputed":
        dist = as_matrix(data)
    else:
        raise ValueError(f"unknown metric {metric!r}")
    n = dist.shape[0]
    if not (1 <= n_neighbors < n):
        raise ValueError(f"n_neighbors must lie in [1, {n - 1}]")

    if edge_mask is None:
        adj = np.zeros((n, n), dtype=bool)
        order = np.argsort(dist, axis=1, kind="stable")
        for i in range(n):
            picked = [j for j in order[i] if j != i][:n_neighbors]
            adj[i, picked] = True
        adj |= adj.T
    else:
        adj = np.asarray(edge_mask, dtype=bool).copy()
        adj |= adj.T
        np.fill_diagonal(adj, False)

    rows, cols = np.nonzero(adj)
    # explicit data array keeps zero-length edges in the graph
    graph = csr_matrix((dist[rows, cols], (rows, cols)), shape=(n, n))
    geo = dijkstra(graph, directed=False)

    iu, ju = np.triu_indices(n, k=1)
    lengths = geo[iu, ju]
    finite = np.isfinite(lengths)
    key = np.where(finite, lengths, np.inf)
    order = np.lexsort((ju, iu, key))
    return [(int(iu[o]), int(ju[o]), float(lengths[o])) for o in order]


def bullseye_score(ground_ranking, test_ranking, percentiles) -> BullseyeReport:
    """Overlap of the top-p percentile pair sets of two rankings.

    Both rankings must cover the same unordered pair set; the score per
    percentile is |top_p(ground) & top_p(test)| / |top_p|, a rank statistic
    invariant under monotone transforms of either distance.
    """
    g_pairs = [(i, j) for i, j, _ in ground_ranking]
    t_pairs = [(i, j) for i, j, _ in test_ranking]
    if set(g_pairs) != set(t_pairs):
        raise ValueError("rankings cover different pair sets")
    total = len(g_pairs)
    scores = []
    for p in percentiles:
        if not (0 < p <= 100):
            raise ValueError(f"percentile {p} outside (0, 100]")
        top = max(1, int(round(total * p / 100.0)))
        scores.append(len(set(g_pairs[:top]) & set(t_pairs[:top])) / top)
    return BullseyeReport(list(percentiles), scores, n_neighbors=0)


def _farthest_point_seeds(points: np.ndarray, k: int, first: int) -> np.ndarray:
    n = points.shape[0]
    seeds = [first]
    d2 = np.sum((points - points[first]) ** 2, axis=1)
    for _ in range(1, k):
        nxt = int(np.argmax(d2))
        seeds.append(nxt)
        d2 = np.minimum(d2, np.sum((points - points[nxt]) ** 2, axis=1))
    return np.asarray(seeds)


def kmeans_objective(points, labels, k: int) -> float:
    """Within-cluster sum of squared distances to the centroid."""
    pts = np.asarray(points, dtype=float)
    total = 0.0
    for c in range(k):
        members = pts[labels == c]
        if members.shape[0]:
            total += float(np.sum((members - members.mean(axis=0)) ** 2))
    return total


def lloyd_kmeans(points, K: int, seed: int = 0, n_restarts: int = 10,
                 max_iter: int = 300) -> np.ndarray:
    """Lloyd's heuristic with greedy farthest-point seeding.

    Runs n_restarts times from different first seeds and keeps the best
    objective; clusters emptied during an iteration are re-seeded with the
    point farthest from its centroid.
    """
    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    if not (1 <= K <= n):
        raise ValueError(f"K={K} must lie in [1, {n}]")
    rng = np.random.default_rng(seed)
    best_labels = None
    best_obj = np.inf
    for _ in range(n_restarts):
        first = int(rng.integers(n))
        centers = pts[_farthest_point_seeds(pts, K, first)].copy()
        labels = np.zeros(n, dtype=int)
        for _ in range(max_iter):
            d2 = ((pts[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
            new_labels = np.argmin(d2, axis=1)
            for c in range(K):
                if not np.any(new_labels == c):
                    resid = d2[np.arange(n), new_labels]
                    far = int(np.argmax(resid))
                    new_labels[far] = c
            if np.array_equal(new_labels, labels) and _ > 0:
                break
            labels = new_labels
            for c in range(K):
                centers[c] = pts[labels == c].mean(axis=0)
        obj = kmeans_objective(pts, labels, K)
        if obj < best_obj:
            best_obj = obj
            best_labels = labels.copy()
    return best_labels


def partition_to_Q(partition) -> SymMatrix:
    """Block matrix with 1/|C_k| inside each cluster; always SDP-feasible.

    Rows sum to one exactly and the trace equals the number of clusters.
    """
    labels = np.asarray(partition, dtype=int)
    n = labels.shape[0]
    q = np.zeros((n, n))
    for c in np.unique(labels):
        idx = np.nonzero(labels == c)[0]
        q[np.ix_(idx, idx)] = 1.0 / idx.size
    return SymMatrix(q)
