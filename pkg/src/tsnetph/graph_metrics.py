"""Graph-derived dissimilarity matrices.

Every function returns a dense symmetric ``float64`` matrix with zero
diagonal and nonnegative entries; unreachable pairs carry ``+inf``.
"""
from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra, shortest_path
from scipy.spatial.distance import cdist

from .errors import Disconnected, TsNetError, UnweightedGraph
from .networks import Graph

log = logging.getLogger(__name__)

COST_RTOL = 1e-9


@dataclass(frozen=True)
class DiffusionConfig:
    t: int

    def __post_init__(self):
        if int(self.t) != self.t or self.t < 1:
            raise TsNetError(f"walk length must be a positive integer, got {self.t}")


def check_dissimilarity(D: np.ndarray, atol: float = 0.0) -> None:
    """Raise if ``D`` breaks the dissimilarity-matrix contract."""
    D = np.asarray(D, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise TsNetError("dissimilarity matrix must be square")
    if np.isnan(D).any():
        raise TsNetError("dissimilarity matrix contains NaN")
    if np.any(np.diag(D) != 0):
        raise TsNetError("dissimilarity matrix needs a zero diagonal")
    if np.any(D < 0):
        raise TsNetError("dissimilarity matrix has negative entries")
    fin = np.isfinite(D)
    if not np.array_equal(fin, fin.T) or np.any(np.abs(D[fin] - D.T[fin]) > atol):
        raise TsNetError("dissimilarity matrix is not symmetric")


def _sparse(G: Graph, lengths: bool) -> csr_matrix:
    n = G.vertex_count
    if not G.edges:
        return csr_matrix((n, n))
    uv = np.array(list(G.edges.keys()))
    w = np.array(list(G.edges.values()), dtype=float)
    data = 1.0 / w if lengths else np.ones_like(w)
    rows = np.concatenate([uv[:, 0], uv[:, 1]])
    cols = np.concatenate([uv[:, 1], uv[:, 0]])
    return csr_matrix((np.concatenate([data, data]), (rows, cols)), shape=(n, n))


def _require_weighted(G: Graph) -> None:
    if not G.weighted:
        raise UnweightedGraph("this distance needs a weighted graph")


def dist_shortest_unweighted(G: Graph) -> np.ndarray:
    """Hop-count shortest path (BFS)."""
    if G.vertex_count == 0:
        return np.zeros((0, 0))
    D = shortest_path(_sparse(G, lengths=False), directed=False, unweighted=True)
    np.fill_diagonal(D, 0.0)
    return D


def dist_reciprocal_shortest(G: Graph) -> np.ndarray:
    """Weighted shortest path with edge length ``1 / weight`` (Dijkstra)."""
    _require_weighted(G)
    if G.vertex_count == 0:
        return np.zeros((0, 0))
    D = dijkstra(_sparse(G, lengths=True), directed=False)
    D = np.minimum(D, D.T)
    np.fill_diagonal(D, 0.0)
    return D


def _lex_dijkstra(adj, source: int, n: int) -> np.ndarray:
    cost = [math.inf] * n
    hops = [math.inf] * n
    cost[source] = 0.0
    hops[source] = 0
    heap = [(0.0, 0, source)]
    done = [False] * n
    while heap:
        c, h, u = heapq.heappop(heap)
        if done[u] or c != cost[u] or h != hops[u]:
            continue
        done[u] = True
        for v, w in adj[u]:
            if done[v]:
                continue
            nc = c + 1.0 / w
            nh = h + 1
            tol = COST_RTOL * max(abs(nc), abs(cost[v])) if cost[v] < math.inf else 0.0
            if nc < cost[v] - tol:
                cost[v], hops[v] = nc, nh
                heapq.heappush(heap, (nc, nh, v))
            elif abs(nc - cost[v]) <= tol and nh < hops[v]:
                # equal reciprocal cost within tolerance: keep the smaller cost, fewer hops
                cost[v], hops[v] = min(nc, cost[v]), nh
                heapq.heappush(heap, (cost[v], nh, v))
    return np.array(hops, dtype=float)


def dist_hop_on_optimal(G: Graph) -> np.ndarray:
    """Fewest hops among the paths that minimise total reciprocal weight.

    Lexicographic Dijkstra on (reciprocal cost, hop count); costs equal
    within a relative ``1e-9`` count as ties.
    """
    _require_weighted(G)
    n = G.vertex_count
    adj = G.neighbors()
    D = np.vstack([_lex_dijkstra(adj, s, n) for s in range(n)]) if n else np.zeros((0, 0))
    # sources may disagree on float ties; the smaller hop count is the faithful one
    return np.minimum(D, D.T)


def _diffusion_operator(G: Graph, weighted: bool | None = None):
    A = G.adjacency(weighted)
    isolated = A.sum(axis=1) == 0
    # self-loop weight follows the graph's scale so uniform reweighting is harmless
    A[isolated, isolated] = A[A > 0].mean() if (A > 0).any() else 1.0
    s = A.sum(axis=1)
    P = A / s[:, None]
    lazy = 0.5 * (P + np.eye(G.vertex_count))
    pi = s / s.sum()
    return lazy, pi


def diffusion_profiles(G: Graph, t: int) -> np.ndarray:
    """Rows of ``lazy^t`` scaled by ``1/sqrt(pi)`` so that diffusion distance
    is plain Euclidean distance between rows."""
    lazy, pi = _diffusion_operator(G)
    Pt = np.linalg.matrix_power(lazy, int(t))
    return Pt / np.sqrt(pi)[None, :]


def dist_diffusion(G: Graph, cfg: DiffusionConfig | int) -> np.ndarray:
    """Diffusion distance after ``t`` steps of the lazy random walk.

    Weighted graphs use their weights, unweighted graphs the binary
    adjacency. An isolated vertex gets an absorbing self-loop.
    """
    t = cfg.t if isinstance(cfg, DiffusionConfig) else DiffusionConfig(int(cfg)).t
    n = G.vertex_count
    if n == 0:
        return np.zeros((0, 0))
    Y = diffusion_profiles(G, t)
    D = cdist(Y, Y)
    np.fill_diagonal(D, 0.0)
    return D


def default_walk_length(G: Graph, cap: int = 10) -> int:
    """``min(ceil(log2 |V|), cap)``, at least 1."""
    n = max(G.vertex_count, 1)
    return max(1, min(math.ceil(math.log2(n)), cap))


def graph_diameter(G: Graph) -> int:
    """Largest hop distance of a connected graph."""
    D = dist_shortest_unweighted(G)
    if not np.all(np.isfinite(D)):
        raise Disconnected("diameter is undefined for a disconnected graph")
    return int(D.max()) if D.size else 0


def diameter_walk_length(G: Graph, factor: float = 2.0) -> int:
    """Alternative walk length inside ``diam < t < 3 diam`` (default 2 diam)."""
    d = graph_diameter(G)
    return max(1, int(round(factor * d)))


def normalize(D: np.ndarray) -> np.ndarray:
    """Divide finite entries by the largest finite entry; ``inf`` stays."""
    D = np.asarray(D, dtype=float)
    fin = np.isfinite(D)
    top = D[fin].max() if fin.any() else 0.0
    if top <= 0:
        log.warning("normalize: no positive finite entry, matrix returned unchanged")
        return D.copy()
    out = D.copy()
    out[fin] = D[fin] / top
    return out


DISTANCES: Dict[str, Callable[..., np.ndarray]] = {
    "sp": dist_shortest_unweighted,
    "sp-hop": dist_hop_on_optimal,
    "sp-recip": dist_reciprocal_shortest,
    "diffusion": dist_diffusion,
}
