"""Time series to graph constructions.

Visibility graphs (natural and horizontal) work on the raw samples;
ordinal partition networks, coarse-grained state-space networks and
k-nearest-neighbour graphs work on the delay embedding. Transition networks
are symmetrised before they are returned, so every :class:`Graph` here is
undirected.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import cdist

from .embedding import SeriesLike, as_array, delay_embed, ordinal_patterns
from .errors import KTooLarge, SeriesTooShort, TsNetError


@dataclass
class Graph:
    """Undirected graph on vertices ``0..vertex_count-1``.

    ``edges`` maps ``(u, v)`` with ``u < v`` to a positive weight; unweighted
    graphs store weight 1.0.
    """

    vertex_count: int
    edges: Dict[Tuple[int, int], float] = field(default_factory=dict)
    weighted: bool = False
    vertex_labels: Optional[List[Any]] = None

    def __post_init__(self):
        if self.vertex_count < 0:
            raise TsNetError("vertex_count must be nonnegative")
        for (u, v), w in self.edges.items():
            if not 0 <= u < v < self.vertex_count:
                raise TsNetError(f"bad edge ({u}, {v}) for {self.vertex_count} vertices")
            if not w > 0:
                raise TsNetError(f"edge ({u}, {v}) has nonpositive weight {w}")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def edge_set(self) -> set:
        return set(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.vertex_count, dtype=int)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self, weighted: Optional[bool] = None) -> np.ndarray:
        """Dense symmetric adjacency matrix (weights if the graph is weighted)."""
        use_w = self.weighted if weighted is None else weighted
        a = np.zeros((self.vertex_count, self.vertex_count))
        for (u, v), w in self.edges.items():
            a[u, v] = a[v, u] = w if use_w else 1.0
        return a

    def neighbors(self) -> List[List[Tuple[int, float]]]:
        adj: List[List[Tuple[int, float]]] = [[] for _ in range(self.vertex_count)]
        for (u, v), w in self.edges.items():
            adj[u].append((v, w))
            adj[v].append((u, w))
        return adj

    def to_edge_list(self) -> str:
        """One ``u v w`` line per edge, 0-based, sorted."""
        lines = []
        for (u, v), w in sorted(self.edges.items()):
            wt = int(w) if float(w).is_integer() else repr(float(w))
            lines.append(f"{u} {v} {wt}")
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_edge_list(cls, text: str, vertex_count: Optional[int] = None, weighted: bool = True):
        edges = {}
        top = -1
        for raw in text.splitlines():
            raw = raw.strip()
            if not raw or raw.startswith("#"):
                continue
            parts = raw.split()
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) > 2 else 1.0
            u, v = min(u, v), max(u, v)
            edges[(u, v)] = w
            top = max(top, v)
        count = vertex_count if vertex_count is not None else top + 1
        return cls(count, edges, weighted)


# ---------------------------------------------------------------------------
# Visibility graphs


def _check_visibility_input(x: SeriesLike) -> np.ndarray:
    y = as_array(x)
    if y.size < 2:
        raise SeriesTooShort("visibility graphs need at least 2 samples")
    return y


def build_nvg(x: SeriesLike) -> Graph:
    """Natural visibility graph with unit time stamps.

    ``(i, j)`` is an edge iff the slope from ``i`` to ``j`` strictly exceeds
    the slope from ``i`` to every intermediate sample, which is the line-of-
    sight criterion rearranged. Runs in O(L^2).
    """
    y = _check_visibility_input(x)
    L = y.size
    edges = {}
    for i in range(L - 1):
        j = np.arange(i + 1, L)
        # compare (y_k - y_i)/(k - i) slopes via running maximum
        slopes = (y[i + 1 :] - y[i]) / (j - i)
        prev_max = np.concatenate(([-np.inf], np.maximum.accumulate(slopes)[:-1]))
        for jj in np.flatnonzero(slopes > prev_max):
            edges[(i, i + 1 + int(jj))] = 1.0
    return Graph(L, edges, weighted=False)


def build_nvg_bruteforce(x: SeriesLike) -> Graph:
    """O(L^3) direct check of the line-of-sight inequality; test oracle."""
    y = _check_visibility_input(x)
    L = y.size
    edges = {}
    for i in range(L - 1):
        for j in range(i + 1, L):
            if all(
                y[k] < y[j] + (y[i] - y[j]) * (j - k) / (j - i) for k in range(i + 1, j)
            ):
                edges[(i, j)] = 1.0
    return Graph(L, edges, weighted=False)


def build_hvg(x: SeriesLike) -> Graph:
    """Horizontal visibility graph: every intermediate sample strictly below
    both endpoints."""
    y = _check_visibility_input(x)
    L = y.size
    edges = {}
    for i in range(L - 1):
        edges[(i, i + 1)] = 1.0
        top = -np.inf
        for j in range(i + 1, L - 1):
            top = max(top, y[j])
            if top >= y[i]:
                break
            if top < y[j + 1]:
                edges[(i, j + 1)] = 1.0
    return Graph(L, edges, weighted=False)


# ---------------------------------------------------------------------------
# Transition networks


def _transition_graph(states: Sequence[Hashable]) -> Graph:
    """Symmetrised transition counts between consecutive states.

    Vertices are the distinct states in sorted order; self-transitions are
    dropped.
    """
    labels = sorted(set(states))
    index = {s: k for k, s in enumerate(labels)}
    directed = directed_transition_counts(states)
    edges: Dict[Tuple[int, int], float] = {}
    for (a, b), c in directed.items():
        if a == b:
            continue
        u, v = sorted((index[a], index[b]))
        edges[(u, v)] = edges.get((u, v), 0.0) + c
    return Graph(len(labels), edges, weighted=True, vertex_labels=labels)


def directed_transition_counts(states: Sequence[Hashable]) -> Counter:
    """Counts of each directed transition ``states[i] -> states[i+1]``."""
    return Counter(zip(states[:-1], states[1:]))


def opn_states(x: SeriesLike, tau: int, n: int) -> List[Tuple[int, ...]]:
    pts = delay_embed(x, tau, n)
    return [tuple(int(v) for v in row) for row in ordinal_patterns(pts)]


def build_opn(x: SeriesLike, tau: int, n: int) -> Graph:
    """Ordinal partition network; vertex labels are the ordinal patterns."""
    if n < 2:
        raise TsNetError("ordinal patterns need n >= 2")
    return _transition_graph(opn_states(x, tau, n))


def bin_indices(x: SeriesLike, b: int) -> np.ndarray:
    """Equal-width bin index in ``0..b-1`` over ``[min x, max x]``; the top
    edge is closed. A constant series maps entirely to bin 0."""
    y = as_array(x)
    lo, hi = float(y.min()), float(y.max())
    if hi == lo:
        return np.zeros(y.size, dtype=np.int64)
    rho = np.floor((y - lo) / (hi - lo) * b).astype(np.int64)
    return np.clip(rho, 0, b - 1)


def cgssn_states(x: SeriesLike, tau: int, n: int, b: int) -> List[int]:
    rho = delay_embed(bin_indices(x, b).astype(float), tau, n).astype(np.int64)
    powers = [b**j for j in range(n)]
    return [1 + sum(int(r) * p for r, p in zip(row, powers)) for row in rho]


def build_cgssn(x: SeriesLike, tau: int, n: int, b: int) -> Graph:
    """Coarse-grained state-space network; vertex labels are state numbers
    ``1 + sum_j rho_j b^j``."""
    if b < 2:
        raise TsNetError("bin count b must be at least 2")
    return _transition_graph(cgssn_states(x, tau, n, b))


# ---------------------------------------------------------------------------
# Proximity network


def build_knn(x: SeriesLike, tau: int, n: int, k: int) -> Graph:
    """Symmetric k-nearest-neighbour graph of the delay vectors.

    Equal distances are resolved in favour of the smaller vertex index.
    """
    if k < 1:
        raise TsNetError("k must be at least 1")
    pts = delay_embed(x, tau, n)
    N = pts.shape[0]
    if k >= N:
        raise KTooLarge(f"k={k} needs more than {k} delay vectors, got {N}")
    dist = cdist(pts, pts)
    np.fill_diagonal(dist, np.inf)
    order = np.argsort(dist, axis=1, kind="stable")[:, :k]
    edges = {}
    for i in range(N):
        for j in order[i]:
            u, v = (i, int(j)) if i < j else (int(j), i)
            edges[(u, v)] = 1.0
    return Graph(N, edges, weighted=False)
