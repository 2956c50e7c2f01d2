"""Flag (Vietoris-Rips) persistence in dimensions 0 and 1 over GF(2).

The filtration is built from a dissimilarity matrix: an edge enters at its
matrix entry, a triangle at the largest of its three entries, ``inf`` entries
never enter. Dimension 0 is computed with union-find, dimension 1 by reducing
the edge coboundary matrix in reverse filtration order with clearing. That
reduction yields the same pairs as reducing the triangle boundary matrix
but touches far fewer columns. :func:`betti_oracle` recomputes Betti
numbers from scratch by explicit rank computations and is used to test
:func:`persist`.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numba
import numpy as np
from numba import types
from numba.typed import Dict as NumbaDict
from numba.typed import List as NumbaList

from .errors import SizeMismatch, TooLarge, TsNetError
from .graph_metrics import check_dissimilarity


@dataclass
class PersistenceDiagram:
    """Birth/death pairs of one homology dimension; deaths may be ``inf``."""

    dimension: int
    pairs: np.ndarray

    def __post_init__(self):
        self.pairs = np.asarray(self.pairs, dtype=float).reshape(-1, 2)
        if self.dimension not in (0, 1):
            raise TsNetError("only dimensions 0 and 1 are supported")

    def __len__(self) -> int:
        return self.pairs.shape[0]

    @property
    def births(self) -> np.ndarray:
        return self.pairs[:, 0]

    @property
    def deaths(self) -> np.ndarray:
        return self.pairs[:, 1]

    def betti(self, eps: float) -> int:
        """Number of classes alive at ``eps`` (``birth <= eps < death``)."""
        return int(np.sum((self.births <= eps) & (eps < self.deaths)))

    def sorted_pairs(self) -> List[Tuple[float, float]]:
        return sorted(map(tuple, self.pairs.tolist()))

    def to_dict(self) -> dict:
        return {
            "dim": self.dimension,
            "pairs": [[b, "inf" if math.isinf(d) else d] for b, d in self.sorted_pairs()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> "PersistenceDiagram":
        pairs = [[float(b), math.inf if d == "inf" else float(d)] for b, d in obj["pairs"]]
        return cls(int(obj["dim"]), np.array(pairs, dtype=float).reshape(-1, 2))


# ---------------------------------------------------------------------------
# Filtration


def filtration_edges(D: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Finite edges ``(u, v, value)`` with ``u < v`` sorted by ``(value, u, v)``."""
    n = D.shape[0]
    u, v = np.triu_indices(n, 1)
    w = D[u, v]
    keep = np.isfinite(w)
    u, v, w = u[keep], v[keep], w[keep]
    order = np.lexsort((v, u, w))
    return u[order].astype(np.int64), v[order].astype(np.int64), w[order]


@numba.njit(cache=True)
def _union_find(n, eu, ev):
    parent = np.arange(n)
    negative = np.zeros(eu.size, dtype=np.bool_)
    for e in range(eu.size):
        a = eu[e]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        b = ev[e]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a == b:
            continue
        negative[e] = True
        # smaller root index survives; the other component dies here
        if a < b:
            parent[b] = a
        else:
            parent[a] = b
    roots = 0
    for i in range(n):
        if parent[i] == i:
            roots += 1
    return negative, roots


@numba.njit(cache=True)
def _symdiff(a, b):
    out = np.empty(a.size + b.size, dtype=np.int64)
    i = j = k = 0
    while i < a.size and j < b.size:
        if a[i] < b[j]:
            out[k] = a[i]
            i += 1
            k += 1
        elif b[j] < a[i]:
            out[k] = b[j]
            j += 1
            k += 1
        else:
            i += 1
            j += 1
    while i < a.size:
        out[k] = a[i]
        i += 1
        k += 1
    while j < b.size:
        out[k] = b[j]
        j += 1
        k += 1
    return out[:k]


@numba.njit(cache=True)
def _reduce_h1(n, eidx, eu, ev, negative):
    m = eu.size
    owner = NumbaDict.empty(key_type=types.int64, value_type=types.int64)
    stored = NumbaList()
    stored.append(np.empty(0, dtype=np.int64))
    births = np.empty(m, dtype=np.int64)
    deaths = np.empty(m, dtype=np.int64)
    npairs = 0
    buf = np.empty(n, dtype=np.int64)
    for e in range(m - 1, -1, -1):
        if negative[e]:
            continue
        u = eu[e]
        v = ev[e]
        k = 0
        for w in range(n):
            if w == u or w == v:
                continue
            a = eidx[u, w]
            b = eidx[v, w]
            if a < 0 or b < 0:
                continue
            # triangle key: (largest edge index, middle edge index)
            hi = e
            mid = a
            lo = b
            if mid > hi:
                hi, mid = mid, hi
            if lo > hi:
                hi, lo = lo, hi
            if lo > mid:
                mid, lo = lo, mid
            buf[k] = hi * m + mid
            k += 1
        col = np.sort(buf[:k].copy())
        while col.size > 0:
            piv = col[0]
            if piv in owner:
                col = _symdiff(col, stored[owner[piv]])
            else:
                break
        if col.size > 0:
            owner[col[0]] = len(stored)
            stored.append(col)
            births[npairs] = e
            deaths[npairs] = col[0] // m
        else:
            births[npairs] = e
            deaths[npairs] = -1
        npairs += 1
    return births[:npairs], deaths[:npairs]


@numba.njit(cache=True)
def _flag_triangles(n, eidx, ew):
    """Every triangle whose three edges are finite, as edge indices sorted
    ascending plus its entry value and vertices."""
    count = 0
    for a in range(n):
        for b in range(a + 1, n):
            if eidx[a, b] < 0:
                continue
            for c in range(b + 1, n):
                if eidx[a, c] >= 0 and eidx[b, c] >= 0:
                    count += 1
    tri = np.empty((count, 3), dtype=np.int64)
    verts = np.empty((count, 3), dtype=np.int64)
    value = np.empty(count)
    k = 0
    for a in range(n):
        for b in range(a + 1, n):
            e1 = eidx[a, b]
            if e1 < 0:
                continue
            for c in range(b + 1, n):
                e2 = eidx[a, c]
                e3 = eidx[b, c]
                if e2 < 0 or e3 < 0:
                    continue
                col = np.sort(np.array([e1, e2, e3], dtype=np.int64))
                tri[k] = col
                verts[k, 0] = a
                verts[k, 1] = b
                verts[k, 2] = c
                value[k] = ew[col[2]]
                k += 1
    return tri, verts, value


@numba.njit(cache=True)
def _reduce_boundary(m, tri, order):
    """Standard column reduction of the triangle boundary matrix.

    Columns are processed in ``order``; the pivot of a column is its largest
    edge index. Returns, per edge, the position in ``order`` of the triangle
    that kills it (-1 if none).
    """
    owner = np.full(m, -1, dtype=np.int64)
    killer = np.full(m, -1, dtype=np.int64)
    stored = NumbaList()
    stored.append(np.empty(0, dtype=np.int64))
    for pos in range(order.size):
        col = tri[order[pos]].copy()
        while col.size > 0:
            piv = col[col.size - 1]
            if owner[piv] < 0:
                break
            col = _symdiff(col, stored[owner[piv]])
        if col.size > 0:
            piv = col[col.size - 1]
            owner[piv] = len(stored)
            stored.append(col)
            killer[piv] = pos
    return killer


def _h1_cohomology(n, eu, ev, ew, negative):
    eidx = _edge_index(n, eu, ev)
    b_idx, d_idx = _reduce_h1(n, eidx, eu, ev, negative)
    return [
        (float(ew[b]), math.inf if d < 0 else float(ew[d])) for b, d in zip(b_idx, d_idx)
    ]


def _h1_boundary(n, eu, ev, ew, negative):
    eidx = _edge_index(n, eu, ev)
    tri, verts, value = _flag_triangles(n, eidx, ew)
    order = np.lexsort((verts[:, 2], verts[:, 1], verts[:, 0], value)).astype(np.int64)
    killer = _reduce_boundary(eu.size, tri, order)
    pairs = []
    for e in np.flatnonzero(~negative):
        k = killer[e]
        pairs.append((float(ew[e]), math.inf if k < 0 else float(value[order[k]])))
    return pairs


def _edge_index(n, eu, ev):
    eidx = np.full((n, n), -1, dtype=np.int64)
    ids = np.arange(eu.size, dtype=np.int64)
    eidx[eu, ev] = ids
    eidx[ev, eu] = ids
    return eidx


H1_METHODS = {"cohomology": _h1_cohomology, "boundary": _h1_boundary}


def persist(
    D: np.ndarray, method: str = "cohomology"
) -> Tuple[PersistenceDiagram, PersistenceDiagram]:
    """Persistence diagrams ``(Dgm0, Dgm1)`` of the flag filtration of ``D``.

    Zero-length pairs are never reported. Classes that never die carry
    ``inf`` as death: one per connected component of the finite entries in
    dimension 0, and cycles that are never filled in dimension 1 (only
    possible when ``D`` has infinite entries).
    """
    D = np.asarray(D, dtype=float)
    check_dissimilarity(D)
    n = D.shape[0]
    if n == 0:
        return PersistenceDiagram(0, np.empty((0, 2))), PersistenceDiagram(1, np.empty((0, 2)))
    eu, ev, ew = filtration_edges(D)
    negative, components = _union_find(n, eu, ev)

    h0 = [(0.0, float(w)) for w in ew[negative] if w > 0]
    h0 += [(0.0, math.inf)] * int(components)

    if method not in H1_METHODS:
        raise TsNetError(f"unknown H1 method {method!r}; choose from {sorted(H1_METHODS)}")
    h1 = []
    if eu.size:
        h1 = [(b, d) for b, d in H1_METHODS[method](n, eu, ev, ew, negative) if d > b]
    return (
        PersistenceDiagram(0, np.array(h0, dtype=float).reshape(-1, 2)),
        PersistenceDiagram(1, np.array(h1, dtype=float).reshape(-1, 2)),
    )


# ---------------------------------------------------------------------------
# Brute-force oracle


def _gf2_rank(columns: Sequence[int]) -> int:
    """Rank over GF(2) of vectors given as integer bitmasks."""
    basis: dict = {}
    rank = 0
    for vec in columns:
        while vec:
            top = vec.bit_length() - 1
            if top in basis:
                vec ^= basis[top]
            else:
                basis[top] = vec
                rank += 1
                break
    return rank


def betti_oracle(D: np.ndarray, eps: float, max_size: int = 12) -> Tuple[int, int]:
    """``(beta0, beta1)`` of the clique complex at scale ``eps``.

    Enumerates every vertex (present once its zero diagonal entry is
    reached), edge and triangle explicitly and computes
    ``beta_p = dim ker d_p - rank d_{p+1}`` from GF(2) ranks.
    """
    D = np.asarray(D, dtype=float)
    n = D.shape[0]
    if n > max_size:
        raise TooLarge(f"betti_oracle enumerates simplices; size {n} > {max_size}")
    verts = [a for a in range(n) if D[a, a] <= eps]
    edges = [(a, b) for a, b in itertools.combinations(verts, 2) if D[a, b] <= eps]
    eset = {e: i for i, e in enumerate(edges)}
    tris = [
        t
        for t in itertools.combinations(verts, 3)
        if (t[0], t[1]) in eset and (t[0], t[2]) in eset and (t[1], t[2]) in eset
    ]
    d1 = [(1 << a) | (1 << b) for a, b in edges]
    d2 = [
        (1 << eset[(a, b)]) | (1 << eset[(a, c)]) | (1 << eset[(b, c)]) for a, b, c in tris
    ]
    r1 = _gf2_rank(d1)
    r2 = _gf2_rank(d2)
    beta0 = len(verts) - r1
    beta1 = (len(edges) - r1) - r2
    return beta0, beta1


# ---------------------------------------------------------------------------
# Stability


def landscape_stability_check(
    D: np.ndarray, D_other: np.ndarray, layers: int = 3, resolution: int = 512
) -> float:
    """Largest gap between the first ``layers`` H1 landscapes of ``D`` and
    ``D_other`` on a shared grid.

    The grid mixes a uniform sampling with every birth, death and midpoint
    of both diagrams. For finite matrices the result is bounded by
    ``max |D - D_other|``.
    """
    from .features import landscape_layers

    D = np.asarray(D, dtype=float)
    D_other = np.asarray(D_other, dtype=float)
    if D.shape != D_other.shape:
        raise SizeMismatch(f"shapes differ: {D.shape} vs {D_other.shape}")
    if not (np.all(np.isfinite(D)) and np.all(np.isfinite(D_other))):
        raise TsNetError("landscape_stability_check needs finite matrices")
    p1 = persist(D)[1].pairs
    p2 = persist(D_other)[1].pairs
    both = np.vstack([p1, p2])
    if both.size == 0:
        return 0.0
    lo, hi = both.min(), both.max()
    critical = np.concatenate([both.ravel(), both.mean(axis=1)])
    grid = np.unique(np.concatenate([np.linspace(lo, hi, resolution), critical]))
    l1 = landscape_layers(p1, grid, layers)
    l2 = landscape_layers(p2, grid, layers)
    return float(np.max(np.abs(l1 - l2)))
