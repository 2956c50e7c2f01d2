"""Vectorisation of persistence diagrams into fixed-length feature vectors.

Layout of the 418-entry vector::

    [H0 mean landscape (200) | H1 mean landscape (200) |
     H0 summaries (9)        | H1 summaries (9)]

with the summaries ordered entropy, amplitude, total persistence,
cardinality, f1, f2, f3, f4, first-landscape L1 norm.
"""
from __future__ import annotations

import math
from dataclasses import astuple, dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import CapNotFinite, TsNetError
from .persistence import PersistenceDiagram

GRID_POINTS = 200
LAYERS = 3
SUMMARY_NAMES = (
    "entropy",
    "amplitude",
    "total",
    "cardinality",
    "f1",
    "f2",
    "f3",
    "f4",
    "norm",
)
FEATURE_LENGTH = 2 * GRID_POINTS + 2 * len(SUMMARY_NAMES)


def feature_names(grid_points: int = GRID_POINTS) -> List[str]:
    names = [f"h{p}_land_{j:03d}" for p in (0, 1) for j in range(grid_points)]
    names += [f"h{p}_{s}" for p in (0, 1) for s in SUMMARY_NAMES]
    return names


def _pairs(dgm) -> np.ndarray:
    pairs = dgm.pairs if isinstance(dgm, PersistenceDiagram) else dgm
    return np.asarray(pairs, dtype=float).reshape(-1, 2)


def _active(dgm) -> np.ndarray:
    """Pairs with positive lifetime; refuses infinite deaths."""
    pairs = _pairs(dgm)
    if np.isinf(pairs).any():
        raise TsNetError("diagram has infinite deaths; call finitize first")
    return pairs[pairs[:, 1] > pairs[:, 0]]


# ---------------------------------------------------------------------------
# Landscapes


def landscape_layers(dgm, grid: np.ndarray, layers: int) -> np.ndarray:
    """``layers x len(grid)`` array with ``lambda_k(grid)`` in row ``k-1``."""
    pairs = _active(dgm)
    grid = np.asarray(grid, dtype=float)
    out = np.zeros((layers, grid.size))
    if pairs.shape[0] == 0:
        return out
    b = pairs[:, :1]
    d = pairs[:, 1:]
    tents = np.maximum(0.0, np.minimum(grid[None, :] - b, d - grid[None, :]))
    tents = -np.sort(-tents, axis=0)
    k = min(layers, tents.shape[0])
    out[:k] = tents[:k]
    return out


def landscape_value(dgm, k: int, t: float) -> float:
    """``k``-th largest tent value at ``t`` (0 when fewer than ``k`` tents)."""
    if k < 1:
        raise TsNetError("landscape index k starts at 1")
    return float(landscape_layers(dgm, np.array([t]), k)[k - 1, 0])


@dataclass
class LandscapeGrid:
    grid: np.ndarray
    values: np.ndarray


def mean_landscape(
    dgm,
    J: int = LAYERS,
    M: int = GRID_POINTS,
    grid_range: Optional[Tuple[float, float]] = None,
) -> LandscapeGrid:
    """Pointwise mean of the first ``J`` landscapes on ``M`` uniform points.

    The grid spans ``[min birth, max death]`` of the diagram unless
    ``grid_range`` fixes it. An empty diagram gives zeros over ``[0, 1]``.
    """
    pairs = _active(dgm)
    if grid_range is not None:
        lo, hi = grid_range
    elif pairs.shape[0] == 0:
        lo, hi = 0.0, 1.0
    else:
        lo, hi = float(pairs[:, 0].min()), float(pairs[:, 1].max())
    grid = np.linspace(lo, hi, M)
    values = landscape_layers(pairs, grid, J).mean(axis=0)
    return LandscapeGrid(grid, values)


def landscape_l1_norm(dgm) -> float:
    """Exact integral of the first landscape.

    Tents contained in another tent never reach the top layer. The rest,
    sorted by birth, also have increasing deaths and only neighbours
    overlap in a way that matters, so the envelope area is the sum of tent
    areas minus the overlaps of consecutive tents.
    """
    pairs = _active(dgm)
    if pairs.shape[0] == 0:
        return 0.0
    order = np.lexsort((-pairs[:, 1], pairs[:, 0]))
    kept = []
    reach = -math.inf
    for b, d in pairs[order]:
        if d > reach:
            kept.append((b, d))
            reach = d
    area = sum((d - b) ** 2 for b, d in kept) / 4.0
    for (b0, d0), (b1, d1) in zip(kept, kept[1:]):
        if d0 > b1:
            area -= (d0 - b1) ** 2 / 4.0
    return float(area)


# ---------------------------------------------------------------------------
# Scalar summaries


def finitize(dgm: PersistenceDiagram, cap: float) -> PersistenceDiagram:
    """Replace infinite deaths by ``cap`` (the largest finite matrix entry).

    Pairs that become zero-length are kept here so that they still count
    towards cardinality; the other summaries ignore them.
    """
    if not math.isfinite(cap):
        raise CapNotFinite(f"cap must be finite, got {cap}")
    pairs = _pairs(dgm).copy()
    pairs[np.isinf(pairs[:, 1]), 1] = cap
    return PersistenceDiagram(dgm.dimension, pairs)


def persistent_entropy(dgm) -> float:
    pairs = _active(dgm)
    life = pairs[:, 1] - pairs[:, 0]
    total = life.sum()
    if total <= 0:
        return 0.0
    p = life / total
    return float(max(0.0, -np.sum(p * np.log(p))))


@dataclass
class ScalarSummaries:
    entropy: float
    amplitude: float
    total_persistence: float
    cardinality: int
    f1: float
    f2: float
    f3: float
    f4: float
    landscape_norm: float

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)


def scalar_summaries(dgm) -> ScalarSummaries:
    cardinality = _pairs(dgm).shape[0]
    pairs = _active(dgm)
    if pairs.shape[0] == 0:
        return ScalarSummaries(0.0, 0.0, 0.0, cardinality, 0.0, 0.0, 0.0, 0.0, 0.0)
    b, d = pairs[:, 0], pairs[:, 1]
    life = d - b
    gap = d.max() - d
    return ScalarSummaries(
        entropy=persistent_entropy(pairs),
        amplitude=float(life.max()),
        total_persistence=float(life.sum()),
        cardinality=cardinality,
        f1=float(np.sum(b * life)),
        f2=float(np.sum(gap * life)),
        f3=float(np.sum(b**2 * life**4)),
        f4=float(np.sum(gap**2 * life**4)),
        landscape_norm=landscape_l1_norm(pairs),
    )


def assemble_features(
    dgm0: PersistenceDiagram,
    dgm1: PersistenceDiagram,
    cap: float,
    J: int = LAYERS,
    M: int = GRID_POINTS,
) -> np.ndarray:
    """The ``2M + 18`` feature vector (418 with the defaults)."""
    f0 = finitize(dgm0, cap)
    f1 = finitize(dgm1, cap)
    vec = np.concatenate(
        [
            mean_landscape(f0, J, M).values,
            mean_landscape(f1, J, M).values,
            scalar_summaries(f0).as_array(),
            scalar_summaries(f1).as_array(),
        ]
    )
    if not np.all(np.isfinite(vec)):
        raise TsNetError("feature vector has non-finite entries")
    return vec


def matrix_cap(D: np.ndarray) -> float:
    """Largest finite entry of a dissimilarity matrix (0 if none)."""
    D = np.asarray(D, dtype=float)
    fin = D[np.isfinite(D)]
    return float(fin.max()) if fin.size else 0.0
