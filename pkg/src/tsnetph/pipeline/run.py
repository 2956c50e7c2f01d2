"""Series to feature-vector orchestration."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..embedding import EmbeddingParams, SeriesLike, TimeSeries, select_shared_params
from ..errors import SeriesFailure, TsNetError
from ..features import assemble_features, matrix_cap
from ..graph_metrics import (
    DiffusionConfig,
    default_walk_length,
    dist_diffusion,
    dist_hop_on_optimal,
    dist_reciprocal_shortest,
    dist_shortest_unweighted,
    normalize,
)
from ..networks import Graph, build_cgssn, build_hvg, build_knn, build_nvg, build_opn
from ..persistence import PersistenceDiagram, persist
from .config import DistanceType, GraphType, PipelineConfig, cap_state_space
from .io import Dataset

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResolvedParams:
    """Embedding and graph parameters actually used for a run."""

    tau: Optional[int]
    n: Optional[int]
    b: Optional[int]
    k: Optional[int]
    selection: Optional[EmbeddingParams] = None

    def as_dict(self) -> dict:
        return {"tau": self.tau, "n": self.n, "b": self.b, "k": self.k}


@dataclass
class PipelineResult:
    features: np.ndarray
    ids: List[str]
    labels: np.ndarray
    params: ResolvedParams
    walk_lengths: List[Optional[int]] = field(default_factory=list)
    config: Optional[PipelineConfig] = None

    @property
    def metadata(self) -> dict:
        meta = self.params.as_dict()
        meta["t"] = list(self.walk_lengths)
        if self.config is not None:
            meta["graph"] = self.config.graph_type.value
            meta["distance"] = self.config.distance_type.value
        return meta


def resolve_params(
    ds: Dataset, cfg: PipelineConfig, selection: Optional[EmbeddingParams] = None
) -> ResolvedParams:
    """Shared ``(tau, n)`` for graphs built on the delay embedding.

    Overrides from ``cfg`` win; the rest comes from ``selection`` or, if that
    is missing, from median selection on the first ``cfg.subset_size`` series.
    The CGSSN dimension and bin count are then capped at 4096 states.
    """
    g = cfg.graph_type
    if g.family is None:
        return ResolvedParams(None, None, None, None)
    tau, n = cfg.tau, cfg.n
    if tau is None or n is None:
        if selection is None:
            ds.require_nonempty()
            selection = select_shared_params(
                ds.series, g.family, subset_size=cfg.subset_size, tau=tau, n=n
            )
        tau = tau if tau is not None else selection.tau
        n = n if n is not None else selection.n
    b = k = None
    if g is GraphType.CGSSN:
        n, b = cap_state_space(n, cfg.bins)
        if b != cfg.bins:
            log.info("bin count reduced to %d to respect the state cap", b)
    if g is GraphType.KNN:
        k = cfg.k
    return ResolvedParams(int(tau), int(n), b, k, selection)


def build_graph(x: SeriesLike, graph: GraphType | str, params: ResolvedParams) -> Graph:
    g = GraphType(graph)
    if g is GraphType.NVG:
        return build_nvg(x)
    if g is GraphType.HVG:
        return build_hvg(x)
    if g is GraphType.OPN:
        return build_opn(x, params.tau, params.n)
    if g is GraphType.CGSSN:
        return build_cgssn(x, params.tau, params.n, params.b)
    return build_knn(x, params.tau, params.n, params.k)


def distance_matrix(
    G: Graph, distance: DistanceType | str, t: Optional[int] = None, normalized: bool = False
) -> Tuple[np.ndarray, Optional[int]]:
    """Dissimilarity matrix of ``G`` and the walk length used (diffusion only)."""
    d = DistanceType(distance)
    used_t = None
    if d is DistanceType.SP:
        D = dist_shortest_unweighted(G)
    elif d is DistanceType.SP_HOP:
        D = dist_hop_on_optimal(G)
    elif d is DistanceType.SP_RECIP:
        D = dist_reciprocal_shortest(G)
    else:
        used_t = t if t is not None else default_walk_length(G)
        D = dist_diffusion(G, DiffusionConfig(used_t))
    if normalized:
        D = normalize(D)
    return D, used_t


def series_diagrams(
    x: SeriesLike, cfg: PipelineConfig, params: ResolvedParams
) -> Tuple[PersistenceDiagram, PersistenceDiagram, np.ndarray, Optional[int]]:
    G = build_graph(x, cfg.graph_type, params)
    D, t = distance_matrix(G, cfg.distance_type, cfg.diffusion_t, cfg.normalize)
    dgm0, dgm1 = persist(D)
    return dgm0, dgm1, D, t


def featurize_series(
    x: SeriesLike, cfg: PipelineConfig, params: ResolvedParams
) -> Tuple[np.ndarray, Optional[int]]:
    dgm0, dgm1, D, t = series_diagrams(x, cfg, params)
    return assemble_features(dgm0, dgm1, matrix_cap(D)), t


def run_pipeline(
    ds: Dataset, cfg: PipelineConfig, selection: Optional[EmbeddingParams] = None
) -> PipelineResult:
    """Feature matrix (one row per series, input order) plus run metadata.

    ``selection`` lets callers reuse parameters chosen elsewhere, e.g. on the
    clean data of a noise sweep. Any per-series failure aborts the run with a
    :class:`SeriesFailure` naming the series.
    """
    ds.require_nonempty()
    params = resolve_params(ds, cfg, selection)
    rows, walks = [], []
    for idx, s in enumerate(ds.series):
        try:
            vec, t = featurize_series(s, cfg, params)
        except TsNetError as exc:
            raise SeriesFailure(str(s.id), idx, exc) from exc
        rows.append(vec)
        walks.append(t)
    return PipelineResult(
        features=np.vstack(rows),
        ids=[str(s.id) for s in ds.series],
        labels=ds.labels,
        params=params,
        walk_lengths=walks,
        config=cfg,
    )
