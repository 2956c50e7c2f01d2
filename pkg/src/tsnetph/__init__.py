"""Persistent homology features of time-series networks."""
from .embedding import EmbeddingParams, TimeSeries, delay_embed, select_shared_params
from .errors import DataError, TsNetError
from .features import assemble_features, feature_names
from .graph_metrics import (
    DiffusionConfig,
    dist_diffusion,
    dist_hop_on_optimal,
    dist_reciprocal_shortest,
    dist_shortest_unweighted,
)
from .networks import Graph, build_cgssn, build_hvg, build_knn, build_nvg, build_opn
from .persistence import PersistenceDiagram, betti_oracle, persist

__version__ = "0.1.0"
