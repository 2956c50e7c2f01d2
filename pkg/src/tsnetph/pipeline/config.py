"""Pipeline configuration and the (graph, distance) validity rule."""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import List, Optional, Tuple

from ..embedding import Family
from ..errors import ConfigError


class GraphType(str, Enum):
    NVG = "nvg"
    HVG = "hvg"
    OPN = "opn"
    CGSSN = "cgssn"
    KNN = "knn"

    @property
    def weighted(self) -> bool:
        return self in (GraphType.OPN, GraphType.CGSSN)

    @property
    def family(self) -> Optional[Family]:
        """Parameter-selection family, or ``None`` for visibility graphs."""
        if self is GraphType.OPN:
            return Family.OPN
        if self in (GraphType.CGSSN, GraphType.KNN):
            return Family.CGSSN_KNN
        return None


class DistanceType(str, Enum):
    SP = "sp"
    SP_HOP = "sp-hop"
    SP_RECIP = "sp-recip"
    DIFFUSION = "diffusion"

    @property
    def needs_weights(self) -> bool:
        return self in (DistanceType.SP_HOP, DistanceType.SP_RECIP)


def is_valid_combination(graph: GraphType | str, distance: DistanceType | str) -> bool:
    g, d = GraphType(graph), DistanceType(distance)
    return g.weighted or not d.needs_weights


def valid_combinations() -> List[Tuple[GraphType, DistanceType]]:
    return [(g, d) for g in GraphType for d in DistanceType if is_valid_combination(g, d)]


STATE_CAP = 4096


def cap_state_space(n: int, b: int, cap: int = STATE_CAP) -> Tuple[int, int]:
    """Shrink ``n`` first, then ``b``, until ``b**n <= cap``."""
    while b**n > cap and n > 2:
        n -= 1
    while b**n > cap and b > 2:
        b -= 1
    return n, b


@dataclass(frozen=True)
class PipelineConfig:
    """Everything that determines a feature matrix besides the data.

    ``tau`` and ``n`` override data-driven selection when given; ``bins``
    and ``k`` are the CGSSN bin count and the k-NN neighbour count;
    ``diffusion_t`` overrides the per-graph walk length.
    """

    graph_type: GraphType = GraphType.CGSSN
    distance_type: DistanceType = DistanceType.DIFFUSION
    tau: Optional[int] = None
    n: Optional[int] = None
    bins: int = 8
    k: int = 5
    normalize: bool = False
    diffusion_t: Optional[int] = None
    seed: int = 42
    subset_size: int = 30

    def __post_init__(self):
        try:
            object.__setattr__(self, "graph_type", GraphType(self.graph_type))
            object.__setattr__(self, "distance_type", DistanceType(self.distance_type))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if not is_valid_combination(self.graph_type, self.distance_type):
            raise ConfigError(
                f"{self.graph_type.value} is unweighted; "
                f"distance {self.distance_type.value!r} needs edge weights"
            )
        if self.tau is not None and self.tau < 1:
            raise ConfigError("tau must be at least 1")
        if self.n is not None and self.n < 2:
            raise ConfigError("n must be at least 2")
        if self.graph_type is GraphType.OPN and self.n is not None and self.n > 7:
            raise ConfigError("OPN dimension is limited to n <= 7")
        if self.bins < 2:
            raise ConfigError("bins must be at least 2")
        if self.k < 1:
            raise ConfigError("k must be at least 1")
        if self.diffusion_t is not None and self.diffusion_t < 1:
            raise ConfigError("diffusion walk length must be at least 1")
        if self.subset_size < 1:
            raise ConfigError("subset_size must be at least 1")

    def with_(self, **changes) -> "PipelineConfig":
        return replace(self, **changes)
