"""Ablation over (graph, distance) pairs, SNR sweeps and a synthetic suite."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..embedding import EmbeddingParams, TimeSeries, select_shared_params
from ..errors import TsNetError
from .config import DistanceType, GraphType, PipelineConfig, valid_combinations
from .evaluate import EvalReport, evaluate_baseline
from .io import Dataset
from .noise import inject_noise
from .run import run_pipeline


def make_synthetic_suite(
    n_per_class: int = 50,
    length: int = 200,
    seed: int = 42,
    noise_sd: float = 0.3,
    period_range: Tuple[float, float] = (10.0, 40.0),
) -> Dataset:
    """Noisy sinusoids (label ``sine``) followed by white noise (``noise``).

    Each sinusoid has unit amplitude, a period drawn uniformly from
    ``period_range``, a uniform random phase and additive Gaussian noise of
    standard deviation ``noise_sd``. White-noise series are standard normal.
    """
    rng = np.random.default_rng(seed)
    t = np.arange(length)
    series = []
    for k in range(n_per_class):
        period = rng.uniform(*period_range)
        phase = rng.uniform(0.0, 2 * np.pi)
        x = np.sin(2 * np.pi * t / period + phase) + noise_sd * rng.standard_normal(length)
        series.append(TimeSeries(x, "sine", f"sine:{k}"))
    for k in range(n_per_class):
        series.append(TimeSeries(rng.standard_normal(length), "noise", f"noise:{k}"))
    return Dataset(series, "synthetic")


@dataclass
class AblationTable:
    """Mean macro-F1 per (graph, distance); invalid pairs are absent."""

    cells: Dict[Tuple[GraphType, DistanceType], EvalReport] = field(default_factory=dict)

    def mean(self, graph, distance) -> Optional[float]:
        rep = self.cells.get((GraphType(graph), DistanceType(distance)))
        return None if rep is None else rep.mean

    def rows(self) -> List[List]:
        out = []
        for g in GraphType:
            row = [g.value]
            for d in DistanceType:
                row.append(self.mean(g, d))
            out.append(row)
        return out

    def to_text(self) -> str:
        head = ["graph"] + [d.value for d in DistanceType]
        lines = ["\t".join(head)]
        for row in self.rows():
            cells = [row[0]] + ["-" if v is None else f"{v:.4f}" for v in row[1:]]
            lines.append("\t".join(cells))
        return "\n".join(lines) + "\n"


def _shared_selection(ds: Dataset, cfg: PipelineConfig, graph: GraphType):
    if graph.family is None or (cfg.tau is not None and cfg.n is not None):
        return None
    return select_shared_params(
        ds.series, graph.family, subset_size=cfg.subset_size, tau=cfg.tau, n=cfg.n
    )


def ablation_matrix(
    ds: Dataset,
    base_cfg: PipelineConfig,
    K: int = 5,
    combinations: Optional[Sequence[Tuple[GraphType, DistanceType]]] = None,
) -> AblationTable:
    """Run every valid (graph, distance) pair and tabulate the baseline F1.

    Embedding parameters are selected once per graph type and shared by its
    distance variants.
    """
    ds.require_nonempty()
    combos = list(combinations) if combinations is not None else valid_combinations()
    table = AblationTable()
    selections: Dict[GraphType, Optional[EmbeddingParams]] = {}
    for g, d in combos:
        g, d = GraphType(g), DistanceType(d)
        cfg = base_cfg.with_(graph_type=g, distance_type=d)
        if g not in selections:
            selections[g] = _shared_selection(ds, cfg, g)
        res = run_pipeline(ds, cfg, selections[g])
        table.cells[(g, d)] = evaluate_baseline(res.features, res.labels, K, cfg.seed)
    return table


@dataclass
class SweepRow:
    snr_db: float
    report: EvalReport

    @property
    def mean(self) -> float:
        return self.report.mean

    @property
    def std(self) -> float:
        return self.report.std


def noisy_copy(ds: Dataset, snr_db: float, seed: int) -> Dataset:
    """Dataset with independent noise per series, seeded by ``(seed, index)``."""
    if math.isinf(snr_db) and snr_db > 0:
        return ds
    series = [inject_noise(s, snr_db, seed, k) for k, s in enumerate(ds.series)]
    return Dataset(series, f"{ds.name}@{snr_db:g}dB")


def noise_sweep(
    ds: Dataset, cfg: PipelineConfig, snrs: Sequence[float], K: int = 5
) -> List[SweepRow]:
    """Baseline F1 per SNR, rows in the order given.

    Embedding parameters are chosen on the clean data and held fixed for
    every noise level.
    """
    if len(snrs) == 0:
        raise TsNetError("snrs must be nonempty")
    ds.require_nonempty()
    selection = _shared_selection(ds, cfg, cfg.graph_type)
    rows = []
    for snr in snrs:
        noisy = noisy_copy(ds, float(snr), cfg.seed)
        res = run_pipeline(noisy, cfg, selection)
        rows.append(SweepRow(float(snr), evaluate_baseline(res.features, res.labels, K, cfg.seed)))
    return rows


def sweep_text(rows: Sequence[SweepRow]) -> str:
    lines = ["snr_db\tmean_f1\tstd_f1"]
    for r in rows:
        lines.append(f"{r.snr_db:g}\t{r.mean:.4f}\t{r.std:.4f}")
    return "\n".join(lines) + "\n"
