"""Delay-coordinate embedding and data-driven selection of delay and dimension.

Two selection families are provided:

* mutual information for the delay plus false nearest neighbours for the
  dimension (used for the coarse-grained state-space and k-NN graphs);
* multiscale permutation entropy for both delay and dimension (used for the
  ordinal partition network).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy.spatial import cKDTree

from .errors import EmptyDataset, SeriesTooShort, TsNetError


@dataclass
class TimeSeries:
    """A finite univariate signal with an optional class label and id."""

    values: np.ndarray
    label: Optional[str] = None
    id: Optional[str] = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64).ravel()
        if self.values.size < 1:
            raise TsNetError("a time series needs at least one sample")
        if not np.all(np.isfinite(self.values)):
            raise TsNetError(f"series {self.id!r} contains NaN or Inf samples")

    def __len__(self) -> int:
        return self.values.size


SeriesLike = Union[TimeSeries, Sequence[float], np.ndarray]


def as_array(x: SeriesLike) -> np.ndarray:
    if isinstance(x, TimeSeries):
        return x.values
    arr = np.asarray(x, dtype=np.float64).ravel()
    if arr.size < 1:
        raise TsNetError("a time series needs at least one sample")
    if not np.all(np.isfinite(arr)):
        raise TsNetError("series contains NaN or Inf samples")
    return arr


class Method(str, Enum):
    MI_FNN = "MI+FNN"
    MSPE = "MsPE"


class Family(str, Enum):
    OPN = "OPN"
    CGSSN_KNN = "CGSSN_KNN"


@dataclass(frozen=True)
class EmbeddingParams:
    tau: int
    n: int
    method: Method = Method.MI_FNN
    per_series: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.tau < 1 or self.n < 2:
            raise TsNetError(f"invalid embedding parameters tau={self.tau}, n={self.n}")


# ---------------------------------------------------------------------------
# Embedding


def delay_embed(x: SeriesLike, tau: int, n: int) -> np.ndarray:
    """Return the ``N x n`` matrix of delay vectors, ``N = L - (n-1) tau``.

    Row ``i`` is ``(x[i], x[i+tau], ..., x[i+(n-1)tau])``.
    """
    arr = as_array(x)
    if tau < 1 or n < 1:
        raise TsNetError(f"tau and n must be positive (tau={tau}, n={n})")
    span = (n - 1) * tau
    if arr.size < span + 1:
        raise SeriesTooShort(
            f"series of length {arr.size} cannot be embedded with n={n}, tau={tau} "
            f"(needs {span + 1} samples)"
        )
    count = arr.size - span
    idx = np.arange(count)[:, None] + tau * np.arange(n)[None, :]
    return arr[idx]


# ---------------------------------------------------------------------------
# Mutual information


def _mi_bins(length: int) -> int:
    return max(1, math.ceil(math.sqrt(length)))


def mutual_information(x: SeriesLike, tau: int, bins: Optional[int] = None) -> float:
    """Histogram estimate (natural log) of the mutual information between
    ``x[i]`` and ``x[i+tau]``.

    Bin edges are equal-width over the range of the whole series and the
    number of bins defaults to ``ceil(sqrt(L))``.
    """
    arr = as_array(x)
    if tau < 1 or arr.size <= tau:
        raise SeriesTooShort(f"need more than {tau} samples for delay {tau}")
    lo, hi = float(arr.min()), float(arr.max())
    if hi == lo:
        return 0.0
    nb = bins if bins is not None else _mi_bins(arr.size)
    joint, _, _ = np.histogram2d(arr[:-tau], arr[tau:], bins=nb, range=[[lo, hi], [lo, hi]])
    pxy = joint / joint.sum()
    px = pxy.sum(axis=1)
    py = pxy.sum(axis=0)
    nz = pxy > 0
    outer = np.outer(px, py)
    mi = float(np.sum(pxy[nz] * np.log(pxy[nz] / outer[nz])))
    return max(mi, 0.0)


def mi_curve(x: SeriesLike, tau_max: int) -> np.ndarray:
    """Mutual information for ``tau = 1..tau_max`` (index 0 is tau=1)."""
    return np.array([mutual_information(x, t) for t in range(1, tau_max + 1)])


def select_delay_mi(x: SeriesLike, tau_max: int = 50) -> int:
    """First local minimum of the mutual information curve.

    Falls back to the (first) global minimiser over ``[1, tau_max]`` when the
    curve has no interior local minimum.
    """
    arr = as_array(x)
    if tau_max < 2:
        raise TsNetError("tau_max must be at least 2")
    if arr.size <= tau_max:
        raise SeriesTooShort(f"series of length {arr.size} too short for tau_max={tau_max}")
    curve = mi_curve(arr, tau_max)
    for tau in range(2, tau_max):
        if curve[tau - 2] > curve[tau - 1] < curve[tau]:
            return tau
    return int(np.argmin(curve)) + 1


# ---------------------------------------------------------------------------
# Permutation entropy


def ordinal_patterns(points: np.ndarray) -> np.ndarray:
    """Ordinal pattern of every row; ties keep temporal order."""
    return np.argsort(points, axis=1, kind="stable")


def permutation_entropy(x: SeriesLike, n: int, tau: int) -> float:
    """Normalised permutation entropy ``H / log2(n!)`` in [0, 1]."""
    pts = delay_embed(x, tau, n)
    patterns = ordinal_patterns(pts)
    _, counts = np.unique(patterns, axis=0, return_counts=True)
    p = counts / counts.sum()
    h = float(-np.sum(p * np.log2(p)))
    return max(h, 0.0) / math.log2(math.factorial(n))


def first_crossing(values: Sequence[float], factor: float = 0.95) -> int:
    """Index of the first value reaching ``factor * max(values)``."""
    vals = np.asarray(values, dtype=float)
    target = factor * vals.max()
    return int(np.flatnonzero(vals >= target)[0])


def first_argmax(values: Sequence[float], atol: float = 1e-12) -> int:
    """Index of the maximum; near-equal maxima go to the earliest index."""
    vals = np.asarray(values, dtype=float)
    return int(np.flatnonzero(vals >= vals.max() - atol)[0])


def select_delay_mspe(
    x: SeriesLike,
    n_probe: int = 3,
    tau_max: int = 7,
    tau_min: int = 1,
    factor: float = 0.95,
) -> int:
    """Smallest delay whose normalised permutation entropy reaches
    ``factor`` times the maximum over ``[tau_min, tau_max]``."""
    if not 3 <= n_probe <= 7:
        raise TsNetError("n_probe must lie in [3, 7]")
    arr = as_array(x)
    if arr.size < (n_probe - 1) * tau_max + 2:
        raise SeriesTooShort(
            f"series of length {arr.size} too short for n={n_probe}, tau_max={tau_max}"
        )
    taus = range(tau_min, tau_max + 1)
    h = [permutation_entropy(arr, n_probe, t) for t in taus]
    return tau_min + first_crossing(h, factor)


def select_dim_mspe(x: SeriesLike, tau: int, n_min: int = 3, n_max: int = 7) -> int:
    """Dimension in ``[n_min, n_max]`` maximising normalised permutation
    entropy at the given delay; ties go to the smaller dimension."""
    if not 3 <= n_min <= n_max <= 7:
        raise TsNetError("need 3 <= n_min <= n_max <= 7")
    arr = as_array(x)
    if arr.size < (n_max - 1) * tau + 2:
        raise SeriesTooShort(f"series of length {arr.size} too short for n={n_max}, tau={tau}")
    h = np.array([permutation_entropy(arr, n, tau) for n in range(n_min, n_max + 1)])
    return n_min + first_argmax(h)


# ---------------------------------------------------------------------------
# False nearest neighbours


def fnn_fraction(
    x: SeriesLike, tau: int, n: int, r_tol: float = 15.0, dup_rtol: float = 1e-9
) -> float:
    """Fraction of nearest neighbours in dimension ``n`` that separate by more
    than ``r_tol`` times their distance once coordinate ``n+1`` is added.

    Only points that have an ``(n+1)``-th coordinate are used; points whose
    nearest neighbour coincides with them are skipped. "Coincides" allows
    ``dup_rtol`` times the series range, so that duplicates produced by exact
    periodicity survive floating-point rounding.
    """
    arr = as_array(x)
    count = arr.size - n * tau
    if count < 2:
        raise SeriesTooShort(f"series of length {arr.size} too short for FNN at n={n}, tau={tau}")
    pts = delay_embed(arr[: count + (n - 1) * tau], tau, n)
    dist, idx = cKDTree(pts).query(pts, k=2)
    # k=2 can return the point itself second when duplicates exist; distance is 0 either way
    nn = np.where(idx[:, 0] == np.arange(count), idx[:, 1], idx[:, 0])
    r = dist[:, 1]
    valid = r > dup_rtol * float(np.ptp(arr))
    if not np.any(valid):
        return 0.0
    i = np.flatnonzero(valid)
    j = nn[valid]
    gap = np.abs(arr[i + n * tau] - arr[j + n * tau])
    return float(np.mean(gap / r[valid] > r_tol))


def select_dim_fnn(
    x: SeriesLike,
    tau: int,
    n_max: int = 7,
    r_tol: float = 15.0,
    frac_threshold: float = 0.01,
) -> int:
    """Smallest ``n`` in ``[2, n_max]`` whose FNN fraction is below
    ``frac_threshold``; ``n_max`` if none qualifies."""
    if n_max < 2:
        raise TsNetError("n_max must be at least 2")
    arr = as_array(x)
    for n in range(2, n_max + 1):
        if arr.size - n * tau < 2:
            if n == 2:
                raise SeriesTooShort(
                    f"series of length {arr.size} too short for FNN with tau={tau}"
                )
            return n
        if fnn_fraction(arr, tau, n, r_tol) < frac_threshold:
            return n
    return n_max


# ---------------------------------------------------------------------------
# Dataset-level parameter sharing


def lower_median(values: Iterable[int]) -> int:
    vals = sorted(values)
    if not vals:
        raise EmptyDataset("median of an empty list")
    return int(vals[(len(vals) - 1) // 2])


def default_mi_tau_max(length: int, cap: int = 50) -> int:
    return max(2, min(cap, length // 4))


def series_params(
    x: SeriesLike,
    family: Family | str,
    tau: Optional[int] = None,
    n: Optional[int] = None,
    mspe_tau_max: int = 7,
    mspe_n_probe: int = 3,
    n_range: tuple[int, int] = (3, 7),
    mi_tau_max: Optional[int] = None,
    fnn_n_max: int = 7,
) -> tuple[int, int]:
    """Select ``(tau, n)`` for one series. Fixed values are used verbatim."""
    family = Family(family)
    arr = as_array(x)
    if family is Family.OPN:
        if tau is None:
            tau = select_delay_mspe(arr, n_probe=mspe_n_probe, tau_max=mspe_tau_max)
        if n is None:
            n = select_dim_mspe(arr, tau, *n_range)
    else:
        if tau is None:
            tmax = mi_tau_max if mi_tau_max is not None else default_mi_tau_max(arr.size)
            tau = select_delay_mi(arr, tmax)
        if n is None:
            n = select_dim_fnn(arr, tau, n_max=fnn_n_max)
    return int(tau), int(n)


def select_shared_params(
    dataset: Sequence[SeriesLike],
    family: Family | str,
    subset_size: int = 30,
    **kwargs,
) -> EmbeddingParams:
    """Per-series selection on the first ``subset_size`` series, then the
    component-wise lower median, meant to be shared by the whole dataset.

    Extra keyword arguments are forwarded to :func:`series_params`.
    """
    family = Family(family)
    if subset_size < 1:
        raise TsNetError("subset_size must be at least 1")
    subset = list(dataset)[:subset_size]
    if not subset:
        raise EmptyDataset("cannot select parameters for an empty dataset")
    picks = [series_params(s, family, **kwargs) for s in subset]
    method = Method.MSPE if family is Family.OPN else Method.MI_FNN
    return EmbeddingParams(
        tau=lower_median(p[0] for p in picks),
        n=lower_median(p[1] for p in picks),
        method=method,
        per_series=tuple(picks),
    )
