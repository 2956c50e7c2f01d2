"""Additive Gaussian noise at a prescribed signal-to-noise ratio."""
from __future__ import annotations

import math
from typing import Union

import numpy as np

from ..embedding import SeriesLike, TimeSeries, as_array
from ..errors import ZeroPowerSignal


def signal_power(x: SeriesLike) -> float:
    """Mean square of the centred samples."""
    y = as_array(x)
    return float(np.mean((y - y.mean()) ** 2))


def series_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for series ``index`` under global ``seed``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def inject_noise(
    x: SeriesLike, snr_db: float, seed: int = 42, index: int = 0
) -> Union[TimeSeries, np.ndarray]:
    """Add zero-mean Gaussian noise with power ``P_signal / 10**(snr_db/10)``.

    ``snr_db = inf`` returns the input unchanged. The returned object has the
    same type as ``x`` (a :class:`TimeSeries` keeps its label and id).
    """
    if math.isinf(snr_db) and snr_db > 0:
        return x
    power = signal_power(x)
    if power <= 0:
        raise ZeroPowerSignal("cannot set an SNR for a constant series")
    sigma = math.sqrt(power / 10 ** (snr_db / 10))
    y = as_array(x)
    noisy = y + series_rng(seed, index).normal(0.0, sigma, size=y.size)
    if isinstance(x, TimeSeries):
        return TimeSeries(noisy, x.label, x.id)
    return noisy
