"""Dataset container, UCR TSV ingestion and feature CSV output."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Sequence, TextIO, Union

import numpy as np

from ..embedding import TimeSeries
from ..errors import EmptyDataset, EmptyFile, ParseError, TsNetError
from ..features import feature_names


@dataclass
class Dataset:
    """Labelled series; lengths may differ between series."""

    series: List[TimeSeries] = field(default_factory=list)
    name: str = "dataset"

    def __post_init__(self):
        for k, s in enumerate(self.series):
            if s.label is None or str(s.label) == "":
                raise TsNetError(f"series {k} has an empty label")
            if s.id is None:
                s.id = f"{self.name}:{k}"

    def __len__(self) -> int:
        return len(self.series)

    def __iter__(self):
        return iter(self.series)

    @property
    def labels(self) -> np.ndarray:
        return np.array([str(s.label) for s in self.series])

    def require_nonempty(self) -> None:
        if not self.series:
            raise EmptyDataset(f"dataset {self.name!r} has no series")

    @classmethod
    def from_arrays(cls, rows: Sequence[Sequence[float]], labels: Sequence, name: str = "dataset"):
        if len(rows) != len(labels):
            raise TsNetError("rows and labels differ in length")
        series = [
            TimeSeries(np.asarray(r, dtype=float), str(lab), f"{name}:{k}")
            for k, (r, lab) in enumerate(zip(rows, labels))
        ]
        return cls(series, name)


def _parse_line(line: str, lineno: int, name: str, index: int) -> TimeSeries:
    fields = line.split("\t")
    label = fields[0].strip()
    if not label:
        raise ParseError(f"line {lineno}: empty label", lineno)
    values = []
    for tok in fields[1:]:
        tok = tok.strip()
        try:
            values.append(float(tok))
        except ValueError:
            raise ParseError(f"line {lineno}: cannot parse value {tok!r}", lineno) from None
    arr = np.array(values, dtype=float)
    # UCR pads unequal-length series with trailing NaN
    keep = arr.size
    while keep > 0 and np.isnan(arr[keep - 1]):
        keep -= 1
    arr = arr[:keep]
    if arr.size == 0:
        raise ParseError(f"line {lineno}: no values after the label", lineno)
    if not np.all(np.isfinite(arr)):
        raise ParseError(f"line {lineno}: NaN or Inf inside the series", lineno)
    return TimeSeries(arr, label, f"{name}:{index}")


def load_ucr_tsv(path: Union[str, Path]) -> Dataset:
    """Read a UCR-archive TSV file: label, tab, tab-separated values per line."""
    path = Path(path)
    text = path.read_text()
    name = path.stem
    series = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        series.append(_parse_line(raw.rstrip("\r\n"), lineno, name, len(series)))
    if not series:
        raise EmptyFile(f"{path} contains no series")
    return Dataset(series, name)


def _fmt(v: float) -> str:
    return repr(float(v))


def write_feature_csv(features: np.ndarray, out: Union[str, Path, TextIO]) -> None:
    """Feature matrix as CSV with one header column per feature.

    Values use ``repr`` so the text round-trips to identical floats.
    """
    features = np.atleast_2d(np.asarray(features, dtype=float))
    header = feature_names((features.shape[1] - 18) // 2)
    if len(header) != features.shape[1]:
        raise TsNetError(f"unexpected feature width {features.shape[1]}")
    if isinstance(out, (str, Path)):
        with open(out, "w", newline="") as fh:
            write_feature_csv(features, fh)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in features:
        writer.writerow([_fmt(v) for v in row])


def feature_csv_text(features: np.ndarray) -> str:
    buf = io.StringIO()
    write_feature_csv(features, buf)
    return buf.getvalue()


def write_matrix_csv(D: np.ndarray, out: TextIO) -> None:
    """Square matrix as headerless CSV; ``inf`` entries are written as ``inf``."""
    writer = csv.writer(out, lineterminator="\n")
    for row in np.asarray(D, dtype=float):
        writer.writerow([_fmt(v) for v in row])
