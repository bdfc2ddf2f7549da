"""Number-of-paths statistics binned by Tx-Rx distance."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

from .measurements import LinkGroup

BIN_COLUMNS = ("lower_m", "upper_m", "links", "min", "q1", "median", "q3", "max")


@dataclass(frozen=True)
class NopBin:
    lower: float
    upper: float
    link_count: int
    median: float
    q1: float
    q3: float
    min: int
    max: int
    counts: Tuple[int, ...] = ()

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError("bin lower bound must be below upper bound")
        if not (self.min <= self.q1 <= self.median <= self.q3 <= self.max):
            raise ValueError("bin order statistics out of order")

    def row(self) -> tuple:
        return (self.lower, self.upper, self.link_count, self.min, self.q1, self.median,
                self.q3, self.max)


def count_paths(links: Iterable[LinkGroup]) -> List[Tuple[float, int]]:
    return [(link.distance, len(link)) for link in links]


def _order_stat(sorted_values: Sequence[int], fraction: float) -> int:
    # 1-based order statistic ceil(fraction * n); fraction 1/2 gives the lower median.
    n = len(sorted_values)
    k = max(1, math.ceil(fraction * n - 1e-12))
    return sorted_values[k - 1]


def bin_index(distance: float, width: float) -> int:
    return int(math.floor(distance / width))


def bin_by_distance(pairs: Iterable[Tuple[float, int]], width: float = 10.0) -> List[NopBin]:
    """Group (distance, nop) pairs into right-open bins [k w, (k+1) w).

    Quartiles are the order statistics ceil(n/4), ceil(n/2), ceil(3n/4), so
    even counts take the lower median and every statistic is an observed count.
    """
    if not width > 0:
        raise ValueError("bin width must be positive")
    buckets: Dict[int, List[int]] = {}
    for distance, nop in pairs:
        buckets.setdefault(bin_index(distance, width), []).append(int(nop))
    bins = []
    for k in sorted(buckets):
        values = sorted(buckets[k])
        bins.append(NopBin(lower=k * width, upper=(k + 1) * width, link_count=len(values),
                           median=_order_stat(values, 0.5), q1=_order_stat(values, 0.25),
                           q3=_order_stat(values, 0.75), min=values[0], max=values[-1],
                           counts=tuple(buckets[k])))
    return bins


def peak_bin(bins: Sequence[NopBin]) -> NopBin:
    """Bin with the largest median; ties go to the nearest bin."""
    if not bins:
        raise ValueError("no bins to choose from")
    return min(bins, key=lambda b: (-b.median, b.lower))


def bins_csv(bins: Sequence[NopBin]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BIN_COLUMNS)
    for b in bins:
        writer.writerow([f"{v:g}" for v in b.row()])
    return buf.getvalue()
