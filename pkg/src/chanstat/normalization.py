"""Free-space power normalization and first-arrival delay normalization.

Powers are path gains in dB, so the normalized power adds the free-space path
loss back: ``Pn = P + FSPL(d, f)``. A direct path that suffers only free-space
loss therefore lands at 0 dB.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import List, Tuple

from .measurements import LinkGroup, MeasurementSet, PathRecord

SPEED_OF_LIGHT = 299_792_458.0  # m/s


def fspl_db(distance: float, frequency: float) -> float:
    """Free-space path loss 20 log10(4 pi f d / c) in dB."""
    if not (distance > 0 and frequency > 0):
        raise ValueError("distance and frequency must be positive")
    return 20.0 * math.log10(4.0 * math.pi * frequency * distance / SPEED_OF_LIGHT)


def normalize_power(record: PathRecord) -> float:
    return record.power + fspl_db(record.distance, record.frequency)


@dataclass(frozen=True)
class NormalizedPath:
    excess_delay: float      # ns
    normalized_power: float  # dB
    location: str
    scenario: str
    link_id: str
    distance: float


def normalize_delays(link: LinkGroup) -> List[NormalizedPath]:
    """Excess delays relative to the link's first arrival, in delay order."""
    first = min(link.delays)
    loss = fspl_db(link.distance, link.frequency)
    return [NormalizedPath(delay - first, power + loss, link.location, link.scenario,
                           link.link_id, link.distance)
            for delay, power in link.paths]


def pdp_points(mset: MeasurementSet) -> List[Tuple[float, float, str]]:
    """(measured delay ns, normalized power dB, scenario) per record."""
    return [(r.delay, normalize_power(r), r.scenario) for r in mset.records]


def pdp_csv(points) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("delay_ns", "power_norm_db", "scenario"))
    for delay, power, scenario in points:
        writer.writerow((f"{delay:.9g}", f"{power:.9g}", scenario))
    return buf.getvalue()
