"""Published indoor D-band fit tables as ready-made channel statistics.

Rows are ``(family, p_value, R, loc, scale, shapes)``. ``shapes`` is None
where the published row cannot be turned into a valid distribution: Beta rows
list one shape for a two-shape family, and the Weibull delay rows list none.
Such rows keep their scores for reference but never win selection.
"""

from __future__ import annotations

from typing import Dict, List, Tuple

from .distributions import DistributionSpec
from .synthesis import Candidate, ChannelStatistics, DEFAULT_MIN_R, select_spec

FREQUENCY_HZ = {"Sello": 143.1e9, "Airport": 143.1e9, "TUAS": 142e9, "TUAS2": 142e9}

DATA_POINTS = {  # location -> (LOS, NLOS) path counts
    "Sello": (304, 29), "Airport": (375, 41), "TUAS": (29, 387), "TUAS2": (268, 1812),
}

POWER_TABLE: Dict[Tuple[str, str], List[tuple]] = {
    ("Sello", "LOS"): [
        ("normal", 0.0325, 0.97, -17, 7, ()),
        ("exponential", 9.4e-12, 0.97, -29, 12.1, ()),
        ("lognormal", 0.8526, 0.99, -35.5, 17.4, (0.37,)),
        ("rayleigh", 0.4456, 0.99, -29.6, 10.3, ()),
        ("rician", 0.4456, 0.99, -29.6, 10.3, (0,)),
        ("nakagami", 0.5238, 0.99, -29.3, 14.2, (0.876,)),
        ("gamma", 0.8106, 0.99, -30.7, 3.73, (3.66,)),
        ("beta", 0.8106, 0.99, -16.9, 7.14, None),
        ("loglogistic", 2.1e-34, 0.57, -29, 5.60, (0.84,)),
    ],
    ("Sello", "NLOS"): [
        ("normal", 0.0957, 0.92, -17.2, 4.93, ()),
        ("exponential", 0.8664, 0.96, -22.5, 5.31, ()),
        ("lognormal", 0.7512, 0.91, -23.1, 4.03, (0.91,)),
        ("rayleigh", 0.0741, 0.96, -24.95, 6.48, ()),
        ("rician", 0.0741, 0.96, -24.95, 6.48, (0,)),
        ("nakagami", 0.7722, 0.98, -22.53, 7.26, (0.88,)),
        ("gamma", 0.7210, 0.98, -22.53, 5.74, (0.88,)),
        ("beta", 0.8828, 0.98, -17.12, 5.69, None),
        ("loglogistic", 5.546e-05, 0.58, -22.53, 1.04, (0.83,)),
    ],
    ("Airport", "LOS"): [
        ("normal", 0.6897, 0.99, -16.08, 7.3, ()),
        ("exponential", 2.51e-24, 0.93, -32.42, 16.33, ()),
        ("lognormal", 0.8837, 0.99, -105.55, 89.16, (0.08,)),
        ("rayleigh", 0.0057, 0.99, -32.27, 16.3, ()),
        ("rician", 0.0, 0.27, -32.4, 2.21, (0,)),
        ("nakagami", 0.8393, 0.99, -41.2, 26.16, (3.04,)),
        ("gamma", 0.8927, 0.99, -72.57, 0.94, (59.7,)),
        ("beta", 0.8927, 0.99, -16, 7.31, None),
        ("loglogistic", 0.72, 0.99, -102.75, 86.38, (20.64,)),
    ],
    ("Airport", "NLOS"): [
        ("normal", 0.5092, 0.92, -20.56, 4.83, ()),
        ("exponential", 0.0141, 0.97, -27.95, 7.38, ()),
        ("lognormal", 0.8920, 0.97, -30.97, 9.48, (0.42,)),
        ("rayleigh", 0.7153, 0.96, -28.75, 6.72, ()),
        ("rician", 0.7153, 0.95, -28.75, 6.72, (0,)),
        ("nakagami", 0.8640, 0.96, -28.23, 9.06, (0.79,)),
        ("gamma", 1.5e-31, 0.97, -27.95, 1.55, (0.73,)),
        ("beta", 0.9718, 0.97, -20.56, 4.55, None),
        ("loglogistic", 7.6e-05, 0.78, -27.95, 4.14, (0.88,)),
    ],
    ("TUAS", "LOS"): [
        ("normal", 0.6357, 0.95, -14.38, 7, ()),
        ("exponential", 0.2978, 0.93, -24.56, 10.17, ()),
        ("lognormal", 0.9650, 0.94, -28.21, 12.12, (0.52,)),
        ("rayleigh", 0.7257, 0.97, -26.43, 9.85, ()),
        ("rician", 0.7257, 0.97, -26.43, 9.85, (0,)),
        ("nakagami", 0.9070, 0.97, -24.67, 12.44, (2.16,)),
        ("gamma", 0.9581, 0.96, -25.27, 5.04, (1.36,)),
        ("beta", 0.9581, 0.96, -14.39, 7.41, None),
        ("loglogistic", 2.37e-05, 0.47, -24.56, 3.38, (0.81,)),
    ],
    ("TUAS", "NLOS"): [
        ("normal", 0.0269, 0.97, -24.57, 5.88, ()),
        ("exponential", 7.37e-36, 0.90, -38.24, 13.67, ()),
        ("lognormal", 0.9235, 0.96, -48.56, 23.3, (0.24,)),
        ("rayleigh", 3.06e-05, 0.96, -32.5, 6.98, ()),
        ("rician", 0.1117, 0.96, -38.54, 6.6, (1.8,)),
        ("nakagami", 0.3818, 0.96, -39.53, 16.07, (1.78,)),
        ("gamma", 0.8315, 0.99, -42.47, 1.88, (9.50,)),
        ("beta", 0.8315, 0.99, -24.57, 5.8, None),
        ("loglogistic", 0.9695, 0.99, -46.11, 20.78, (6.62,)),
    ],
    ("TUAS2", "LOS"): [
        ("normal", 3.47e-04, 0.94, -16.7, 7.3, ()),
        ("exponential", 7.06e-15, 0.90, -29.9, 13.17, ()),
        ("lognormal", 0.2833, 0.98, -36.4, 18.38, (0.37,)),
        ("rayleigh", 0.0172, 0.98, -30.42, 11, ()),
        ("rician", 0.0172, 0.98, -30.42, 11, (0,)),
        ("nakagami", 0.0182, 0.98, -30.38, 15.51, (1,)),
        ("gamma", 0.1461, 0.99, -32.0, 3.51, (4.35,)),
        ("beta", 3.837e-04, 0.93, -16.7, 7.3, None),
        ("loglogistic", 0.70, 0.99, -33.79, 15.5, (4.04,)),
    ],
    ("TUAS2", "NLOS"): [
        ("normal", 9.88e-12, 0.98, -24.63, 6.5, ()),
        ("exponential", 8.969e-177, 0.24, -40.61, 15.86, ()),
        ("lognormal", 2.685e-03, 0.98, -50.15, 24.62, (0.24,)),
        ("rayleigh", 5.165e-06, 0.98, -37.34, 10, ()),
        ("rician", 2.920e-32, 0.98, -40.63, 12.1, (0.11,)),
        ("nakagami", 5.7e-07, 0.97, -41.7, 18.17, (1.8,)),
        ("gamma", 3.8e-04, 0.98, -44.4, 2.06, (9.56,)),
        ("beta", 3.837e-04, 0.98, -24.74, 6.37, None),
        ("loglogistic", 0.878, 0.98, -47.4, 21.7, (6.46,)),
    ],
}

DELAY_TABLE: Dict[Tuple[str, str], List[tuple]] = {
    ("Sello", "LOS"): [("exponential", 0.0401, 0.99, 0, 50.52, ()),
                       ("weibull", 0.0142, 0.99, 0, 52.72, None)],
    ("Sello", "NLOS"): [("exponential", 0.562, 0.99, 0, 43.51, ()),
                        ("weibull", 4.3e-22, 0.91, 0, 1.05, None)],
    ("Airport", "LOS"): [("exponential", 0.21, 0.99, 0, 69.7, ()),
                         ("weibull", 0.09, 0.99, 0, 71.65, None)],
    ("Airport", "NLOS"): [("exponential", 0.800, 0.99, 0, 81.21, ()),
                          ("weibull", 2.46e-66, 0.90, 0, 1.05, None)],
    ("TUAS", "LOS"): [("exponential", 0.161, 0.99, 0, 26.5, ()),
                      ("weibull", 4.87e-32, 0.91, 0, 1.05, None)],
    ("TUAS", "NLOS"): [("exponential", 0.002, 0.99, 0, 63.2, ()),
                       ("weibull", 0.0, 0.99, 0, 1.05, None)],
    ("TUAS2", "LOS"): [("exponential", 0.283, 0.99, 0, 37.5, ()),
                       ("weibull", 1e-262, 0.99, 0, 1.05, None)],
    ("TUAS2", "NLOS"): [("exponential", 0.0001, 0.99, 0, 55.7, ()),
                        ("weibull", 0.0, 0.99, 0, 1.05, None)],
}


def table_candidates(rows) -> List[Candidate]:
    return [Candidate(DistributionSpec(fam, loc, scale, shapes), p, r)
            for fam, p, r, loc, scale, shapes in rows if shapes is not None]


def preset_key(name: str) -> Tuple[str, str]:
    """'sello-los' -> ('Sello', 'LOS')."""
    loc, _, sc = name.strip().rpartition("-")
    for location in FREQUENCY_HZ:
        if location.lower() == loc.lower() and sc.upper() in ("LOS", "NLOS"):
            return location, sc.upper()
    raise KeyError(f"unknown preset {name!r}; choose from {', '.join(preset_names())}")


def preset_names() -> List[str]:
    return [f"{loc.lower()}-{sc.lower()}" for loc, sc in POWER_TABLE]


def preset(name: str, min_r: float = DEFAULT_MIN_R) -> ChannelStatistics:
    """Channel statistics for a published (location, scenario), without path counts."""
    key = preset_key(name)
    power = select_spec(table_candidates(POWER_TABLE[key]), min_r)
    delay = select_spec(table_candidates(DELAY_TABLE[key]), min_r)
    return ChannelStatistics(key[0], key[1], power, delay, FREQUENCY_HZ[key[0]])
