"""Random SISO tap-delay-line channels drawn from fitted statistics.

A realization at Tx-Rx distance ``d`` has ``N`` taps. The first arrives at
``d / c``; the other ``N - 1`` excess delays are independent draws from the
delay distribution. Every tap draws a normalized power from the power
distribution and is placed at gain ``Pn - FSPL(d, f)``, undoing the power
normalization with the same link distance it was computed with. Phases are
independent and uniform on [0, 2 pi). ``N`` is either given or drawn
uniformly from the empirical path counts observed in the distance bin.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .distributions import DistributionSpec, quantile
from .gof import FitResult, ks_pvalue, ks_statistic
from .measurements import MeasurementSet, PathRecord
from .normalization import SPEED_OF_LIGHT, fspl_db
from .pathcount import NopBin, bin_index
from .rng import derive_seed, make_rng, open_uniforms

DEFAULT_MIN_R = 0.95


class SelectionError(ValueError):
    pass


@dataclass(frozen=True)
class Candidate:
    spec: DistributionSpec
    p_value: float
    qq_r: float


@dataclass(frozen=True)
class ChannelStatistics:
    location: str
    scenario: str
    power_spec: DistributionSpec
    delay_spec: DistributionSpec
    frequency: float
    nop_bins: Tuple[NopBin, ...] = ()
    bin_width: float = 10.0

    def __post_init__(self):
        object.__setattr__(self, "nop_bins", tuple(self.nop_bins))
        if self.delay_spec.loc != 0.0:
            raise ValueError(f"delay distribution must be located at 0, got {self.delay_spec.loc}")
        if not self.frequency > 0:
            raise ValueError("frequency must be positive")
        if not self.bin_width > 0:
            raise ValueError("bin width must be positive")

    def nop_samples(self, distance: float) -> Optional[Tuple[int, ...]]:
        k = bin_index(distance, self.bin_width)
        for b in self.nop_bins:
            if bin_index(b.lower + 0.5 * self.bin_width, self.bin_width) == k and b.counts:
                return b.counts
        return None


@dataclass(frozen=True)
class Tap:
    delay: float  # ns
    gain: float   # dB
    phase: float  # rad


@dataclass(frozen=True)
class PdpRealization:
    taps: Tuple[Tap, ...]
    distance: float
    seed: int

    @property
    def delays(self) -> np.ndarray:
        return np.array([t.delay for t in self.taps])

    @property
    def gains(self) -> np.ndarray:
        return np.array([t.gain for t in self.taps])

    @property
    def excess_delays(self) -> np.ndarray:
        d = self.delays
        return d - d[0]

    def to_dict(self) -> dict:
        return {"distance_m": self.distance, "seed": self.seed,
                "taps": [{"delay_ns": t.delay, "gain_db": t.gain, "phase_rad": t.phase}
                         for t in self.taps]}

    @classmethod
    def from_dict(cls, d: dict) -> "PdpRealization":
        taps = tuple(Tap(t["delay_ns"], t["gain_db"], t["phase_rad"]) for t in d["taps"])
        return cls(taps, float(d["distance_m"]), int(d["seed"]))


def select_spec(candidates: Sequence[Candidate], min_r: float = DEFAULT_MIN_R) -> DistributionSpec:
    """Highest KS p-value among candidates with Q-Q correlation >= ``min_r``.

    Ties keep the earlier candidate.
    """
    eligible = [c for c in candidates if c.qq_r >= min_r]
    if not eligible:
        listing = ", ".join(f"{c.spec.family.value} (p={c.p_value:.3g}, R={c.qq_r:.3g})"
                            for c in candidates) or "none"
        raise SelectionError(f"no candidate with R >= {min_r}; candidates: {listing}")
    best = eligible[0]
    for c in eligible[1:]:
        if c.p_value > best.p_value:
            best = c
    return best.spec


def candidates_from_fits(fits: Iterable[FitResult], quantity: str) -> List[Candidate]:
    return [Candidate(f.spec, f.p_value, f.qq_r) for f in fits
            if f.quantity == quantity and f.ok and f.spec is not None]


def build_statistics(fits: Sequence[FitResult], nop_bins: Sequence[NopBin], frequency: float,
                     min_r: float = DEFAULT_MIN_R, bin_width: float = 10.0,
                     location: Optional[str] = None,
                     scenario: Optional[str] = None) -> ChannelStatistics:
    """Pick the power and delay distributions for one (location, scenario)."""
    fits = [f for f in fits
            if (location is None or f.location == location)
            and (scenario is None or f.scenario == scenario)]
    if location is None or scenario is None:
        keys = {(f.location, f.scenario) for f in fits}
        if len(keys) != 1:
            raise SelectionError(f"fits span {len(keys)} location/scenario groups; pick one")
        location, scenario = next(iter(keys))
    power = select_spec(candidates_from_fits(fits, "power"), min_r)
    delay = select_spec(candidates_from_fits(fits, "delay"), min_r)
    return ChannelStatistics(location, scenario, power, delay, frequency, tuple(nop_bins),
                             bin_width)


def _draw(stats: ChannelStatistics, distance: float, seed: int, n_paths: Optional[int]):
    rng = make_rng(seed)
    if n_paths is None:
        counts = stats.nop_samples(distance)
        if counts is None:
            raise ValueError(f"no path-count data for distance {distance} m; give n_paths")
        n = int(counts[int(rng.integers(0, len(counts)))])
    else:
        n = int(n_paths)
    if n < 1:
        raise ValueError("a realization needs at least one path")
    u_delay = open_uniforms(rng, n - 1)
    u_power = open_uniforms(rng, n)
    phases = rng.uniform(0.0, 2.0 * math.pi, n)
    return u_delay, u_power, phases


def sample_ensemble(stats: ChannelStatistics, distance: float, seeds: Sequence[int],
                    n_paths: Optional[int] = None) -> List[PdpRealization]:
    """One realization per seed; identical to calling :func:`sample_pdp` per seed."""
    if not distance > 0:
        raise ValueError("distance must be positive")
    draws = [_draw(stats, distance, s, n_paths) for s in seeds]
    if not draws:
        return []
    u_delay = np.concatenate([d[0] for d in draws])
    u_power = np.concatenate([d[1] for d in draws])
    excess = np.atleast_1d(quantile(stats.delay_spec, u_delay)) if u_delay.size else u_delay
    norm_power = np.atleast_1d(quantile(stats.power_spec, u_power))
    first = distance / SPEED_OF_LIGHT * 1e9
    loss = fspl_db(distance, stats.frequency)

    out = []
    i_d = i_p = 0
    for seed, (ud, up, phases) in zip(seeds, draws):
        n = up.size
        ex = np.sort(excess[i_d:i_d + ud.size])
        pn = norm_power[i_p:i_p + n]
        i_d += ud.size
        i_p += n
        delays = [first] + [first + e for e in ex]
        taps = tuple(Tap(float(dl), float(p - loss), float(ph))
                     for dl, p, ph in zip(delays, pn, phases))
        out.append(PdpRealization(taps, float(distance), int(seed)))
    return out


def sample_pdp(stats: ChannelStatistics, distance: float, seed: int,
               n_paths: Optional[int] = None) -> PdpRealization:
    return sample_ensemble(stats, distance, [seed], n_paths)[0]


def ensemble_seeds(base_seed: int, count: int) -> List[int]:
    return [derive_seed(base_seed, i) for i in range(count)]


@dataclass(frozen=True)
class EnsembleCheck:
    realizations: int
    taps: int
    mean_excess_delay: Optional[float]
    delay_ks_p: Optional[float]
    power_ks_p: Optional[float]

    def to_dict(self) -> dict:
        return {"realizations": self.realizations, "taps": self.taps,
                "mean_excess_delay_ns": self.mean_excess_delay,
                "delay_ks_p": self.delay_ks_p, "power_ks_p": self.power_ks_p}


def pooled_draws(realizations: Sequence[PdpRealization], frequency: float):
    """Drawn excess delays (first arrival excluded) and normalized powers, pooled."""
    delays = [r.excess_delays[1:] for r in realizations]
    powers = [r.gains + fspl_db(r.distance, frequency) for r in realizations]
    cat = lambda xs: np.concatenate(xs) if xs else np.empty(0)
    return cat(delays), cat(powers)


def check_ensemble(realizations: Sequence[PdpRealization],
                   stats: ChannelStatistics) -> EnsembleCheck:
    delays, powers = pooled_draws(realizations, stats.frequency)

    def pval(x, spec):
        return ks_pvalue(ks_statistic(x, spec), x.size) if x.size else None

    return EnsembleCheck(len(realizations), int(powers.size),
                         float(delays.mean()) if delays.size else None,
                         pval(delays, stats.delay_spec), pval(powers, stats.power_spec))


@dataclass(frozen=True)
class Cir:
    """Complex taps on a uniform 1/bandwidth grid starting at the first arrival."""

    h: np.ndarray
    delays: np.ndarray  # ns, bin centers
    bandwidth: float

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("bin_index", "delay_ns", "re", "im"))
        for k, (d, v) in enumerate(zip(self.delays, self.h)):
            writer.writerow((k, f"{d:.9g}", repr(float(v.real)), repr(float(v.imag))))
        return buf.getvalue()


def pdp_to_cir(pdp: PdpRealization, bandwidth: float) -> Cir:
    """Bin taps to the nearest 1/bandwidth step and sum them coherently."""
    if not bandwidth > 0:
        raise ValueError("bandwidth must be positive")
    spacing = 1e9 / bandwidth  # ns
    first = pdp.taps[0].delay
    idx = np.array([int(round((t.delay - first) / spacing)) for t in pdp.taps])
    h = np.zeros(idx.max() + 1, dtype=complex)
    for k, t in zip(idx, pdp.taps):
        h[k] += 10.0 ** (t.gain / 20.0) * np.exp(1j * t.phase)
    return Cir(h, first + spacing * np.arange(h.size), bandwidth)


def realizations_to_measurements(realizations: Sequence[PdpRealization], location: str,
                                 scenario: str, frequency: float,
                                 provenance: str = "synthetic") -> MeasurementSet:
    """Turn realizations into path records, one link per realization."""
    records = [PathRecord(location, f"{location}-{scenario}-{i:05d}", scenario, r.distance,
                          t.delay, t.gain, frequency)
               for i, r in enumerate(realizations) for t in r.taps]
    return MeasurementSet(tuple(records), provenance)
