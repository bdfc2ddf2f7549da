"""Per-(location, scenario) analysis: normalize, fit, score, count paths.

Delay fits use the excess delays of every path except each link's first
arrival, whose excess delay is zero by construction rather than a draw from
the delay distribution. ``include_first_arrival=True`` pools those zeros too.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np

from .distributions import DistributionSpec, Family
from .fitting import FitError, FitOptions, fit_mle
from .gof import FitResult, GofReport, evaluate
from .measurements import MeasurementSet, filter_records, group_links
from .normalization import normalize_delays, normalize_power
from .pathcount import NopBin, bin_by_distance, count_paths

POWER_FAMILIES = (Family.NORMAL, Family.EXPONENTIAL, Family.LOGNORMAL, Family.RAYLEIGH,
                  Family.RICIAN, Family.NAKAGAMI, Family.GAMMA, Family.BETA,
                  Family.LOGLOGISTIC)
DELAY_FAMILIES = (Family.EXPONENTIAL, Family.WEIBULL)

FIT_COLUMNS = ("location", "scenario", "quantity", "family", "n", "p_value", "r", "ks_d",
               "loc", "scale", "shape1", "shape2", "status", "error")


@dataclass(frozen=True)
class GroupData:
    location: str
    scenario: str
    frequency: float
    powers: np.ndarray   # normalized, dB
    delays: np.ndarray   # excess, ns
    nop_pairs: Tuple[Tuple[float, int], ...]


@dataclass(frozen=True)
class GroupSummary:
    location: str
    scenario: str
    frequency: float
    n_records: int
    n_links: int
    bin_width: float
    bins: Tuple[NopBin, ...]


@dataclass(frozen=True)
class FitReport:
    results: Tuple[FitResult, ...]
    groups: Tuple[GroupSummary, ...]

    @property
    def has_errors(self) -> bool:
        return any(not r.ok for r in self.results)

    def group(self, location: str, scenario: str) -> GroupSummary:
        for g in self.groups:
            if g.location == location and g.scenario == scenario:
                return g
        raise KeyError(f"no group {location}/{scenario} in report")


def collect_groups(mset: MeasurementSet, include_first_arrival: bool = False) -> List[GroupData]:
    keys = list(dict.fromkeys((r.location, r.scenario) for r in mset.records))
    out = []
    for location, scenario in keys:
        sub = filter_records(mset, location, scenario)
        freqs = {r.frequency for r in sub.records}
        if len(freqs) != 1:
            raise ValueError(f"{location}/{scenario} mixes carrier frequencies {sorted(freqs)}")
        links = group_links(sub)
        delays = []
        for link in links:
            norm = normalize_delays(link)
            start = 0 if include_first_arrival else 1
            delays.extend(p.excess_delay for p in norm[start:])
        out.append(GroupData(location, scenario, freqs.pop(),
                             np.array([normalize_power(r) for r in sub.records]),
                             np.array(delays), tuple(count_paths(links))))
    return out


def _fit_task(task) -> FitResult:
    location, scenario, quantity, family, data, opts = task
    try:
        spec = fit_mle(family, data, opts)
        return FitResult(location, scenario, quantity, family, int(data.size), spec,
                         evaluate(data, spec))
    except (FitError, ValueError) as exc:
        return FitResult(location, scenario, quantity, family, int(data.size), error=str(exc))


def run_fits(mset: MeasurementSet, families: Optional[Iterable] = None,
             fix_delay_loc: bool = True, include_first_arrival: bool = False,
             bin_width: float = 10.0, opts: FitOptions = FitOptions(),
             jobs: int = 1) -> FitReport:
    """Fit power and delay families for every (location, scenario) in ``mset``."""
    wanted = None if families is None else {Family.parse(f) for f in families}
    groups = collect_groups(mset, include_first_arrival)
    delay_opts = FitOptions(0.0 if fix_delay_loc else None, opts.tolerance,
                            opts.max_evaluations, opts.seed, opts.extra_starts)
    tasks = []
    for g in groups:
        for fam in POWER_FAMILIES:
            if wanted is None or fam in wanted:
                tasks.append((g.location, g.scenario, "power", fam, g.powers, opts))
        for fam in DELAY_FAMILIES:
            if wanted is None or fam in wanted:
                tasks.append((g.location, g.scenario, "delay", fam, g.delays, delay_opts))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_fit_task, tasks))
    else:
        results = [_fit_task(t) for t in tasks]
    summaries = tuple(
        GroupSummary(g.location, g.scenario, g.frequency, int(g.powers.size),
                     len(g.nop_pairs), bin_width,
                     tuple(bin_by_distance(g.nop_pairs, bin_width)))
        for g in groups)
    return FitReport(tuple(results), summaries)


def _sig(value, digits: int = 6):
    return None if value is None else float(f"{value:.{digits}g}")


def fit_row(r: FitResult) -> dict:
    spec = r.spec.to_dict() if r.spec else None
    return {"location": r.location, "scenario": r.scenario, "quantity": r.quantity,
            "family": r.family.value, "n": r.n,
            "p_value": _sig(r.p_value), "r": _sig(r.qq_r),
            "ks_d": _sig(r.gof.ks_d) if r.gof else None,
            "spec": spec, "status": "ok" if r.ok else "error", "error": r.error}


def report_to_dict(report: FitReport) -> dict:
    return {
        "fits": [fit_row(r) for r in report.results],
        "groups": [{
            "location": g.location, "scenario": g.scenario, "frequency_hz": g.frequency,
            "records": g.n_records, "links": g.n_links, "bin_width_m": g.bin_width,
            "nop_bins": [{"lower_m": b.lower, "upper_m": b.upper, "links": b.link_count,
                          "min": b.min, "q1": b.q1, "median": b.median, "q3": b.q3,
                          "max": b.max, "counts": list(b.counts)} for b in g.bins],
        } for g in report.groups],
    }


def report_from_dict(d: dict) -> FitReport:
    results = []
    for row in d["fits"]:
        spec = DistributionSpec.from_dict(row["spec"]) if row.get("spec") else None
        gof = None
        if spec is not None and row.get("p_value") is not None:
            gof = GofReport(row["ks_d"], row["p_value"], row["r"], row["n"], spec)
        results.append(FitResult(row["location"], row["scenario"], row["quantity"],
                                 Family.parse(row["family"]), row["n"], spec, gof,
                                 row.get("error")))
    groups = []
    for g in d.get("groups", []):
        bins = tuple(NopBin(b["lower_m"], b["upper_m"], b["links"], b["median"], b["q1"],
                            b["q3"], b["min"], b["max"], tuple(b.get("counts", ())))
                     for b in g["nop_bins"])
        groups.append(GroupSummary(g["location"], g["scenario"], g["frequency_hz"],
                                   g["records"], g["links"], g["bin_width_m"], bins))
    return FitReport(tuple(results), tuple(groups))


def report_json(report: FitReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def fits_csv(report: FitReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIT_COLUMNS)
    for r in report.results:
        row = fit_row(r)
        spec = row["spec"] or {"loc": None, "scale": None, "shapes": []}
        shapes = list(spec["shapes"]) + [None, None]
        writer.writerow([_cell(v) for v in (
            row["location"], row["scenario"], row["quantity"], row["family"], row["n"],
            row["p_value"], row["r"], row["ks_d"], spec["loc"], spec["scale"],
            shapes[0], shapes[1], row["status"], row["error"])])
    return buf.getvalue()


def fits_from_csv(text: str) -> List[FitResult]:
    results = []
    for row in csv.DictReader(io.StringIO(text)):
        fam = Family.parse(row["family"])
        num = lambda k: float(row[k]) if row[k] != "" else None
        spec = gof = None
        if row["status"] == "ok":
            shapes = [float(row[k]) for k in ("shape1", "shape2") if row[k] != ""]
            spec = DistributionSpec(fam, num("loc"), num("scale"), shapes)
            gof = GofReport(num("ks_d"), num("p_value"), num("r"), int(row["n"]), spec)
        results.append(FitResult(row["location"], row["scenario"], row["quantity"], fam,
                                 int(row["n"]), spec, gof, row["error"] or None))
    return results
