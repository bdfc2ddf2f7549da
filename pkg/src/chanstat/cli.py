"""Command-line front end: ``chanstat {ingest,fit,gof,nop,synth}``.

Every command is deterministic given its input bytes, flags and seed. Output
files are written to a temporary name and renamed into place.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .distributions import Family, pdf
from .fitting import FitOptions
from .gof import evaluate, qq_points
from .measurements import (DELAY_UNITS, SURVEY_LOCATIONS, MeasurementSet, ParseError,
                           convert_table, filter_records, group_links, merge, read_records,
                           serialize_records, summary_counts)
from .normalization import pdp_csv, pdp_points
from .pathcount import BIN_COLUMNS, bin_by_distance, bins_csv, count_paths, peak_bin
from .pipeline import (collect_groups, fits_csv, fits_from_csv, report_from_dict,
                       report_json, run_fits)
from .presets import preset, preset_names
from .synthesis import (DEFAULT_MIN_R, ChannelStatistics, build_statistics, check_ensemble,
                        ensemble_seeds, pdp_to_cir, sample_ensemble)

SEED_ENV = "CHANSTAT_SEED"


class CliError(Exception):
    pass


@dataclass
class RunConfig:
    inputs: List[Path] = field(default_factory=list)
    out: Path = Path(".")
    location: Optional[str] = None
    scenario: Optional[str] = None
    families: Optional[List[Family]] = None
    fix_loc: bool = True
    bin_width: float = 10.0
    seed: int = 0
    fmt: str = "json"

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        families = None
        if getattr(args, "families", None):
            families = [Family.parse(f) for f in args.families.split(",") if f.strip()]
            if not families:
                raise CliError("--families must name at least one family")
        seed = args.seed
        if seed is None:
            env = os.environ.get(SEED_ENV)
            seed = int(env) if env not in (None, "") else 0
        if args.bin_width <= 0:
            raise CliError("--bin-width must be positive")
        return cls(inputs=[Path(p) for p in (args.input or [])], out=Path(args.out),
                   location=args.location, scenario=args.scenario, families=families,
                   fix_loc=args.fix_loc, bin_width=args.bin_width, seed=seed,
                   fmt=args.format)


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _safe(name: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in name)


def _pairs(items, flag: str) -> dict:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise CliError(f"{flag} expects NAME=VALUE, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def _read_one(path: Path, args) -> MeasurementSet:
    columns = _pairs(getattr(args, "column", None), "--column")
    if not columns:
        return read_records(path)
    constants = _pairs(getattr(args, "constant", None), "--constant")
    with open(path, newline="", encoding="utf-8") as fh:
        return convert_table(fh, columns, constants, args.delay_unit, args.power_is_loss,
                             str(path))


def _load_dataset(cfg: RunConfig, args=None) -> MeasurementSet:
    if not cfg.inputs:
        raise CliError("--input is required")
    sets = []
    for path in cfg.inputs:
        if not path.exists():
            raise CliError(f"{path}: no such file")
        try:
            sets.append(_read_one(path, args))
        except ParseError as exc:
            raise CliError(f"{path}: {exc}") from None
    try:
        mset = merge(sets) if len(sets) > 1 else sets[0]
    except ValueError as exc:
        raise CliError(str(exc)) from None
    return filter_records(mset, cfg.location, cfg.scenario)


def cmd_ingest(cfg: RunConfig, args) -> int:
    mset = _load_dataset(cfg, args)
    counts = summary_counts(mset, [loc for loc in SURVEY_LOCATIONS if loc in mset.locations])
    write_atomic(cfg.out / "dataset.csv", serialize_records(mset))
    if cfg.fmt == "json":
        write_atomic(cfg.out / "counts.json", _dump(counts.to_dict()))
    else:
        rows = [list(r) for r in counts.rows]
        rows.append(["Total", counts.totals["LOS"], counts.totals["NLOS"]])
        write_atomic(cfg.out / "counts.csv", _csv_text(("location", "LOS", "NLOS"), rows))
    print(f"ingested {len(mset)} records: LOS {counts.totals['LOS']}, "
          f"NLOS {counts.totals['NLOS']}")
    return 0


def cmd_fit(cfg: RunConfig, args) -> int:
    mset = _load_dataset(cfg)
    if len(mset) == 0:
        raise CliError("no records selected")
    opts = FitOptions(seed=cfg.seed)
    report = run_fits(mset, cfg.families, fix_delay_loc=cfg.fix_loc,
                      include_first_arrival=args.include_first_arrival,
                      bin_width=cfg.bin_width, opts=opts, jobs=args.jobs)
    if cfg.fmt == "json":
        write_atomic(cfg.out / "fits.json", report_json(report))
    else:
        write_atomic(cfg.out / "fits.csv", fits_csv(report))
    write_atomic(cfg.out / "pdp.csv", pdp_csv(pdp_points(mset)))
    for r in report.results:
        if not r.ok:
            print(f"error: {r.location}/{r.scenario} {r.quantity} {r.family.value}: {r.error}",
                  file=sys.stderr)
    return 1 if report.has_errors else 0


def _load_fits(path: Path):
    if not path.exists():
        raise CliError(f"{path}: no such file")
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".csv":
        return fits_from_csv(text), None
    report = report_from_dict(json.loads(text))
    return list(report.results), report


def cmd_gof(cfg: RunConfig, args) -> int:
    if not args.fits:
        raise CliError("--fits is required")
    fits, _ = _load_fits(Path(args.fits))
    mset = _load_dataset(cfg)
    data = {}
    for g in collect_groups(mset, args.include_first_arrival):
        data[(g.location, g.scenario, "power")] = g.powers
        data[(g.location, g.scenario, "delay")] = g.delays
    rows = []
    for fit in fits:
        if not fit.ok or (cfg.families and fit.family not in cfg.families):
            continue
        x = data.get((fit.location, fit.scenario, fit.quantity))
        if x is None or x.size == 0:
            continue
        rep = evaluate(x, fit.spec)
        stem = _safe(f"{fit.location}_{fit.scenario}_{fit.quantity}_{fit.family.value}")
        pts = qq_points(x, fit.spec)
        write_atomic(cfg.out / "qq" / f"{stem}.csv",
                     _csv_text(("theoretical", "empirical"),
                               [(f"{a:.9g}", f"{b:.9g}") for a, b in pts]))
        hist, edges = np.histogram(x, bins=args.hist_bins, density=True)
        centers = 0.5 * (edges[:-1] + edges[1:])
        write_atomic(cfg.out / "density" / f"{stem}.csv",
                     _csv_text(("x", "empirical_pdf", "model_pdf"),
                               [(f"{c:.9g}", f"{h:.9g}", f"{m:.9g}")
                                for c, h, m in zip(centers, hist, pdf(fit.spec, centers))]))
        rows.append({"location": fit.location, "scenario": fit.scenario,
                     "quantity": fit.quantity, "family": fit.family.value, "n": rep.n,
                     "ks_d": float(f"{rep.ks_d:.6g}"), "p_value": float(f"{rep.p_value:.6g}"),
                     "r": float(f"{rep.qq_r:.6g}"), "accept": rep.accepts(args.alpha)})
    if cfg.fmt == "json":
        write_atomic(cfg.out / "gof.json", _dump(rows))
    else:
        cols = ("location", "scenario", "quantity", "family", "n", "ks_d", "p_value", "r",
                "accept")
        write_atomic(cfg.out / "gof.csv", _csv_text(cols, [[r[c] for c in cols] for r in rows]))
    return 0


def cmd_nop(cfg: RunConfig, args) -> int:
    mset = _load_dataset(cfg)
    if len(mset) == 0:
        raise CliError("no records selected")
    keys = list(dict.fromkeys((r.location, r.scenario) for r in mset.records))
    summary, points = [], []
    for location, scenario in keys:
        links = group_links(filter_records(mset, location, scenario))
        pairs = count_paths(links)
        bins = bin_by_distance(pairs, cfg.bin_width)
        peak = peak_bin(bins)
        points += [(location, scenario, link.link_id, f"{link.distance:.9g}", len(link))
                   for link in links]
        write_atomic(cfg.out / "nop" / f"{_safe(location)}_{scenario}.csv", bins_csv(bins))
        summary.append({"location": location, "scenario": scenario,
                        "bin_width_m": cfg.bin_width,
                        "bins": [dict(zip(BIN_COLUMNS, b.row())) for b in bins],
                        "peak": {"lower_m": peak.lower, "upper_m": peak.upper,
                                 "median": peak.median}})
        print(f"{location}/{scenario}: peak median NoP {peak.median} "
              f"in [{peak.lower:g}, {peak.upper:g}) m")
    if cfg.fmt == "json":
        write_atomic(cfg.out / "nop.json", _dump(summary))
    else:
        rows = [[s["location"], s["scenario"], *b.values(),
                 b["lower_m"] == s["peak"]["lower_m"]]
                for s in summary for b in s["bins"]]
        write_atomic(cfg.out / "nop.csv",
                     _csv_text(("location", "scenario", *BIN_COLUMNS, "peak"), rows))
    write_atomic(cfg.out / "nop_points.csv",
                 _csv_text(("location", "scenario", "link_id", "distance_m", "nop"), points))
    return 0


def _synth_statistics(cfg: RunConfig, args) -> ChannelStatistics:
    if args.preset:
        try:
            return preset(args.preset, args.min_r)
        except KeyError as exc:
            raise CliError(str(exc.args[0])) from None
    if not cfg.inputs:
        raise CliError("synth needs --input <fit report> or --preset")
    fits, report = _load_fits(cfg.inputs[0])
    keys = list(dict.fromkeys((f.location, f.scenario) for f in fits
                              if (cfg.location is None or f.location == cfg.location)
                              and (cfg.scenario is None or f.scenario == cfg.scenario.upper())))
    if len(keys) != 1:
        raise CliError(f"select exactly one location/scenario (found {len(keys)}) "
                       "with --location/--scenario")
    location, scenario = keys[0]
    if not any(f.ok for f in fits if (f.location, f.scenario) == keys[0]):
        raise CliError(f"no successful fits for {location}/{scenario}")
    if report is None:
        if args.frequency is None:
            raise CliError("CSV fit reports carry no carrier frequency; pass --frequency")
        frequency, bins, width = args.frequency, (), cfg.bin_width
    else:
        group = report.group(location, scenario)
        frequency, bins, width = group.frequency, group.bins, group.bin_width
        if args.frequency is not None:
            frequency = args.frequency
    return build_statistics(fits, bins, frequency, args.min_r, width, location, scenario)


def cmd_synth(cfg: RunConfig, args) -> int:
    try:
        stats = _synth_statistics(cfg, args)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if args.count < 0:
        raise CliError("--count must be non-negative")
    if not args.distance > 0:
        raise CliError("--distance must be positive")
    seeds = ensemble_seeds(cfg.seed, args.count)
    try:
        reals = sample_ensemble(stats, args.distance, seeds, args.n_paths)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    check = check_ensemble(reals, stats)
    if cfg.fmt == "json":
        write_atomic(cfg.out / "realizations.json", _dump([r.to_dict() for r in reals]))
    else:
        rows = [(i, r.seed, repr(r.distance), repr(t.delay), repr(t.gain), repr(t.phase))
                for i, r in enumerate(reals) for t in r.taps]
        write_atomic(cfg.out / "realizations.csv",
                     _csv_text(("realization", "seed", "distance_m", "delay_ns", "gain_db",
                                "phase_rad"), rows))
    summary = {"location": stats.location, "scenario": stats.scenario,
               "distance_m": args.distance, "base_seed": cfg.seed,
               "power_spec": stats.power_spec.to_dict(),
               "delay_spec": stats.delay_spec.to_dict(), **check.to_dict()}
    write_atomic(cfg.out / "ensemble.json", _dump(summary))
    if args.bandwidth:
        rows = []
        for i, r in enumerate(reals):
            cir = pdp_to_cir(r, args.bandwidth)
            rows += [(i, k, f"{d:.9g}", repr(float(v.real)), repr(float(v.imag)))
                     for k, (d, v) in enumerate(zip(cir.delays, cir.h))]
        write_atomic(cfg.out / "cir.csv",
                     _csv_text(("realization", "bin_index", "delay_ns", "re", "im"), rows))
    print(f"wrote {len(reals)} realizations for {stats.location}/{stats.scenario}")
    return 0


COMMANDS = {"ingest": cmd_ingest, "fit": cmd_fit, "gof": cmd_gof, "nop": cmd_nop,
            "synth": cmd_synth}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", nargs="+", help="input file(s)")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--location")
    common.add_argument("--scenario", choices=["LOS", "NLOS", "los", "nlos"])
    common.add_argument("--families", help="comma-separated family names")
    common.add_argument("--fix-loc", action=argparse.BooleanOptionalAction, default=True,
                        help="pin delay-fit location at 0 (default on)")
    common.add_argument("--bin-width", type=float, default=10.0, help="NoP bin width in m")
    common.add_argument("--seed", type=int, default=None,
                        help=f"base seed (else ${SEED_ENV}, else 0)")
    common.add_argument("--format", choices=["json", "csv"], default="json")

    parser = argparse.ArgumentParser(prog="chanstat",
                                     description="Indoor multipath channel statistics")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("ingest", parents=[common], help="validate records and count them")
    p.add_argument("--column", action="append", metavar="NAME=SOURCE",
                   help="read canonical column NAME from source column SOURCE (repeatable); "
                        "enables conversion from another layout")
    p.add_argument("--constant", action="append", metavar="NAME=VALUE",
                   help="fill canonical column NAME with VALUE on every row (repeatable)")
    p.add_argument("--delay-unit", choices=sorted(DELAY_UNITS), default="ns")
    p.add_argument("--power-is-loss", action="store_true",
                   help="source power is a positive path loss")
    p = sub.add_parser("fit", parents=[common], help="fit power and delay distributions")
    p.add_argument("--include-first-arrival", action="store_true",
                   help="keep each link's zero excess delay in delay fits")
    p.add_argument("--jobs", type=int, default=1, help="parallel fit workers")
    p = sub.add_parser("gof", parents=[common], help="Q-Q and density plot data for fits")
    p.add_argument("--fits", help="fit report (fits.json or fits.csv)")
    p.add_argument("--alpha", type=float, default=0.05, help="KS significance threshold")
    p.add_argument("--hist-bins", type=int, default=30)
    p.add_argument("--include-first-arrival", action="store_true")
    sub.add_parser("nop", parents=[common], help="number-of-paths bin statistics")
    p = sub.add_parser("synth", parents=[common], help="synthesize PDP realizations")
    p.add_argument("--preset", help=f"built-in statistics: {', '.join(preset_names())}")
    p.add_argument("--distance", type=float, required=True, help="Tx-Rx distance in m")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--n-paths", type=int, default=None)
    p.add_argument("--bandwidth", type=float, default=None, help="also write CIR on this grid (Hz)")
    p.add_argument("--frequency", type=float, default=None, help="carrier override (Hz)")
    p.add_argument("--min-r", type=float, default=DEFAULT_MIN_R)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_args(args)
        return COMMANDS[args.command](cfg, args)
    except (CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
