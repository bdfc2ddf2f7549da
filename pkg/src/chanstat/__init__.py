"""Statistical channel modelling for indoor sub-THz multipath measurements.

Typical flow: read path records, normalize power and delay, fit candidate
distributions by maximum likelihood, score them with the KS test and Q-Q
correlation, bin path counts by distance, and draw synthetic power-delay
profiles from the selected statistics.
"""

from .distributions import (DistributionSpec, Family, cdf, log_likelihood, logpdf, mean, pdf,
                            quantile, sample)
from .fitting import FitError, FitOptions, fit_mle
from .gof import FitResult, GofReport, evaluate, ks_pvalue, ks_statistic, qq_correlation
from .measurements import (LinkGroup, MeasurementSet, ParseError, PathRecord, filter_records,
                           group_links, parse_records, read_records, summary_counts)
from .normalization import fspl_db, normalize_delays, normalize_power
from .pathcount import NopBin, bin_by_distance, count_paths, peak_bin
from .pipeline import FitReport, run_fits
from .presets import preset, preset_names
from .synthesis import (ChannelStatistics, PdpRealization, build_statistics, pdp_to_cir,
                        sample_ensemble, sample_pdp, select_spec)

__version__ = "0.1.0"

__all__ = [
    "DistributionSpec", "Family", "cdf", "log_likelihood", "logpdf", "mean", "pdf", "quantile",
    "sample", "FitError", "FitOptions", "fit_mle", "FitResult", "GofReport", "evaluate",
    "ks_pvalue", "ks_statistic", "qq_correlation", "LinkGroup", "MeasurementSet", "ParseError",
    "PathRecord", "filter_records", "group_links", "parse_records", "read_records",
    "summary_counts", "fspl_db", "normalize_delays", "normalize_power", "NopBin",
    "bin_by_distance", "count_paths", "peak_bin", "FitReport", "run_fits", "preset",
    "preset_names", "ChannelStatistics", "PdpRealization", "build_statistics", "pdp_to_cir",
    "sample_ensemble", "sample_pdp", "select_spec",
]
