import numpy as np
import pytest

from chanstat.distributions import DistributionSpec, Family

# Five parameter points per family, spanning light and heavy shapes.
SPEC_POINTS = {
    Family.NORMAL: [(0, 1, ()), (-17, 7, ()), (-24.57, 5.88, ()), (3, 0.2, ()), (100, 40, ())],
    Family.EXPONENTIAL: [(0, 1, ()), (0, 50.52, ()), (-29, 12.1, ()), (-22.5, 5.31, ()),
                         (5, 0.3, ())],
    Family.LOGNORMAL: [(0, 1, (1.0,)), (-35.5, 17.4, (0.37,)), (-105.55, 89.16, (0.08,)),
                       (-23.1, 4.03, (0.91,)), (2, 3, (1.8,))],
    Family.RAYLEIGH: [(0, 1, ()), (-29.6, 10.3, ()), (-24.95, 6.48, ()), (-37.34, 10, ()),
                      (1, 0.05, ())],
    Family.RICIAN: [(0, 1, (0.0,)), (-38.54, 6.6, (1.8,)), (-40.63, 12.1, (0.11,)),
                    (0, 2, (5.0,)), (-10, 3, (12.0,))],
    Family.NAKAGAMI: [(0, 1, (1.0,)), (-29.3, 14.2, (0.876,)), (-41.2, 26.16, (3.04,)),
                      (-28.23, 9.06, (0.79,)), (0, 2, (0.6,))],
    Family.GAMMA: [(0, 1, (1.0,)), (-30.7, 3.73, (3.66,)), (-72.57, 0.94, (59.7,)),
                   (-27.95, 1.55, (0.73,)), (0, 2, (0.5,))],
    Family.BETA: [(0, 1, (1.0, 1.0)), (-17.12, 5.69, (2.5, 3.5)), (-16, 7.31, (0.8, 0.7)),
                  (0, 2, (5.0, 1.5)), (-3, 10, (1.5, 20.0))],
    Family.LOGLOGISTIC: [(0, 1, (2.0,)), (-46.11, 20.78, (6.62,)), (-29, 5.6, (0.84,)),
                         (-33.79, 15.5, (4.04,)), (0, 3, (1.5,))],
    Family.WEIBULL: [(0, 1, (1.0,)), (0, 52.72, (1.1,)), (0, 10, (0.6,)), (-5, 3, (2.5,)),
                     (0, 1, (5.0,))],
}


def all_specs():
    return [DistributionSpec(fam, loc, scale, shapes)
            for fam, points in SPEC_POINTS.items() for loc, scale, shapes in points]


def spec_id(spec):
    return f"{spec.family.value}-{spec.loc:g}-{spec.scale:g}-" + "-".join(f"{s:g}" for s in spec.shapes)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# Acceptance results, printed one line per criterion at the end of the run.
ACCEPTANCE_LOG = []


@pytest.fixture
def record_criterion():
    def record(number, ok, detail=""):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}" + (f"  {detail}" if detail else "")
        ACCEPTANCE_LOG.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LOG, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
