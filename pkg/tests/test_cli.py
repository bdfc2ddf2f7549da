import json
import os

import pytest

from chanstat.cli import main
from chanstat.measurements import COLUMNS, serialize_records
from chanstat.presets import preset
from chanstat.synthesis import ensemble_seeds, realizations_to_measurements, sample_ensemble

HEADER = ",".join(COLUMNS) + "\n"


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    stats = preset("tuas-nlos")
    reals = []
    for i in range(24):
        reals += sample_ensemble(stats, 4.0 + 2.0 * i, ensemble_seeds(100 + i, 1),
                                 n_paths=6 + i % 6)
    path = tmp_path_factory.mktemp("data") / "raw.csv"
    path.write_text(serialize_records(
        realizations_to_measurements(reals, "TUAS", "NLOS", stats.frequency)))
    return path


@pytest.fixture(scope="module")
def fitted(dataset, tmp_path_factory):
    out = tmp_path_factory.mktemp("fit")
    assert main(["fit", "--input", str(dataset), "--out", str(out), "--families",
                 "exponential,weibull,loglogistic,lognormal"]) == 0
    return out


def test_ingest(dataset, tmp_path, capsys):
    assert main(["ingest", "--input", str(dataset), "--out", str(tmp_path)]) == 0
    counts = json.loads((tmp_path / "counts.json").read_text())
    assert counts["totals"]["NLOS"] == counts["total"] > 0
    assert (tmp_path / "dataset.csv").read_text() == dataset.read_text()
    assert main(["ingest", "--input", str(dataset), "--out", str(tmp_path), "--format",
                 "csv"]) == 0
    assert (tmp_path / "counts.csv").read_text().splitlines()[-1].startswith("Total,0,")


def test_ingest_empty_file(tmp_path):
    src = tmp_path / "empty.csv"
    src.write_text(HEADER)
    assert main(["ingest", "--input", str(src), "--out", str(tmp_path / "o")]) == 0
    assert json.loads((tmp_path / "o" / "counts.json").read_text())["total"] == 0


def test_ingest_reports_bad_line(tmp_path, capsys):
    rows = [f"Sello,A,LOS,10,{40 + i},-100,1.431e11\n" for i in range(5)]
    rows.append("Sello,A,LOS,10,oops,-100,1.431e11\n")
    src = tmp_path / "bad.csv"
    src.write_text(HEADER + "".join(rows))
    assert main(["ingest", "--input", str(src), "--out", str(tmp_path)]) != 0
    assert "line 7" in capsys.readouterr().err


def test_ingest_missing_input(tmp_path, capsys):
    assert main(["ingest", "--input", str(tmp_path / "nope.csv"), "--out", str(tmp_path)]) != 0


def test_ingest_with_column_mapping(tmp_path):
    src = tmp_path / "foreign.csv"
    src.write_text("site,pos,los,d,tau_s,loss_db\nSello,P1,LOS,10,4e-8,100\n")
    args = ["ingest", "--input", str(src), "--out", str(tmp_path / "o"),
            "--column", "location=site", "--column", "link_id=pos", "--column", "scenario=los",
            "--column", "distance_m=d", "--column", "delay_ns=tau_s", "--column",
            "power_db=loss_db", "--constant", "frequency_hz=143.1e9", "--delay-unit", "s",
            "--power-is-loss"]
    assert main(args) == 0
    line = (tmp_path / "o" / "dataset.csv").read_text().splitlines()[1]
    assert line == "Sello,P1,LOS,10,40,-100,1.431e+11"


def test_fit_outputs(fitted):
    report = json.loads((fitted / "fits.json").read_text())
    fams = [(r["quantity"], r["family"]) for r in report["fits"]]
    assert ("delay", "weibull") in fams and ("power", "loglogistic") in fams
    assert all(r["spec"]["loc"] == 0 for r in report["fits"] if r["quantity"] == "delay")
    assert (fitted / "pdp.csv").read_text().startswith("delay_ns,power_norm_db,scenario\n")


def test_fit_csv_and_family_filter(dataset, tmp_path):
    assert main(["fit", "--input", str(dataset), "--out", str(tmp_path), "--format", "csv",
                 "--families", "exponential"]) == 0
    rows = (tmp_path / "fits.csv").read_text().splitlines()[1:]
    assert len(rows) == 2 and all(",exponential," in r for r in rows)


def test_fit_error_rows_give_nonzero_exit(tmp_path):
    src = tmp_path / "tiny.csv"
    src.write_text(HEADER + "S,A,LOS,10,40,-100,1e11\nS,A,LOS,10,41,-101,1e11\n"
                   "S,A,LOS,10,47,-104,1e11\n")
    assert main(["fit", "--input", str(src), "--out", str(tmp_path), "--families",
                 "weibull"]) == 1
    report = json.loads((tmp_path / "fits.json").read_text())
    assert report["fits"][0]["status"] == "error"


def test_gof(dataset, fitted, tmp_path):
    assert main(["gof", "--input", str(dataset), "--fits", str(fitted / "fits.json"),
                 "--out", str(tmp_path)]) == 0
    rows = json.loads((tmp_path / "gof.json").read_text())
    fits = json.loads((fitted / "fits.json").read_text())["fits"]
    assert len(rows) == len(fits)
    # Rescoring uses the 6-digit spec from the report, so D and R agree closely.
    for row, fit in zip(rows, fits):
        assert row["ks_d"] == pytest.approx(fit["ks_d"], abs=1e-5)
        assert row["r"] == pytest.approx(fit["r"], abs=1e-5)
    qq = sorted(p.name for p in (tmp_path / "qq").iterdir())
    assert "TUAS_NLOS_delay_exponential.csv" in qq
    dens = (tmp_path / "density" / "TUAS_NLOS_power_loglogistic.csv").read_text()
    assert dens.startswith("x,empirical_pdf,model_pdf\n")


def test_nop(tmp_path, capsys):
    src = tmp_path / "links.csv"
    lines = []
    for link, dist, n in [("A", 5, 5), ("B", 15, 9), ("C", 35, 7)]:
        lines += [f"X,{link},LOS,{dist},{10 + k},-90,1e11\n" for k in range(n)]
    src.write_text(HEADER + "".join(lines))
    assert main(["nop", "--input", str(src), "--out", str(tmp_path)]) == 0
    (group,) = json.loads((tmp_path / "nop.json").read_text())
    assert [b["median"] for b in group["bins"]] == [5, 9, 7]
    assert group["peak"]["lower_m"] == 10
    assert (tmp_path / "nop" / "X_LOS.csv").read_text().splitlines()[0] == \
        "lower_m,upper_m,links,min,q1,median,q3,max"
    assert main(["nop", "--input", str(src), "--out", str(tmp_path), "--bin-width", "5"]) == 0
    (group,) = json.loads((tmp_path / "nop.json").read_text())
    assert all(b["upper_m"] - b["lower_m"] == 5 for b in group["bins"])
    assert main(["nop", "--input", str(src), "--out", str(tmp_path), "--location", "Y"]) != 0


def test_synth_from_report_is_byte_deterministic(fitted, tmp_path):
    args = ["synth", "--input", str(fitted / "fits.json"), "--distance", "15", "--count", "20",
            "--bandwidth", "4e9", "--seed", "7"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    for name in ("realizations.json", "ensemble.json", "cir.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    reals = json.loads((tmp_path / "a" / "realizations.json").read_text())
    assert len(reals) == 20 and set(reals[0]) == {"distance_m", "seed", "taps"}


def test_synth_seed_from_environment(tmp_path, monkeypatch):
    base = ["synth", "--preset", "sello-los", "--distance", "10", "--count", "3",
            "--n-paths", "4"]
    assert main(base + ["--seed", "11", "--out", str(tmp_path / "flag")]) == 0
    monkeypatch.setenv("CHANSTAT_SEED", "11")
    assert main(base + ["--out", str(tmp_path / "env")]) == 0
    assert main(base + ["--seed", "12", "--out", str(tmp_path / "override")]) == 0
    read = lambda d: (tmp_path / d / "realizations.json").read_bytes()
    assert read("flag") == read("env") != read("override")


def test_synth_zero_count(tmp_path):
    assert main(["synth", "--preset", "sello-los", "--distance", "10", "--count", "0",
                 "--out", str(tmp_path)]) == 0
    assert json.loads((tmp_path / "realizations.json").read_text()) == []


def test_synth_missing_fits(tmp_path):
    assert main(["synth", "--input", str(tmp_path / "none.json"), "--distance", "10",
                 "--out", str(tmp_path)]) != 0
    assert main(["synth", "--distance", "10", "--out", str(tmp_path)]) != 0


def test_no_temp_files_left(fitted):
    assert not [p for p in os.listdir(fitted) if p.startswith(".")]
