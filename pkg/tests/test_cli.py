import csv
import json
import subprocess
import sys

import numpy as np
import pytest
from conftest import make_events

from repodist.cli import FitReport, main
from repodist.dist import Distribution, Family
from repodist.fit import ks_statistic
from repodist.ingest import FULL_TIME, LESS_THAN_ONE, MORE_THAN_FIFTY, PROFESSIONAL


def write_survey_2020(path, n=6000, seed=0):
    """A regenerated 2020 survey: NB(1.59, 8.33) years plus rows the rules must drop."""
    rng = np.random.default_rng(seed)
    years = Distribution(Family.NEG_BINOMIAL, (1.59, 8.33)).sample(rng, n).astype(int)
    with open(path, "w", newline="") as handle:
        w = csv.writer(handle)
        w.writerow(["Respondent", "MainBranch", "YearsCodePro", "Employment", "WorkWeekHrs"])
        for i, y in enumerate(years):
            text = LESS_THAN_ONE if y == 0 else MORE_THAN_FIFTY if y > 50 else str(y)
            w.writerow([i, PROFESSIONAL, text, FULL_TIME, 40])
        w.writerow([n, PROFESSIONAL, "5", "Student", 40])
        w.writerow([n + 1, PROFESSIONAL, "NA", FULL_TIME, 40])
        w.writerow([n + 2, PROFESSIONAL, "5", FULL_TIME, 120])
    return path


def write_events(path, events):
    with open(path, "w", newline="") as handle:
        w = csv.writer(handle)
        w.writerow(["project", "sha", "message", "date", "author_name", "author_email"])
        for e in events:
            w.writerow([e.project, e.sha, e.message, e.date.isoformat(), e.author_name, e.author_email])
    return path


def error_record(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])["error"]


def test_fit_ranks_negbinomial_first(tmp_path):
    survey = write_survey_2020(tmp_path / "survey.csv")
    out = tmp_path / "report.json"
    assert main(["fit", str(survey), "--kind", "so-survey-2020", "--range", "0-50",
                 "--out", str(out), "--series", "pp", "cdf", "density"]) == 0
    report = json.loads(out.read_text())
    assert report["ranking"] == ["NegBinomial", "Normal", "Poisson"]
    assert report["schema"] == 1 and report["preprocessing"]["standardized"] is False
    for r in report["results"]:
        assert r["aic"] == 2 * r["k"] - 2 * r["log_lik"]
    for name in ("pp", "cdf", "density"):
        assert (tmp_path / f"report.{name}.csv").exists()


def test_fit_report_round_trip(tmp_path):
    survey = write_survey_2020(tmp_path / "survey.csv", n=800)
    out = tmp_path / "r.json"
    main(["fit", str(survey), "--kind", "so-survey-2020", "--out", str(out),
          "--families", "Normal,Poisson", "--criterion", "BIC", "--standardize"])
    record = json.loads(out.read_text())
    assert FitReport.from_dict(record).to_dict() == record


def test_fit_is_deterministic(tmp_path):
    survey = write_survey_2020(tmp_path / "survey.csv", n=800)
    main(["fit", str(survey), "--kind", "so-survey-2020", "--out", str(tmp_path / "a.json")])
    main(["fit", str(survey), "--kind", "so-survey-2020", "--out", str(tmp_path / "b.json")])
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_missing_input_is_an_ingest_error(tmp_path, capsys):
    assert main(["fit", str(tmp_path / "none.csv"), "--kind", "github-repos"]) != 0
    assert error_record(capsys)["kind"] == "ingest"


def test_weekly_toy_fixture(tmp_path):
    events = make_events(7, seed=0)
    events = [e.__class__(e.project, e.sha, "", e.date.replace(year=2014, month=1, day=6 + i),
                          e.author_name, e.author_email) for i, e in enumerate(events)]
    path = write_events(tmp_path / "c.csv", events)
    out = tmp_path / "weekly.csv"
    assert main(["analyze", str(path), "--kind", "travis-commits", "--analysis", "weekly",
                 "--out", str(out)]) == 0
    rows = [line for line in out.read_text().splitlines() if not line.startswith("#")]
    assert [r.split(",")[1] for r in rows[1:]] == ["1"] * 7


def test_rates_and_trend_headers(tmp_path):
    path = write_events(tmp_path / "c.csv", make_events(1000, seed=1))
    outdir = tmp_path / "out"
    assert main(["analyze", str(path), "--kind", "travis-commits", "--analysis", "rates",
                 "--analysis", "trend", "--analysis", "timeseries", "--out", str(outdir)]) == 0
    rates = (outdir / "rates.csv").read_text()
    assert "# excluded: 5" in rates
    trend = (outdir / "trend.csv").read_text()
    assert "# slope:" in trend and "# intercept:" in trend
    assert "# peak_period:" in (outdir / "timeseries.csv").read_text()


def test_analysis_kind_mismatch_is_usage_error(tmp_path, capsys):
    survey = write_survey_2020(tmp_path / "s.csv", n=50)
    assert main(["analyze", str(survey), "--kind", "so-survey-2020", "--analysis", "weekly"]) == 2
    assert error_record(capsys)["kind"] == "usage"


def synth_config(tmp_path, **overrides):
    record = {"seed": 0, "n_repos": 300, "n_coders": 40, **overrides}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(record))
    return path


def test_synth_replay_is_byte_identical(tmp_path):
    from importlib import resources

    cfg = resources.files("repodist") / "data" / "example_synth.json"
    for name in ("a", "b"):
        assert main(["synth", str(cfg), "--seed", "0", "--out", str(tmp_path / name)]) == 0
    for f in ("coders.csv", "commits.csv", "repos.csv", "manifest.json"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
    manifest = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert [r["band"] for r in manifest["band_frequency"]][0] == "<20"


def test_synth_rejects_bad_mix(tmp_path, capsys):
    cfg = synth_config(tmp_path, band_mix=[0.5, 0.2, 0, 0, 0, 0, 0])
    assert main(["synth", str(cfg), "--seed", "1", "--out", str(tmp_path / "o")]) == 1
    err = error_record(capsys)
    assert err["kind"] == "config"
    assert [p["field"] for p in err["problems"]] == ["band_mix"]


def test_seed_is_required(tmp_path, capsys):
    assert main(["synth", str(synth_config(tmp_path)), "--out", str(tmp_path / "o")]) == 2
    assert main(["sample", "Normal", "--params", "0,1"]) == 2
    assert "requires --seed" in error_record(capsys)["message"]


def test_sample_fidelity_and_reproducibility(tmp_path):
    out = tmp_path / "draws.csv"
    assert main(["sample", "LogNormal", "--params=1.30,-0.81,0.40", "-n", "100000",
                 "--seed", "3", "--out", str(out)]) == 0
    values = np.loadtxt(out, skiprows=1)
    d = Distribution(Family.LOGNORMAL, (1.30, -0.81, 0.40))
    assert values.size == 100_000 and ks_statistic(d, values) <= 0.01
    one_a, one_b = tmp_path / "1a.csv", tmp_path / "1b.csv"
    main(["sample", "Normal", "--params", "0,1", "--seed", "9", "--out", str(one_a)])
    main(["sample", "Normal", "--params", "0,1", "--seed", "9", "--out", str(one_b)])
    assert one_a.read_text() == one_b.read_text()


def test_sample_invalid_scale(capsys):
    assert main(["sample", "Exponential", "--params=-0.83,0", "--seed", "1"]) == 1
    assert error_record(capsys)["kind"] == "parameter"


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "repodist", "sample", "Poisson", "--params", "3",
                           "-n", "4", "--seed", "2", "--format", "json"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["n"] == 4


@pytest.mark.parametrize("argv", [["fit"], ["sample", "Normal"], ["bogus"]])
def test_argparse_errors_exit_2(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2
