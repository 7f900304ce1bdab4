import logging
from datetime import datetime, timezone

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repodist import ingest
from repodist.errors import EmptySampleError, IngestError
from repodist.ingest import (BANDS, FULL_TIME, LESS_THAN_ONE, MORE_THAN_FIFTY, PROFESSIONAL,
                             RepoRecord, SurveyRow, band_of)

HOBBY = "I code primarily as a hobby"


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_read_repo_csv(tmp_path):
    p = write(tmp_path, "repos.csv",
              "repository,commits,contributors,avg_commit_length\n"
              "a/b,57,3,42.5\n"
              "c/d,many,1,10\n"
              "e/f,100000,12,8\n")
    res = ingest.read_repo_csv(p)
    assert res.records[0] == RepoRecord("a/b", 57, 3, 42.5)
    assert len(res) == 2 and res.malformed == 1


def test_header_only_and_remapped_columns(tmp_path):
    p = write(tmp_path, "empty.csv", "repository,commits,contributors,avg_commit_length\n")
    res = ingest.read_repo_csv(p)
    assert len(res) == 0 and res.malformed == 0
    p = write(tmp_path, "alt.csv", "name,n_commits,devs,len\nx/y,4,1,3\n")
    cols = {"repository": "name", "commits": "n_commits", "contributors": "devs",
            "avg_commit_length": "len"}
    assert ingest.read_repo_csv(p, cols)[0].commits == 4


def test_missing_file_and_columns(tmp_path):
    with pytest.raises(IngestError):
        ingest.read_repo_csv(tmp_path / "nope.csv")
    p = write(tmp_path, "bad.csv", "repository,commits\na,1\n")
    with pytest.raises(IngestError, match="missing"):
        ingest.read_repo_csv(p)


def test_band_examples():
    assert band_of(57).label == "20-100"
    assert band_of(0).label == "<20"
    assert band_of(100000).label == "10000-100000"
    assert band_of(100001).label == ">100000"
    with pytest.raises(ValueError):
        band_of(-1)


@given(st.integers(min_value=0, max_value=10 ** 9))
def test_bands_partition(c):
    assert sum(c in b for b in BANDS) == 1


def test_band_counts_sum_to_total():
    rng = np.random.default_rng(3)
    records = [RepoRecord(f"r{i}", int(c), 1, 1.0) for i, c in enumerate(rng.integers(0, 200_000, 500))]
    counts = ingest.band_counts(records)
    assert sum(counts.values()) == 500
    sample = ingest.repo_sample(records, band="20-100")
    assert all(20 <= v < 100 for v in sample.values)


def test_preprocess_2021_examples():
    rows = [SurveyRow(PROFESSIONAL, "10"), SurveyRow(PROFESSIONAL, LESS_THAN_ONE),
            SurveyRow(HOBBY, "10"), SurveyRow(PROFESSIONAL, "NA"),
            SurveyRow(PROFESSIONAL, MORE_THAN_FIFTY), SurveyRow(PROFESSIONAL, "50")]
    s = ingest.preprocess_2021(rows)
    assert list(s.values) == [10.0, 50.0]
    assert s.source == "so-survey-2021"
    assert ingest.preprocess_2019(rows).source == "so-survey-2019"
    with pytest.raises(EmptySampleError):
        ingest.preprocess_2021([SurveyRow(HOBBY, "3")])


def test_preprocess_2020_examples():
    rows = [SurveyRow("", LESS_THAN_ONE, FULL_TIME, 40.0),
            SurveyRow("", MORE_THAN_FIFTY, FULL_TIME, 40.0),
            SurveyRow("", "10", FULL_TIME, 100.0),
            SurveyRow("", "10", "Employed part-time", 40.0),
            SurveyRow("", "NA", FULL_TIME, 40.0),
            SurveyRow("", "7", FULL_TIME, None),
            SurveyRow("", "7", FULL_TIME, 30.0)]
    assert list(ingest.preprocess_2020(rows).values) == [0.0, 51.0, 7.0]


survey_rows = st.lists(st.builds(
    SurveyRow,
    st.sampled_from([PROFESSIONAL, HOBBY]),
    st.sampled_from(["1", "5", "50", "51", "0", "NA", LESS_THAN_ONE, MORE_THAN_FIFTY, "x"]),
    st.sampled_from([FULL_TIME, "Student"]),
    st.one_of(st.none(), st.floats(0, 120))), max_size=40)


@given(survey_rows)
def test_clean_2021_idempotent(rows):
    once = ingest.clean_2021(rows)
    assert ingest.clean_2021(once) == once


@settings(max_examples=60)
@given(survey_rows, st.randoms(use_true_random=False))
def test_preprocessing_order_independent(rows, rnd):
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    for clean in (ingest.clean_2021, lambda r: [y for _, y in ingest.clean_2020(r)]):
        a, b = clean(rows), clean(shuffled)
        assert sorted(map(repr, a)) == sorted(map(repr, b))


def test_filter_experience_range(caplog):
    s = ingest.filter_experience_range([4, 5, 5, 6], 5, 5)
    assert list(s.values) == [5, 5]
    assert "years in [5, 5]" in s.steps
    with caplog.at_level(logging.WARNING):
        assert len(ingest.filter_experience_range([1, 2], 10, 20)) == 0
    assert "selects no rows" in caplog.text
    with pytest.raises(ValueError):
        ingest.filter_experience_range([1], 3, 2)


def test_read_survey_csv(tmp_path):
    p = write(tmp_path, "s.csv",
              "Respondent,MainBranch,YearsCodePro,Employment,WorkWeekHrs\n"
              f"1,{PROFESSIONAL},3,{FULL_TIME},40\n"
              f"2,{PROFESSIONAL},NA,{FULL_TIME},NA\n"
              f"3,{PROFESSIONAL},4,{FULL_TIME},lots\n")
    res = ingest.read_survey_csv(p)
    assert len(res) == 2 and res.malformed == 1
    assert res[1].work_week_hrs is None


def test_read_commit_events(tmp_path):
    p = write(tmp_path, "c.csv",
              "project,sha,message,date,author_name,author_email\n"
              "p,abc,fix,2014-03-01T10:00:00Z,Ann,a@x\n"
              "p,abc,fix,2014-03-01T10:00:00Z,Ann,a@x\n"
              "p,def,oops,not a date,Bob,b@x\n"
              "q,ghi,init,1400000000,Cy,c@x\n")
    res = ingest.read_commit_events(p)
    assert len(res) == 3 and res.malformed == 1
    assert res[0].sha == res[1].sha == "abc"
    assert res[0].date == datetime(2014, 3, 1, 10, tzinfo=timezone.utc)
    assert res[2].day.year == 2014
    p = write(tmp_path, "m.csv", "project,sha,date\np,a,2014-01-01\n")
    with pytest.raises(IngestError):
        ingest.read_commit_events(p)


def test_parse_timestamp_offsets():
    a = ingest.parse_timestamp("2014-03-01T12:00:00+02:00")
    assert a == datetime(2014, 3, 1, 10, tzinfo=timezone.utc)
    assert ingest.parse_timestamp("2014-03-01 10:00:00").tzinfo is not None
    with pytest.raises(ValueError):
        ingest.parse_timestamp("")
