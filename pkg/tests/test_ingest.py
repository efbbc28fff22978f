import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nfrgauge.errors import DuplicateResponseError, EmptyInputError, IngestError, LabelError, ValidationError
from nfrgauge.ingest import (
    MeasurementSeries,
    ResponseSet,
    load_checks,
    load_key,
    load_measurements,
    load_responses,
    summarize,
    write_responses,
)
from nfrgauge.likert import Polarity, standard_scale

from oracles import nearest_rank

SEVEN = standard_scale(7)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_well_formed_responses(tmp_path):
    rows = "".join(f"r{r},q{q},Agree\n" for r in (1, 2) for q in (1, 2, 3))
    rs = load_responses(write(tmp_path, "r.csv", "respondent_id,item_id,choice\n" + rows), SEVEN)
    assert rs.scale_name == "likert7"
    assert list(rs.rows) == ["r1", "r2"]
    assert all(len(a) == 3 for a in rs.rows.values())


def test_typo_suggests_label(tmp_path):
    path = write(tmp_path, "r.csv", "respondent_id,item_id,choice\nr1,q1,Agree\nr1,q2,Stronly Agree\n")
    with pytest.raises(LabelError) as err:
        load_responses(path, SEVEN)
    assert err.value.line == 3
    assert err.value.suggestion == "Strongly Agree"
    assert 'did you mean "Strongly Agree"' in str(err.value)


def test_duplicate_pair_at_second_row(tmp_path):
    path = write(tmp_path, "r.csv", "respondent_id,item_id,choice\nr1,q1,Agree\nr2,q1,Agree\nr1,q1,Disagree\n")
    with pytest.raises(DuplicateResponseError) as err:
        load_responses(path, SEVEN)
    assert err.value.line == 4


def test_header_and_field_count(tmp_path):
    with pytest.raises(IngestError):
        load_responses(write(tmp_path, "a.csv", "who,item,choice\n"), SEVEN)
    with pytest.raises(IngestError) as err:
        load_responses(write(tmp_path, "b.csv", "respondent_id,item_id,choice\nr1,q1\n"), SEVEN)
    assert err.value.line == 2


@settings(max_examples=50)
@given(st.dictionaries(
    st.text("abcxyz019_", min_size=1, max_size=6),
    st.dictionaries(st.text("qQ0189", min_size=1, max_size=4), st.sampled_from(SEVEN.labels), min_size=1),
    min_size=1,
))
def test_write_then_load_is_identity(tmp_path_factory, rows):
    path = tmp_path_factory.mktemp("rs") / "r.csv"
    original = ResponseSet("likert7", rows)
    write_responses(path, original)
    assert load_responses(path, SEVEN) == original


def test_measurements_grouped_in_order(tmp_path):
    text = "metric,unit,value\n" + "".join(f"response_time_s,s,{v}\n" for v in (0.3, 0.1, 0.5, 0.2, 0.4))
    text += "tps,req/s,60\nresponse_time_s,s,0.9\n"
    series = load_measurements(write(tmp_path, "m.csv", text))
    assert [s.metric for s in series] == ["response_time_s", "tps"]
    assert series[0].samples == (0.3, 0.1, 0.5, 0.2, 0.4, 0.9)
    assert series[1].unit == "req/s"


def test_non_numeric_value_line(tmp_path):
    with pytest.raises(IngestError) as err:
        load_measurements(write(tmp_path, "m.csv", "metric,unit,value\nx,s,1\nx,s,fast\n"))
    assert err.value.line == 3 and "fast" in str(err.value)


def test_unit_change_rejected(tmp_path):
    with pytest.raises(IngestError):
        load_measurements(write(tmp_path, "m.csv", "metric,unit,value\nx,s,1\nx,ms,1000\n"))


def test_empty_file(tmp_path):
    with pytest.raises(EmptyInputError):
        load_measurements(write(tmp_path, "m.csv", ""))
    with pytest.raises(EmptyInputError):
        load_measurements(write(tmp_path, "h.csv", "metric,unit,value\n"))


def test_key_and_checks(tmp_path):
    key = load_key(write(tmp_path, "k.csv", "item_id,polarity\nq1,favorable\nq2,Unfavorable\n"))
    assert key.items == (("q1", Polarity.FAVORABLE), ("q2", Polarity.UNFAVORABLE))
    checks = load_checks(write(tmp_path, "c.csv", "test_id,result\nt1,pass\nt2,FAIL\n"))
    assert checks == {"t1": True, "t2": False}
    with pytest.raises(IngestError):
        load_checks(write(tmp_path, "d.csv", "test_id,result\nt1,maybe\n"))


@pytest.mark.parametrize("samples,p95,mean", [
    (list(range(1, 11)), 10, 5.5), ([0.5], 0.5, 0.5), ([2, 2, 2], 2, 2),
    (list(range(1, 21)), 19, 10.5), (list(range(1, 101)), 95, 50.5),
])
def test_summary_examples(samples, p95, mean):
    s = summarize(MeasurementSeries("m", "", samples))
    assert (s.count, s.min, s.max, s.mean, s.p95) == (len(samples), min(samples), max(samples), mean, p95)


def test_series_rejects_bad_samples():
    with pytest.raises(ValidationError):
        MeasurementSeries("m", "", [])
    with pytest.raises(ValidationError):
        MeasurementSeries("m", "", [1.0, float("nan")])


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=60), st.randoms())
def test_summary_properties(samples, rnd):
    s = summarize(MeasurementSeries("m", "", samples))
    shuffled = list(samples)
    rnd.shuffle(shuffled)
    assert summarize(MeasurementSeries("m", "", shuffled)) == s
    assert s.p95 == nearest_rank(samples, "0.95")
    ordered = sorted(samples)
    assert ordered[(len(ordered) - 1) // 2] <= s.p95 <= s.max
    assert s.min <= s.mean <= s.max
