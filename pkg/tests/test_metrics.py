import csv
import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from augaudit.metrics import (
    SCHEMA, BiasAuditReport, ConfusionTable, GapTable, MetricsError, bias_gap, confusion,
    evaluate, f1_per_category, macro_f1, percent, render_report, signed_percent,
)

from oracles import brute_f1

LABELS = ("Async", "UC", "Conc", "Time", "TOD")
SET1 = dict(zip(LABELS, (0.61, 0.75, 0.40, 0.57, 0.86)))
SET2 = dict(zip(LABELS, (0.69, 0.88, 0.52, 0.69, 0.81)))


def pairs(labels):
    return [(str(i), lab) for i, lab in enumerate(labels)]


def test_confusion_examples():
    t = confusion(pairs("AB"), pairs("AB"), "AB")
    assert t.matrix == ((1, 0), (0, 1))
    t = confusion(pairs("AAB"), pairs("ABB"), "AB")
    assert (t["A", "A"], t["A", "B"], t["B", "B"], t["B", "A"]) == (1, 1, 1, 0)
    assert confusion([], [], "AB").matrix == ((0, 0), (0, 0))


def test_confusion_errors():
    with pytest.raises(MetricsError):
        confusion(pairs("AB"), pairs("A"), "AB")
    with pytest.raises(MetricsError):
        confusion(pairs("AC"), pairs("AB"), "AB")


def test_f1_examples():
    assert f1_per_category(confusion(pairs("AB"), pairs("AB"), "AB")) == {"A": 1.0, "B": 1.0}
    # TP=2, FP=1, FN=1 for A
    t = ConfusionTable(("A", "B"), ((2, 1), (1, 0)))
    assert f1_per_category(t)["A"] == pytest.approx(2 / 3)
    t = confusion(pairs("AA"), pairs("AA"), "AB")
    assert f1_per_category(t)["B"] == 0.0


def test_macro_examples():
    assert percent(macro_f1(SET1)) == 64
    assert percent(macro_f1(SET2)) == 72
    assert macro_f1({"x": 0.3}) == 0.3
    with pytest.raises(MetricsError):
        macro_f1({})
    assert macro_f1({"a": 1.0, "b": 0.0}, weights={"a": 3, "b": 1}) == 0.75


def test_table_gap():
    gap = bias_gap(SET1, SET2)
    assert [signed_percent(gap.gaps[lab]) for lab in LABELS] == ["+8", "+13", "+12", "+12", "-5"]
    assert signed_percent(gap.average_gap) == "+8"
    assert all(v == 0 for v in bias_gap(SET1, SET1).gaps.values())
    with pytest.raises(MetricsError):
        bias_gap({"a": 1.0}, {"b": 1.0})


def test_percent_half_up():
    assert percent(0.125) == 13
    assert percent(0.638) == 64
    assert percent(0.005) == 1
    assert percent(-0.05) == -5
    assert signed_percent(0.0) == "0"


def report_with(gap):
    return BiasAuditReport(comparisons=[gap])


def test_table_csv():
    gap = bias_gap(SET1, SET2, "Testing set 1", "Testing set 2")
    rows = list(csv.reader(io.StringIO(render_report(report_with(gap), "csv").decode())))
    assert rows[0] == ["Category", "Testing set 1", "Testing set 2", "Difference"]
    assert [r[3] for r in rows[1:6]] == ["+8", "+13", "+12", "+12", "-5"]
    assert rows[6] == ["Average", "64", "72", "+8"]


def test_empty_label_set_csv():
    gap = bias_gap({}, {})
    assert render_report(report_with(gap), "csv") == b"Category,set1,set2,Difference\n"


def test_render_deterministic_and_json_schema():
    report = report_with(bias_gap(SET1, SET2))
    report.evaluations["x"] = evaluate("x", pairs("AB"), pairs("AA"), "AB")
    for fmt in ("json", "csv", "plotdata"):
        assert render_report(report, fmt) == render_report(report, fmt)
    doc = json.loads(render_report(report, "json"))
    assert doc["schema"] == SCHEMA
    assert BiasAuditReport.from_dict(doc).to_dict() == doc
    with pytest.raises(MetricsError):
        render_report(report, "xml")


def test_plotdata_series():
    text = render_report(report_with(bias_gap(SET1, SET2, "a", "b")), "plotdata").decode()
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["figure", "category", "series1_f1", "series2_f1"]
    assert rows[1] == ["a_vs_b", "Async", "0.610000", "0.690000"]


def test_inconsistent_report_rejected():
    gap = bias_gap(SET1, SET2)
    broken = GapTable(gap.set1, gap.set2, gap.labels, gap.f1_set1, gap.f1_set2, gap.gaps, 0.5)
    with pytest.raises(MetricsError):
        render_report(report_with(broken), "csv")


def test_no_bom_and_utf8():
    out = render_report(report_with(bias_gap(SET1, SET2)), "csv")
    assert not out.startswith(b"\xef\xbb\xbf")
    out.decode("utf-8")


@st.composite
def gold_pred(draw):
    labels = draw(st.lists(st.sampled_from("ABCDEF"), min_size=1, max_size=6, unique=True))
    n = draw(st.integers(0, 50))
    gold = draw(st.lists(st.sampled_from(labels), min_size=n, max_size=n))
    pred = draw(st.lists(st.sampled_from(labels), min_size=n, max_size=n))
    return labels, gold, pred


@settings(max_examples=200, deadline=None)
@given(gold_pred())
def test_f1_matches_brute_force(gp):
    labels, gold, pred = gp
    f1 = f1_per_category(confusion(pairs(gold), pairs(pred), labels))
    for lab in labels:
        assert abs(f1[lab] - brute_f1(gold, pred, lab)) <= 1e-12
    m = macro_f1(f1)
    assert min(f1.values()) - 1e-12 <= m <= max(f1.values()) + 1e-12


_f1s = st.dictionaries(st.sampled_from(LABELS), st.floats(0, 1), min_size=1)


@given(_f1s, st.data())
def test_gap_antisymmetric(a, data):
    b = {k: data.draw(st.floats(0, 1)) for k in a}
    ab, ba = bias_gap(a, b), bias_gap(b, a)
    assert all(ab.gaps[k] == -ba.gaps[k] for k in a)
    assert all(v == 0 for v in bias_gap(a, a).gaps.values())
