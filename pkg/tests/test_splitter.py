from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from augaudit.corpus import FLAKYCAT_LABELS
from augaudit.splitter import (
    EXP1_PHASE_A, EXP1_PHASE_B, EXP2, FLAKYCAT_EXP2_SIZES, OriginSplit, SplitError, SplitPlan,
    build_experiment1, build_experiment2, compare_counts, split_originals, verify_group_integrity,
)

from conftest import grouped_corpus


def test_stratified_counts():
    corpus = grouped_corpus({"A": [0] * 10, "B": [0] * 10})
    split = split_originals(corpus, 0.2, seed=1)
    per_cat = Counter(corpus[o].category for o in split.test_origins)
    assert per_cat == {"A": 2, "B": 2}
    assert split.train_origins.isdisjoint(split.test_origins)
    assert len(split.train_origins | split.test_origins) == 20


def test_degenerate_fraction():
    corpus = grouped_corpus({"A": [0, 0], "B": [0] * 5})
    with pytest.raises(SplitError):
        split_originals(corpus, 0.9, seed=1)
    with pytest.raises(SplitError):
        split_originals(corpus, 1.0, seed=1)


def test_too_few_originals():
    with pytest.raises(SplitError, match="at least 2"):
        split_originals(grouped_corpus({"A": [0]}), 0.2)


def test_split_deterministic(small_corpus):
    assert split_originals(small_corpus, 0.2, 9) == split_originals(small_corpus, 0.2, 9)
    assert split_originals(small_corpus, 0.2, 9) != split_originals(small_corpus, 0.2, 10)


def test_pinned_counts():
    corpus = grouped_corpus({"A": [0] * 10})
    split = split_originals(corpus, 0.2, 0, test_counts={"A": 3})
    assert len(split.test_origins) == 3


def test_phase_b_async_sizes():
    corpus = grouped_corpus({"Async": [2] * 124 + [0] * 4})
    ids = [f"async{i:03d}" for i in range(128)]
    split = OriginSplit(frozenset(ids[26:]), frozenset(ids[:26]), 0, 0.2)
    phase_a, phase_b = build_experiment1(corpus, split)
    assert (len(phase_a["train"]), len(phase_a["test"])) == (102, 26)
    assert (len(phase_b["train"]), len(phase_b["test"])) == (298, 78)


def test_phase_b_equals_phase_a_without_variants():
    corpus = grouped_corpus({"A": [0] * 5, "B": [0] * 5})
    phase_a, phase_b = build_experiment1(corpus, split_originals(corpus, 0.2, 0))
    assert phase_a.sets == phase_b.sets


def test_partial_variants_expand():
    corpus = grouped_corpus({"A": [1, 0]})
    split = OriginSplit(frozenset({"a000"}), frozenset({"a001"}), 0, 0.5)
    _, phase_b = build_experiment1(corpus, split)
    assert phase_b["train"] == ("a000", "a000_v1")


def test_experiment2_hand_count():
    corpus = grouped_corpus({"A": [2] * 7})
    ids = [f"a{i:03d}" for i in range(7)]
    plan = build_experiment2(corpus, OriginSplit(frozenset(ids[:5]), frozenset(ids[5:]), 0, 0.3))
    assert [len(plan[s]) for s in ("train", "test1", "test2")] == [5, 2, 10]


def test_experiment2_without_variants():
    corpus = grouped_corpus({"A": [0] * 5})
    plan = build_experiment2(corpus, split_originals(corpus, 0.2, 0))
    assert plan["test2"] == ()


def test_experiment2_async_sizes_and_warning():
    corpus = grouped_corpus({"Async": [2] * 125})
    ids = [f"async{i:03d}" for i in range(125)]
    split = OriginSplit(frozenset(ids[:99]), frozenset(ids[99:]), 0, 0.2)
    plan = build_experiment2(corpus, split)
    assert len(plan["test2"]) == 198
    warnings = compare_counts(plan, corpus, {"Async": FLAKYCAT_EXP2_SIZES["Async"]})
    assert len(warnings) == 1
    assert "exceeds the 198 variants" in warnings[0]


def test_unknown_origin_rejected(small_corpus):
    split = OriginSplit(frozenset({"ghost"}), frozenset({"a000"}), 0, 0.2)
    with pytest.raises(SplitError):
        build_experiment1(small_corpus, split)
    with pytest.raises(SplitError):
        build_experiment2(small_corpus, split)


def test_integrity_clean_and_planted(small_corpus):
    split = split_originals(small_corpus, 0.2, 3)
    _, phase_b = build_experiment1(small_corpus, split)
    assert verify_group_integrity(phase_b, small_corpus).ok

    train = [i for i in phase_b["train"] if i != "a000_v1"]
    test = list(phase_b["test"])
    if "a000" in split.test_origins:
        test.remove("a000_v1")
        train.append("a000_v1")
    else:
        test.append("a000_v1")
    report = verify_group_integrity(SplitPlan(EXP1_PHASE_B, {"train": train, "test": test}),
                                    small_corpus)
    assert len(report) == 1 and report.violations[0].origin_id == "a000"


def test_integrity_exp2_planted(small_corpus):
    split = split_originals(small_corpus, 0.2, 3)
    plan = build_experiment2(small_corpus, split)
    test_origin = sorted(split.test_origins)[0]
    sets = dict(plan.sets)
    sets["test2"] = sets["test2"] + (f"{test_origin}_v1",)
    report = verify_group_integrity(SplitPlan(EXP2, sets), small_corpus)
    assert len(report) == 1
    assert report.violations[0].origin_id == test_origin


def test_plan_json_round_trip(small_corpus):
    plan = build_experiment2(small_corpus, split_originals(small_corpus, 0.2, 3))
    again = SplitPlan.from_json(plan.to_json())
    assert again == plan and again.to_json() == plan.to_json()


def test_origin_split_round_trip(small_corpus):
    split = split_originals(small_corpus, 0.2, 3)
    assert OriginSplit.from_dict(split.to_dict()) == split


@st.composite
def corpus_and_seed(draw):
    spec = {}
    for cat in FLAKYCAT_LABELS:
        n = draw(st.integers(2, 10))
        spec[cat] = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    return grouped_corpus(spec, labels=FLAKYCAT_LABELS), draw(st.integers(0, 2**64 - 1))


@settings(max_examples=80, deadline=None)
@given(corpus_and_seed(), st.sampled_from([0.1, 0.2, 0.3, 0.45]))
def test_plan_properties(cs, fraction):
    corpus, seed = cs
    split = split_originals(corpus, fraction, seed)
    phase_a, phase_b = build_experiment1(corpus, split)
    exp2 = build_experiment2(corpus, split)
    for plan in (phase_a, phase_b, exp2):
        assert verify_group_integrity(plan, corpus).ok
    for name in ("train", "test"):
        assert set(phase_a[name]) <= set(phase_b[name])
        assert all(corpus[i].version > 0 for i in set(phase_b[name]) - set(phase_a[name]))
    for cat in corpus.labels:
        n = sum(1 for c in corpus.originals() if c.category == cat)
        k = sum(1 for o in split.test_origins if corpus[o].category == cat)
        assert abs(k - fraction * n) < 1
    want = Counter(corpus[v].category for o in exp2["train"] for v in corpus.variants_of(o))
    assert Counter(corpus[i].category for i in exp2["test2"]) == want
