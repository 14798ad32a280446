import json

import pytest
from hypothesis import given, settings, strategies as st

from augaudit.corpus import (
    FLAKYCAT_LABELS, CorpusError, TestCase, category_counts, corpus_to_jsonl, export_corpus,
    ingest_corpus, make_corpus, register_variant, validate_corpus,
)
from augaudit.splitter import build_experiment1, split_originals

from conftest import case, grouped_corpus


def write_jsonl(path, records):
    path.write_text("".join(json.dumps(r) + "\n" for r in records))
    return path


def test_ingest_empty(tmp_path):
    corpus = ingest_corpus(write_jsonl(tmp_path / "e.jsonl", []))
    assert len(corpus) == 0


def test_ingest_origin_and_variant(tmp_path):
    path = write_jsonl(tmp_path / "c.jsonl", [
        {"id": "o1", "category": "Async", "code": "x"},
        {"id": "o1_v1", "origin_id": "o1", "version": 1, "category": "Async", "code": "y"},
    ])
    corpus = ingest_corpus(path)
    assert len(corpus) == 2
    assert dict(corpus.provenance) == {"o1": ("o1_v1",)}
    assert corpus["o1"].origin_id == "o1" and corpus["o1"].version == 0


def test_ingest_dangling_variant(tmp_path):
    path = write_jsonl(tmp_path / "c.jsonl", [
        {"id": "o1_v1", "origin_id": "o1", "version": 1, "category": "Async", "code": "y"},
    ])
    with pytest.raises(CorpusError, match="dangling variant"):
        ingest_corpus(path)


def test_ingest_duplicate_and_closed_labels(tmp_path):
    dup = write_jsonl(tmp_path / "d.jsonl", [
        {"id": "a", "category": "UC", "code": ""}, {"id": "a", "category": "UC", "code": ""},
    ])
    with pytest.raises(CorpusError, match="duplicate"):
        ingest_corpus(dup)
    odd = write_jsonl(tmp_path / "o.jsonl", [{"id": "a", "category": "Weird", "code": ""}])
    assert ingest_corpus(odd).labels == ("Weird",)
    with pytest.raises(CorpusError, match="unknown category"):
        ingest_corpus(odd, labels=FLAKYCAT_LABELS, closed_labels=True)


def test_ingest_reports_line_of_malformed_row(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"id": "a", "category": "UC", "code": ""}\n{not json\n')
    with pytest.raises(CorpusError, match=":2"):
        ingest_corpus(path)


def test_ingest_csv_with_schema(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text("name,label,src\nt1,TOD,\"void t() {}\"\n")
    corpus = ingest_corpus(path, schema={"name": "id", "label": "category", "src": "code"})
    assert corpus["t1"].category == "TOD"
    assert corpus["t1"].code == "void t() {}"


def test_validate_examples():
    ok = [case("a"), case("b"), case("a_v1", origin="a", version=1)]
    assert validate_corpus(ok).ok
    bad_origin = [TestCase("a", "zzz", 0, "A", "")]
    assert len(validate_corpus(bad_origin)) == 1
    dup = [case("a"), case("a")]
    assert [v.kind for v in validate_corpus(dup).violations] == ["duplicate_id"]


def test_validate_never_mutates():
    cases = [case("a"), case("a_v1", origin="a", version=1)]
    before = list(cases)
    validate_corpus(cases)
    assert cases == before


def test_nested_variant_rejected():
    cases = [case("a"), case("a_v1", origin="a", version=1), case("x", origin="a_v1", version=1)]
    assert [v.kind for v in validate_corpus(cases).violations] == ["nested_variant"]


def test_counts_three_cases():
    corpus = make_corpus([case("a"), case("b"), case("a_v1", origin="a", version=1)])
    table = category_counts(corpus)
    assert table.cell("A", "all", 0) == 2
    assert table.cell("A", "all", 1) == 1
    assert table.grand_total() == 3


def test_counts_empty():
    table = category_counts(make_corpus([]))
    assert table.grand_total() == 0


def test_counts_phase_b_async_row():
    # 128 Async origins, 4 of them without variants; 26 of the 124 with variants go to test
    counts = [2] * 124 + [0] * 4
    corpus = grouped_corpus({"Async": counts})
    with_vars = [f"async{i:03d}" for i in range(124)]
    without = [f"async{i:03d}" for i in range(124, 128)]
    from augaudit.splitter import OriginSplit
    split = OriginSplit(frozenset(with_vars[26:] + without), frozenset(with_vars[:26]), 0, 0.2)
    _, phase_b = build_experiment1(corpus, split)
    table = category_counts(corpus, phase_b)
    assert (table.cell("Async", "train", 0), table.cell("Async", "train", 1),
            table.cell("Async", "train", 2)) == (102, 98, 98)
    assert table.total("Async", "train") == 298


def test_counts_unknown_id():
    from augaudit.splitter import SplitPlan
    plan = SplitPlan("Exp1-PhaseA", {"train": ["nope"], "test": []})
    with pytest.raises(CorpusError):
        category_counts(make_corpus([case("a")]), plan)


def test_register_variant_examples():
    corpus = make_corpus([case("o1", "Time")])
    corpus = register_variant(corpus, TestCase("o1_v1", "o1", 1, "", "x"))
    assert corpus.provenance["o1"] == ("o1_v1",)
    assert corpus["o1_v1"].category == "Time"
    with pytest.raises(CorpusError, match="category mismatch"):
        register_variant(corpus, TestCase("o1_v2", "o1", 2, "UC", "x"))
    corpus = register_variant(corpus, TestCase("o1_v3", "o1", 3, "Time", "x"))
    corpus = register_variant(corpus, TestCase("o1_v2", "o1", 2, "Time", "x"))
    assert corpus.provenance["o1"] == ("o1_v1", "o1_v2", "o1_v3")
    with pytest.raises(CorpusError, match="collision"):
        register_variant(corpus, TestCase("o1_v2", "o1", 2, "Time", "x"))
    with pytest.raises(CorpusError, match="dangling"):
        register_variant(corpus, TestCase("q_v1", "q", 1, "Time", "x"))


_ids = st.text("abcdefgh", min_size=1, max_size=6)


@st.composite
def corpora(draw):
    origins = draw(st.lists(_ids, min_size=0, max_size=12, unique=True))
    cases = []
    for oid in origins:
        cat = draw(st.sampled_from(FLAKYCAT_LABELS))
        code = draw(st.text(max_size=30))
        cases.append(TestCase(oid, oid, 0, cat, code))
        for v in range(1, draw(st.integers(0, 2)) + 1):
            cases.append(TestCase(f"{oid}#v{v}", oid, v, cat, code + "!"))
    return make_corpus(cases, labels=FLAKYCAT_LABELS)


@settings(max_examples=60)
@given(corpora())
def test_export_ingest_round_trip(tmp_path_factory, corpus):
    path = tmp_path_factory.mktemp("rt") / "c.jsonl"
    export_corpus(corpus, path, meta={"seed": 1})
    again = ingest_corpus(path, labels=FLAKYCAT_LABELS)
    assert again == corpus
    assert corpus_to_jsonl(again) == corpus_to_jsonl(corpus)


@settings(max_examples=60)
@given(corpora(), st.integers(0, 1000))
def test_counts_invariant_under_renumbering(corpus, salt):
    def rename(cid):
        return f"r{salt}_{cid}"
    renamed = make_corpus(
        [TestCase(rename(c.id), rename(c.origin_id), c.version, c.category, c.code) for c in corpus],
        labels=FLAKYCAT_LABELS,
    )
    a, b = category_counts(corpus), category_counts(renamed)
    assert a.rows() == b.rows()
    assert a.grand_total() == len(corpus)
