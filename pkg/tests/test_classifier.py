import json
import math
import sys
import textwrap

import pytest
from hypothesis import given, settings, strategies as st

from augaudit.classifier import (
    ClassifierConfig, ClassifierError, CentroidModel, featurize, predict, predict_all,
    run_external, train,
)
from augaudit.corpus import TestCase


def tc(cid, cat, code):
    return TestCase(cid, cid, 0, cat, code)


def test_featurize_examples():
    assert featurize(tc("a", "A", "")) == {}
    assert featurize(tc("a", "A", "assertEquals(x, x);")) == {"assertEquals": 1, "x": 2}
    assert featurize(tc("a", "A", 's = "magic word";')) == {"s": 1, "magic": 1, "word": 1}
    assert featurize("if (n > 10) return;") == {"if": 1, "n": 1, "10": 1, "return": 1}


def test_featurize_case_sensitive_and_ignores_comments():
    assert featurize("Foo foo; // bar") == {"Foo": 1, "foo": 1}


def test_single_category_model():
    model = train([tc("a", "UC", "x y"), tc("b", "UC", "z")])
    assert model.labels == ("UC",)
    assert predict(model, tc("q", "?", "anything else")).category == "UC"


def test_disjoint_vocab_centroids_orthogonal():
    model = train([tc("a", "A", "a b"), tc("b", "B", "c d")])
    ca, cb = model.centroids["A"], model.centroids["B"]
    assert sum(v * cb.get(k, 0.0) for k, v in ca.items()) == 0.0
    for c in (ca, cb):
        assert math.isclose(math.sqrt(sum(v * v for v in c.values())), 1.0)


def test_duplicate_case_same_direction():
    once = train([tc("a", "A", "p q q")])
    twice = train([tc("a", "A", "p q q"), tc("b", "A", "p q q")])
    assert once.centroids["A"] == pytest.approx(twice.centroids["A"])


def test_predict_examples():
    model = train([tc("a", "A", "alpha beta"), tc("b", "B", "gamma delta")], ["A", "B"])
    assert predict(model, tc("q", "?", "beta beta alpha")).category == "A"
    tie = predict(model, tc("q", "?", "alpha gamma"))
    assert tie.category == "A" and not tie.empty_features
    model_ba = train([tc("a", "A", "alpha beta"), tc("b", "B", "gamma delta")], ["B", "A"])
    assert predict(model_ba, tc("q", "?", "alpha gamma")).category == "B"
    empty = predict(model, tc("e", "?", "  // nothing "))
    assert empty.category == "A" and empty.empty_features


def test_train_errors_and_label_order():
    with pytest.raises(ClassifierError):
        train([])
    model = train([tc("a", "Z", "q"), tc("b", "M", "r"), tc("c", "A", "s")], ["M"])
    assert model.labels == ("M", "A", "Z")


def test_model_round_trip():
    model = train([tc("a", "A", "alpha beta"), tc("b", "B", "gamma")])
    again = CentroidModel.from_dict(json.loads(json.dumps(model.to_dict())))
    assert again == model


def test_config_validation():
    with pytest.raises(ValueError):
        ClassifierConfig(backend="external")
    with pytest.raises(ValueError):
        ClassifierConfig(backend="gpu")
    with pytest.raises(ValueError):
        ClassifierConfig.from_dict({"lr": 1})
    cfg = ClassifierConfig()
    assert (cfg.learning_rate, cfg.batch_size, cfg.epochs) == (1e-5, 8, 200)


_vocab = {"A": ["ant", "ape", "asp"], "B": ["bee", "bat", "boa"], "C": ["cat", "cod", "cow"]}


@st.composite
def separable_cases(draw):
    cases = []
    for cat, words in _vocab.items():
        for i in range(draw(st.integers(1, 4))):
            picked = draw(st.lists(st.sampled_from(words), min_size=1, max_size=6))
            cases.append(tc(f"{cat}{i}", cat, " ".join(picked)))
    return cases


@settings(max_examples=50, deadline=None)
@given(separable_cases(), st.randoms(use_true_random=False))
def test_train_permutation_invariant_and_separable(cases, rnd):
    model = train(cases, list(_vocab))
    shuffled = list(cases)
    rnd.shuffle(shuffled)
    again = train(shuffled, list(_vocab))
    assert again.labels == model.labels
    for lab in model.labels:
        assert again.centroids[lab] == pytest.approx(model.centroids[lab], abs=1e-15)
    assert all(p.category == c.category for p, c in zip(predict_all(model, cases), cases))


@settings(max_examples=50, deadline=None)
@given(separable_cases(), st.lists(st.sampled_from(sum(_vocab.values(), [])), min_size=1, max_size=8),
       st.integers(2, 5))
def test_predict_scale_invariant(cases, words, k):
    model = train(cases, list(_vocab))
    code = " ".join(words)
    assert predict(model, tc("x", "?", code)).category == \
        predict(model, tc("x", "?", " ".join([code] * k))).category


# --- external adapter ------------------------------------------------------

def stub(tmp_path, body):
    path = tmp_path / "stub.py"
    path.write_text(textwrap.dedent(body))
    return [sys.executable, str(path)]


TRAIN = [tc("t1", "A", "a"), tc("t2", "B", "b"), tc("t3", "B", "bb")]
EVAL = [tc("e1", "A", "a"), tc("e2", "A", "b")]


def test_external_fixed_category(tmp_path):
    cmd = stub(tmp_path, """
        import json, sys
        for line in sys.stdin:
            rec = json.loads(line)
            if rec["role"] == "eval":
                assert "category" not in rec
                print(json.dumps({"id": rec["id"], "category": "A"}))
    """)
    preds = run_external(cmd, TRAIN, EVAL)
    assert [(p.id, p.category) for p in preds] == [("e1", "A"), ("e2", "A")]


def test_external_majority(tmp_path):
    cmd = stub(tmp_path, """
        import collections, json, os, sys
        recs = [json.loads(l) for l in sys.stdin]
        assert json.loads(os.environ["AUGAUDIT_HPARAMS"])["epochs"] == 200
        votes = collections.Counter(r["category"] for r in recs if r["role"] == "train")
        top = votes.most_common(1)[0][0]
        for r in reversed([r for r in recs if r["role"] == "eval"]):
            print(json.dumps({"id": r["id"], "category": top}))
    """)
    preds = run_external(" ".join(cmd), TRAIN, EVAL)
    assert {p.category for p in preds} == {"B"}
    assert [p.id for p in preds] == ["e1", "e2"]


@pytest.mark.parametrize("body,message", [
    ('print(json.dumps({"id": "e1", "category": "A"}))', "incomplete predictions"),
    ('print("{oops")', "malformed"),
    ('print(json.dumps({"id": "zz", "category": "A"}))', "unknown id"),
    ('[print(json.dumps({"id": "e1", "category": "A"})) for _ in range(2)]', "duplicate"),
    ("sys.exit(4)", "status 4"),
])
def test_external_failures(tmp_path, body, message):
    cmd = stub(tmp_path, "import json, sys\nsys.stdin.read()\n" + body + "\n")
    with pytest.raises(ClassifierError, match=message):
        run_external(cmd, TRAIN, EVAL)


def test_external_missing_binary():
    with pytest.raises(ClassifierError):
        run_external(["/nonexistent/model"], TRAIN, EVAL)
