import json
from pathlib import Path

from augaudit.corpus import FLAKYCAT_LABELS, ingest_corpus
from augaudit.lexer import is_clean, tokenize
from augaudit.synthetic import SyntheticConfig, generate_corpus

BUNDLED = Path(__file__).resolve().parents[1] / "src" / "augaudit" / "data" / "synthetic_corpus.jsonl"


def test_generator_is_deterministic():
    assert generate_corpus(5, SyntheticConfig(originals_per_category=3)) == \
        generate_corpus(5, SyntheticConfig(originals_per_category=3))


def test_generated_cases_tokenize_cleanly():
    corpus = generate_corpus(1, SyntheticConfig(originals_per_category=10))
    assert len(corpus) == 50
    assert corpus.labels == FLAKYCAT_LABELS
    assert all(is_clean(tokenize(c.code)) for c in corpus)


def test_bundled_corpus_matches_generator():
    bundled = ingest_corpus(BUNDLED, labels=FLAKYCAT_LABELS)
    assert bundled == generate_corpus(0)
    first = json.loads(BUNDLED.read_text().splitlines()[0])
    assert set(first) == {"id", "origin_id", "version", "category", "code"}
