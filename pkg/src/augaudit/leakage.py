"""Near-duplicate detection across splits via token-shingle fingerprints.

Tokens are normalized so that renamed identifiers and swapped literals
look identical, then hashed in overlapping windows of ``w`` tokens. Pairs
are compared with Jaccard similarity. Provenance (shared origin) is
reported as a second, independent channel.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import Corpus, TestCase
from .lexer import CHAR, COMMENT, IDENTIFIER, NUMBER, STRING, WHITESPACE, tokenize
from .prng import fnv1a64

DEFAULT_WINDOW = 5
DEFAULT_THRESHOLD = 0.8
SEPARATOR = b"\x1f"

_PLACEHOLDER = {IDENTIFIER: "ID", STRING: "STR", CHAR: "STR", NUMBER: "NUM"}


class LeakageError(ValueError):
    pass


@dataclass(frozen=True)
class Fingerprint:
    case_id: str
    w: int
    shingles: frozenset[int]

    def __len__(self) -> int:
        return len(self.shingles)


def normalize(code: str) -> list[str]:
    out = []
    for tok in tokenize(code):
        if tok.kind in (WHITESPACE, COMMENT):
            continue
        out.append(_PLACEHOLDER.get(tok.kind, tok.text))
    return out


def shingle_hashes(norm: Sequence[str], w: int) -> frozenset[int]:
    encoded = [t.encode("utf-8") for t in norm]
    return frozenset(
        fnv1a64(SEPARATOR.join(encoded[i:i + w])) for i in range(len(encoded) - w + 1)
    )


def fingerprint(case: TestCase, w: int = DEFAULT_WINDOW) -> Fingerprint:
    if w < 1:
        raise LeakageError(f"window must be >= 1, got {w}")
    return Fingerprint(case.id, w, shingle_hashes(normalize(case.code), w))


def similarity(a: Fingerprint, b: Fingerprint) -> float:
    """Jaccard similarity of the shingle sets."""
    if a.w != b.w:
        raise LeakageError(f"window mismatch: {a.w} vs {b.w}")
    if not a.shingles and not b.shingles:
        return 1.0 if a.case_id == b.case_id else 0.0
    inter = len(a.shingles & b.shingles)
    return inter / (len(a.shingles) + len(b.shingles) - inter)


@dataclass(frozen=True)
class LeakFinding:
    a: str  # id on the training side
    b: str  # id on the evaluation side
    similarity: float
    provenance_leak: bool

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "similarity": self.similarity,
                "provenance_leak": self.provenance_leak}


@dataclass(frozen=True)
class LeakReport:
    findings: tuple[LeakFinding, ...] = ()
    threshold: float = DEFAULT_THRESHOLD
    w: int = DEFAULT_WINDOW

    def __len__(self) -> int:
        return len(self.findings)

    def __iter__(self):
        return iter(self.findings)

    @property
    def pairs(self) -> set[tuple[str, str]]:
        return {(f.a, f.b) for f in self.findings}

    def to_jsonl(self) -> str:
        return "".join(json.dumps(f.to_dict(), sort_keys=True) + "\n" for f in self.findings)


def detect_leaks(
    train: Iterable[str],
    test: Iterable[str],
    corpus: Corpus,
    threshold: float = DEFAULT_THRESHOLD,
    w: int = DEFAULT_WINDOW,
    use_provenance: bool = True,
) -> LeakReport:
    """Every cross-split pair at or above ``threshold``, plus same-origin pairs.

    Pairs whose shingle-set sizes alone rule out reaching the threshold are
    skipped without intersecting. Findings are sorted by similarity
    (descending) then by id pair.
    """
    if not 0 < threshold <= 1:
        raise LeakageError(f"threshold must be in (0, 1], got {threshold}")
    train_ids = sorted(set(train))
    test_ids = sorted(set(test))
    for case_id in train_ids + test_ids:
        if case_id not in corpus:
            raise LeakageError(f"unknown id {case_id!r}")

    fps = {cid: fingerprint(corpus[cid], w) for cid in set(train_ids) | set(test_ids)}
    findings = []
    for a in train_ids:
        fa = fps[a]
        origin_a = corpus[a].origin_id
        na = len(fa)
        for b in test_ids:
            fb = fps[b]
            same_origin = use_provenance and origin_a == corpus[b].origin_id
            nb = len(fb)
            if not same_origin and na and nb and min(na, nb) < threshold * max(na, nb):
                continue
            sim = similarity(fa, fb)
            if sim >= threshold or same_origin:
                findings.append(LeakFinding(a, b, sim, same_origin))
    findings.sort(key=lambda f: (-f.similarity, f.a, f.b))
    return LeakReport(tuple(findings), threshold, w)
