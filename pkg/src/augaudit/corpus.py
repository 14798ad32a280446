"""Labeled test-code corpora with augmentation provenance."""
from __future__ import annotations

import csv
import json
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

logger = logging.getLogger(__name__)

FLAKYCAT_LABELS: tuple[str, ...] = ("Async", "UC", "Conc", "Time", "TOD")

FIELDS = ("id", "origin_id", "version", "category", "code")
META_KEY = "_meta"


class CorpusError(ValueError):
    """Raised when a corpus cannot be built or extended."""


@dataclass(frozen=True)
class TestCase:
    __test__ = False  # not a pytest class

    id: str
    origin_id: str
    version: int
    category: str
    code: str

    @property
    def is_original(self) -> bool:
        return self.version == 0

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "origin_id": self.origin_id,
            "version": self.version,
            "category": self.category,
            "code": self.code,
        }


def original(case_id: str, category: str, code: str) -> TestCase:
    return TestCase(case_id, case_id, 0, category, code)


@dataclass(frozen=True)
class Violation:
    kind: str
    case_id: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __len__(self) -> int:
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)


def _learned_labels(categories: Iterable[str]) -> tuple[str, ...]:
    seen = set(categories)
    known = [label for label in FLAKYCAT_LABELS if label in seen]
    return tuple(known + sorted(seen - set(FLAKYCAT_LABELS)))


class Corpus:
    """Immutable collection of test cases, kept in canonical id order.

    Construction does not validate; use :func:`validate_corpus` or build
    through :func:`make_corpus` / :func:`ingest_corpus`, which refuse
    invalid input.
    """

    def __init__(
        self,
        cases: Iterable[TestCase],
        labels: Sequence[str] | None = None,
        closed_labels: bool = False,
    ):
        self._cases = tuple(sorted(cases, key=lambda c: c.id))
        self._by_id = {c.id: c for c in self._cases}
        if labels is None:
            self._labels = _learned_labels(c.category for c in self._cases)
        else:
            self._labels = tuple(labels)
        self.closed_labels = closed_labels and labels is not None
        prov: dict[str, list[TestCase]] = defaultdict(list)
        for case in self._cases:
            if case.version == 0:
                prov.setdefault(case.id, [])
        for case in self._cases:
            if case.version >= 1:
                prov[case.origin_id].append(case)
        self._provenance = {
            origin: tuple(v.id for v in sorted(vs, key=lambda c: (c.version, c.id)))
            for origin, vs in sorted(prov.items())
        }

    @property
    def cases(self) -> tuple[TestCase, ...]:
        return self._cases

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def provenance(self) -> Mapping[str, tuple[str, ...]]:
        return self._provenance

    def __len__(self) -> int:
        return len(self._cases)

    def __iter__(self):
        return iter(self._cases)

    def __contains__(self, case_id: object) -> bool:
        return case_id in self._by_id

    def __getitem__(self, case_id: str) -> TestCase:
        return self._by_id[case_id]

    def get(self, case_id: str) -> TestCase | None:
        return self._by_id.get(case_id)

    def originals(self) -> list[TestCase]:
        return [c for c in self._cases if c.version == 0]

    def variants_of(self, origin_id: str) -> tuple[str, ...]:
        return self._provenance.get(origin_id, ())

    def group(self, origin_id: str) -> tuple[str, ...]:
        """Origin id followed by its variant ids."""
        return (origin_id,) + self.variants_of(origin_id)

    def with_cases(self, extra: Iterable[TestCase]) -> "Corpus":
        cases = self._cases + tuple(extra)
        labels = self._labels
        if not self.closed_labels:
            labels += tuple(sorted({c.category for c in cases} - set(labels)))
        return Corpus(cases, labels=labels, closed_labels=self.closed_labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return self._cases == other._cases and self._labels == other._labels

    def __repr__(self) -> str:
        return f"Corpus({len(self)} cases, labels={list(self._labels)})"


def validate_corpus(corpus: Corpus | Iterable[TestCase]) -> ValidationReport:
    """List every invariant violation; an empty report means the corpus is valid.

    Accepts a raw iterable of cases as well, since duplicate ids can only be
    observed before they are collapsed into a :class:`Corpus`.
    """
    if isinstance(corpus, Corpus):
        cases = list(corpus.cases)
        labels = set(corpus.labels) if corpus.closed_labels else None
    else:
        cases = list(corpus)
        labels = None

    out: list[Violation] = []
    counts = Counter(c.id for c in cases)
    for case_id, n in sorted(counts.items()):
        if n > 1:
            out.append(Violation("duplicate_id", case_id, f"id {case_id!r} used by {n} cases"))

    by_id = {}
    for c in cases:
        by_id.setdefault(c.id, c)
    for c in cases:
        if not isinstance(c.version, int) or isinstance(c.version, bool) or c.version < 0:
            out.append(Violation("bad_version", c.id, f"version {c.version!r} is not a non-negative integer"))
            continue
        if c.version == 0 and c.origin_id != c.id:
            out.append(Violation("origin_mismatch", c.id, f"original {c.id!r} has origin_id {c.origin_id!r}"))
        if c.version >= 1:
            origin = by_id.get(c.origin_id)
            if origin is None or c.origin_id == c.id:
                out.append(Violation("dangling_variant", c.id, f"dangling variant: origin {c.origin_id!r} not found"))
            elif origin.version != 0:
                out.append(Violation("nested_variant", c.id, f"origin {c.origin_id!r} is itself a variant"))
            elif origin.category != c.category:
                out.append(Violation(
                    "category_mismatch", c.id,
                    f"category {c.category!r} differs from origin category {origin.category!r}",
                ))
        if labels is not None and c.category not in labels:
            out.append(Violation("unknown_category", c.id, f"unknown category {c.category!r}"))
    return ValidationReport(tuple(out))


def _assemble(cases: list[TestCase], labels, closed_labels) -> tuple[Corpus, ValidationReport]:
    if labels is not None and not closed_labels:
        unseen = sorted({c.category for c in cases} - set(labels))
        labels = tuple(labels) + tuple(unseen)
    corpus = Corpus(cases, labels=labels, closed_labels=closed_labels)
    report = validate_corpus(cases)
    if report.ok:
        report = validate_corpus(corpus)
    return corpus, report


def make_corpus(
    cases: Iterable[TestCase],
    labels: Sequence[str] | None = None,
    closed_labels: bool = False,
) -> Corpus:
    """Build a corpus, raising :class:`CorpusError` on the first violation.

    With ``closed_labels`` the given label set is enforced; otherwise unseen
    categories are appended to it.
    """
    corpus, report = _assemble(list(cases), labels, closed_labels)
    if not report.ok:
        first = report.violations[0]
        raise CorpusError(f"{first.message} (case {first.case_id!r})")
    return corpus


# --- ingestion / export -------------------------------------------------

def _coerce_row(raw: Mapping, schema: Mapping[str, str] | None, where: str) -> TestCase:
    if schema:
        row = {}
        for column, fld in schema.items():
            if fld not in FIELDS:
                raise CorpusError(f"schema maps {column!r} to unknown field {fld!r}")
            if column in raw:
                row[fld] = raw[column]
        for fld in FIELDS:
            if fld not in row and fld in raw and fld not in schema.values():
                row[fld] = raw[fld]
    else:
        row = dict(raw)

    for fld in ("id", "category", "code"):
        if row.get(fld) is None:
            raise CorpusError(f"{where}: malformed row, missing field {fld!r}")
    case_id = str(row["id"])
    version = row.get("version")
    if version in (None, ""):
        version = 0
    try:
        if isinstance(version, bool) or (isinstance(version, float) and not version.is_integer()):
            raise ValueError
        version = int(version)
    except (TypeError, ValueError):
        raise CorpusError(f"{where}: malformed row, bad version {row.get('version')!r}") from None
    origin = row.get("origin_id")
    origin = case_id if origin in (None, "") else str(origin)
    if not isinstance(row["code"], str):
        raise CorpusError(f"{where}: malformed row, code must be a string")
    return TestCase(case_id, origin, version, str(row["category"]), row["code"])


def _read_rows(path: Path, schema):
    suffix = path.suffix.lower()
    if suffix == ".csv":
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            for lineno, raw in enumerate(reader, start=2):
                yield lineno, _coerce_row(raw, schema, f"{path.name}:{lineno}")
        return
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path.name}:{lineno}: malformed row ({exc.msg})") from None
            if not isinstance(raw, dict):
                raise CorpusError(f"{path.name}:{lineno}: malformed row, expected an object")
            if META_KEY in raw:
                continue
            yield lineno, _coerce_row(raw, schema, f"{path.name}:{lineno}")


def ingest_corpus(
    source: str | Path,
    schema: Mapping[str, str] | None = None,
    labels: Sequence[str] | None = None,
    closed_labels: bool = False,
) -> Corpus:
    """Read a JSONL or CSV dataset into a validated :class:`Corpus`.

    ``schema`` maps source column names to TestCase field names. Missing
    ``version`` defaults to 0 and missing ``origin_id`` to the case's own id.
    Errors name the offending line.
    """
    path = Path(source)
    if not path.exists():
        raise CorpusError(f"corpus file not found: {path}")
    cases: list[TestCase] = []
    lines: dict[str, int] = {}
    for lineno, case in _read_rows(path, schema):
        if case.id in lines:
            raise CorpusError(
                f"{path.name}:{lineno}: duplicate id {case.id!r} (first seen on line {lines[case.id]})"
            )
        lines[case.id] = lineno
        cases.append(case)

    corpus, report = _assemble(cases, labels, closed_labels)
    if not report.ok:
        v = report.violations[0]
        raise CorpusError(f"{path.name}:{lines.get(v.case_id, '?')}: {v.message}")
    logger.info("ingested %d cases from %s", len(corpus), path)
    return corpus


def corpus_to_jsonl(corpus: Corpus, meta: Mapping | None = None) -> str:
    lines = []
    if meta is not None:
        lines.append(json.dumps({META_KEY: dict(meta)}, sort_keys=True, ensure_ascii=False))
    for case in corpus.cases:
        lines.append(json.dumps(case.to_record(), ensure_ascii=False))
    return "".join(line + "\n" for line in lines)


def export_corpus(corpus: Corpus, path: str | Path, meta: Mapping | None = None) -> None:
    """Write the corpus as canonical-ordered JSONL."""
    Path(path).write_text(corpus_to_jsonl(corpus, meta), encoding="utf-8")


def register_variant(corpus: Corpus, variant: TestCase) -> Corpus:
    """Return a new corpus with ``variant`` added to its origin's group.

    A blank category is filled in from the origin.
    """
    if variant.version < 1:
        raise CorpusError(f"variant {variant.id!r} must have version >= 1")
    if variant.id in corpus:
        raise CorpusError(f"id collision: {variant.id!r} already in corpus")
    origin = corpus.get(variant.origin_id)
    if origin is None:
        raise CorpusError(f"dangling variant: origin {variant.origin_id!r} not found")
    if origin.version != 0:
        raise CorpusError(f"origin {variant.origin_id!r} is itself a variant")
    if not variant.category:
        variant = replace(variant, category=origin.category)
    elif variant.category != origin.category:
        raise CorpusError(
            f"category mismatch: variant {variant.id!r} is {variant.category!r}, "
            f"origin is {origin.category!r}"
        )
    return corpus.with_cases([variant])


# --- counts ----------------------------------------------------------------

@dataclass(frozen=True)
class CountsTable:
    """Counts per (category, split, version) with derived totals."""

    categories: tuple[str, ...]
    splits: tuple[str, ...]
    versions: tuple[int, ...]
    counts: Mapping[tuple[str, str, int], int] = field(default_factory=dict)

    def cell(self, category: str, split: str, version: int) -> int:
        return self.counts.get((category, split, version), 0)

    def total(self, category: str, split: str) -> int:
        return sum(self.cell(category, split, v) for v in self.versions)

    def split_total(self, split: str) -> int:
        return sum(self.total(c, split) for c in self.categories)

    def version_total(self, split: str, version: int) -> int:
        return sum(self.cell(c, split, version) for c in self.categories)

    def grand_total(self) -> int:
        return sum(self.counts.values())

    def rows(self) -> list[dict]:
        out = []
        for cat in self.categories:
            row: dict = {"category": cat}
            for split in self.splits:
                row[f"{split}.total"] = self.total(cat, split)
                for v in self.versions:
                    row[f"{split}.v{v}"] = self.cell(cat, split, v)
            out.append(row)
        return out


def category_counts(corpus: Corpus, partition=None) -> CountsTable:
    """Tabulate cases by category, partition set and version.

    ``partition`` is a SplitPlan (anything with a ``sets`` mapping of name to
    ids). Without one, all cases fall under a single ``"all"`` column.
    """
    if partition is None:
        groups = {"all": [c.id for c in corpus.cases]}
    else:
        groups = {name: list(ids) for name, ids in partition.sets.items()}
        for name, ids in groups.items():
            for case_id in ids:
                if case_id not in corpus:
                    raise CorpusError(f"unknown id {case_id!r} in partition set {name!r}")

    counts: Counter = Counter()
    versions = set()
    for name, ids in groups.items():
        for case_id in ids:
            case = corpus[case_id]
            counts[(case.category, name, case.version)] += 1
            versions.add(case.version)
    if not versions:
        versions = {0}
    categories = tuple(corpus.labels) + tuple(
        sorted({k[0] for k in counts} - set(corpus.labels))
    )
    return CountsTable(categories, tuple(groups), tuple(sorted(versions)), dict(counts))
