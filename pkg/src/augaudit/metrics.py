"""Confusion tables, per-category F1, bias gaps and report rendering."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Mapping, Sequence

SCHEMA = "augaudit/1"
FORMATS = ("json", "csv", "plotdata")


class MetricsError(ValueError):
    pass


@dataclass(frozen=True)
class ConfusionTable:
    labels: tuple[str, ...]
    matrix: tuple[tuple[int, ...], ...]

    def __getitem__(self, key: tuple[str, str]) -> int:
        gold, pred = key
        return self.matrix[self.labels.index(gold)][self.labels.index(pred)]

    @property
    def total(self) -> int:
        return sum(map(sum, self.matrix))

    def to_dict(self) -> dict:
        return {"labels": list(self.labels), "matrix": [list(r) for r in self.matrix]}


def confusion(
    gold: Sequence[tuple[str, str]],
    predicted: Sequence[tuple[str, str]],
    labels: Sequence[str],
) -> ConfusionTable:
    """Tally (gold, predicted) over ``labels``; both inputs are (id, category) pairs."""
    labels = tuple(labels)
    index = {lab: i for i, lab in enumerate(labels)}
    g = dict(gold)
    p = dict(predicted)
    if len(g) != len(gold) or len(p) != len(predicted):
        raise MetricsError("duplicate ids in input")
    if set(g) != set(p):
        diff = sorted(set(g) ^ set(p))
        raise MetricsError(f"gold and predicted ids differ, e.g. {diff[:3]}")
    m = [[0] * len(labels) for _ in labels]
    for case_id in sorted(g):
        for lab in (g[case_id], p[case_id]):
            if lab not in index:
                raise MetricsError(f"unknown label {lab!r} for {case_id!r}")
        m[index[g[case_id]]][index[p[case_id]]] += 1
    return ConfusionTable(labels, tuple(tuple(r) for r in m))


def f1_per_category(t: ConfusionTable) -> dict[str, float]:
    """One-vs-rest F1; any zero denominator makes the affected quantity 0."""
    out = {}
    n = len(t.labels)
    for i, lab in enumerate(t.labels):
        tp = t.matrix[i][i]
        fp = sum(t.matrix[r][i] for r in range(n)) - tp
        fn = sum(t.matrix[i]) - tp
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        out[lab] = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return out


def support(t: ConfusionTable) -> dict[str, int]:
    return {lab: sum(row) for lab, row in zip(t.labels, t.matrix)}


def macro_f1(per_category: Mapping[str, float], weights: Mapping[str, float] | None = None) -> float:
    """Unweighted mean of the per-category scores (weighted when ``weights`` given)."""
    if not per_category:
        raise MetricsError("macro F1 of an empty label set")
    if weights is None:
        return sum(per_category.values()) / len(per_category)
    total = sum(weights.get(k, 0) for k in per_category)
    if total == 0:
        raise MetricsError("weights sum to zero")
    return sum(v * weights.get(k, 0) for k, v in per_category.items()) / total


@dataclass(frozen=True)
class GapTable:
    set1: str
    set2: str
    labels: tuple[str, ...]
    f1_set1: Mapping[str, float]
    f1_set2: Mapping[str, float]
    gaps: Mapping[str, float]
    average_gap: float

    @property
    def macro_set1(self) -> float:
        return macro_f1(self.f1_set1)

    @property
    def macro_set2(self) -> float:
        return macro_f1(self.f1_set2)

    def to_dict(self) -> dict:
        return {
            "set1": self.set1,
            "set2": self.set2,
            "labels": list(self.labels),
            "f1_set1": dict(self.f1_set1),
            "f1_set2": dict(self.f1_set2),
            "gaps": dict(self.gaps),
            "average_gap": self.average_gap,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "GapTable":
        return cls(d["set1"], d["set2"], tuple(d["labels"]), d["f1_set1"], d["f1_set2"],
                   d["gaps"], d["average_gap"])


def bias_gap(
    set1: Mapping[str, float],
    set2: Mapping[str, float],
    name1: str = "set1",
    name2: str = "set2",
) -> GapTable:
    """Per-category ``set2 - set1``; positive means set2 scored higher."""
    if set(set1) != set(set2):
        raise MetricsError(f"label mismatch: {sorted(set(set1) ^ set(set2))}")
    labels = tuple(set1)
    gaps = {lab: set2[lab] - set1[lab] for lab in labels}
    average = sum(gaps.values()) / len(gaps) if gaps else 0.0
    return GapTable(name1, name2, labels, dict(set1), dict(set2), gaps, average)


def percent(x: float) -> int:
    """Fraction to integer percent, rounding half up."""
    # round away float noise first so 0.125 -> 12.5 -> 13 as written
    d = Decimal(repr(round(x * 100, 9)))
    return int(d.quantize(Decimal(1), rounding=ROUND_HALF_UP))


def signed_percent(x: float) -> str:
    p = percent(x)
    return f"+{p}" if p > 0 else str(p)


@dataclass(frozen=True)
class EvalResult:
    name: str
    labels: tuple[str, ...]
    f1: Mapping[str, float]
    macro_f1: float
    n_cases: int
    confusion: ConfusionTable | None = None

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "labels": list(self.labels),
            "f1": dict(self.f1),
            "macro_f1": self.macro_f1,
            "n_cases": self.n_cases,
        }
        if self.confusion is not None:
            d["confusion"] = self.confusion.to_dict()
        return d


def evaluate(name: str, gold, predicted, labels: Sequence[str]) -> EvalResult:
    t = confusion(gold, predicted, labels)
    f1 = f1_per_category(t)
    return EvalResult(name, tuple(labels), f1, macro_f1(f1) if f1 else 0.0, t.total, t)


@dataclass
class BiasAuditReport:
    evaluations: dict[str, EvalResult] = field(default_factory=dict)
    comparisons: list[GapTable] = field(default_factory=list)
    integrity: dict = field(default_factory=dict)
    leakage: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "evaluations": {k: v.to_dict() for k, v in self.evaluations.items()},
            "comparisons": [c.to_dict() for c in self.comparisons],
            "integrity": self.integrity,
            "leakage": self.leakage,
            "config": self.config,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "BiasAuditReport":
        if d.get("schema") != SCHEMA:
            raise MetricsError(f"unsupported report schema {d.get('schema')!r}")
        evals = {}
        for k, v in d.get("evaluations", {}).items():
            conf = v.get("confusion")
            evals[k] = EvalResult(
                v["name"], tuple(v["labels"]), v["f1"], v["macro_f1"], v["n_cases"],
                ConfusionTable(tuple(conf["labels"]), tuple(tuple(r) for r in conf["matrix"])) if conf else None,
            )
        return cls(
            evals,
            [GapTable.from_dict(c) for c in d.get("comparisons", [])],
            d.get("integrity", {}),
            d.get("leakage", {}),
            d.get("config", {}),
        )


def _check_consistency(gap: GapTable) -> None:
    for lab in gap.labels:
        if gap.gaps[lab] != gap.f1_set2[lab] - gap.f1_set1[lab]:
            raise MetricsError(f"gap for {lab!r} does not match its F1 values")
    if gap.labels:
        avg = sum(gap.gaps[lab] for lab in gap.labels) / len(gap.labels)
        if avg != gap.average_gap:
            raise MetricsError(f"average gap {gap.average_gap} != mean of rows {avg}")


def _csv_text(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def gap_rows(gap: GapTable) -> list[list[str]]:
    rows = [["Category", gap.set1, gap.set2, "Difference"]]
    for lab in gap.labels:
        rows.append([lab, str(percent(gap.f1_set1[lab])), str(percent(gap.f1_set2[lab])),
                     signed_percent(gap.gaps[lab])])
    if gap.labels:
        rows.append(["Average", str(percent(gap.macro_set1)), str(percent(gap.macro_set2)),
                     signed_percent(gap.average_gap)])
    return rows


def render_report(report: BiasAuditReport, fmt: str = "json") -> bytes:
    """Serialize ``report``.

    ``csv`` gives one category/set1/set2/difference block per comparison
    (blank line between blocks), percentages rounded half up. ``plotdata``
    gives the raw F1 series behind each comparison. When the config echo
    carries a config hash, both CSV forms open with a ``#`` provenance line.
    """
    if fmt not in FORMATS:
        raise MetricsError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    for gap in report.comparisons:
        _check_consistency(gap)
    if fmt == "json":
        text = json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        text = "\n".join(_csv_text(gap_rows(g)) for g in report.comparisons)
    else:
        rows = [["figure", "category", "series1_f1", "series2_f1"]]
        for g in report.comparisons:
            fig = f"{g.set1}_vs_{g.set2}"
            for lab in g.labels:
                rows.append([fig, lab, f"{g.f1_set1[lab]:.6f}", f"{g.f1_set2[lab]:.6f}"])
        text = _csv_text(rows)
    if fmt != "json" and "config_hash" in report.config:
        cfg = report.config
        text = f"# {SCHEMA} config_hash={cfg['config_hash']} seed={cfg.get('seed')}\n" + text
    return text.encode("utf-8")
