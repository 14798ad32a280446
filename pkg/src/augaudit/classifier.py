"""Classification stage: nearest-centroid baseline and external-model adapter."""
from __future__ import annotations

import json
import math
import os
import re
import shlex
import subprocess
from collections import Counter
from functools import lru_cache
from dataclasses import asdict, dataclass, field
from typing import Iterable, Mapping, Sequence

from .corpus import TestCase
from .lexer import IDENTIFIER, KEYWORD, NUMBER, RAW, STRING, tokenize

_WORD = re.compile(r"[A-Za-z0-9_]+")


class ClassifierError(RuntimeError):
    pass


@dataclass(frozen=True)
class ClassifierConfig:
    backend: str = "builtin"
    external_command: str | None = None
    # carried for provenance and handed to external backends untouched
    learning_rate: float = 1e-5
    batch_size: int = 8
    epochs: int = 200
    optimizer: str = "adam-weight-decay"

    def __post_init__(self):
        if self.backend not in ("builtin", "external"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.backend == "external" and not self.external_command:
            raise ValueError("external backend requires external_command")

    @classmethod
    def from_dict(cls, data: Mapping) -> "ClassifierConfig":
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown classifier config keys: {sorted(unknown)}")
        return cls(**dict(data))

    def to_dict(self) -> dict:
        return asdict(self)


@lru_cache(maxsize=8192)
def _code_features(code: str) -> tuple[tuple[str, int], ...]:
    counts: Counter = Counter()
    for tok in tokenize(code):
        if tok.kind in (IDENTIFIER, KEYWORD, NUMBER):
            counts[tok.text] += 1
        elif tok.kind in (STRING, RAW):
            counts.update(_WORD.findall(tok.text))
    return tuple(counts.items())


def featurize(case: TestCase | str) -> Counter:
    """Bag of identifier/keyword/number tokens plus words inside string literals."""
    return Counter(dict(_code_features(case if isinstance(case, str) else case.code)))


def _normalized(vec: Mapping[str, float]) -> dict[str, float]:
    norm = math.sqrt(sum(v * v for _, v in sorted(vec.items())))
    if norm == 0:
        return {}
    return {k: v / norm for k, v in sorted(vec.items())}


@dataclass(frozen=True)
class Prediction:
    id: str
    category: str
    empty_features: bool = False

    def to_dict(self) -> dict:
        return {"id": self.id, "category": self.category}


@dataclass
class CentroidModel:
    labels: tuple[str, ...]
    centroids: dict[str, dict[str, float]] = field(default_factory=dict)

    def scores(self, features: Mapping[str, int]) -> dict[str, float]:
        x = _normalized(features)
        out = {}
        for label in self.labels:
            c = self.centroids[label]
            out[label] = sum(v * c[k] for k, v in x.items() if k in c)
        return out

    def predict(self, case: TestCase) -> Prediction:
        features = featurize(case)
        if not features:
            return Prediction(case.id, self.labels[0], True)
        best, best_score = self.labels[0], -math.inf
        for label, score in self.scores(features).items():
            if score > best_score:  # strict: earlier label wins ties
                best, best_score = label, score
        return Prediction(case.id, best)

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "centroids": {k: dict(sorted(v.items())) for k, v in self.centroids.items()},
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "CentroidModel":
        return cls(tuple(d["labels"]), {k: dict(v) for k, v in d["centroids"].items()})


def train(
    cases: Sequence[TestCase],
    label_order: Sequence[str] | None = None,
) -> CentroidModel:
    """Per-category L2-normalized sum of feature counts.

    The model only knows labels present in ``cases``; they are ordered by
    ``label_order`` (unlisted ones sorted after it).
    """
    if not cases:
        raise ClassifierError("empty training set")
    sums: dict[str, Counter] = {}
    for case in cases:
        sums.setdefault(case.category, Counter()).update(featurize(case))
    order = [lab for lab in (label_order or ()) if lab in sums]
    order += sorted(set(sums) - set(order))
    return CentroidModel(tuple(order), {lab: _normalized(sums[lab]) for lab in order})


def predict(model: CentroidModel, case: TestCase) -> Prediction:
    return model.predict(case)


def predict_all(model: CentroidModel, cases: Iterable[TestCase]) -> list[Prediction]:
    return [model.predict(c) for c in cases]


def run_external(
    command: str | Sequence[str],
    train_cases: Sequence[TestCase],
    eval_cases: Sequence[TestCase],
    config: ClassifierConfig | None = None,
    timeout: float | None = None,
) -> list[Prediction]:
    """Drive an external model over a JSONL stdin/stdout protocol.

    Train records carry their category; eval records do not. The command
    must print exactly one ``{"id", "category"}`` object per eval case.
    Hyperparameters are exported as JSON in ``AUGAUDIT_HPARAMS``.
    """
    argv = shlex.split(command) if isinstance(command, str) else list(command)
    lines = []
    for case in train_cases:
        rec = case.to_record()
        rec["role"] = "train"
        lines.append(json.dumps(rec, sort_keys=True))
    for case in eval_cases:
        rec = case.to_record()
        del rec["category"]
        rec["role"] = "eval"
        lines.append(json.dumps(rec, sort_keys=True))
    env = dict(os.environ)
    env["AUGAUDIT_HPARAMS"] = json.dumps((config or ClassifierConfig()).to_dict(), sort_keys=True)
    try:
        proc = subprocess.run(
            argv, input="".join(l + "\n" for l in lines), capture_output=True,
            text=True, env=env, timeout=timeout,
        )
    except (OSError, subprocess.TimeoutExpired) as exc:
        raise ClassifierError(f"external model failed to run: {exc}") from None
    if proc.returncode != 0:
        raise ClassifierError(
            f"external model exited with status {proc.returncode}: {proc.stderr.strip()[:500]}"
        )

    wanted = {c.id for c in eval_cases}
    got: dict[str, str] = {}
    for lineno, line in enumerate(proc.stdout.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            case_id, category = rec["id"], rec["category"]
        except (json.JSONDecodeError, KeyError, TypeError):
            raise ClassifierError(f"malformed prediction on line {lineno}: {line!r}") from None
        if case_id not in wanted:
            raise ClassifierError(f"unknown id in prediction on line {lineno}: {line!r}")
        if case_id in got:
            raise ClassifierError(f"duplicate prediction on line {lineno}: {line!r}")
        got[case_id] = str(category)
    missing = wanted - set(got)
    if missing:
        raise ClassifierError(
            f"incomplete predictions: {len(missing)} missing, e.g. {sorted(missing)[:3]}"
        )
    return [Prediction(c.id, got[c.id]) for c in eval_cases]
