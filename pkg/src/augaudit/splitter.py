"""Origin-level train/test splits and the two experiment protocols.

Splits are always drawn over originals; variants follow their origin
according to the protocol. ``verify_group_integrity`` re-checks a plan from
scratch and is independent of the builders.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Mapping

from .corpus import Corpus
from .prng import SplitMix64, derive_seed

logger = logging.getLogger(__name__)

EXP1_PHASE_A = "Exp1-PhaseA"
EXP1_PHASE_B = "Exp1-PhaseB"
EXP2 = "Exp2"
PROTOCOLS = (EXP1_PHASE_A, EXP1_PHASE_B, EXP2)


class SplitError(ValueError):
    pass


@dataclass(frozen=True)
class OriginSplit:
    train_origins: frozenset[str]
    test_origins: frozenset[str]
    seed: int = 0
    test_fraction: float = 0.2

    def __post_init__(self):
        object.__setattr__(self, "train_origins", frozenset(self.train_origins))
        object.__setattr__(self, "test_origins", frozenset(self.test_origins))
        overlap = self.train_origins & self.test_origins
        if overlap:
            raise SplitError(f"origins on both sides: {sorted(overlap)[:5]}")

    def to_dict(self) -> dict:
        return {
            "train_origins": sorted(self.train_origins),
            "test_origins": sorted(self.test_origins),
            "seed": self.seed,
            "fraction": self.test_fraction,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "OriginSplit":
        return cls(d["train_origins"], d["test_origins"], d.get("seed", 0), d.get("fraction", 0.2))


@dataclass(frozen=True)
class SplitPlan:
    protocol: str
    sets: Mapping[str, tuple[str, ...]]
    seed: int = 0
    fraction: float = 0.2
    meta: Mapping = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise SplitError(f"unknown protocol {self.protocol!r}")
        object.__setattr__(
            self, "sets", {name: tuple(sorted(ids)) for name, ids in self.sets.items()}
        )

    def __getitem__(self, name: str) -> tuple[str, ...]:
        return self.sets[name]

    @property
    def eval_sets(self) -> list[str]:
        return [name for name in self.sets if name != "train"]

    def to_dict(self) -> dict:
        d = {
            "protocol": self.protocol,
            "sets": {name: list(ids) for name, ids in self.sets.items()},
            "seed": self.seed,
            "fraction": self.fraction,
        }
        d.update(self.meta)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: Mapping) -> "SplitPlan":
        extra = {k: v for k, v in d.items() if k not in ("protocol", "sets", "seed", "fraction")}
        return cls(d["protocol"], d["sets"], d.get("seed", 0), d.get("fraction", 0.2), extra)

    @classmethod
    def from_json(cls, text: str) -> "SplitPlan":
        return cls.from_dict(json.loads(text))


def round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def split_originals(
    corpus: Corpus,
    test_fraction: float = 0.2,
    seed: int = 0,
    test_counts: Mapping[str, int] | None = None,
) -> OriginSplit:
    """Stratified random partition of the originals.

    Each category sends ``round(test_fraction * n_c)`` originals (at least
    one) to test, unless ``test_counts`` pins that category's count.
    """
    if not 0 < test_fraction < 1:
        raise SplitError(f"test_fraction must be in (0, 1), got {test_fraction}")
    by_cat: dict[str, list[str]] = {}
    for case in corpus.originals():
        by_cat.setdefault(case.category, []).append(case.id)

    rng = SplitMix64(derive_seed(seed, "split_originals"))
    train: set[str] = set()
    test: set[str] = set()
    for cat in list(corpus.labels) + sorted(set(by_cat) - set(corpus.labels)):
        ids = sorted(by_cat.get(cat, []))
        if not ids:
            continue
        n = len(ids)
        if n < 2:
            raise SplitError(f"category {cat!r} has {n} original(s); need at least 2")
        if test_counts is not None and cat in test_counts:
            n_test = test_counts[cat]
        else:
            n_test = max(1, round_half_up(test_fraction * n))
        if not 0 < n_test < n:
            raise SplitError(
                f"category {cat!r}: {n_test} of {n} originals to test leaves a side empty"
            )
        rng.shuffle(ids)
        test.update(ids[:n_test])
        train.update(ids[n_test:])
    return OriginSplit(frozenset(train), frozenset(test), seed, test_fraction)


def _check_origins(corpus: Corpus, split: OriginSplit) -> None:
    for oid in sorted(split.train_origins | split.test_origins):
        case = corpus.get(oid)
        if case is None:
            raise SplitError(f"split references unknown id {oid!r}")
        if case.version != 0:
            raise SplitError(f"split origin {oid!r} is a variant")


def _expand(corpus: Corpus, origins) -> list[str]:
    out = []
    for oid in origins:
        out.extend(corpus.group(oid))
    return out


def build_experiment1(corpus: Corpus, split: OriginSplit) -> tuple[SplitPlan, SplitPlan]:
    """Phase A (originals only) and Phase B (each origin with all its variants)."""
    _check_origins(corpus, split)
    common = dict(seed=split.seed, fraction=split.test_fraction)
    phase_a = SplitPlan(
        EXP1_PHASE_A,
        {"train": list(split.train_origins), "test": list(split.test_origins)},
        **common,
    )
    phase_b = SplitPlan(
        EXP1_PHASE_B,
        {"train": _expand(corpus, split.train_origins), "test": _expand(corpus, split.test_origins)},
        **common,
    )
    return phase_a, phase_b


def build_experiment2(corpus: Corpus, split: OriginSplit) -> SplitPlan:
    """Train on originals; test1 = unseen originals, test2 = variants of training origins."""
    _check_origins(corpus, split)
    test2 = [v for oid in split.train_origins for v in corpus.variants_of(oid)]
    return SplitPlan(
        EXP2,
        {"train": list(split.train_origins), "test1": list(split.test_origins), "test2": test2},
        seed=split.seed,
        fraction=split.test_fraction,
    )


@dataclass(frozen=True)
class IntegrityViolation:
    kind: str
    origin_id: str
    detail: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "origin_id": self.origin_id, "detail": self.detail}


@dataclass(frozen=True)
class IntegrityReport:
    protocol: str
    violations: tuple[IntegrityViolation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __len__(self) -> int:
        return len(self.violations)

    def to_dict(self) -> dict:
        return {"protocol": self.protocol, "violations": [v.to_dict() for v in self.violations]}


def verify_group_integrity(plan: SplitPlan, corpus: Corpus) -> IntegrityReport:
    """Findings for every way ``plan`` lets an origin group leak across sets."""
    out: list[IntegrityViolation] = []
    where: dict[str, list[str]] = {}
    for name, ids in plan.sets.items():
        for case_id in ids:
            if case_id not in corpus:
                raise SplitError(f"plan set {name!r} references unknown id {case_id!r}")
            where.setdefault(case_id, []).append(name)
    for case_id, names in sorted(where.items()):
        if len(names) > 1:
            out.append(IntegrityViolation(
                "duplicate_id", corpus[case_id].origin_id, f"{case_id} appears in {sorted(names)}"
            ))

    # origin id -> set names holding any member of its group
    group_sets: dict[str, set[str]] = {}
    for case_id, names in where.items():
        group_sets.setdefault(corpus[case_id].origin_id, set()).update(names)

    if plan.protocol in (EXP1_PHASE_A, EXP1_PHASE_B):
        for oid, names in sorted(group_sets.items()):
            if len(names) > 1:
                out.append(IntegrityViolation(
                    "group_spans_sets", oid, f"group {oid} spans {sorted(names)}"
                ))
        return IntegrityReport(plan.protocol, tuple(out))

    train_origins = {corpus[c].origin_id for c in plan.sets.get("train", ()) if corpus[c].version == 0}
    for oid, names in sorted(group_sets.items()):
        if "train" in names and "test1" in names:
            out.append(IntegrityViolation(
                "test1_origin_in_train", oid, f"group {oid} has members in train and test1"
            ))
    for name in ("train", "test1"):
        for case_id in plan.sets.get(name, ()):
            if corpus[case_id].version != 0:
                out.append(IntegrityViolation(
                    f"variant_in_{name}", corpus[case_id].origin_id, f"variant {case_id} in {name}"
                ))
    for case_id in plan.sets.get("test2", ()):
        case = corpus[case_id]
        if case.version == 0:
            out.append(IntegrityViolation("original_in_test2", case.origin_id, f"original {case_id} in test2"))
        elif case.origin_id not in train_origins:
            out.append(IntegrityViolation(
                "test2_origin_not_in_train", case.origin_id,
                f"{case_id} in test2 but origin {case.origin_id} not in train",
            ))
    return IntegrityReport(plan.protocol, tuple(out))


def compare_counts(
    plan: SplitPlan,
    corpus: Corpus,
    expected: Mapping[str, Mapping[str, int]],
) -> list[str]:
    """Warn where externally reported per-category set sizes disagree with ``plan``.

    ``expected`` maps category -> set name -> count. Counts that exceed what
    the protocol can produce from this corpus get a dedicated message.
    """
    warnings: list[str] = []
    for cat, per_set in expected.items():
        for name, want in per_set.items():
            have = sum(1 for c in plan.sets.get(name, ()) if corpus[c].category == cat)
            if have == want:
                continue
            msg = f"{plan.protocol} {name} {cat}: plan has {have}, reference reports {want}"
            if name == "test2" and plan.protocol == EXP2:
                cap = sum(len(corpus.variants_of(o)) for o in plan.sets["train"]
                          if corpus[o].category == cat)
                if want > cap:
                    msg += f" (exceeds the {cap} variants available from training origins)"
            warnings.append(msg)
            logger.warning(msg)
    return warnings


# Reference FlakyCat Experiment 2 set sizes, for use with compare_counts.
FLAKYCAT_EXP2_SIZES = {
    "Async": {"train": 99, "test1": 26, "test2": 251},
    "UC": {"train": 44, "test1": 7, "test2": 102},
    "Conc": {"train": 39, "test1": 9, "test2": 96},
    "Time": {"train": 34, "test1": 8, "test2": 80},
    "TOD": {"train": 79, "test1": 24, "test2": 188},
}
