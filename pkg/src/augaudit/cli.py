"""Command line entry point and the end-to-end audit pipeline.

Exit codes: 0 success (bias findings included), 1 runtime error, 2 usage
error, 3 leaks found in lint mode.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from . import __version__
from .augmentor import MutationConfig, augment_corpus
from .classifier import ClassifierConfig, CentroidModel, Prediction, run_external, train
from .corpus import Corpus, corpus_to_jsonl, ingest_corpus
from .leakage import DEFAULT_THRESHOLD, DEFAULT_WINDOW, detect_leaks
from .metrics import FORMATS, BiasAuditReport, bias_gap, evaluate, render_report
from .prng import MASK64, derive_seed
from .splitter import (
    EXP1_PHASE_A,
    EXP1_PHASE_B,
    EXP2,
    SplitPlan,
    build_experiment1,
    build_experiment2,
    split_originals,
    verify_group_integrity,
)
from .synthetic import SyntheticConfig, generate_corpus

logger = logging.getLogger("augaudit")

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_LEAKS = 0, 1, 2, 3
SEED_ENV = "AUGAUDIT_SEED"
DEFAULT_CONFIG = Path(__file__).parent / "data" / "default_config.json"
SECTIONS = ("seed", "corpus", "augment", "split", "classifier", "leakage", "output")

# short names used for artifact files and evaluation sets
PLAN_SLUGS = {EXP1_PHASE_A: "exp1_phaseA", EXP1_PHASE_B: "exp1_phaseB", EXP2: "exp2"}


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException | str):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    seed: int = 0
    corpus_path: Path | None = None
    schema: dict | None = None
    labels: list[str] | None = None
    closed_labels: bool = False
    augment: str | bool = "auto"
    mutation: MutationConfig = field(default_factory=MutationConfig)
    test_fraction: float = 0.2
    test_counts: dict[str, int] | None = None
    classifier: ClassifierConfig = field(default_factory=ClassifierConfig)
    window: int = DEFAULT_WINDOW
    threshold: float = DEFAULT_THRESHOLD
    lint: bool = False
    out_dir: Path = Path("augaudit-out")
    formats: tuple[str, ...] = ("json", "csv", "plotdata")
    protocols: tuple[str, ...] = ("exp1", "exp2")
    raw: dict = field(default_factory=dict)

    @property
    def config_hash(self) -> str:
        doc = {k: v for k, v in self.raw.items() if k != "output"}
        doc["seed"] = self.seed
        doc["protocols"] = list(self.protocols)
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]

    def stage_seed(self, stage: str) -> int:
        return derive_seed(self.seed, stage)

    def meta(self, artifact: str) -> dict:
        return {"artifact": artifact, "config_hash": self.config_hash, "seed": self.seed}

    def echo(self) -> dict:
        return {
            "config_hash": self.config_hash,
            "seed": self.seed,
            "stage_seeds": {s: self.stage_seed(s) for s in ("augment", "split")},
            "split": {"test_fraction": self.test_fraction, "test_counts": self.test_counts},
            "augment": {"mode": self.augment, "mutation": self.mutation.to_dict()},
            "classifier": self.classifier.to_dict(),
            "leakage": {"window": self.window, "threshold": self.threshold, "lint": self.lint},
            "protocols": list(self.protocols),
        }


def parse_seed(value) -> int:
    try:
        seed = int(value, 0) if isinstance(value, str) else int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {value!r}") from None
    if isinstance(value, bool) or not 0 <= seed <= MASK64:
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {value!r}")
    return seed


def load_config(path: str | Path | None, seed: str | int | None = None,
                out: str | Path | None = None) -> RunConfig:
    """Resolve a RunConfig from a JSON file plus command-line overrides.

    Seed precedence: ``--seed``, then ``AUGAUDIT_SEED``, then the file.
    Relative paths in the file are taken relative to the file itself. With
    no file the bundled default config (synthetic corpus) is used, writing
    under the current directory.
    """
    bundled = path is None
    if bundled:
        path = DEFAULT_CONFIG
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - set(SECTIONS)
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    base = path.parent
    out_base = Path.cwd() if bundled else base

    cfg = RunConfig(raw=raw)
    if seed is not None:
        cfg.seed = parse_seed(seed)
    elif os.environ.get(SEED_ENV):
        cfg.seed = parse_seed(os.environ[SEED_ENV])
    elif "seed" in raw:
        cfg.seed = parse_seed(raw["seed"])

    try:
        corpus = dict(raw.get("corpus", {}))
        if corpus.get("path"):
            cfg.corpus_path = base / corpus.pop("path")
        cfg.schema = corpus.pop("schema", None)
        cfg.labels = corpus.pop("labels", None)
        cfg.closed_labels = bool(corpus.pop("closed_labels", False))
        _no_leftovers("corpus", corpus)

        aug = dict(raw.get("augment", {}))
        cfg.augment = aug.pop("enabled", "auto")
        if cfg.augment not in ("auto", True, False):
            raise ConfigError("augment.enabled must be true, false or \"auto\"")
        cfg.mutation = MutationConfig.from_dict(aug)

        split = dict(raw.get("split", {}))
        cfg.test_fraction = float(split.pop("test_fraction", 0.2))
        cfg.test_counts = split.pop("test_counts", None)
        _no_leftovers("split", split)

        cfg.classifier = ClassifierConfig.from_dict(raw.get("classifier", {}))

        leak = dict(raw.get("leakage", {}))
        cfg.window = int(leak.pop("window", DEFAULT_WINDOW))
        cfg.threshold = float(leak.pop("threshold", DEFAULT_THRESHOLD))
        cfg.lint = bool(leak.pop("lint", False))
        _no_leftovers("leakage", leak)

        output = dict(raw.get("output", {}))
        if output.get("dir"):
            cfg.out_dir = out_base / output.pop("dir")
        else:
            output.pop("dir", None)
        cfg.formats = tuple(output.pop("formats", cfg.formats))
        bad = set(cfg.formats) - set(FORMATS)
        if bad:
            raise ConfigError(f"unknown report formats {sorted(bad)}")
        _no_leftovers("output", output)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None

    if out is not None:
        cfg.out_dir = Path(out)
    return cfg


def _no_leftovers(section: str, d: Mapping) -> None:
    if d:
        raise ConfigError(f"unknown keys in {section!r}: {sorted(d)}")


# --- artifact helpers -------------------------------------------------------

def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _jsonl(records, meta: Mapping | None = None) -> str:
    lines = []
    if meta is not None:
        lines.append(json.dumps({"_meta": dict(meta)}, sort_keys=True))
    lines.extend(json.dumps(r, sort_keys=True) for r in records)
    return "".join(line + "\n" for line in lines)


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def read_jsonl(path: Path) -> list[dict]:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            rec = json.loads(line)
            if "_meta" not in rec:
                out.append(rec)
    return out


def _stage(name: str):
    """Decorator-free helper: run ``fn`` and wrap failures with the stage name."""
    class _Ctx:
        def __enter__(self):
            logger.info("stage %s", name)

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and not isinstance(exc, StageError):
                raise StageError(name, exc) from exc
            return False
    return _Ctx()


# --- pipeline stages --------------------------------------------------------

def stage_ingest(cfg: RunConfig, path: Path | None = None) -> Corpus:
    with _stage("ingest"):
        path = path or cfg.corpus_path
        if path is None:
            raise ConfigError("no corpus path given (config corpus.path or --corpus)")
        return ingest_corpus(path, cfg.schema, cfg.labels, cfg.closed_labels)


def stage_augment(cfg: RunConfig, corpus: Corpus):
    with _stage("augment"):
        has_variants = any(c.version > 0 for c in corpus)
        if cfg.augment is False or (cfg.augment == "auto" and has_variants):
            return corpus, ()
        result = augment_corpus(corpus, cfg.mutation, cfg.stage_seed("augment"))
        return result.corpus, result.skips


def stage_split(cfg: RunConfig, corpus: Corpus) -> list[SplitPlan]:
    with _stage("split"):
        split = split_originals(corpus, cfg.test_fraction, cfg.stage_seed("split"), cfg.test_counts)
        plans = []
        if "exp1" in cfg.protocols:
            plans.extend(build_experiment1(corpus, split))
        if "exp2" in cfg.protocols:
            plans.append(build_experiment2(corpus, split))
        meta = {"config_hash": cfg.config_hash, "run_seed": cfg.seed}
        return [SplitPlan(p.protocol, p.sets, p.seed, p.fraction, meta) for p in plans]


def present_labels(corpus: Corpus) -> list[str]:
    seen = {c.category for c in corpus}
    return [lab for lab in corpus.labels if lab in seen]


def fit_and_predict(cfg: RunConfig, corpus: Corpus, plan: SplitPlan,
                    model: CentroidModel | None = None) -> dict[str, list[Prediction]]:
    """Predictions for every evaluation set of ``plan``."""
    train_cases = [corpus[i] for i in plan["train"]]
    out = {}
    if cfg.classifier.backend == "external":
        for name in plan.eval_sets:
            eval_cases = [corpus[i] for i in plan[name]]
            out[name] = run_external(cfg.classifier.external_command, train_cases, eval_cases,
                                     cfg.classifier)
        return out
    if model is None:
        model = train(train_cases, corpus.labels)
    for name in plan.eval_sets:
        out[name] = [model.predict(corpus[i]) for i in plan[name]]
    return out


def eval_name(plan: SplitPlan, set_name: str) -> str:
    slug = PLAN_SLUGS[plan.protocol]
    return slug if plan.protocol != EXP2 else f"{slug}_{set_name}"


def stage_evaluate(cfg: RunConfig, corpus: Corpus, plans: Sequence[SplitPlan]):
    with _stage("evaluate"):
        labels = present_labels(corpus)
        predictions: dict[str, list[Prediction]] = {}
        results = {}
        for plan in plans:
            for set_name, preds in fit_and_predict(cfg, corpus, plan).items():
                name = eval_name(plan, set_name)
                gold = [(p.id, corpus[p.id].category) for p in preds]
                results[name] = evaluate(name, gold, [(p.id, p.category) for p in preds], labels)
                predictions[name] = preds
        return results, predictions


def stage_leaks(cfg: RunConfig, corpus: Corpus, plans: Sequence[SplitPlan]):
    with _stage("leakcheck"):
        reports = {}
        for plan in plans:
            for set_name in plan.eval_sets:
                reports[eval_name(plan, set_name)] = detect_leaks(
                    plan["train"], plan[set_name], corpus, cfg.threshold, cfg.window
                )
        return reports


# sets that are meant to be independent of training; lint mode fails on leaks here
INDEPENDENT_SETS = ("exp1_phaseA", "exp1_phaseB", "exp2_test1")


def run_pipeline(cfg: RunConfig, corpus_path: Path | None = None) -> tuple[BiasAuditReport, int]:
    """Full audit; returns the report and the process exit status."""
    out = cfg.out_dir
    corpus = stage_ingest(cfg, corpus_path)
    corpus, skips = stage_augment(cfg, corpus)
    _write(out / "corpus.jsonl", corpus_to_jsonl(corpus, cfg.meta("corpus")))
    _write(out / "skips.jsonl", _jsonl([s.to_record() for s in skips], cfg.meta("skips")))

    plans = stage_split(cfg, corpus)
    for plan in plans:
        _write(out / "plans" / f"{PLAN_SLUGS[plan.protocol]}.json", plan.to_json())

    with _stage("integrity"):
        integrity = {PLAN_SLUGS[p.protocol]: verify_group_integrity(p, corpus).to_dict() for p in plans}

    leaks = stage_leaks(cfg, corpus, plans)
    for name, rep in leaks.items():
        _write(out / "leaks" / f"{name}.jsonl",
               _jsonl([f.to_dict() for f in rep.findings], cfg.meta(f"leaks:{name}")))

    results, predictions = stage_evaluate(cfg, corpus, plans)
    for name, preds in predictions.items():
        _write(out / "predictions" / f"{name}.jsonl",
               _jsonl([p.to_dict() for p in preds], cfg.meta(f"predictions:{name}")))

    with _stage("report"):
        report = BiasAuditReport(config=cfg.echo())
        report.evaluations = results
        for a, b in (("exp1_phaseA", "exp1_phaseB"), ("exp2_test1", "exp2_test2")):
            if a in results and b in results:
                report.comparisons.append(bias_gap(results[a].f1, results[b].f1, a, b))
        report.integrity = integrity
        report.leakage = {
            name: {
                "findings": len(rep),
                "provenance_leaks": sum(f.provenance_leak for f in rep.findings),
                "similarity_leaks": sum(not f.provenance_leak for f in rep.findings),
            }
            for name, rep in leaks.items()
        }
        report.config["skipped_cases"] = len(skips)
        write_report(report, out, cfg.formats)

    status = EXIT_OK
    if cfg.lint and any(len(leaks[n]) for n in INDEPENDENT_SETS if n in leaks):
        status = EXIT_LEAKS
    return report, status


REPORT_FILES = {"json": "report.json", "csv": "report.csv", "plotdata": "plotdata.csv"}


def write_report(report: BiasAuditReport, out: Path, formats: Sequence[str]) -> None:
    for fmt in formats:
        path = out / REPORT_FILES[fmt]
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(render_report(report, fmt))


# --- subcommands ------------------------------------------------------------

def _load_corpus_arg(cfg: RunConfig, path: str | None) -> Corpus:
    return stage_ingest(cfg, Path(path) if path else None)


def cmd_ingest(args, cfg: RunConfig) -> int:
    corpus = _load_corpus_arg(cfg, args.input)
    _write(cfg.out_dir / "corpus.jsonl", corpus_to_jsonl(corpus, cfg.meta("corpus")))
    print(f"{len(corpus)} cases ({len(corpus.originals())} originals) -> {cfg.out_dir / 'corpus.jsonl'}")
    return EXIT_OK


def cmd_augment(args, cfg: RunConfig) -> int:
    corpus = _load_corpus_arg(cfg, args.corpus)
    if cfg.augment == "auto":
        cfg.augment = True
    corpus, skips = stage_augment(cfg, corpus)
    _write(cfg.out_dir / "corpus.jsonl", corpus_to_jsonl(corpus, cfg.meta("corpus")))
    _write(cfg.out_dir / "skips.jsonl", _jsonl([s.to_record() for s in skips], cfg.meta("skips")))
    print(f"{len(corpus)} cases, {len(skips)} skipped -> {cfg.out_dir / 'corpus.jsonl'}")
    return EXIT_OK


def cmd_split(args, cfg: RunConfig) -> int:
    corpus = _load_corpus_arg(cfg, args.corpus)
    plans = stage_split(cfg, corpus)
    status = EXIT_OK
    for plan in plans:
        path = cfg.out_dir / "plans" / f"{PLAN_SLUGS[plan.protocol]}.json"
        _write(path, plan.to_json())
        report = verify_group_integrity(plan, corpus)
        print(f"{plan.protocol}: " + ", ".join(f"{k}={len(v)}" for k, v in plan.sets.items())
              + f"; integrity violations={len(report)} -> {path}")
        if not report.ok:
            status = EXIT_ERROR
    return status


def _load_plan(path: str) -> SplitPlan:
    try:
        return SplitPlan.from_json(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise StageError("load-plan", f"plan file not found: {path}") from None


def cmd_leakcheck(args, cfg: RunConfig) -> int:
    corpus = _load_corpus_arg(cfg, args.corpus)
    plan = _load_plan(args.plan)
    sets = args.test_set or plan.eval_sets
    found = 0
    for name in sets:
        if name not in plan.sets:
            raise StageError("leakcheck", f"plan has no set {name!r}")
        with _stage("leakcheck"):
            rep = detect_leaks(plan[args.train_set], plan[name], corpus,
                               args.threshold or cfg.threshold, args.window or cfg.window)
        sys.stdout.write(rep.to_jsonl())
        if args.out:
            _write(cfg.out_dir / "leaks" / f"{name}.jsonl",
                   _jsonl([f.to_dict() for f in rep.findings], cfg.meta(f"leaks:{name}")))
        found += len(rep)
    return EXIT_LEAKS if found else EXIT_OK


def cmd_train(args, cfg: RunConfig) -> int:
    corpus = _load_corpus_arg(cfg, args.corpus)
    plan = _load_plan(args.plan)
    with _stage("train"):
        model = train([corpus[i] for i in plan[args.set]], corpus.labels)
    doc = model.to_dict()
    doc.update(cfg.meta("model"))
    path = cfg.out_dir / f"model_{PLAN_SLUGS[plan.protocol]}.json"
    _write(path, _json(doc))
    print(f"model with {len(model.labels)} centroids -> {path}")
    return EXIT_OK


def cmd_evaluate(args, cfg: RunConfig) -> int:
    corpus = _load_corpus_arg(cfg, args.corpus)
    plan = _load_plan(args.plan)
    model = None
    if args.model:
        model = CentroidModel.from_dict(json.loads(Path(args.model).read_text(encoding="utf-8")))
    labels = present_labels(corpus)
    with _stage("evaluate"):
        preds = fit_and_predict(cfg, corpus, plan, model)
        summary = {}
        for set_name, ps in preds.items():
            name = eval_name(plan, set_name)
            _write(cfg.out_dir / "predictions" / f"{name}.jsonl",
                   _jsonl([p.to_dict() for p in ps], cfg.meta(f"predictions:{name}")))
            res = evaluate(name, [(p.id, corpus[p.id].category) for p in ps],
                           [(p.id, p.category) for p in ps], labels)
            summary[name] = res.to_dict()
            print(f"{name}: macro F1 {res.macro_f1:.3f} over {res.n_cases} cases")
    doc = {"evaluations": summary}
    doc.update(cfg.meta("evaluation"))
    _write(cfg.out_dir / f"evaluation_{PLAN_SLUGS[plan.protocol]}.json", _json(doc))
    return EXIT_OK


def cmd_audit(args, cfg: RunConfig) -> int:
    if args.protocol != "both":
        cfg.protocols = (args.protocol,)
    if args.lint:
        cfg.lint = True
    report, status = run_pipeline(cfg, Path(args.corpus) if args.corpus else None)
    for gap in report.comparisons:
        print(f"{gap.set1} -> {gap.set2}: macro F1 {gap.macro_set1:.3f} -> {gap.macro_set2:.3f} "
              f"(average gap {gap.average_gap:+.3f})")
    print(f"artifacts in {cfg.out_dir}")
    return status


def cmd_report(args, cfg: RunConfig) -> int:
    path = Path(args.report) if args.report else cfg.out_dir / "report.json"
    try:
        report = BiasAuditReport.from_dict(json.loads(path.read_text(encoding="utf-8")))
    except FileNotFoundError:
        raise StageError("report", f"report not found: {path}") from None
    if args.out:
        write_report(report, cfg.out_dir, cfg.formats)
    else:
        for fmt in cfg.formats:
            sys.stdout.write(render_report(report, fmt).decode("utf-8"))
    return EXIT_OK


def cmd_synth(args, cfg: RunConfig) -> int:
    corpus = generate_corpus(cfg.seed, SyntheticConfig(originals_per_category=args.per_category))
    _write(cfg.out_dir / "synthetic.jsonl", corpus_to_jsonl(corpus))
    print(f"{len(corpus)} synthetic originals -> {cfg.out_dir / 'synthetic.jsonl'}")
    return EXIT_OK


def _seed_arg(value: str) -> int:
    try:
        return parse_seed(value)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (default: bundled synthetic setup)")
    common.add_argument("--seed", type=_seed_arg, help=f"64-bit run seed (overrides ${SEED_ENV})")
    common.add_argument("--out", help="output directory")
    common.add_argument("--format", choices=FORMATS, help="report format (default: config output.formats)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="augaudit",
        description="Audit augmentation-induced bias in datasets of test code.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("ingest", parents=[common], help="validate a dataset and write canonical JSONL")
    p.add_argument("--input", help="JSONL or CSV dataset (default: config corpus.path)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("augment", parents=[common], help="generate mutation-based variants")
    p.add_argument("--corpus")
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("split", parents=[common], help="build the experiment split plans")
    p.add_argument("--corpus")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("leakcheck", parents=[common], help="find near-duplicate leaks across a plan")
    p.add_argument("--corpus")
    p.add_argument("--plan", required=True)
    p.add_argument("--train-set", default="train")
    p.add_argument("--test-set", action="append", help="set(s) to check; default all eval sets")
    p.add_argument("--threshold", type=float)
    p.add_argument("--window", type=int)
    p.set_defaults(func=cmd_leakcheck)

    p = sub.add_parser("train", parents=[common], help="fit the centroid baseline on a plan set")
    p.add_argument("--corpus")
    p.add_argument("--plan", required=True)
    p.add_argument("--set", default="train")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", parents=[common], help="predict and score a plan's eval sets")
    p.add_argument("--corpus")
    p.add_argument("--plan", required=True)
    p.add_argument("--model", help="model JSON from `train` (default: fit on the plan)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("audit", parents=[common], help="run the full pipeline")
    p.add_argument("--corpus")
    p.add_argument("--protocol", choices=("both", "exp1", "exp2"), default="both")
    p.add_argument("--lint", action="store_true", help="exit 3 when independent sets leak")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("report", parents=[common], help="render a report.json")
    p.add_argument("--report", help="report.json (default: <out>/report.json)")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("synth", parents=[common], help="write a synthetic corpus of originals")
    p.add_argument("--per-category", type=int, default=40)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = load_config(args.config, args.seed, args.out)
        if args.format:
            cfg.formats = (args.format,)
        return args.func(args, cfg)
    except ConfigError as exc:
        print(f"augaudit: config error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except StageError as exc:
        print(f"augaudit: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
