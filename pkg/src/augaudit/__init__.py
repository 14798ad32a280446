"""Audit augmentation-induced bias in datasets of test code."""

__version__ = "0.1.0"

from .corpus import Corpus, TestCase, ingest_corpus, make_corpus
from .augmentor import MutationConfig, augment_corpus, apply_mutations, plan_mutations
from .splitter import build_experiment1, build_experiment2, split_originals, verify_group_integrity
from .leakage import detect_leaks
from .classifier import ClassifierConfig, train
from .metrics import BiasAuditReport, bias_gap, render_report

__all__ = [
    "BiasAuditReport",
    "ClassifierConfig",
    "Corpus",
    "MutationConfig",
    "TestCase",
    "apply_mutations",
    "augment_corpus",
    "bias_gap",
    "build_experiment1",
    "build_experiment2",
    "detect_leaks",
    "ingest_corpus",
    "make_corpus",
    "plan_mutations",
    "render_report",
    "split_originals",
    "train",
    "verify_group_integrity",
]
