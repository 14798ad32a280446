"""Mutation-based augmentation of test code.

Variants are produced with four lexical operators: renaming local
variables, renaming the test method, swapping string literals for random
words, and inserting unused ``int`` declarations. Everything a flakiness
classifier could plausibly key on (keywords, annotations, called names,
type-like names, a configurable protected list) is left untouched.

All randomness comes from a per-(case, variant) SplitMix64 stream, so a
plan is a pure function of ``(global_seed, case.id, variant_index)``.
"""
from __future__ import annotations

import fnmatch
import logging
from dataclasses import asdict, dataclass, field
from typing import Iterable, Mapping, Sequence

from .corpus import Corpus, TestCase
from .lexer import (
    ANNOTATION,
    CONTEXTUAL_KEYWORDS,
    IDENTIFIER,
    JAVA_KEYWORDS,
    KEYWORD,
    NUMBER,
    PRIMITIVE_TYPES,
    PUNCT,
    STRING,
    Token,
    is_clean,
    significant,
    tokenize,
)
from .prng import SplitMix64, case_stream_seed, fnv1a64

logger = logging.getLogger(__name__)

DEFAULT_PROTECTED = frozenset({"Thread", "sleep", "wait", "notify", "Timeout", "await", "join"})
MAX_WORD_ATTEMPTS = 1000
_ALPHABET = "abcdefghijklmnopqrstuvwxyz"

_MODIFIERS = frozenset(
    "public protected private static final abstract synchronized native strictfp default".split()
)
_NO_INSERT_BEFORE = frozenset({"else", "catch", "finally", "while"})
_JUMPS = frozenset({"return", "break", "continue", "throw"})
_DECL_FOLLOWERS = frozenset({"=", ";", ",", ":", ")"})


class AugmentError(ValueError):
    pass


class UntokenizableError(AugmentError):
    pass


class FreshWordExhausted(AugmentError):
    pass


class StalePlanError(AugmentError):
    pass


@dataclass(frozen=True)
class MutationConfig:
    enable_rename_locals: bool = True
    enable_rename_test_method: bool = True
    enable_replace_strings: bool = True
    enable_insert_unused: bool = True
    enable_replace_numbers: bool = False
    insert_count_range: tuple[int, int] = (1, 2)
    protected_identifiers: frozenset[str] = DEFAULT_PROTECTED
    random_word_length_range: tuple[int, int] = (5, 10)
    variants_per_original: int = 2
    test_method_pattern: str = "test*"

    def __post_init__(self):
        object.__setattr__(self, "insert_count_range", tuple(self.insert_count_range))
        object.__setattr__(self, "random_word_length_range", tuple(self.random_word_length_range))
        object.__setattr__(self, "protected_identifiers", frozenset(self.protected_identifiers))
        lo, hi = self.insert_count_range
        if lo < 0 or hi < lo:
            raise ValueError(f"insert_count_range {self.insert_count_range} is empty or negative")
        lo, hi = self.random_word_length_range
        if lo < 1 or hi < lo:
            raise ValueError(f"random_word_length_range {self.random_word_length_range} is empty")
        if self.variants_per_original < 0:
            raise ValueError("variants_per_original must be >= 0")

    @classmethod
    def disabled(cls, **overrides) -> "MutationConfig":
        base = dict(
            enable_rename_locals=False,
            enable_rename_test_method=False,
            enable_replace_strings=False,
            enable_insert_unused=False,
        )
        base.update(overrides)
        return cls(**base)

    @classmethod
    def from_dict(cls, data: Mapping) -> "MutationConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown mutation config keys: {sorted(unknown)}")
        return cls(**dict(data))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["insert_count_range"] = list(self.insert_count_range)
        d["random_word_length_range"] = list(self.random_word_length_range)
        d["protected_identifiers"] = sorted(self.protected_identifiers)
        return d


# --- plan --------------------------------------------------------------

@dataclass(frozen=True)
class Rename:
    old: str
    new: str
    spans: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ReplaceString:
    """Replace one literal token (strings, or numbers when enabled)."""

    span: tuple[int, int]
    old: str
    new: str


@dataclass(frozen=True)
class InsertDecl:
    offset: int
    name: str
    text: str


@dataclass(frozen=True)
class MutationPlan:
    case_id: str
    variant_index: int
    source_hash: int
    edits: tuple = ()

    def __len__(self) -> int:
        return len(self.edits)

    @property
    def renames(self) -> list[Rename]:
        return [e for e in self.edits if isinstance(e, Rename)]

    @property
    def insertions(self) -> list[InsertDecl]:
        return [e for e in self.edits if isinstance(e, InsertDecl)]


def fresh_word(rng: SplitMix64, length_range: tuple[int, int], forbidden: Iterable[str] = ()) -> str:
    """Draw a random lowercase word that is not forbidden and not a keyword."""
    lo, hi = length_range
    blocked = forbidden if isinstance(forbidden, (set, frozenset)) else set(forbidden)
    for _ in range(MAX_WORD_ATTEMPTS):
        length = rng.randint(lo, hi)
        word = "".join(_ALPHABET[rng.below(26)] for _ in range(length))
        if word in blocked or word in JAVA_KEYWORDS or word in CONTEXTUAL_KEYWORDS:
            continue
        return word
    raise FreshWordExhausted(
        f"no fresh word of length {lo}..{hi} after {MAX_WORD_ATTEMPTS} attempts"
    )


# --- structure analysis ------------------------------------------------

@dataclass
class Method:
    name_index: int  # token index of the method name
    open_index: int  # token index of the body '{'
    close_index: int  # token index of the matching '}'
    is_test: bool
    nested: bool = False


@dataclass
class Structure:
    tokens: Sequence[Token]
    sig: list[int]  # significant token indices
    pos: dict[int, int]  # token index -> position in sig
    match: dict[int, int]  # bracket token index -> partner
    enclosing: dict[int, int | None]  # token index -> innermost open bracket
    methods: list[Method] = field(default_factory=list)

    def prev(self, i: int) -> Token | None:
        k = self.pos[i]
        return self.tokens[self.sig[k - 1]] if k > 0 else None

    def next(self, i: int) -> Token | None:
        k = self.pos[i]
        return self.tokens[self.sig[k + 1]] if k + 1 < len(self.sig) else None

    def prev_index(self, i: int) -> int | None:
        k = self.pos[i]
        return self.sig[k - 1] if k > 0 else None

    def is_call(self, i: int) -> bool:
        nxt = self.next(i)
        return nxt is not None and nxt.text == "("

    def after_dot(self, i: int) -> bool:
        prev = self.prev(i)
        return prev is not None and prev.text in (".", "::")


_OPEN = {"(": ")", "{": "}", "[": "]"}
_CLOSE = {v: k for k, v in _OPEN.items()}


def analyze(tokens: Sequence[Token]) -> Structure:
    sig = significant(tokens)
    pos = {i: k for k, i in enumerate(sig)}
    match: dict[int, int] = {}
    enclosing: dict[int, int | None] = {}
    stack: list[int] = []
    for i in sig:
        tok = tokens[i]
        enclosing[i] = stack[-1] if stack else None
        if tok.kind != PUNCT:
            continue
        if tok.text in _OPEN:
            stack.append(i)
        elif tok.text in _CLOSE:
            # tolerate unbalanced input: pop to the nearest matching opener
            for depth in range(len(stack) - 1, -1, -1):
                if tokens[stack[depth]].text == _CLOSE[tok.text]:
                    opener = stack[depth]
                    del stack[depth:]
                    match[opener] = i
                    match[i] = opener
                    break
    st = Structure(tokens, sig, pos, match, enclosing)
    st.methods = _find_methods(st)
    return st


def _is_generic_close(st: Structure, i: int) -> bool:
    """True when the '>' at ``i`` closes a type argument list."""
    k = st.pos[i]
    depth = 0
    while k >= 0:
        tok = st.tokens[st.sig[k]]
        if tok.text == ">":
            depth += 1
        elif tok.text == "<":
            depth -= 1
            if depth == 0:
                return k > 0 and st.tokens[st.sig[k - 1]].kind == IDENTIFIER
        elif not (
            tok.kind == IDENTIFIER
            or tok.text in (",", ".", "?", "[", "]", "&", "extends", "super")
            or tok.text in PRIMITIVE_TYPES
        ):
            return False
        k -= 1
    return False


def _type_like_prev(st: Structure, i: int) -> bool:
    """Whether the token before ``i`` can end a type in a declaration."""
    j = st.prev_index(i)
    if j is None:
        return False
    tok = st.tokens[j]
    if tok.kind == IDENTIFIER:
        return tok.text not in CONTEXTUAL_KEYWORDS or tok.text == "var"
    if tok.kind == KEYWORD:
        return tok.text in PRIMITIVE_TYPES and tok.text != "void"
    if tok.text == "]":
        return True
    if tok.text == ">":
        return _is_generic_close(st, j)
    return False


def _header_has_test_annotation(st: Structure, name_index: int) -> bool:
    k = st.pos[name_index] - 1
    while k >= 0:
        i = st.sig[k]
        tok = st.tokens[i]
        if tok.kind == ANNOTATION:
            if tok.text == "@Test":
                return True
        elif tok.text == ")" and i in st.match:
            opener = st.match[i]
            before = st.prev_index(opener)
            if before is None or st.tokens[before].kind != ANNOTATION:
                return False
            k = st.pos[opener]
        elif not (
            tok.kind in (IDENTIFIER, KEYWORD)
            or tok.text in ("<", ">", "[", "]", ",", ".", "?", "&")
        ):
            return False
        k -= 1
    return False


def _find_methods(st: Structure) -> list[Method]:
    methods: list[Method] = []
    toks = st.tokens
    for k, i in enumerate(st.sig):
        tok = toks[i]
        if tok.kind != IDENTIFIER or not st.is_call(i):
            continue
        prev = st.prev(i)
        if prev is None:
            continue
        if not (
            prev.kind == IDENTIFIER
            or (prev.kind == KEYWORD and (prev.text in PRIMITIVE_TYPES or prev.text in _MODIFIERS))
            or prev.text == "]"
            or (prev.text == ">" and _is_generic_close(st, st.prev_index(i)))
        ):
            continue
        if prev.kind == IDENTIFIER and st.after_dot(st.prev_index(i)):
            continue
        paren = st.sig[k + 1]
        close = st.match.get(paren)
        if close is None:
            continue
        m = st.pos[close] + 1
        if m < len(st.sig) and toks[st.sig[m]].text == "throws":
            m += 1
            while m < len(st.sig) and (
                toks[st.sig[m]].kind == IDENTIFIER or toks[st.sig[m]].text in (",", ".", "<", ">", "?")
            ):
                m += 1
        if m >= len(st.sig) or toks[st.sig[m]].text != "{":
            continue
        body = st.sig[m]
        if body not in st.match:
            continue
        methods.append(Method(i, body, st.match[body], _header_has_test_annotation(st, i)))
    for meth in methods:
        meth.nested = any(
            o is not meth and o.open_index < meth.name_index < o.close_index for o in methods
        )
    return methods


def find_test_method(st: Structure, pattern: str = "test*") -> Method | None:
    for meth in st.methods:
        if meth.is_test:
            return meth
    for meth in st.methods:
        if fnmatch.fnmatchcase(st.tokens[meth.name_index].text, pattern):
            return meth
    return None


def call_positions(st: Structure) -> set[int]:
    """Token indices of identifiers used as call targets (declarations excluded)."""
    declared = {m.name_index for m in st.methods}
    return {
        i for i in st.sig
        if st.tokens[i].kind == IDENTIFIER and st.is_call(i) and i not in declared
    }


def _is_declaration_site(st: Structure, i: int, protected: frozenset[str]) -> bool:
    tok = st.tokens[i]
    if tok.kind != IDENTIFIER or tok.text in protected:
        return False
    if tok.text[0].isupper() or tok.text in CONTEXTUAL_KEYWORDS:
        return False
    if st.is_call(i) or st.after_dot(i):
        return False
    nxt = st.next(i)
    if nxt is None or nxt.text not in _DECL_FOLLOWERS:
        return False
    return _type_like_prev(st, i)


def local_renames(st: Structure, protected: frozenset[str]) -> list[tuple[str, list[int]]]:
    """Eligible locals per top-level method: (name, occurrence token indices).

    A name qualifies when its first plain occurrence in the method body is a
    declaration. Call-position and member-access occurrences are excluded.
    Results are ordered by first occurrence.
    """
    out: list[tuple[int, str, list[int]]] = []
    calls = call_positions(st)
    for meth in st.methods:
        if meth.nested:
            continue
        lo, hi = st.pos[meth.open_index], st.pos[meth.close_index]
        occurrences: dict[str, list[int]] = {}
        for i in st.sig[lo + 1:hi]:
            tok = st.tokens[i]
            if tok.kind != IDENTIFIER or st.after_dot(i) or i in calls:
                continue
            occurrences.setdefault(tok.text, []).append(i)
        for name, idxs in occurrences.items():
            if _is_declaration_site(st, idxs[0], protected):
                out.append((idxs[0], name, idxs))
    out.sort()
    return [(name, idxs) for _, name, idxs in out]


def _statement_starts_with_jump(st: Structure, semi: int) -> bool:
    k = st.pos[semi] - 1
    first = None
    while k >= 0:
        tok = st.tokens[st.sig[k]]
        if tok.text in (";", "{", "}"):
            break
        first = tok
        k -= 1
    return first is not None and first.text in _JUMPS


def insertion_points(st: Structure, meth: Method) -> list[int]:
    """Character offsets inside ``meth`` where a new statement may go."""
    toks = st.tokens
    lo, hi = st.pos[meth.open_index], st.pos[meth.close_index]
    points = []
    for i in st.sig[lo:hi]:
        tok = toks[i]
        if tok.kind != PUNCT:
            continue
        if tok.text == "{":
            prev = st.prev(i)
            # array initializers and annotation arguments are not blocks
            if i != meth.open_index and prev is not None and prev.text in ("=", "]", ",", "{", "("):
                continue
            if prev is not None and prev.text == ")":
                opener = st.match.get(st.prev_index(i))
                if opener is not None and st.pos[opener] > 0 and st.prev(opener).text == "switch":
                    continue
        elif tok.text == ";":
            encl = st.enclosing.get(i)
            if encl is None or toks[encl].text != "{":
                continue
            if _statement_starts_with_jump(st, i):
                continue
        else:
            continue
        nxt = st.next(i)
        if nxt is not None and nxt.text in _NO_INSERT_BEFORE:
            continue
        points.append(tok.end)
    return points


# --- planning / applying -------------------------------------------------

def plan_mutations(
    case: TestCase,
    config: MutationConfig,
    variant_index: int,
    global_seed: int,
) -> MutationPlan:
    """Decide every edit for one variant of ``case``.

    Draw order on the case stream: local renames (first-occurrence order),
    test-method rename, literal replacements (source order), then the
    insertion count followed by (point, word, digit) per insertion.
    """
    tokens = tokenize(case.code)
    if not is_clean(tokens):
        raise UntokenizableError(f"case {case.id!r} does not tokenize cleanly")
    rng = SplitMix64(case_stream_seed(global_seed, case.id, variant_index))
    st = analyze(tokens)
    used = {t.text for t in tokens}
    wl = config.random_word_length_range
    edits: list = []

    def word() -> str:
        w = fresh_word(rng, wl, used)
        used.add(w)
        return w

    if config.enable_rename_locals:
        for name, idxs in local_renames(st, config.protected_identifiers):
            spans = tuple((tokens[i].start, tokens[i].end) for i in idxs)
            edits.append(Rename(name, word(), spans))

    test_method = find_test_method(st, config.test_method_pattern)
    if config.enable_rename_test_method and test_method is not None:
        tok = tokens[test_method.name_index]
        if tok.text not in config.protected_identifiers:
            edits.append(Rename(tok.text, word(), ((tok.start, tok.end),)))

    if config.enable_replace_strings or config.enable_replace_numbers:
        for tok in tokens:
            if tok.kind == STRING and config.enable_replace_strings:
                edits.append(ReplaceString((tok.start, tok.end), tok.text, f'"{word()}"'))
            elif tok.kind == NUMBER and config.enable_replace_numbers and tok.text.isdigit():
                edits.append(ReplaceString((tok.start, tok.end), tok.text, str(rng.below(1000))))

    if config.enable_insert_unused and test_method is not None:
        points = insertion_points(st, test_method)
        count = rng.randint(*config.insert_count_range)
        for _ in range(count):
            offset = points[rng.below(len(points))]
            name = word()
            edits.append(InsertDecl(offset, name, f" int {name} = {rng.below(10)};"))

    return MutationPlan(case.id, variant_index, fnv1a64(case.code), tuple(edits))


def apply_mutations(case: TestCase, plan: MutationPlan, new_id: str | None = None) -> TestCase:
    """Apply ``plan`` to ``case`` and return the variant."""
    code = case.code
    if plan.case_id != case.id or plan.source_hash != fnv1a64(code):
        raise StalePlanError(f"plan for {plan.case_id!r} does not match case {case.id!r}")
    if case.version != 0:
        raise AugmentError(f"case {case.id!r} is itself a variant")

    # (start, order, end, text): inserts sort before a replacement at the same offset
    pieces: list[tuple[int, int, int, str]] = []
    for n, edit in enumerate(plan.edits):
        if isinstance(edit, Rename):
            for start, end in edit.spans:
                if code[start:end] != edit.old:
                    raise StalePlanError(f"span {start}:{end} is not {edit.old!r}")
                pieces.append((start, 1, end, edit.new))
        elif isinstance(edit, ReplaceString):
            start, end = edit.span
            if code[start:end] != edit.old:
                raise StalePlanError(f"span {start}:{end} is not {edit.old!r}")
            pieces.append((start, 1, end, edit.new))
        elif isinstance(edit, InsertDecl):
            if not 0 <= edit.offset <= len(code):
                raise StalePlanError(f"insertion offset {edit.offset} out of range")
            pieces.append((edit.offset, 0, edit.offset, edit.text))
        else:
            raise TypeError(f"unknown edit {edit!r}")
    pieces.sort(key=lambda p: (p[0], p[1]))

    out = []
    cursor = 0
    for start, _, end, text in pieces:
        if start < cursor:
            raise StalePlanError(f"overlapping edits at offset {start}")
        out.append(code[cursor:start])
        out.append(text)
        cursor = end
    out.append(code[cursor:])
    k = plan.variant_index
    return TestCase(
        id=new_id or f"{case.id}_v{k}",
        origin_id=case.id,
        version=k,
        category=case.category,
        code="".join(out),
    )


# --- corpus level ----------------------------------------------------------

@dataclass(frozen=True)
class SkipRecord:
    id: str
    reason: str

    def to_record(self) -> dict:
        return {"id": self.id, "reason": self.reason}


@dataclass(frozen=True)
class AugmentResult:
    corpus: Corpus
    skips: tuple[SkipRecord, ...] = ()


def augment_case(
    case: TestCase,
    config: MutationConfig,
    global_seed: int,
    versions: Sequence[int],
    taken: set[str] | frozenset[str] = frozenset(),
) -> tuple[list[TestCase], list[SkipRecord]]:
    variants, skips = [], []
    for k in versions:
        new_id = f"{case.id}_v{k}"
        if new_id in taken:
            skips.append(SkipRecord(case.id, f"variant id {new_id!r} already exists"))
            continue
        try:
            plan = plan_mutations(case, config, k, global_seed)
        except UntokenizableError as exc:
            skips.append(SkipRecord(case.id, f"untokenizable: {exc}"))
            break
        except FreshWordExhausted as exc:
            skips.append(SkipRecord(case.id, f"variant {k}: {exc}"))
            continue
        variants.append(apply_mutations(case, plan, new_id))
    return variants, skips


def augment_corpus(corpus: Corpus, config: MutationConfig, global_seed: int) -> AugmentResult:
    """Give every original ``config.variants_per_original`` new variants.

    Version numbers continue after any variants already present. Cases that
    cannot be mutated are skipped and reported, never fatal.
    """
    k = config.variants_per_original
    if k == 0:
        return AugmentResult(corpus, ())
    taken = {c.id for c in corpus}
    new_cases: list[TestCase] = []
    skips: list[SkipRecord] = []
    for case in corpus.originals():
        existing = [corpus[v].version for v in corpus.variants_of(case.id)]
        start = max(existing, default=0) + 1
        variants, case_skips = augment_case(case, config, global_seed, range(start, start + k), taken)
        for s in case_skips:
            logger.warning("skipped %s: %s", s.id, s.reason)
        taken.update(v.id for v in variants)
        new_cases.extend(variants)
        skips.extend(case_skips)
    return AugmentResult(corpus.with_cases(new_cases), tuple(skips))
