"""Lossless tokenizer for Java-like test snippets.

Every character of the input lands in exactly one token, so joining token
texts reproduces the source. Input that cannot be lexed (an unterminated
string, char literal or block comment) comes back as one ``raw`` token.
"""
from __future__ import annotations

import re
from functools import lru_cache
from typing import NamedTuple, Sequence

IDENTIFIER = "identifier"
STRING = "string-literal"
CHAR = "char-literal"
NUMBER = "number"
COMMENT = "comment"
PUNCT = "punctuation"
WHITESPACE = "whitespace"
ANNOTATION = "annotation"
KEYWORD = "keyword"
RAW = "raw"

JAVA_KEYWORDS = frozenset("""
abstract assert boolean break byte case catch char class const continue
default do double else enum extends final finally float for goto if
implements import instanceof int interface long native new package private
protected public return short static strictfp super switch synchronized
this throw throws transient try void volatile while true false null
""".split())

# contextual keywords: never produced as fresh names, but lexed as identifiers
CONTEXTUAL_KEYWORDS = frozenset(
    "var record yield sealed permits non exports module open opens provides "
    "requires to transitive uses with".split()
)

PRIMITIVE_TYPES = frozenset("boolean byte char double float int long short void".split())


class Token(NamedTuple):
    kind: str
    text: str
    start: int
    end: int


class LexError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


_MULTI_PUNCT = ["...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", ">=",
                "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^="]

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n\f\v]+)
  | (?P<ident>[A-Za-z_$][A-Za-z0-9_$]*)
  | (?P<block>/\*.*?\*/)
  | (?P<badblock>/\*)
  | (?P<line>//[^\n]*)
  | (?P<textblock>\"\"\".*?\"\"\")
  | (?P<str>"(?:[^"\\\n]|\\.)*")
  | (?P<badstr>")
  | (?P<chr>'(?:[^'\\\n]|\\.)*')
  | (?P<badchr>')
  | (?P<ann>@[A-Za-z_$][A-Za-z0-9_$]*)
  | (?P<num>
        0[xX][0-9a-fA-F_]*[0-9a-fA-F][lL]?
      | 0[bB][01_]*[01][lL]?
      | (?:[0-9][0-9_]*(?:\.[0-9_]*)?|\.[0-9][0-9_]*)(?:[eE][+-]?[0-9]+)?[fFdDlL]?
    )
  | (?P<punct>"""
    + "|".join(re.escape(p) for p in _MULTI_PUNCT)
    + r"""|.)
    """,
    re.VERBOSE | re.DOTALL,
)

_KIND_BY_GROUP = {
    "ws": WHITESPACE,
    "block": COMMENT,
    "line": COMMENT,
    "textblock": STRING,
    "str": STRING,
    "chr": CHAR,
    "ann": ANNOTATION,
    "num": NUMBER,
    "punct": PUNCT,
}


_BAD = {
    "badblock": "unterminated block comment",
    "badstr": "unterminated string literal",
    "badchr": "unterminated char literal",
}


def tokenize_strict(code: str) -> tuple[Token, ...]:
    """Tokenize ``code``, raising :class:`LexError` on unterminated constructs."""
    tokens = []
    for m in _TOKEN_RE.finditer(code):
        group = m.lastgroup
        if group in _BAD:
            raise LexError(_BAD[group], m.start())
        text = m.group()
        if group == "ident":
            kind = KEYWORD if text in JAVA_KEYWORDS else IDENTIFIER
        else:
            kind = _KIND_BY_GROUP[group]
        tokens.append(Token(kind, text, m.start(), m.end()))
    return tuple(tokens)


@lru_cache(maxsize=8192)
def tokenize(code: str) -> tuple[Token, ...]:
    """Lossless token sequence; a single ``raw`` token when lexing fails."""
    try:
        return tokenize_strict(code)
    except LexError:
        return (Token(RAW, code, 0, len(code)),)


def is_clean(tokens: Sequence[Token]) -> bool:
    return not any(t.kind == RAW for t in tokens)


def detokenize(tokens: Sequence[Token]) -> str:
    return "".join(t.text for t in tokens)


def is_trivia(tok: Token) -> bool:
    return tok.kind in (WHITESPACE, COMMENT)


def significant(tokens: Sequence[Token]) -> list[int]:
    """Indices of the non-whitespace, non-comment tokens."""
    return [i for i, t in enumerate(tokens) if not is_trivia(t)]
