"""Tokenizer shared by the LP^MLN and P-log readers."""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError

_TOKEN_SPEC = [
    ("WS", r"[ \t\r]+"),
    ("NL", r"\n"),
    ("COMMENT", r"%[^\n]*"),
    ("NUMBER", r"\d+/\d+|\d+\.\d+|\d+"),
    ("AGG", r"#count|#sum"),
    ("VAR", r"[A-Z][A-Za-z0-9_]*"),
    ("IDENT", r"[a-z][A-Za-z0-9_]*"),
    ("OP", r"::|:-|:~|->|\.\.|!=|<=|>=|[.,;:(){}\[\]=<>&|~+\-@]"),
]
_MASTER = re.compile("|".join(f"(?P<{k}>{p})" for k, p in _TOKEN_SPEC))


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out, line, line_start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _MASTER.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "NL":
            line, line_start = line + 1, m.end()
        elif kind not in ("WS", "COMMENT"):
            out.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    out.append(Token("EOF", "", line, pos - line_start + 1))
    return out


class TokenStream:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i = min(self.i + 1, len(self.toks) - 1)
        return t

    def at(self, text: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t.kind in ("OP", "IDENT", "AGG") and t.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text: str) -> Token:
        t = self.peek()
        if not self.at(text):
            self.error(f"expected {text!r}, found {t.text or 'end of input'!r}")
        return self.next()

    def expect_kind(self, kind: str) -> Token:
        t = self.peek()
        if t.kind != kind:
            self.error(f"expected {kind.lower()}, found {t.text or 'end of input'!r}")
        return self.next()

    def error(self, message: str):
        t = self.peek()
        raise ParseError(message, t.line, t.col)
