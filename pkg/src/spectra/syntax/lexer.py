"""Tokenizer for Spectra source text.

Both the short keywords and their verbose alternatives map to the same
token kind. Line comments (//) and block comments (/* */) are skipped.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..diagnostics import Diagnostic, DiagnosticsError, Span

# verbose alternatives share the kind of their short keyword
KEYWORDS = {
    "spec": "SPEC",
    "import": "IMPORT",
    "env": "ENV", "input": "ENV",
    "sys": "SYS", "output": "SYS",
    "boolean": "BOOLEAN",
    "Int": "INTTYPE",
    "type": "TYPE",
    "define": "DEFINE",
    "predicate": "PREDICATE",
    "monitor": "MONITOR",
    "pattern": "PATTERN",
    "var": "VAR",
    "asm": "ASM", "assumption": "ASM",
    "gar": "GAR", "guarantee": "GAR",
    "ini": "INI", "initially": "INI",
    "trans": "TRANS",
    "alw": "ALW", "always": "ALW",
    "alwEv": "ALWEV", "alwaysEventually": "ALWEV",
    "true": "TRUE",
    "false": "FALSE",
    "next": "NEXT",
    "mod": "MOD",
    "Y": "PREV", "PREV": "PREV",
    "H": "HIST", "HISTORICALLY": "HIST",
    "O": "ONCE", "ONCE": "ONCE",
    "S": "SINCE", "SINCE": "SINCE",
}

# longest match first
PUNCT = [
    ("<->", "IFF"),
    ("->", "IMPLIES"),
    (":=", "ASSIGN"),
    ("..", "DOTDOT"),
    ("<=", "LE"),
    (">=", "GE"),
    ("(", "LPAR"),
    (")", "RPAR"),
    ("{", "LBRACE"),
    ("}", "RBRACE"),
    (";", "SEMI"),
    (":", "COLON"),
    (",", "COMMA"),
    ("&", "AND"),
    ("|", "OR"),
    ("!", "NOT"),
    ("=", "EQ"),
    ("<", "LT"),
    (">", "GT"),
    ("+", "PLUS"),
    ("-", "MINUS"),
    ("*", "STAR"),
    ("/", "SLASH"),
]


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: Span


def _is_ident_start(c: str) -> bool:
    return c.isascii() and (c.isalpha() or c == "_")


def _is_ident(c: str) -> bool:
    return c.isascii() and (c.isalnum() or c == "_")


def tokenize(text: str, filename: str = "<string>") -> list[Token]:
    """Tokenize, raising DiagnosticsError on unrecognized characters."""
    toks: list[Token] = []
    errors: list[Diagnostic] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
            continue
        if text.startswith("//", i):
            j = text.find("\n", i)
            i = n if j < 0 else j + 1
            continue
        if text.startswith("/*", i):
            j = text.find("*/", i + 2)
            if j < 0:
                errors.append(Diagnostic("error", "unterminated block comment",
                                         Span(filename, i, n)))
                break
            i = j + 2
            continue
        if c == '"':
            j = text.find('"', i + 1)
            if j < 0:
                errors.append(Diagnostic("error", "unterminated string",
                                         Span(filename, i, n)))
                break
            toks.append(Token("STRING", text[i + 1:j], Span(filename, i, j + 1)))
            i = j + 1
            continue
        if _is_ident_start(c):
            j = i + 1
            while j < n and _is_ident(text[j]):
                j += 1
            word = text[i:j]
            kind = KEYWORDS.get(word, "ID")
            toks.append(Token(kind, word, Span(filename, i, j)))
            i = j
            continue
        if c.isdigit():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("INT", text[i:j], Span(filename, i, j)))
            i = j
            continue
        for lit, kind in PUNCT:
            if text.startswith(lit, i):
                toks.append(Token(kind, lit, Span(filename, i, i + len(lit))))
                i += len(lit)
                break
        else:
            errors.append(Diagnostic("error", f"unrecognized character {c!r}",
                                     Span(filename, i, i + 1)))
            i += 1
    if errors:
        raise DiagnosticsError(errors)
    return toks
