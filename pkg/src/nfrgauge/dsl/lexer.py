"""Tokenizer for ``.nfr`` requirement specifications."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from ..errors import LexError

KEYWORDS = frozenset(
    """
    project requirement mnfr snfr linguistic over domain term triangle trapezoid
    interval scale standard option template sub weight range level status
    softgoal threshold subgoal leaf link sign statement verified_by metric
    aggregator survey band variable input target not very somewhat slightly
    """.split()
)

PUNCTUATION = ("->", "{", "}", "(", ")", "[", "]", ":", ";", ",")

_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


@dataclass(frozen=True)
class Token:
    kind: str  # ident | keyword | number | string | punct | eof
    lexeme: str
    line: int
    column: int
    value: object = None

    def __repr__(self):
        return f"{self.kind}({self.lexeme})"


def _is_ident_start(ch: str) -> bool:
    return ch == "_" or ("a" <= ch <= "z") or ("A" <= ch <= "Z")


def _is_ident_char(ch: str) -> bool:
    return _is_ident_start(ch) or ch.isdigit() and ch.isascii()


def _is_digit(ch: str) -> bool:
    return "0" <= ch <= "9"


def scan(text: str) -> Tuple[List[Token], List[LexError]]:
    """Tokenize, skipping illegal characters and collecting an error for each."""
    tokens: List[Token] = []
    errors: List[LexError] = []
    i, n = 0, len(text)
    line, col = 1, 1

    def advance(k: int = 1) -> None:
        nonlocal i, line, col
        for _ in range(k):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = text[i]
        if ch in " \t\r\n\f\v":
            advance()
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                advance()
            continue
        start_line, start_col, start = line, col, i

        if _is_ident_start(ch):
            j = i
            while j < n and _is_ident_char(text[j]):
                j += 1
            word = text[i:j]
            advance(j - i)
            if word == "inf":
                tokens.append(Token("number", word, start_line, start_col, math.inf))
            elif word in KEYWORDS:
                tokens.append(Token("keyword", word, start_line, start_col))
            else:
                tokens.append(Token("ident", word, start_line, start_col))
            continue

        number = _match_number(text, i)
        if number is not None:
            end, value = number
            advance(end - i)
            if value is None:
                errors.append(LexError(f"number {text[start:end]} is out of range", start_line, start_col))
                continue
            tokens.append(Token("number", text[start:end], start_line, start_col, value))
            continue

        if ch == '"':
            value, end, err = _match_string(text, i)
            if err is not None:
                # skip the rest of the line so one bad quote yields one error
                errors.append(LexError(err, start_line, start_col))
                while i < n and text[i] != "\n":
                    advance()
                continue
            advance(end - i)
            tokens.append(Token("string", text[start:end], start_line, start_col, value))
            continue

        for p in PUNCTUATION:
            if text.startswith(p, i):
                advance(len(p))
                tokens.append(Token("punct", p, start_line, start_col))
                break
        else:
            errors.append(LexError(f"illegal character {ch!r}", start_line, start_col))
            advance()
    return tokens, errors


def _match_number(text: str, i: int) -> Optional[Tuple[int, Optional[float]]]:
    n = len(text)
    j = i
    if j < n and text[j] == "-":
        if text.startswith("inf", j + 1) and not (j + 4 < n and _is_ident_char(text[j + 4])):
            return j + 4, -math.inf
        j += 1
    if not (j < n and _is_digit(text[j])):
        return None
    while j < n and _is_digit(text[j]):
        j += 1
    if j + 1 < n and text[j] == "." and _is_digit(text[j + 1]):
        j += 1
        while j < n and _is_digit(text[j]):
            j += 1
    if j < n and text[j] in "eE":
        k = j + 1
        if k < n and text[k] in "+-":
            k += 1
        if k < n and _is_digit(text[k]):
            while k < n and _is_digit(text[k]):
                k += 1
            j = k
    value = float(text[i:j])
    return j, (None if math.isinf(value) else value)


def _match_string(text: str, i: int):
    n = len(text)
    j = i + 1
    out = []
    while j < n:
        ch = text[j]
        if ch == '"':
            return "".join(out), j + 1, None
        if ch == "\n":
            break
        if ch == "\\":
            if j + 1 < n and text[j + 1] in _ESCAPES:
                out.append(_ESCAPES[text[j + 1]])
                j += 2
                continue
            return None, j, "invalid escape sequence in string"
        out.append(ch)
        j += 1
    return None, j, "unterminated string"


def tokenize(text: str) -> List[Token]:
    """Token list without an end marker; raises on the first illegal character."""
    tokens, errors = scan(text)
    if errors:
        raise errors[0]
    return tokens
