"""Text encodings of parenthesis sequences.

``ascii``: the characters ``()[]{}<>`` stand for types 0..3; whitespace separates
nothing and is ignored. ``tokens``: whitespace-separated ``o<i>`` / ``c<i>``.
Any other character or token is a parse error.
"""
from __future__ import annotations

import re

import numpy as np

from .core import ParenSeq

ASCII = "()[]{}<>"
FORMATS = ("ascii", "tokens")
_TOKEN = re.compile(r"([oc])(\d+)\Z")


class ParseError(ValueError):
    pass


def parse_ascii(text: str, types: int | None = None) -> ParenSeq:
    codes = []
    for pos, ch in enumerate(text):
        if ch.isspace():
            continue
        code = ASCII.find(ch)
        if code < 0:
            raise ParseError(f"unexpected character {ch!r} at offset {pos}")
        codes.append(code)
    return _build(codes, types)


def parse_tokens(text: str, types: int | None = None) -> ParenSeq:
    codes = []
    for pos, tok in enumerate(text.split()):
        m = _TOKEN.match(tok)
        if m is None:
            raise ParseError(f"bad token {tok!r} at index {pos}")
        codes.append(2 * int(m.group(2)) + (m.group(1) == "c"))
    return _build(codes, types)


def _build(codes: list[int], types: int | None) -> ParenSeq:
    try:
        return ParenSeq(np.asarray(codes, dtype=np.int64), types)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def format_ascii(s: ParenSeq) -> str:
    if s.type_count > len(ASCII) // 2:
        raise ValueError(f"ascii encoding holds at most {len(ASCII) // 2} types, got t={s.type_count}")
    return "".join(ASCII[c] for c in s.codes)


def format_tokens(s: ParenSeq) -> str:
    return " ".join(("c" if c & 1 else "o") + str(c >> 1) for c in s.codes)


def parse(text: str, fmt: str = "ascii", types: int | None = None) -> ParenSeq:
    if fmt == "ascii":
        return parse_ascii(text, types)
    if fmt == "tokens":
        return parse_tokens(text, types)
    raise ValueError(f"unknown format {fmt!r}")


def dumps(s: ParenSeq, fmt: str = "ascii") -> str:
    if fmt == "ascii":
        return format_ascii(s)
    if fmt == "tokens":
        return format_tokens(s)
    raise ValueError(f"unknown format {fmt!r}")
