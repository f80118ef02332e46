"""Run ECMA-262 ``pattern`` values with Python's ``re`` module.

This is a lexical rewrite, independent of the DFA compiler, so the validator
and the constraint automaton do not share a regex engine.
"""

from __future__ import annotations

import re
from functools import lru_cache

from ..errors import InvalidSchema

_ECMA_SPACE = "\\t\\n\\x0b\\x0c\\r \\xa0\\u1680\\u2000-\\u200a\\u2028\\u2029\\u202f\\u205f\\u3000\\ufeff"
_IN_CLASS = {"d": "0-9", "w": "A-Za-z0-9_", "s": _ECMA_SPACE}
_OUT_CLASS = {
    "d": "[0-9]",
    "D": "[^0-9]",
    "w": "[A-Za-z0-9_]",
    "W": "[^A-Za-z0-9_]",
    "s": f"[{_ECMA_SPACE}]",
    "S": f"[^{_ECMA_SPACE}]",
}
_DOT = "[^\\n\\r\\u2028\\u2029]"


class PatternNotSupported(InvalidSchema):
    pass


def translate(pattern: str) -> str:
    out: list[str] = []
    i = 0
    n = len(pattern)
    in_class = False
    class_start = False
    while i < n:
        c = pattern[i]
        if c == "\\" and i + 1 < n:
            e = pattern[i + 1]
            if in_class and e in _IN_CLASS:
                out.append(_IN_CLASS[e])
            elif in_class and e in "DWS":
                raise PatternNotSupported(f"negated class escape inside a class: {pattern!r}")
            elif not in_class and e in _OUT_CLASS:
                out.append(_OUT_CLASS[e])
            elif e in "pP":
                raise PatternNotSupported(f"unicode property escape: {pattern!r}")
            elif e == "c" and i + 2 < n and pattern[i + 2].isascii() and pattern[i + 2].isalpha():
                out.append("\\x%02x" % (ord(pattern[i + 2]) % 32))
                i += 3
                class_start = False
                continue
            elif e == "/":
                out.append("/")
            elif e == "b" and in_class:
                out.append("\\x08")
            else:
                out.append(c + e)
            i += 2
            class_start = False
            continue
        if in_class:
            if c == "]" and class_start:
                # '[]' never matches; '[^]' matches anything
                negated = out[-1] == "^"
                if negated:
                    out.pop()
                    out.pop()
                    out.append("[\\s\\S]")
                else:
                    out.pop()
                    out.append("(?!)")
                in_class = False
            elif c == "]":
                out.append(c)
                in_class = False
            elif c == "[":
                out.append("\\[")
            elif c == "^" and class_start and out[-1] == "[":
                out.append(c)
                i += 1
                continue
            else:
                out.append(c)
            class_start = False
            i += 1
            continue
        if c == "[":
            out.append(c)
            in_class = True
            class_start = True
        elif c == ".":
            out.append(_DOT)
        elif c == "$":
            out.append("\\Z")
        elif c == "(" and pattern.startswith("(?<", i) and i + 3 < n and pattern[i + 3] not in "=!":
            out.append("(?P<")
            i += 3
            continue
        else:
            out.append(c)
        i += 1
    return "".join(out)


@lru_cache(maxsize=2048)
def compiled(pattern: str) -> re.Pattern:
    try:
        return re.compile(translate(pattern))
    except re.error as exc:
        raise InvalidSchema(f"invalid pattern {pattern!r}: {exc}") from None


def search(pattern: str, text: str) -> bool:
    return compiled(pattern).search(text) is not None
