"""String formats that are asserted (not just annotated).

Each format is a plain regular expression in the common subset of ECMA-262
and Python syntax. The validator runs them with ``re.fullmatch``; the
constraint compiler turns the same text into a DFA.
"""

from __future__ import annotations

import re
from functools import lru_cache

_MD31 = "(0[13578]|1[02])-(0[1-9]|[12][0-9]|3[01])"
_MD30 = "(0[469]|11)-(0[1-9]|[12][0-9]|30)"
_FEB = "02-(0[1-9]|1[0-9]|2[0-8])"
_LEAP_YEAR = "([0-9][0-9](0[48]|[2468][048]|[13579][26])|(0[48]|[2468][048]|[13579][26])00)"
DATE = f"([0-9][0-9][0-9][0-9]-({_MD31}|{_MD30}|{_FEB})|{_LEAP_YEAR}-02-29)"

_HOUR = "([01][0-9]|2[0-3])"
_MIN = "[0-5][0-9]"
TIME = f"{_HOUR}:{_MIN}:{_MIN}(\\.[0-9]+)?([Zz]|[+-]{_HOUR}:{_MIN})"
DATE_TIME = f"{DATE}[Tt]{TIME}"

_ATEXT = "[A-Za-z0-9!#$%&'*+/=?^_`{|}~-]"
_LABEL = "[A-Za-z0-9]([A-Za-z0-9-]*[A-Za-z0-9])?"
EMAIL = f"{_ATEXT}+(\\.{_ATEXT}+)*@{_LABEL}(\\.{_LABEL})*"

_PCHAR = "([A-Za-z0-9._~!$&'()*+,;=:@/?-]|%[0-9A-Fa-f][0-9A-Fa-f])"
URI = f"[A-Za-z][A-Za-z0-9+.-]*:{_PCHAR}*(#{_PCHAR}*)?"

_HEX = "[0-9A-Fa-f]"
UUID = f"{_HEX}{{8}}-{_HEX}{{4}}-{_HEX}{{4}}-{_HEX}{{4}}-{_HEX}{{12}}"

_OCTET = "(25[0-5]|2[0-4][0-9]|1[0-9][0-9]|[1-9]?[0-9])"
IPV4 = f"{_OCTET}(\\.{_OCTET}){{3}}"

_H16 = f"{_HEX}{{1,4}}"
_LS32 = f"({_H16}:{_H16}|{IPV4})"


def _h16_list(k: int) -> str:
    # up to k groups of 'h16:' followed by h16, possibly absent
    if k < 0:
        return ""
    return f"(({_H16}:){{0,{k}}}{_H16})?"


IPV6 = "(" + "|".join(
    [
        f"({_H16}:){{6}}{_LS32}",
        f"::({_H16}:){{5}}{_LS32}",
        f"({_H16})?::({_H16}:){{4}}{_LS32}",
        f"{_h16_list(1)}::({_H16}:){{3}}{_LS32}",
        f"{_h16_list(2)}::({_H16}:){{2}}{_LS32}",
        f"{_h16_list(3)}::{_H16}:{_LS32}",
        f"{_h16_list(4)}::{_LS32}",
        f"{_h16_list(5)}::{_H16}",
        f"{_h16_list(6)}::",
    ]
) + ")"

FORMATS: dict[str, str] = {
    "date-time": DATE_TIME,
    "date": DATE,
    "time": TIME,
    "email": EMAIL,
    "uri": URI,
    "uuid": UUID,
    "ipv4": IPV4,
    "ipv6": IPV6,
}


@lru_cache(maxsize=None)
def _compiled(name: str) -> re.Pattern:
    return re.compile(FORMATS[name])


def is_asserted(name: object) -> bool:
    return isinstance(name, str) and name in FORMATS


def check(name: str, value: str) -> bool:
    """True if ``value`` conforms to format ``name``; unknown formats pass."""
    if name not in FORMATS:
        return True
    return _compiled(name).fullmatch(value) is not None
