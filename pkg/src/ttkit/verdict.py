"""Three-valued verdicts."""
from __future__ import annotations

from enum import Enum
from typing import Iterable


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"

    @classmethod
    def of(cls, flag: bool) -> "Verdict":
        return cls.YES if flag else cls.NO

    def __str__(self):
        return self.value


def all_of(parts: Iterable[Verdict | bool]) -> Verdict:
    """Kleene conjunction: any NO wins, then any INCONCLUSIVE."""
    seen_unknown = False
    for p in parts:
        v = Verdict.of(p) if isinstance(p, bool) else p
        if v is Verdict.NO:
            return Verdict.NO
        if v is Verdict.INCONCLUSIVE:
            seen_unknown = True
    return Verdict.INCONCLUSIVE if seen_unknown else Verdict.YES


def negate(v: Verdict) -> Verdict:
    if v is Verdict.INCONCLUSIVE:
        return v
    return Verdict.NO if v is Verdict.YES else Verdict.YES
