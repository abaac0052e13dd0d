"""Token-set string similarity on top of a plain Levenshtein distance."""
from __future__ import annotations

import re

_NON_ALNUM = re.compile(r"[^0-9a-z]+")


def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def edit_similarity(a: str, b: str) -> float:
    """1 - levenshtein / longer length; two empty strings count as identical."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest


def tokenize(s: str) -> list[str]:
    return [t for t in _NON_ALNUM.split(s.lower()) if t]


def token_set_ratio(a: str, b: str) -> float:
    """Compare the shared-token core of two strings with each side's remainder.

    Scores lie in [0, 1]. Any string whose token set is contained in the
    other's scores 1.0.
    """
    ta, tb = set(tokenize(a)), set(tokenize(b))
    if not ta or not tb:
        return 0.0
    shared = " ".join(sorted(ta & tb))
    t1 = " ".join(x for x in (shared, " ".join(sorted(ta - tb))) if x)
    t2 = " ".join(x for x in (shared, " ".join(sorted(tb - ta))) if x)
    return max(edit_similarity(shared, t1), edit_similarity(shared, t2), edit_similarity(t1, t2))
