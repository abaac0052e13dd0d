"""Reference computations written without the package's own code paths.

Scores use exact fractions; search is plain enumeration of every ordered
course sequence, infeasible ones included, with no pruning.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache


def frac_sim(have: int, need: int) -> Fraction:
    return Fraction(min(have, need), need)


def frac_mean_sim(u: dict, target: dict) -> Fraction:
    return sum((frac_sim(u.get(s, 0), l) for s, l in target.items()), Fraction(0)) / len(target)


def frac_rel(u: dict, required: dict, provided: dict) -> Fraction:
    r = Fraction(1) if not required else frac_mean_sim(u, required)
    return r * (1 - frac_mean_sim(u, provided))


def merge(u: dict, provided: dict) -> dict:
    out = dict(u)
    for s, l in provided.items():
        out[s] = max(out.get(s, 0), l)
    return out


def n_jobs(u: dict, jobs: list[dict], t_uj) -> int:
    t = Fraction(t_uj).limit_denominator(10**6)
    return sum(frac_mean_sim(u, j) >= t for j in jobs)


def brute_force_best(u: dict, courses: list[tuple[dict, dict]], jobs: list[dict], k: int,
                     t_uc=0.8, t_uj=0.8) -> int:
    """Max final job count over all fully-feasible course sequences of length <= k."""
    tc = Fraction(t_uc).limit_denominator(10**6)
    best = n_jobs(u, jobs, t_uj)
    for length in range(1, k + 1):
        for seq in itertools.product(range(len(courses)), repeat=length):
            prof = dict(u)
            ok = True
            for i in seq:
                req, prov = courses[i]
                if frac_rel(prof, req, prov) < tc:
                    ok = False
                    break
                prof = merge(prof, prov)
            if ok:
                best = max(best, n_jobs(prof, jobs, t_uj))
    return best


def levenshtein_ref(a: str, b: str) -> int:
    @lru_cache(maxsize=None)
    def d(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))

    return d(len(a), len(b))


def naive_forward(W1, b1, W2, b2, x):
    """Single-vector forward pass with explicit loops."""
    n_in, hidden = len(W1), len(W1[0])
    n_out = len(W2[0])
    h = []
    for j in range(hidden):
        s = b1[j]
        for i in range(n_in):
            s += x[i] * W1[i][j]
        h.append(s if s > 0 else 0.0)
    out = []
    for o in range(n_out):
        s = b2[o]
        for j in range(hidden):
            s += h[j] * W2[j][o]
        out.append(s)
    return out
