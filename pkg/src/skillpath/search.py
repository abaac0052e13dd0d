"""Search-based recommenders: exhaustive enumeration and the greedy heuristic."""
from __future__ import annotations

from . import skills as sk
from .env import EnvConfig
from .skills import SkillMap


def _sorted_enrollable(profile: SkillMap, env: EnvConfig) -> list[str]:
    return sorted(env.enrollable(profile))


def recommend_exhaustive(u: SkillMap, env: EnvConfig, k: int) -> list[str]:
    """Best course sequence of length <= k by final number of applicable jobs.

    Infeasible prefixes are never expanded. A branch stops short of k only
    when no course is enrollable. Ties go to the lexicographically smallest
    sequence, which is the first one met in sorted depth-first order.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    best_reward = -1
    best_seq: list[str] = []
    path: list[str] = []

    def visit(profile: SkillMap, depth: int) -> None:
        nonlocal best_reward, best_seq
        options = _sorted_enrollable(profile, env) if depth < k else []
        if not options:
            reward = env.marketability(profile)
            if reward > best_reward:
                best_reward = reward
                best_seq = list(path)
            return
        for cid in options:
            path.append(cid)
            visit(sk.apply_course(profile, env.course(cid)), depth + 1)
            path.pop()

    visit(dict(u), 0)
    return best_seq


def recommend_greedy(u: SkillMap, env: EnvConfig, k: int,
                     stop_without_gain: bool = False) -> list[str]:
    """Pick, k times, the enrollable course giving the most applicable jobs next.

    The argmax is taken even when nothing improves on the current count,
    unless ``stop_without_gain`` is set.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    profile = dict(u)
    current = env.marketability(profile) if stop_without_gain else None
    seq: list[str] = []
    for _ in range(k):
        options = _sorted_enrollable(profile, env)
        if not options:
            break
        best_id, best_val, best_profile = None, -1, None
        for cid in options:
            nxt = sk.apply_course(profile, env.course(cid))
            val = env.marketability(nxt)
            if val > best_val:
                best_id, best_val, best_profile = cid, val, nxt
        if stop_without_gain and best_val <= current:
            break
        seq.append(best_id)
        profile = best_profile
        current = best_val
    return seq


def rollout_reward(u: SkillMap, env: EnvConfig, sequence: list[str]) -> tuple[int, bool]:
    """Number of applicable jobs after following ``sequence``.

    Returns ``(reward, feasible)``. The walk stops at the first course that is
    not enrollable; the reward is then the count reached before it.
    """
    profile = dict(u)
    for cid in sequence:
        course = env.course(cid)
        if sk.user_course_rel(profile, course) < env.thresholds.t_uc:
            return env.marketability(profile), False
        profile = sk.apply_course(profile, course)
    return env.marketability(profile), True


def estimate_sequences(u: SkillMap, env: EnvConfig, k: int) -> int:
    """Upper estimate of leaves the exhaustive search visits: |C_u|^k."""
    return max(1, len(env.enrollable(u))) ** k
