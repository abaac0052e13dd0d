"""Common recommender interface, training settings and the policy file format.

Policy files are JSON::

    {"format": "skillpath-policy", "version": 1, "kind": "value-agent",
     "skill_universe": [...], "course_ids": [...], "hidden": 64,
     "tensors": {"W1": {"shape": [n_in, hidden], "values": [...row-major...]}, ...}}

Floats are written with ``repr`` precision so a load reproduces the
parameters bit for bit.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .. import skills as sk
from ..env import EnvConfig, encode_state
from ..search import recommend_exhaustive, recommend_greedy
from ..skills import SkillMap
from .nn import PARAM_NAMES, ApproximatorParams, forward

KINDS = ("exhaustive", "greedy", "value-agent", "policy-agent")
LEARNED = ("value-agent", "policy-agent")
FORMAT_NAME = "skillpath-policy"
FORMAT_VERSION = 1


class TrainingDiverged(RuntimeError):
    pass


@dataclass
class TrainConfig:
    total_steps: int = 100_000
    gamma: float = 0.99
    learning_rate: float = 1e-3
    hidden: int = 64
    seed: int = 0
    # value agent
    buffer_size: int = 10_000
    batch_size: int = 64
    learning_starts: int = 1_000
    train_freq: int = 1
    target_update: int = 1_000
    exploration_fraction: float = 0.3
    exploration_initial: float = 1.0
    exploration_final: float = 0.05
    # policy agent
    n_steps: int = 512
    n_epochs: int = 4
    minibatch_size: int = 64
    clip_range: float = 0.2
    gae_lambda: float = 0.95
    ent_coef: float = 0.01
    vf_hidden: int = 64
    max_grad_norm: float = 0.5

    def __post_init__(self):
        if self.total_steps < 0:
            raise ValueError("total_steps must be >= 0")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError("gamma must lie in (0, 1]")


@dataclass
class RecommenderPolicy:
    kind: str
    skill_universe: list[str] = field(default_factory=list)
    course_ids: list[str] = field(default_factory=list)
    params: ApproximatorParams | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown policy kind {self.kind!r}")
        if self.kind in LEARNED:
            if self.params is None:
                raise ValueError(f"{self.kind} requires parameters")
            if self.params.n_in != len(self.skill_universe) or self.params.n_out != len(self.course_ids):
                raise ValueError("parameter shapes do not match skill universe / course list")
        self._index = {s: i for i, s in enumerate(self.skill_universe)}

    def action_scores(self, profile: SkillMap) -> np.ndarray:
        return forward(self.params, encode_state(profile, self.skill_universe, self._index))


@dataclass
class Recommendation:
    courses: list[str]
    # True when a learned agent proposed a non-enrollable course and the
    # rollout stopped before reaching k.
    stopped_infeasible: bool = False


def rollout_learned(policy: RecommenderPolicy, u: SkillMap, env: EnvConfig, k: int) -> Recommendation:
    """Follow the argmax action up to k times; stop when it is not enrollable.

    Needs only course relevance checks, never job similarities.
    """
    if list(env.course_ids) != policy.course_ids:
        raise ValueError("policy was trained on a different course list")
    profile = dict(u)
    seq: list[str] = []
    t_uc = env.thresholds.t_uc
    for _ in range(k):
        scores = policy.action_scores(profile)
        cid = policy.course_ids[int(np.argmax(scores))]
        course = env.course(cid)
        if sk.user_course_rel(profile, course) < t_uc:
            return Recommendation(seq, True)
        seq.append(cid)
        profile = sk.apply_course(profile, course)
    return Recommendation(seq, False)


def recommend(policy: RecommenderPolicy, u: SkillMap, env: EnvConfig, k: int) -> Recommendation:
    if k == 0:
        return Recommendation([])
    if policy.kind == "exhaustive":
        return Recommendation(recommend_exhaustive(u, env, k))
    if policy.kind == "greedy":
        return Recommendation(recommend_greedy(u, env, k))
    return rollout_learned(policy, u, env, k)


def policy_recommend(policy: RecommenderPolicy, u: SkillMap, env: EnvConfig, k: int) -> list[str]:
    return recommend(policy, u, env, k).courses


def save_policy(policy: RecommenderPolicy, path: str | Path) -> None:
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "kind": policy.kind,
        "skill_universe": policy.skill_universe,
        "course_ids": policy.course_ids,
    }
    if policy.params is not None:
        doc["hidden"] = policy.params.W1.shape[1]
        doc["tensors"] = {
            name: {"shape": list(arr.shape), "values": [float(v) for v in arr.ravel(order="C")]}
            for name, arr in policy.params.arrays().items()
        }
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def load_policy(path: str | Path) -> RecommenderPolicy:
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != FORMAT_NAME:
        raise ValueError(f"{path}: not a {FORMAT_NAME} file")
    if doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported policy version {doc.get('version')!r}")
    params = None
    if "tensors" in doc:
        arrays = {}
        for name in PARAM_NAMES:
            t = doc["tensors"][name]
            arrays[name] = np.array(t["values"], dtype=float).reshape(t["shape"])
        params = ApproximatorParams(**arrays)
    return RecommenderPolicy(doc["kind"], list(doc["skill_universe"]), list(doc["course_ids"]), params)


def skill_universe_of(env: EnvConfig, learners: Sequence = ()) -> list[str]:
    """Sorted ids of every skill mentioned by courses, jobs or learners."""
    found: set[str] = set()
    for c in env.courses:
        found.update(c.required)
        found.update(c.provided)
    for j in env.jobs:
        found.update(j.required)
    for lr in learners:
        found.update(lr.skills)
    return sorted(found)
