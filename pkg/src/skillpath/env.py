"""Episodic course-recommendation environment.

States are learner profiles, actions are course ids, transitions merge the
chosen course's provided skills into the profile. Recommending a course
outside the learner's enrollable set ends the episode with a penalty.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import skills as sk
from .skills import CourseRecord, JobRecord, SkillMap, Thresholds


class EpisodeFinished(RuntimeError):
    pass


class UnknownCourse(KeyError):
    pass


@dataclass(frozen=True)
class EnvConfig:
    courses: tuple[CourseRecord, ...]
    jobs: tuple[JobRecord, ...]
    thresholds: Thresholds = field(default_factory=Thresholds)
    horizon: int = 3
    invalid_action_penalty: float = -1.0
    # Emit |J_u| only on the final step instead of after every feasible step.
    terminal_reward_only: bool = False

    def __post_init__(self):
        object.__setattr__(self, "courses", tuple(self.courses))
        object.__setattr__(self, "jobs", tuple(self.jobs))
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if not self.courses or not self.jobs:
            raise ValueError("EnvConfig needs at least one course and one job")
        ids = [c.id for c in self.courses]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate course ids")
        object.__setattr__(self, "_by_id", {c.id: c for c in self.courses})

    def course(self, course_id: str) -> CourseRecord:
        try:
            return self._by_id[course_id]
        except KeyError:
            raise UnknownCourse(course_id) from None

    @property
    def course_ids(self) -> list[str]:
        return [c.id for c in self.courses]

    def with_horizon(self, horizon: int) -> "EnvConfig":
        return EnvConfig(self.courses, self.jobs, self.thresholds, horizon,
                         self.invalid_action_penalty, self.terminal_reward_only)

    def enrollable(self, profile: SkillMap) -> set[str]:
        return sk.enrollable_courses(profile, self.courses, self.thresholds.t_uc)

    def marketability(self, profile: SkillMap) -> int:
        return len(sk.applicable_jobs(profile, self.jobs, self.thresholds.t_uj))


@dataclass(frozen=True)
class EnvState:
    profile: dict[str, int]
    steps_taken: int = 0
    terminated: bool = False


@dataclass(frozen=True)
class StepOutcome:
    next_state: EnvState
    reward: float
    done: bool
    feasible: bool


def reset(config: EnvConfig, initial_profile: SkillMap) -> EnvState:
    return EnvState(profile=dict(initial_profile))


def step(state: EnvState, action: str, config: EnvConfig) -> StepOutcome:
    if state.terminated:
        raise EpisodeFinished("cannot step a terminated episode")
    course = config.course(action)
    t_uc = config.thresholds.t_uc
    if sk.user_course_rel(state.profile, course) < t_uc:
        nxt = EnvState(state.profile, state.steps_taken, True)
        return StepOutcome(nxt, config.invalid_action_penalty, True, False)

    profile = sk.apply_course(state.profile, course)
    steps = state.steps_taken + 1
    done = steps >= config.horizon
    if config.terminal_reward_only and not done:
        reward = 0.0
    else:
        reward = float(config.marketability(profile))
    return StepOutcome(EnvState(profile, steps, done), reward, done, True)


def encode_state(profile: SkillMap, skill_universe: Sequence[str],
                 index: dict[str, int] | None = None) -> np.ndarray:
    """Levels scaled to [0, 1] laid out in ``skill_universe`` order."""
    if index is None:
        index = {s: i for i, s in enumerate(skill_universe)}
    x = np.zeros(len(skill_universe))
    for sid, level in profile.items():
        try:
            x[index[sid]] = level / sk.MAX_LEVEL
        except KeyError:
            raise KeyError(f"skill {sid!r} is not in the skill universe") from None
    return x


class CourseEnv:
    """Stateful wrapper with the usual reset/step shape, used for training."""

    def __init__(self, config: EnvConfig, skill_universe: Sequence[str]):
        self.config = config
        self.skill_universe = list(skill_universe)
        self._index = {s: i for i, s in enumerate(self.skill_universe)}
        self.action_ids = config.course_ids
        self.state: EnvState | None = None

    @property
    def n_actions(self) -> int:
        return len(self.action_ids)

    @property
    def n_inputs(self) -> int:
        return len(self.skill_universe)

    def observe(self, profile: SkillMap) -> np.ndarray:
        return encode_state(profile, self.skill_universe, self._index)

    def reset(self, profile: SkillMap) -> np.ndarray:
        self.state = reset(self.config, profile)
        return self.observe(self.state.profile)

    def step(self, action: int) -> tuple[np.ndarray, float, bool, dict]:
        out = step(self.state, self.action_ids[action], self.config)
        self.state = out.next_state
        return self.observe(out.next_state.profile), out.reward, out.done, {"feasible": out.feasible}
