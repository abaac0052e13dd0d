"""Skill profiles, courses, jobs, and the scoring functions over them.

A profile is a plain ``dict`` mapping skill id to level (1 beginner,
2 intermediate, 3 expert). A skill that is not a key has level 0. Nothing in
this module mutates its arguments.
"""
from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

MIN_LEVEL = 1
MAX_LEVEL = 3
LEVEL_NAMES = {1: "beginner", 2: "intermediate", 3: "expert"}

SkillMap = Mapping[str, int]


class InvalidSkillMap(ValueError):
    pass


def validate_skill_map(skills: Mapping[str, int], where: str = "skills") -> dict[str, int]:
    """Return a plain dict copy of ``skills`` after checking every level is 1..3."""
    out: dict[str, int] = {}
    for sid, level in skills.items():
        if not isinstance(sid, str) or not sid:
            raise InvalidSkillMap(f"{where}: skill id must be a non-empty string, got {sid!r}")
        if isinstance(level, bool) or not isinstance(level, int):
            raise InvalidSkillMap(f"{where}.{sid}: level must be an integer, got {level!r}")
        if not MIN_LEVEL <= level <= MAX_LEVEL:
            raise InvalidSkillMap(f"{where}.{sid}: level {level} outside {MIN_LEVEL}..{MAX_LEVEL}")
        out[sid] = level
    return out


@dataclass(frozen=True)
class CourseRecord:
    id: str
    required: dict[str, int] = field(default_factory=dict)
    provided: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "required", validate_skill_map(self.required, f"{self.id}.required"))
        object.__setattr__(self, "provided", validate_skill_map(self.provided, f"{self.id}.provided"))


@dataclass(frozen=True)
class JobRecord:
    id: str
    required: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "required", validate_skill_map(self.required, f"{self.id}.required"))


@dataclass(frozen=True)
class LearnerProfile:
    id: str
    skills: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "skills", validate_skill_map(self.skills, f"{self.id}.skills"))


@dataclass(frozen=True)
class Thresholds:
    t_uc: float = 0.8
    t_uj: float = 0.8

    def __post_init__(self):
        for name in ("t_uc", "t_uj"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")


# Counts calls to user_job_sim so tests can compare per-recommendation work
# across algorithms. Context-local, so parallel evaluations do not interfere.
_job_sim_calls: contextvars.ContextVar[list[int] | None] = contextvars.ContextVar(
    "job_sim_calls", default=None
)


@contextlib.contextmanager
def count_job_sims() -> Iterator[list[int]]:
    """Yield a one-element list holding the number of job similarity evaluations."""
    box = [0]
    token = _job_sim_calls.set(box)
    try:
        yield box
    finally:
        _job_sim_calls.reset(token)


def level_sim(have: int, need: int) -> float:
    """min(have, need) / need. ``need`` is a required level and must be >= 1."""
    if need < MIN_LEVEL:
        raise ValueError(f"required level must be >= {MIN_LEVEL}, got {need}")
    return min(have, need) / need


def coverage(u: SkillMap, target: SkillMap) -> float:
    """Mean of level_sim over the skills in ``target``; absent skills count as level 0."""
    if not target:
        raise ValueError("coverage of an empty skill set is undefined")
    total = 0.0
    for sid, need in target.items():
        total += level_sim(u.get(sid, 0), need)
    return total / len(target)


def user_job_sim(u: SkillMap, job: JobRecord) -> float:
    box = _job_sim_calls.get()
    if box is not None:
        box[0] += 1
    if not job.required:
        raise ValueError(f"job {job.id!r} has no required skills")
    return coverage(u, job.required)


def prerequisite_coverage(u: SkillMap, required: SkillMap) -> float:
    # No prerequisites means anyone may enrol.
    if not required:
        return 1.0
    return coverage(u, required)


def user_course_rel(u: SkillMap, course: CourseRecord) -> float:
    """Prerequisite coverage times the fraction of the course's content still to learn."""
    if not course.provided:
        raise ValueError(f"course {course.id!r} provides no skills")
    return prerequisite_coverage(u, course.required) * (1.0 - coverage(u, course.provided))


def enrollable_courses(u: SkillMap, courses: Iterable[CourseRecord], t_uc: float) -> set[str]:
    return {c.id for c in courses if user_course_rel(u, c) >= t_uc}


def applicable_jobs(u: SkillMap, jobs: Iterable[JobRecord], t_uj: float) -> set[str]:
    return {j.id for j in jobs if user_job_sim(u, j) >= t_uj}


def apply_course(u: SkillMap, course: CourseRecord) -> dict[str, int]:
    """Merge the course's provided skills into ``u`` keeping the higher level per skill."""
    out = dict(u)
    for sid, level in course.provided.items():
        if level > out.get(sid, 0):
            out[sid] = level
    return out


def skills_gained(u: SkillMap, course: CourseRecord) -> dict[str, int]:
    """Provided skills that ``u`` does not already hold at the provided level."""
    return {s: l for s, l in course.provided.items() if u.get(s, 0) < l}
