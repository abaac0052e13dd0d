import pytest

from skillpath.skills import CourseRecord, JobRecord, LearnerProfile, Thresholds
from skillpath.env import EnvConfig

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def trap_env():
    """Greedy takes A (one job now); B then C opens two jobs."""
    courses = (
        CourseRecord("A", {}, {"x": 1}),
        CourseRecord("B", {}, {"b": 1}),
        CourseRecord("C", {}, {"c": 1}),
    )
    jobs = (JobRecord("J1", {"x": 1}), JobRecord("J2", {"b": 1, "c": 1}), JobRecord("J3", {"b": 1, "c": 1}))
    return EnvConfig(courses, jobs, Thresholds(0.8, 0.8), horizon=2)


@pytest.fixture
def small_env():
    """Three courses, four jobs, used for hand-checked search examples."""
    courses = (
        CourseRecord("c1", {}, {"py": 2, "sql": 1}),
        CourseRecord("c2", {"py": 2}, {"ml": 2, "stats": 2, "viz": 1}),
        CourseRecord("c3", {}, {"java": 3}),
    )
    jobs = (
        JobRecord("j1", {"py": 2}),
        JobRecord("j2", {"py": 2, "ml": 2}),
        JobRecord("j3", {"java": 3}),
        JobRecord("j4", {"ml": 2, "stats": 2, "sql": 1}),
    )
    return EnvConfig(courses, jobs, Thresholds(0.8, 0.8), horizon=2)


@pytest.fixture
def tiny_learners():
    return [LearnerProfile("L0", {}), LearnerProfile("L1", {"py": 1}), LearnerProfile("L2", {"java": 1})]
