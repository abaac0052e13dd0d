import pytest
from hypothesis import given, strategies as st

from skillpath import skills as sk
from skillpath.skills import CourseRecord, JobRecord, Thresholds

from oracles import frac_mean_sim, frac_rel
from strategies import courses, jobs, skill_maps


@pytest.mark.parametrize("have,need,expected", [(2, 3, 2 / 3), (3, 3, 1.0), (0, 2, 0.0), (3, 1, 1.0)])
def test_level_sim_examples(have, need, expected):
    assert sk.level_sim(have, need) == pytest.approx(expected, abs=1e-15)


def test_level_sim_rejects_absent_requirement():
    with pytest.raises(ValueError):
        sk.level_sim(1, 0)


def test_user_job_sim_examples():
    job = JobRecord("j", {"python": 3, "sql": 1})
    assert sk.user_job_sim({"python": 2}, job) == pytest.approx(1 / 3)
    assert sk.user_job_sim({"python": 3, "sql": 2}, job) == 1.0
    assert sk.user_job_sim({}, job) == 0.0


def test_user_job_sim_empty_job_is_an_error():
    with pytest.raises(ValueError):
        sk.user_job_sim({"a": 1}, JobRecord("j", {}))


def test_user_course_rel_examples():
    assert sk.user_course_rel({"python": 2}, CourseRecord("c", {"python": 1}, {"python": 3})) == pytest.approx(1 / 3)
    assert sk.user_course_rel({"python": 3}, CourseRecord("c", {}, {"python": 2})) == 0.0
    assert sk.user_course_rel({}, CourseRecord("c", {}, {"rust": 1})) == 1.0


def test_user_course_rel_needs_provided_skills():
    with pytest.raises(ValueError):
        sk.user_course_rel({}, CourseRecord("c", {"a": 1}, {}))


def test_enrollable_courses_examples():
    a = CourseRecord("A", {}, {"sql": 1})
    b = CourseRecord("B", {"java": 2}, {"java": 3})
    assert sk.enrollable_courses({"python": 2}, [a, b], 0.8) == {"A"}
    assert sk.enrollable_courses({"python": 2}, [], 0.8) == set()
    assert sk.enrollable_courses({"python": 2}, [a, b], 0.0) == {"A", "B"}


def test_threshold_comparison_is_inclusive():
    # rel = 1 * (1 - 1/5) = 0.8 exactly
    c = CourseRecord("c", {}, {"a": 1, "b": 1, "c": 1, "d": 1, "e": 1})
    assert sk.user_course_rel({"a": 1}, c) == pytest.approx(0.8)
    assert sk.enrollable_courses({"a": 1}, [c], sk.user_course_rel({"a": 1}, c)) == {"c"}


def test_applicable_jobs_examples():
    j1 = JobRecord("j1", {"python": 3})
    j2 = JobRecord("j2", {"python": 3, "sql": 2})
    assert sk.applicable_jobs({"python": 3}, [j1, j2], 0.8) == {"j1"}
    assert sk.applicable_jobs({"python": 3}, [], 0.8) == set()
    assert sk.applicable_jobs({"python": 3, "sql": 3}, [j1, j2], 0.8) == {"j1", "j2"}


def test_apply_course_examples():
    assert sk.apply_course({"python": 2}, CourseRecord("c", {}, {"python": 3, "sql": 1})) == {"python": 3, "sql": 1}
    assert sk.apply_course({"python": 3}, CourseRecord("c", {}, {"python": 1})) == {"python": 3}
    assert sk.apply_course({}, CourseRecord("c", {}, {"x": 2})) == {"x": 2}


def test_apply_course_leaves_input_untouched():
    u = {"a": 1}
    sk.apply_course(u, CourseRecord("c", {}, {"a": 3}))
    assert u == {"a": 1}


@pytest.mark.parametrize("bad", [{"a": 0}, {"a": 4}, {"a": 1.5}, {"": 1}, {"a": True}])
def test_skill_maps_reject_bad_levels(bad):
    with pytest.raises(sk.InvalidSkillMap):
        JobRecord("j", bad)


def test_thresholds_range():
    with pytest.raises(ValueError):
        Thresholds(1.2, 0.5)


def test_job_sim_counter_is_scoped():
    job = JobRecord("j", {"a": 1})
    with sk.count_job_sims() as n:
        sk.applicable_jobs({}, [job, job, job], 0.5)
    sk.user_job_sim({}, job)
    assert n[0] == 3


@given(skill_maps(), jobs())
def test_job_sim_matches_exact_fraction(u, job):
    assert sk.user_job_sim(u, job) == pytest.approx(float(frac_mean_sim(u, job.required)), abs=1e-12)


@given(skill_maps(), courses())
def test_course_rel_matches_exact_fraction(u, c):
    assert sk.user_course_rel(u, c) == pytest.approx(float(frac_rel(u, c.required, c.provided)), abs=1e-12)


@given(skill_maps(), courses())
def test_apply_course_is_monotone_max_merge(u, c):
    out = sk.apply_course(u, c)
    assert set(out) == set(u) | set(c.provided)
    for s in out:
        assert out[s] == max(u.get(s, 0), c.provided.get(s, 0))
        assert out[s] >= u.get(s, 0)


@given(skill_maps(), courses(), st.floats(0.01, 1.0))
def test_retake_is_never_enrollable(u, c, t):
    done = sk.apply_course(u, c)
    assert c.id not in sk.enrollable_courses(done, [c], t)


@given(skill_maps(), courses())
def test_skills_gained_are_exactly_the_raised_ones(u, c):
    gained = sk.skills_gained(u, c)
    after = sk.apply_course(u, c)
    assert gained == {s: l for s, l in after.items() if u.get(s, 0) != l}
