from hypothesis import strategies as st

from skillpath.skills import CourseRecord, JobRecord

SKILLS = [f"s{i}" for i in range(10)]
levels = st.integers(1, 3)


def skill_maps(min_size=0, max_size=10):
    return st.dictionaries(st.sampled_from(SKILLS), levels, min_size=min_size, max_size=max_size)


@st.composite
def jobs(draw):
    return JobRecord("j", draw(skill_maps(min_size=1)))


@st.composite
def courses(draw, cid="c"):
    provided = draw(skill_maps(min_size=1, max_size=4))
    required = draw(skill_maps(max_size=3))
    # keep the course consistent: a shared skill is required below the taught level
    required = {s: l for s, l in required.items() if s not in provided or l < provided[s]}
    return CourseRecord(cid, required, provided)
