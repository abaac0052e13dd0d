"""Bundle files, validation, course level correction and synthetic data.

A bundle is a directory holding four JSON files::

    taxonomy.json   [{"id", "preferred_label", "alt_labels": [...], "description"}]
    courses.json    [{"id", "required": {skill: level}, "provided": {skill: level}}]
    jobs.json       [{"id", "required": {skill: level}}]
    learners.json   [{"id", "skills": {skill: level}}]

Levels are integers 1 (beginner) to 3 (expert); ids are strings.
"""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .sem.taxonomy import TaxonomySkill
from .sem.text import RawDocument
from .skills import MAX_LEVEL, MIN_LEVEL, CourseRecord, JobRecord, LearnerProfile

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

BUNDLE_FILES = ("taxonomy.json", "courses.json", "jobs.json", "learners.json")
MIN_WORDS = {"job": 50, "course_prereq": 20, "course_target": 20}


class BundleError(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__(f"{len(problems)} problem(s): " + "; ".join(problems[:5])
                         + (" ..." if len(problems) > 5 else ""))


@dataclass
class DatasetBundle:
    taxonomy: list[TaxonomySkill] = field(default_factory=list)
    courses: list[CourseRecord] = field(default_factory=list)
    jobs: list[JobRecord] = field(default_factory=list)
    learners: list[LearnerProfile] = field(default_factory=list)

    @property
    def skill_ids(self) -> list[str]:
        return sorted(s.id for s in self.taxonomy)


def normalize_course_levels(c: CourseRecord) -> CourseRecord:
    """Lower any requirement that is not below the level the course teaches.

    Such a requirement becomes one level under the taught level; if that is
    below beginner, the requirement is dropped.
    """
    required = {}
    for sid, lr in c.required.items():
        lp = c.provided.get(sid)
        if lp is not None and lr >= lp:
            lr = lp - 1
        if lr >= MIN_LEVEL:
            required[sid] = lr
    return CourseRecord(c.id, required, dict(c.provided))


def filter_short_documents(docs: Iterable[RawDocument]) -> list[RawDocument]:
    """Drop job postings under 50 words and course texts under 20 words."""
    return [d for d in docs if d.word_count() >= MIN_WORDS.get(d.kind, 0)]


# -- loading ---------------------------------------------------------------

def _check_levels(obj, path: str, problems: list[str]) -> dict[str, int] | None:
    if not isinstance(obj, Mapping):
        problems.append(f"{path}: expected an object of skill -> level")
        return None
    ok = True
    for sid, lvl in obj.items():
        if isinstance(lvl, bool) or not isinstance(lvl, int) or not MIN_LEVEL <= lvl <= MAX_LEVEL:
            problems.append(f"{path}.{sid}: level must be an integer in {MIN_LEVEL}..{MAX_LEVEL}, got {lvl!r}")
            ok = False
    return dict(obj) if ok else None


def _check_known(levels: Mapping[str, int], path: str, known: set[str], problems: list[str]) -> None:
    for sid in levels:
        if sid not in known:
            problems.append(f"{path}.{sid}: unknown skill id")


def _records(raw, name: str, problems: list[str]) -> list[Mapping]:
    if not isinstance(raw, list):
        problems.append(f"{name}: expected a JSON array")
        return []
    out = []
    seen = set()
    for i, rec in enumerate(raw):
        if not isinstance(rec, Mapping) or not isinstance(rec.get("id"), str) or not rec.get("id"):
            problems.append(f"{name}[{i}]: record needs a non-empty string id")
            continue
        if rec["id"] in seen:
            problems.append(f"{name}[{i}] {rec['id']}: duplicate id")
            continue
        seen.add(rec["id"])
        out.append(rec)
    return out


def bundle_from_json(raw: Mapping[str, object]) -> DatasetBundle:
    """Validate and build a bundle from already-parsed file contents.

    All violations are collected before raising ``BundleError``.
    """
    problems: list[str] = []
    taxonomy = []
    for rec in _records(raw.get("taxonomy"), "taxonomy", problems):
        label = rec.get("preferred_label")
        if not isinstance(label, str) or not label.strip():
            problems.append(f"taxonomy {rec['id']}.preferred_label: must be a non-empty string")
            continue
        taxonomy.append(TaxonomySkill(rec["id"], label, tuple(rec.get("alt_labels", ())), rec.get("description", "")))
    known = {s.id for s in taxonomy}

    courses = []
    for rec in _records(raw.get("courses"), "courses", problems):
        cid = rec["id"]
        req = _check_levels(rec.get("required", {}), f"course {cid}.required", problems)
        prov = _check_levels(rec.get("provided", {}), f"course {cid}.provided", problems)
        if prov is not None and not prov:
            problems.append(f"course {cid}.provided: must not be empty")
        if req is None or not prov:
            continue
        _check_known(req, f"course {cid}.required", known, problems)
        _check_known(prov, f"course {cid}.provided", known, problems)
        courses.append(normalize_course_levels(CourseRecord(cid, req, prov)))

    jobs = []
    for rec in _records(raw.get("jobs"), "jobs", problems):
        jid = rec["id"]
        req = _check_levels(rec.get("required", {}), f"job {jid}.required", problems)
        if req is not None and not req:
            problems.append(f"job {jid}.required: must not be empty")
        if not req:
            continue
        _check_known(req, f"job {jid}.required", known, problems)
        jobs.append(JobRecord(jid, req))

    learners = []
    for rec in _records(raw.get("learners"), "learners", problems):
        lid = rec["id"]
        sk = _check_levels(rec.get("skills", {}), f"learner {lid}.skills", problems)
        if sk is None:
            continue
        _check_known(sk, f"learner {lid}.skills", known, problems)
        learners.append(LearnerProfile(lid, sk))

    if problems:
        raise BundleError(problems)
    return DatasetBundle(taxonomy, courses, jobs, learners)


def load_bundle(path: str | Path) -> DatasetBundle:
    root = Path(path)
    raw = {}
    problems = []
    for fname in BUNDLE_FILES:
        key = fname.removesuffix(".json")
        fpath = root / fname
        try:
            raw[key] = json.loads(fpath.read_text())
        except FileNotFoundError:
            problems.append(f"{fpath}: missing")
        except json.JSONDecodeError as exc:
            problems.append(f"{fpath}: invalid JSON ({exc.msg} at line {exc.lineno})")
    if problems:
        raise BundleError(problems)
    return bundle_from_json(raw)


def bundle_to_json(bundle: DatasetBundle) -> dict[str, list]:
    return {
        "taxonomy": [s.to_json() for s in bundle.taxonomy],
        "courses": [{"id": c.id, "required": dict(sorted(c.required.items())),
                     "provided": dict(sorted(c.provided.items()))} for c in bundle.courses],
        "jobs": [{"id": j.id, "required": dict(sorted(j.required.items()))} for j in bundle.jobs],
        "learners": [{"id": l.id, "skills": dict(sorted(l.skills.items()))} for l in bundle.learners],
    }


def save_bundle(bundle: DatasetBundle, path: str | Path) -> None:
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    for key, value in bundle_to_json(bundle).items():
        (root / f"{key}.json").write_text(json.dumps(value, indent=1) + "\n")


def select_eval_subset(bundle: DatasetBundle, max_learner_skills: int = 15,
                       n_jobs: int | None = None, n_courses: int | None = None) -> DatasetBundle:
    """Learners with fewer than ``max_learner_skills`` skills; first jobs/courses by id."""
    jobs = sorted(bundle.jobs, key=lambda r: r.id)
    courses = sorted(bundle.courses, key=lambda r: r.id)
    return DatasetBundle(
        list(bundle.taxonomy),
        courses if n_courses is None else courses[:n_courses],
        jobs if n_jobs is None else jobs[:n_jobs],
        [l for l in bundle.learners if len(l.skills) < max_learner_skills],
    )


# -- synthetic data ----------------------------------------------------------

_AREAS = ("data", "cloud", "web", "network", "mobile", "database", "security", "software",
          "systems", "platform", "frontend", "backend")
_TOPICS = ("analysis", "engineering", "design", "testing", "automation", "modelling", "monitoring",
           "architecture", "management", "integration", "migration", "optimisation", "reporting",
           "scripting", "governance", "deployment")


@dataclass
class SyntheticConfig:
    seed: int = 0
    n_skills: int = 20
    n_courses: int = 20
    n_jobs: int = 20
    n_learners: int = 10
    n_domains: int = 4
    # weights for levels (beginner, intermediate, expert)
    job_levels: tuple[float, float, float] = (0.1, 0.4, 0.5)
    learner_levels: tuple[float, float, float] = (0.55, 0.25, 0.2)
    prereq_levels: tuple[float, float, float] = (0.85, 0.14, 0.01)
    provided_levels: tuple[float, float, float] = (0.2, 0.4, 0.4)
    job_skills: tuple[int, int] = (2, 3)
    learner_skills: tuple[int, int] = (0, 3)
    course_prereqs: tuple[int, int] = (0, 1)
    course_provided: tuple[int, int] = (1, 3)

    def __post_init__(self):
        for name in ("n_skills", "n_courses", "n_jobs", "n_learners", "n_domains"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        for name in ("job_levels", "learner_levels", "prereq_levels", "provided_levels"):
            w = tuple(float(x) for x in getattr(self, name))
            if len(w) != 3 or min(w) < 0 or sum(w) <= 0:
                raise ValueError(f"{name} needs three non-negative weights with a positive sum")
            setattr(self, name, w)
        for name in ("job_skills", "learner_skills", "course_prereqs", "course_provided"):
            lo, hi = (int(x) for x in getattr(self, name))
            if lo < 0 or hi < lo:
                raise ValueError(f"{name} must be a (min, max) range with 0 <= min <= max")
            setattr(self, name, (lo, hi))
        if self.job_skills[0] < 1 or self.course_provided[0] < 1:
            raise ValueError("jobs and courses need at least one skill each")
        self.n_domains = min(self.n_domains, self.n_skills)

    @classmethod
    def from_mapping(cls, d: Mapping) -> "SyntheticConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown synthetic config keys: {sorted(unknown)}")
        return cls(**{k: tuple(v) if isinstance(v, list) else v for k, v in d.items()})


def load_config_file(path: str | Path) -> dict:
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _skill_labels(n: int) -> list[str]:
    labels = [f"{a} {t}" for t in _TOPICS for a in _AREAS]
    if n > len(labels):
        labels += [f"{a} {t} {i}" for i in range(2, n // len(labels) + 2) for t in _TOPICS for a in _AREAS]
    return labels[:n]


def generate_synthetic(cfg: SyntheticConfig) -> DatasetBundle:
    """Seeded bundle where jobs and courses cluster skills into domains.

    Jobs lean towards expert requirements, learners towards beginner levels,
    courses have few prerequisites and teach a shared skill exactly one level
    above what they require of it.
    """
    rng = np.random.default_rng(cfg.seed)
    labels = _skill_labels(cfg.n_skills)
    width = len(str(cfg.n_skills))
    ids = [f"S{i:0{width}d}" for i in range(cfg.n_skills)]
    taxonomy = [TaxonomySkill(sid, lab, (" ".join(reversed(lab.split())),),
                              f"Ability to carry out {lab} tasks in IT projects.")
                for sid, lab in zip(ids, labels)]
    domains = [[ids[i] for i in range(d, cfg.n_skills, cfg.n_domains)] for d in range(cfg.n_domains)]

    def levels(weights, n):
        p = np.asarray(weights) / sum(weights)
        return [int(x) for x in rng.choice([1, 2, 3], size=n, p=p)]

    def pick(pool, lo, hi):
        n = int(rng.integers(lo, hi + 1))
        n = min(n, len(pool))
        return [pool[i] for i in sorted(rng.choice(len(pool), size=n, replace=False))] if n else []

    cw = len(str(cfg.n_courses))
    courses = []
    for i in range(cfg.n_courses):
        dom = domains[int(rng.integers(cfg.n_domains))]
        provided_ids = pick(dom, *cfg.course_provided)
        provided = dict(zip(provided_ids, levels(cfg.provided_levels, len(provided_ids))))
        required = {}
        for sid in pick(dom, *cfg.course_prereqs):
            if sid in provided:
                if provided[sid] > MIN_LEVEL:
                    required[sid] = provided[sid] - 1
            else:
                required[sid] = levels(cfg.prereq_levels, 1)[0]
        courses.append(CourseRecord(f"C{i:0{cw}d}", required, provided))

    jw = len(str(cfg.n_jobs))
    jobs = []
    for i in range(cfg.n_jobs):
        dom = domains[int(rng.integers(cfg.n_domains))]
        req_ids = pick(dom, *cfg.job_skills)
        jobs.append(JobRecord(f"J{i:0{jw}d}", dict(zip(req_ids, levels(cfg.job_levels, len(req_ids))))))

    lw = len(str(cfg.n_learners))
    learners = []
    for i in range(cfg.n_learners):
        sk_ids = pick(ids, *cfg.learner_skills)
        learners.append(LearnerProfile(f"L{i:0{lw}d}", dict(zip(sk_ids, levels(cfg.learner_levels, len(sk_ids))))))
    return DatasetBundle(taxonomy, courses, jobs, learners)


# Phrasings per level; the unknown phrasing is used only when the level equals
# the kind's default, so extraction with the offline clients round-trips.
_CUE_PHRASES = {
    "job": {1: "Basic {s} would help.", 2: "A working knowledge of {s} is needed.",
            3: "Expert command of {s} is essential.", None: "Familiarity with {s} is expected."},
    "resume": {1: "I picked up basic {s} at a workshop.", 2: "I have a solid background in {s}.",
               3: "I have advanced experience in {s}.", None: "I used {s} on a client project."},
    "course_prereq": {1: "Learners need basic {s}.", 2: "A working knowledge of {s} is assumed.",
                      3: "Advanced {s} is assumed.", None: "Some {s} helps."},
    "course_target": {1: "You will learn the fundamentals of {s}.", 2: "Gain a working knowledge of {s}.",
                      3: "Reach advanced mastery of {s}.", None: "The course covers {s}."},
}
_DEFAULT_LEVEL = {"job": 3, "resume": 1, "course_prereq": 2, "course_target": 2}
_FILLER = (
    "Our team works across several time zones and values clear written updates.",
    "The schedule is flexible and most sessions are recorded for later viewing.",
    "We care about thoughtful code review, shared ownership and learning together.",
    "Applicants from all backgrounds are encouraged to get in touch with us.",
    "Each module ends with a short quiz and a practical exercise to complete.",
    "The role reports to the head of the engineering group based in the main office.",
)


def _render(kind: str, levels: Mapping[str, int], labels: Mapping[str, str],
            rng: np.random.Generator, min_words: int) -> str:
    phrases = _CUE_PHRASES[kind]
    sentences = []
    for sid, lvl in sorted(levels.items()):
        key = None if lvl == _DEFAULT_LEVEL[kind] and rng.random() < 0.5 else lvl
        sentences.append(phrases[key].format(s=labels[sid]))
    i = int(rng.integers(len(_FILLER)))
    while sum(len(s.split()) for s in sentences) < min_words or not sentences:
        sentences.append(_FILLER[i % len(_FILLER)])
        i += 1
    return " ".join(sentences)


def synthetic_documents(bundle: DatasetBundle, seed: int = 0) -> list[RawDocument]:
    """Text renderings of every record, long enough to pass the length filter."""
    rng = np.random.default_rng(seed)
    labels = {s.id: s.preferred_label for s in bundle.taxonomy}
    docs = []
    for j in bundle.jobs:
        docs.append(RawDocument(j.id, "job", _render("job", j.required, labels, rng, MIN_WORDS["job"])))
    for c in bundle.courses:
        if c.required:
            docs.append(RawDocument(c.id, "course_prereq",
                                    _render("course_prereq", c.required, labels, rng, MIN_WORDS["course_prereq"])))
        docs.append(RawDocument(c.id, "course_target",
                                _render("course_target", c.provided, labels, rng, MIN_WORDS["course_target"])))
    for l in bundle.learners:
        docs.append(RawDocument(l.id, "resume", _render("resume", l.skills, labels, rng, 8)))
    return docs


def save_documents(docs: Sequence[RawDocument], path: str | Path) -> None:
    Path(path).write_text(json.dumps([{"id": d.id, "kind": d.kind, "text": d.text} for d in docs], indent=1) + "\n")


def load_documents(path: str | Path) -> list[RawDocument]:
    return [RawDocument(d["id"], d["kind"], d["text"]) for d in json.loads(Path(path).read_text())]
