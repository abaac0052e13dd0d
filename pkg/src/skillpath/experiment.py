"""Average reward and recommendation time per algorithm and sequence length.

``results.csv`` holds only deterministic columns, so two runs with the same
seed are byte-identical. Wall-clock timings go to ``timings.csv`` and the
combined aligned table to ``results.txt``.
"""
from __future__ import annotations

import csv
import io
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

from . import skills as sk
from .agents.dqn import train_value_agent
from .agents.policy import KINDS, LEARNED, RecommenderPolicy, TrainConfig, recommend
from .agents.ppo import train_policy_agent
from .data import DatasetBundle
from .env import EnvConfig
from .search import estimate_sequences, rollout_reward
from .skills import Thresholds

log = logging.getLogger(__name__)

RESULT_COLUMNS = ("algorithm", "k", "reward", "learners", "stopped_infeasible", "status")
TIMING_COLUMNS = ("algorithm", "k", "time_ms")


@dataclass
class ExperimentConfig:
    algorithms: tuple[str, ...] = KINDS
    ks: tuple[int, ...] = (0, 1, 2, 3, 4, 5)
    thresholds: Thresholds = field(default_factory=Thresholds)
    train: TrainConfig = field(default_factory=TrainConfig)
    exhaustive_guard: int = 10**7
    # Horizon the learned agents are trained with; defaults to max(ks).
    train_horizon: int | None = None

    def __post_init__(self):
        self.algorithms = tuple(self.algorithms)
        self.ks = tuple(int(k) for k in self.ks)
        if list(self.ks) != sorted(self.ks) or (self.ks and self.ks[0] < 0):
            raise ValueError(f"ks must be ascending and >= 0, got {self.ks}")
        for a in self.algorithms:
            if a not in KINDS:
                raise ValueError(f"unknown algorithm {a!r}; choose from {', '.join(KINDS)}")

    @classmethod
    def from_mapping(cls, d: Mapping) -> "ExperimentConfig":
        d = dict(d)
        exp = dict(d.get("experiment", {}))
        th = Thresholds(**d.get("thresholds", {}))
        train = TrainConfig(**d.get("train", {}))
        return cls(algorithms=tuple(exp.pop("algorithms", KINDS)), ks=tuple(exp.pop("ks", (0, 1, 2, 3, 4, 5))),
                   thresholds=th, train=train, **exp)


@dataclass
class ResultRow:
    algorithm: str
    k: int
    reward: float | None
    time_ms: float | None
    learners: int
    stopped_infeasible: int = 0
    status: str = "ok"


def build_env(bundle: DatasetBundle, thresholds: Thresholds, horizon: int = 1) -> EnvConfig:
    return EnvConfig(tuple(bundle.courses), tuple(bundle.jobs), thresholds, max(1, horizon))


def train_agents(bundle: DatasetBundle, cfg: ExperimentConfig, kinds: Sequence[str]) -> dict[str, RecommenderPolicy]:
    horizon = cfg.train_horizon or max([k for k in cfg.ks if k > 0], default=1)
    env = build_env(bundle, cfg.thresholds, horizon)
    universe = bundle.skill_ids
    trainers = {"value-agent": train_value_agent, "policy-agent": train_policy_agent}
    out = {}
    for kind in kinds:
        log.info("training %s for %d steps (horizon %d)", kind, cfg.train.total_steps, horizon)
        out[kind] = trainers[kind](env, bundle.learners, cfg.train, universe)
    return out


def run_experiment(bundle: DatasetBundle, cfg: ExperimentConfig,
                   policies: Mapping[str, RecommenderPolicy] | None = None,
                   clock: Callable[[], float] = time.perf_counter) -> list[ResultRow]:
    """Evaluate every algorithm for every k over the bundle's learners.

    Learned agents missing from ``policies`` are trained first. Only the
    recommendation call itself is timed.
    """
    policies = dict(policies or {})
    missing = [a for a in cfg.algorithms if a in LEARNED and a not in policies]
    if missing:
        policies.update(train_agents(bundle, cfg, missing))
    for a in cfg.algorithms:
        if a not in LEARNED:
            policies[a] = RecommenderPolicy(a)

    learners = bundle.learners
    if not learners:
        raise ValueError("bundle has no learners to evaluate")
    env = build_env(bundle, cfg.thresholds)
    base = sum(env.marketability(l.skills) for l in learners) / len(learners)

    rows: list[ResultRow] = []
    for algo in cfg.algorithms:
        policy = policies[algo]
        for k in cfg.ks:
            if k == 0:
                rows.append(ResultRow(algo, 0, base, 0.0, len(learners)))
                continue
            if algo == "exhaustive":
                est = sum(estimate_sequences(l.skills, env, k) for l in learners)
                if est > cfg.exhaustive_guard:
                    log.info("exhaustive k=%d skipped: ~%d sequences > guard %d", k, est, cfg.exhaustive_guard)
                    rows.append(ResultRow(algo, k, None, None, len(learners), 0, "skipped-guard"))
                    continue
            env_k = env.with_horizon(k)
            total_reward = 0
            total_time = 0.0
            stopped = 0
            for l in learners:
                t0 = clock()
                rec = recommend(policy, l.skills, env_k, k)
                total_time += clock() - t0
                reward, _ = rollout_reward(l.skills, env_k, rec.courses)
                total_reward += reward
                stopped += rec.stopped_infeasible
            rows.append(ResultRow(algo, k, total_reward / len(learners), 1000.0 * total_time / len(learners),
                                  len(learners), stopped))
    return rows


def _fmt(x: float | None, pattern: str = ".4f") -> str:
    return "NA" if x is None else format(x, pattern)


def results_csv(rows: Sequence[ResultRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESULT_COLUMNS)
    for r in rows:
        w.writerow([r.algorithm, r.k, _fmt(r.reward), r.learners, r.stopped_infeasible, r.status])
    return buf.getvalue()


def timings_csv(rows: Sequence[ResultRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TIMING_COLUMNS)
    for r in rows:
        w.writerow([r.algorithm, r.k, _fmt(r.time_ms, ".3f")])
    return buf.getvalue()


def results_table(rows: Sequence[ResultRow]) -> str:
    """One line per algorithm; Rwd and Time(ms) columns per k, NA where skipped."""
    ks = sorted({r.k for r in rows})
    algos = list(dict.fromkeys(r.algorithm for r in rows))
    cell = {(r.algorithm, r.k): r for r in rows}
    head = f"{'Model':14s}" + "".join(f"{'k=' + str(k) + ' Rwd':>10s}" + ("" if k == 0 else f"{'Time(ms)':>10s}") for k in ks)
    lines = [head, "-" * len(head)]
    for a in algos:
        parts = [f"{a:14s}"]
        for k in ks:
            r = cell.get((a, k))
            parts.append(f"{_fmt(r.reward if r else None, '.2f'):>10s}")
            if k:
                parts.append(f"{_fmt(r.time_ms if r else None, '.2f'):>10s}")
        lines.append("".join(parts))
    return "\n".join(lines) + "\n"


def write_reports(rows: Sequence[ResultRow], out: str | Path) -> None:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "results.csv").write_text(results_csv(rows))
    (out / "timings.csv").write_text(timings_csv(rows))
    (out / "results.txt").write_text(results_table(rows))


@dataclass
class StepExplanation:
    course: str
    skills_gained: dict[str, int]
    jobs_unlocked: list[str]
    jobs_total: int


def explain(u: sk.SkillMap, env: EnvConfig, sequence: Sequence[str]) -> list[StepExplanation]:
    """Per step: skills newly reached and jobs that crossed the applicability threshold."""
    profile = dict(u)
    before = sk.applicable_jobs(profile, env.jobs, env.thresholds.t_uj)
    out = []
    for cid in sequence:
        course = env.course(cid)
        gained = sk.skills_gained(profile, course)
        profile = sk.apply_course(profile, course)
        after = sk.applicable_jobs(profile, env.jobs, env.thresholds.t_uj)
        out.append(StepExplanation(cid, gained, sorted(after - before), len(after)))
        before = after
    return out
