"""Command line entry point: ``skillpath <command> ...``.

Failures exit with status 2 and print a single stderr line of the form
``skillpath-error <category>: <message>``.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import data
from .agents.policy import KINDS, LEARNED, RecommenderPolicy, load_policy, recommend, save_policy
from .experiment import (ExperimentConfig, build_env, explain, results_table, run_experiment, train_agents,
                         write_reports)
from .search import rollout_reward

log = logging.getLogger("skillpath")


class CliError(Exception):
    def __init__(self, category: str, message: str):
        self.category = category
        super().__init__(message)


def _read_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        return data.load_config_file(path)
    except FileNotFoundError:
        raise CliError("config", f"config file {path} not found") from None
    except Exception as exc:
        raise CliError("config", f"{path}: {exc}") from None


def _experiment_config(args) -> ExperimentConfig:
    raw = _read_config(args.config)
    try:
        cfg = ExperimentConfig.from_mapping(raw)
    except (TypeError, ValueError) as exc:
        raise CliError("config", str(exc)) from None
    if getattr(args, "k", None):
        cfg.ks = tuple(sorted(int(x) for x in args.k.split(",")))
    if getattr(args, "algorithms", None):
        algos = tuple(a.strip() for a in args.algorithms.split(",") if a.strip())
        bad = [a for a in algos if a not in KINDS]
        if bad:
            raise CliError("config", f"unknown algorithm(s) {', '.join(bad)}")
        cfg.algorithms = algos
    if getattr(args, "seed", None) is not None:
        cfg.train.seed = args.seed
    return cfg


def _load_bundle(path: str | None) -> data.DatasetBundle:
    if path is None:
        raise CliError("usage", "--bundle is required")
    try:
        return data.load_bundle(path)
    except data.BundleError as exc:
        for p in exc.problems:
            print(f"  {p}", file=sys.stderr)
        raise CliError("validation", f"{path}: {len(exc.problems)} problem(s)") from None


def cmd_generate(args) -> None:
    raw = _read_config(args.config).get("synthetic", {})
    if args.seed is not None:
        raw = {**raw, "seed": args.seed}
    try:
        cfg = data.SyntheticConfig.from_mapping(raw)
    except (TypeError, ValueError) as exc:
        raise CliError("config", str(exc)) from None
    bundle = data.generate_synthetic(cfg)
    data.save_bundle(bundle, args.out)
    if args.documents:
        data.save_documents(data.synthetic_documents(bundle, cfg.seed), Path(args.out) / "documents.json")
    print(f"wrote {len(bundle.taxonomy)} skills, {len(bundle.courses)} courses, {len(bundle.jobs)} jobs, "
          f"{len(bundle.learners)} learners to {args.out}")


def cmd_validate(args) -> None:
    b = _load_bundle(args.bundle)
    print(f"ok: {len(b.taxonomy)} skills, {len(b.courses)} courses, {len(b.jobs)} jobs, {len(b.learners)} learners")


def _clients(args, taxonomy):
    from .sem import clients

    if args.client == "remote":
        if not args.endpoint:
            raise CliError("config", "--client remote needs --endpoint")
        base = args.endpoint.rstrip("/")
        return clients.RemoteExtractorClient(base + "/extract"), clients.RemoteMatcherClient(base + "/match")
    phrases = [label for s in taxonomy for label in s.labels]
    return clients.LexiconExtractorClient(phrases), clients.LexicalMatcherClient()


def cmd_extract(args) -> None:
    from .sem.clients import TransportError, default_demonstrations
    from .sem.pipeline import SemPipeline, build_records
    from .sem.taxonomy import load_taxonomy

    try:
        taxonomy = load_taxonomy(args.taxonomy)
        docs = data.load_documents(args.docs)
    except (OSError, ValueError, KeyError) as exc:
        raise CliError("input", str(exc)) from None
    kept = data.filter_short_documents(docs)
    extractor, matcher = _clients(args, taxonomy)
    pipe = SemPipeline(taxonomy, extractor, matcher, demonstrations=default_demonstrations(),
                       max_workers=args.workers)
    try:
        results = pipe.process_corpus(kept)
    except TransportError as exc:
        raise CliError("transport", str(exc)) from None
    courses, jobs, learners, dropped = build_records(results)
    out = Path(args.out)
    data.save_bundle(data.DatasetBundle(taxonomy, courses, jobs, learners), out)
    (out / "extractions.json").write_text(json.dumps([r.to_json() for r in results], indent=1) + "\n")
    print(f"processed {len(kept)} of {len(docs)} documents ({len(docs) - len(kept)} too short); "
          f"{len(courses)} courses, {len(jobs)} jobs, {len(learners)} learners; "
          f"{len(dropped)} records dropped as empty")


def cmd_stats(args) -> None:
    from .sem.extract import DocumentResult
    from .sem.pipeline import extraction_stats, stats_csv, stats_table

    try:
        results = [DocumentResult.from_json(d) for d in json.loads(Path(args.extractions).read_text())]
    except (OSError, ValueError, KeyError) as exc:
        raise CliError("input", str(exc)) from None
    rows = extraction_stats(results)
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        (Path(args.out) / "stats.csv").write_text(stats_csv(rows))
    print(stats_table(rows), end="")


def cmd_train(args) -> None:
    bundle = _load_bundle(args.bundle)
    cfg = _experiment_config(args)
    kinds = [a for a in cfg.algorithms if a in LEARNED] or list(LEARNED)
    if args.horizon:
        cfg.train_horizon = args.horizon
    if args.steps is not None:
        cfg.train.total_steps = args.steps
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for kind, policy in train_agents(bundle, cfg, kinds).items():
        save_policy(policy, out / f"{kind}.json")
        print(f"wrote {out / f'{kind}.json'}")


def _parse_profile(args, bundle) -> dict[str, int]:
    if args.learner:
        for l in bundle.learners:
            if l.id == args.learner:
                return dict(l.skills)
        raise CliError("input", f"no learner {args.learner!r} in bundle")
    if args.profile:
        try:
            prof = json.loads(args.profile)
            from .skills import validate_skill_map
            return validate_skill_map(prof, "profile")
        except ValueError as exc:
            raise CliError("input", f"bad --profile: {exc}") from None
    raise CliError("usage", "give --learner or --profile")


def cmd_recommend(args) -> None:
    bundle = _load_bundle(args.bundle)
    cfg = _experiment_config(args)
    profile = _parse_profile(args, bundle)
    known = set(bundle.skill_ids)
    if set(profile) - known:
        raise CliError("input", f"unknown skill ids in profile: {sorted(set(profile) - known)}")
    k = int(args.k.split(",")[-1]) if args.k else 3
    algo = args.algorithm
    if algo in LEARNED:
        if not args.policy:
            raise CliError("config", f"{algo} needs --policy <file>; create one with `skillpath train`")
        policy = load_policy(args.policy)
    else:
        policy = RecommenderPolicy(algo)
    env = build_env(bundle, cfg.thresholds, max(k, 1))
    base = env.marketability(profile)
    rec = recommend(policy, profile, env, k) if k > 0 else None
    seq = rec.courses if rec else []
    steps = explain(profile, env, seq)
    print(f"learner qualifies for {base} of {len(bundle.jobs)} jobs before any course")
    if base == len(bundle.jobs):
        print(f"already qualifies for {base} jobs")
    for i, s in enumerate(steps, 1):
        gained = ", ".join(f"{sid}:{lvl}" for sid, lvl in sorted(s.skills_gained.items())) or "none"
        unlocked = ", ".join(s.jobs_unlocked) or "none"
        print(f"{i}. {s.course}  skills gained: {gained}  jobs unlocked: {unlocked}  (now {s.jobs_total})")
    if not seq:
        print("no course recommended")
    if rec and rec.stopped_infeasible:
        print("stopped early: the agent proposed a course the learner cannot take")
    final, _ = rollout_reward(profile, env, seq)
    print(f"final: {final} jobs")


def cmd_evaluate(args) -> None:
    bundle = _load_bundle(args.bundle)
    cfg = _experiment_config(args)
    if args.steps is not None:
        cfg.train.total_steps = args.steps
    policies = {}
    if args.policies:
        for kind in cfg.algorithms:
            f = Path(args.policies) / f"{kind}.json"
            if kind in LEARNED:
                if not f.exists():
                    raise CliError("config", f"missing trained policy {f}; run `skillpath train` or drop --policies")
                policies[kind] = load_policy(f)
    rows = run_experiment(bundle, cfg, policies)
    write_reports(rows, args.out)
    print(results_table(rows), end="")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="skillpath", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, bundle=True):
        if bundle:
            sp.add_argument("--bundle", help="bundle directory")
        sp.add_argument("--config", help="TOML config file")
        sp.add_argument("--seed", type=int)
        return sp

    g = common(sub.add_parser("generate", help="write a synthetic bundle"), bundle=False)
    g.add_argument("--out", required=True)
    g.add_argument("--documents", action="store_true", help="also write documents.json with rendered texts")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("validate", help="load a bundle and report problems")
    v.add_argument("--bundle", required=True)
    v.set_defaults(func=cmd_validate)

    e = sub.add_parser("extract", help="extract and match skills from raw documents")
    e.add_argument("--docs", required=True, help="JSON array of {id, kind, text}")
    e.add_argument("--taxonomy", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--client", choices=("mock", "remote"), default="mock")
    e.add_argument("--endpoint", help="base URL; /extract and /match are appended")
    e.add_argument("--workers", type=int, default=1)
    e.set_defaults(func=cmd_extract)

    s = sub.add_parser("stats", help="corpus statistics from extractions.json")
    s.add_argument("--extractions", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_stats)

    t = common(sub.add_parser("train", help="train learned agents and write policy files"))
    t.add_argument("--algorithms", help="comma list of value-agent,policy-agent")
    t.add_argument("--horizon", type=int, help="episode length used in training")
    t.add_argument("--steps", type=int)
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_train)

    r = common(sub.add_parser("recommend", help="recommend a course sequence for one learner"))
    r.add_argument("--learner")
    r.add_argument("--profile", help='JSON object such as {"S01": 2}')
    r.add_argument("--algorithm", choices=KINDS, default="greedy")
    r.add_argument("--policy")
    r.add_argument("--k", help="sequence length")
    r.set_defaults(func=cmd_recommend)

    ev = common(sub.add_parser("evaluate", help="run the reward/time experiment"))
    ev.add_argument("--k", help="comma list, e.g. 0,1,2,3")
    ev.add_argument("--algorithms")
    ev.add_argument("--policies", help="directory with pre-trained <kind>.json files")
    ev.add_argument("--steps", type=int, help="training steps for agents trained on the fly")
    ev.add_argument("--out", required=True)
    ev.set_defaults(func=cmd_evaluate)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except CliError as exc:
        print(f"skillpath-error {exc.category}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
