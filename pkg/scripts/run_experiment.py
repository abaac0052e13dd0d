"""Generate the synthetic bundle from a config and print the reward/time table.

    python3 scripts/run_experiment.py --config configs/default.toml --out runs/default
"""
import argparse
import logging
from pathlib import Path

from skillpath.data import SyntheticConfig, generate_synthetic, load_config_file, save_bundle
from skillpath.experiment import ExperimentConfig, results_table, run_experiment, write_reports


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--config", default=str(Path(__file__).resolve().parents[1] / "configs" / "default.toml"))
    p.add_argument("--out", default="runs/default")
    p.add_argument("--steps", type=int, help="override training steps")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s")

    raw = load_config_file(args.config)
    bundle = generate_synthetic(SyntheticConfig.from_mapping(raw.get("synthetic", {})))
    cfg = ExperimentConfig.from_mapping(raw)
    if args.steps is not None:
        cfg.train.total_steps = args.steps
    save_bundle(bundle, Path(args.out) / "bundle")
    rows = run_experiment(bundle, cfg)
    write_reports(rows, args.out)
    print(results_table(rows), end="")


if __name__ == "__main__":
    main()
