"""Command-line entry point: ``pfv run|validate|inventory|synth``."""
import argparse
import logging
import sys
from pathlib import Path

import yaml

from .config import load_config, parse_config, check_columns
from .errors import ConfigError, PFVError
from .pipeline import INVENTORY_HEADER, any_errors, inventory_rows, load_cohort, run_pipeline
from .report import write_csv
from .strata import enumerate_tasks

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARTIAL = 3


def _cmd_run(args):
    config = load_config(args.config)
    manifest = run_pipeline(config, overwrite=args.overwrite)
    done = sum(t["status"] == "completed" for t in manifest["tasks"])
    print(f"{done} of {len(manifest['tasks'])} tasks completed; artifacts in {config.output_dir}")
    return EXIT_PARTIAL if any_errors(manifest) else EXIT_OK


def _cmd_validate(args):
    config = load_config(args.config)
    header = check_columns(config)
    print(f"config OK: {len(config.pairs)} pairs x {len(config.strata)} strata, {len(header)} input columns")
    return EXIT_OK


def _cmd_inventory(args):
    if args.config:
        config = load_config(args.config)
        data = dict(config.raw)
        data["input"] = {**data["input"], "path": str(Path(args.cohort).resolve())}
        config = parse_config(data)
    else:
        config = parse_config({"input": {"path": str(args.cohort), "id_column": args.id_column}})
    _, cohort = load_cohort(config)
    entries = enumerate_tasks(cohort, config.pairs, config.strata, config.adequacy)
    if args.output:
        write_csv(args.output, INVENTORY_HEADER, inventory_rows(entries))
    else:
        import csv
        from .report import fmt

        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(INVENTORY_HEADER)
        for row in inventory_rows(entries):
            w.writerow([fmt(v) for v in row])
    return EXIT_OK


def _cmd_synth(args):
    from .synth import MEAN_SHIFT, Planted, SynthSpec, fixture_config, generate, write_fixture

    out = Path(args.directory)
    out.mkdir(parents=True, exist_ok=True)
    planted = tuple(
        Planted(j, MEAN_SHIFT, args.shift, (args.pair[0], args.pair[1])) for j in range(args.planted)
    )
    spec = SynthSpec(tuple(args.counts), args.features, planted, seed=args.seed)
    write_fixture(generate(spec), out / "cohort.csv", seed=args.seed)
    cfg = fixture_config("cohort.csv", "out")
    (out / "config.yaml").write_text(yaml.safe_dump(cfg, sort_keys=False))
    print(f"wrote {out / 'cohort.csv'} and {out / 'config.yaml'}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="pfv", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run the full pipeline from a config file")
    r.add_argument("config")
    r.add_argument("--overwrite", action="store_true", help="replace a non-empty output directory")
    r.set_defaults(func=_cmd_run)

    v = sub.add_parser("validate", help="check a config file against its input")
    v.add_argument("config")
    v.set_defaults(func=_cmd_validate)

    i = sub.add_parser("inventory", help="class counts and adequacy per pair x stratum")
    i.add_argument("cohort")
    i.add_argument("--config", help="take schema, label rule, pairs, strata and policy from this config")
    i.add_argument("--id-column", default=None)
    i.add_argument("-o", "--output", help="write CSV here instead of stdout")
    i.set_defaults(func=_cmd_inventory)

    s = sub.add_parser("synth", help="write a synthetic cohort and a matching config")
    s.add_argument("directory")
    s.add_argument("--counts", type=int, nargs=4, default=[40, 120, 60, 280],
                   metavar=("LATE_AD", "LATE", "AD", "CONTROL"))
    s.add_argument("--features", type=int, default=12)
    s.add_argument("--planted", type=int, default=2, help="number of leading features given a mean shift")
    s.add_argument("--shift", type=float, default=1.0)
    s.add_argument("--pair", nargs=2, default=["LATE", "CONTROL"])
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=_cmd_synth)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PFVError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
