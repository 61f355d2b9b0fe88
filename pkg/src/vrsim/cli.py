"""Command-line entry point: vrsim <scenario> [--config FILE] [--out DIR] [--set k=v ...]"""

import argparse
import json
import sys

from .errors import VrsimError
from .scenarios import (SCENARIOS, ScenarioConfig, apply_overrides,
                        default_config, run_scenario)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="vrsim",
        description="Simulate vacuum-mediated phonon-atom coupling: "
                    "level sweeps, anticrossings, and dissipative dynamics.")
    p.add_argument("scenario", choices=SCENARIOS)
    p.add_argument("--config", metavar="FILE",
                   help="JSON config overriding the scenario defaults "
                        "field by field")
    p.add_argument("--out", metavar="DIR",
                   help="output root (default: $VRSIM_OUT or ./out)")
    p.add_argument("--set", metavar="KEY=VALUE", action="append",
                   dest="overrides", default=[],
                   help="override one config field, e.g. model.kappa=0.06")
    return p


def load_config(args) -> ScenarioConfig:
    cfg = default_config(args.scenario, output_dir=args.out)
    d = cfg.to_dict()
    if args.config:
        with open(args.config) as f:
            loaded = json.load(f)
        for key, value in loaded.items():
            if isinstance(value, dict) and isinstance(d.get(key), dict):
                d[key].update(value)
            else:
                d[key] = value
    if args.overrides:
        apply_overrides(d, args.overrides)
    if args.out:
        d["output_dir"] = args.out
    d["scenario"] = args.scenario
    return ScenarioConfig.from_dict(d)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
        result = run_scenario(config)
    except (VrsimError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for check in result.summary.get("checks", []):
        status = "pass" if check["passed"] else "FAIL"
        print(f"[{status}] {check['name']}: {check['detail']}")
    print(f"wrote {len(result.files)} files under {result.out_dir}")
    return 0 if result.checks_passed else 2


if __name__ == "__main__":
    sys.exit(main())
