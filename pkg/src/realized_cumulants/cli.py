"""Command-line interface: ``realized-cumulants <subcommand> ...``.

Exit codes: 0 success / all checks pass, 1 a check failed, 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bell import bell_eval, bell_terms
from .config import RunConfig
from .csvio import ingest_paths, write_paths
from .cumulants import cumulants_to_moments, moments_to_cumulants
from .exceptions import RealizedCumulantsError
from .models.simulators import MODELS, make_model
from .models.tree import TreeModel, tree_backward_induction, tree_sample_paths
from .montecarlo import summarize
from .realized import realized_cumulant
from .report import suite_payload
from .suites import (
    aggregation_suite,
    bell_identity_suite,
    conversion_suite,
    recursion_suite,
    tree_suite,
    unbiased_suite,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SUITES = ("aggregation", "unbiased", "recursion", "bell-identities")


class UsageError(Exception):
    pass


def _load_tree(source: str) -> TreeModel:
    """A JSON file, or ``binomial:N`` for the symmetric +-1 walk of N steps."""
    if source.startswith("binomial:"):
        return TreeModel.binomial_walk(int(source.split(":", 1)[1]))
    return TreeModel.load(source)


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


def _config(args) -> RunConfig:
    cfg = RunConfig.load(args.config)
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "z_gate", None) is not None:
        overrides["z_gate"] = args.z_gate
    if getattr(args, "workers", None) is not None:
        overrides["workers"] = args.workers
    if getattr(args, "out", None) is not None:
        overrides["output"] = args.out
    if overrides:
        cfg = RunConfig(**{**cfg.to_dict(), **overrides})
    return cfg


def _model_params(args) -> dict:
    return {"lam": args.lam, "horizon": args.horizon} if args.model == "poisson" else {"horizon": args.horizon}


def cmd_bell(args) -> int:
    if args.action == "eval":
        if not args.values:
            raise UsageError("bell eval needs at least one value")
        _emit({"order": len(args.values), "input": args.values, "output": bell_eval(args.values)}, args.out)
    else:
        if len(args.values) != 1 or int(args.values[0]) != args.values[0]:
            raise UsageError("bell terms needs a single integer order")
        n = int(args.values[0])
        terms = [{"coefficient": t.coefficient, "exponents": {str(i): e for i, e in t.exponents.items()}}
                 for t in bell_terms(n)]
        _emit({"order": n, "terms": terms}, args.out)
    return EXIT_OK


def _read_vector(path: str, row: int) -> list[float]:
    numeric = []
    with open(path, newline="") as fh:
        for cells in csv.reader(fh):
            try:
                numeric.append([float(c) for c in cells if c.strip()])
            except ValueError:
                continue  # header or comment line
    if not 0 <= row < len(numeric):
        raise UsageError(f"{path} has no numeric row {row}")
    return numeric[row]


def cmd_convert(args) -> int:
    values = args.values
    if args.input:
        if values:
            raise UsageError("give values either inline or via --input, not both")
        values = _read_vector(args.input, args.row)
    if not values:
        raise UsageError("no input vector")
    fn = moments_to_cumulants if args.direction == "m2c" else cumulants_to_moments
    _emit({"order": len(values), "direction": args.direction, "input": list(values),
           "output": fn(values).tolist()}, args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _config(args)
    if args.model == "tree":
        tree = _load_tree(args.tree)
        ct = tree_backward_induction(tree, args.order)
        paths = tree_sample_paths(tree, ct, args.paths, cfg.seed)
    else:
        model = make_model(args.model, **_model_params(args))
        paths = model.sample_batch(cfg.seed, np.arange(args.paths), args.grid, args.order).paths()
    text = write_paths(paths)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_realized(args) -> int:
    paths = ingest_paths(args.input)
    if not paths:
        raise UsageError("input has no paths")
    k = next(iter(paths.values())).n_components
    if not 1 <= args.order <= k:
        raise UsageError(f"--order must be in 1..{k} for this file")
    per_path = []
    for pid, path in paths.items():
        stat = realized_cumulant(path, args.order)
        per_path.append({"path_id": pid, "value": stat.value, "n_cells": int(stat.contributions.size)})
    mean, se = summarize(np.array([p["value"] for p in per_path]))
    payload = {
        "order": args.order,
        "cumulant_order": args.order + 1,
        "n_paths": len(per_path),
        "paths": per_path,
        "mean": mean,
        "standard_error": se if len(per_path) > 1 else None,
    }
    _emit(payload, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args)
    if args.suite == "bell-identities":
        reports = bell_identity_suite(cfg.seed) + conversion_suite(cfg.seed)
    elif args.suite == "aggregation":
        tree = _load_tree(args.tree)
        reports = aggregation_suite(tree, args.order) + tree_suite(tree, args.order + 1)
    else:
        if args.model not in MODELS:
            raise UsageError(f"--model must be one of {sorted(MODELS)} for suite {args.suite}")
        model = make_model(args.model, **_model_params(args))
        common = dict(n_paths=args.paths, grid_size=args.grid, seed=cfg.seed, z=cfg.z_gate,
                      workers=cfg.workers)
        if args.suite == "unbiased":
            reports = unbiased_suite(model, args.order, **common)
        else:
            c = args.bias_constant
            if c is None:
                c = cfg.bias_constants.get(model.name, 0.0)
            reports = recursion_suite(model, args.order, bias_constant=c, **common)
    payload = suite_payload(args.suite, reports)
    _emit(payload, cfg.output)
    for r in reports:
        print(r.line(), file=sys.stderr)
    return EXIT_OK if payload["pass"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="realized-cumulants", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bell", help="evaluate or expand complete Bell polynomials")
    p.add_argument("action", choices=["eval", "terms"])
    p.add_argument("values", nargs="*", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bell)

    p = sub.add_parser("convert", help="moments <-> cumulants")
    p.add_argument("direction", choices=["m2c", "c2m"])
    p.add_argument("values", nargs="*", type=float)
    p.add_argument("--input", help="CSV file holding the vector")
    p.add_argument("--row", type=int, default=0, help="numeric row of --input to use")
    p.add_argument("--out")
    p.set_defaults(func=cmd_convert)

    def mc_flags(p, default_model):
        p.add_argument("--model", choices=["tree", *MODELS], default=default_model)
        p.add_argument("--order", type=int, default=2)
        p.add_argument("--paths", type=int, default=10000)
        p.add_argument("--grid", type=int, default=64)
        p.add_argument("--seed", type=int)
        p.add_argument("--lam", type=float, default=1.0, help="Poisson rate")
        p.add_argument("--horizon", type=float, default=1.0)
        p.add_argument("--tree", default="binomial:3", help="tree JSON or binomial:N")
        p.add_argument("--config", help="RunConfig JSON")
        p.add_argument("--out")

    p = sub.add_parser("simulate", help="simulate paths to long-format CSV")
    mc_flags(p, "poisson")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("realized", help="realized cumulants of CSV paths")
    p.add_argument("--input", required=True)
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_realized)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=SUITES)
    mc_flags(p, "poisson")
    p.add_argument("--z-gate", type=float, dest="z_gate")
    p.add_argument("--workers", type=int)
    p.add_argument("--bias-constant", type=float, dest="bias_constant")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "config"):
        args.config = None
    try:
        return args.func(args)
    except (UsageError, RealizedCumulantsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
