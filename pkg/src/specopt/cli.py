"""Command-line interface.

    specopt run      --config cfg.json --out DIR [--seed N] [--trials N]
    specopt sweep    --config cfg.json --l1 0.1,1,10 --l2 0.1,1,10 --out DIR
    specopt check    --level fast|full
    specopt specgrad NAME x1,x2,...

``run`` writes an output bundle of three files: stats.json (per-method
aggregates and trajectories), trajectories.csv (one row per method, trial,
and iteration, sorted by that key), and runmeta.json (config echo, seed,
versions, timing).  Floats serialize with shortest round-trip decimals, so
reruns with the same seed produce byte-identical stats and trajectories.
Exit codes: 0 success, 1 configuration error, 2 finished with failed cells.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .harness import ConfigError, ExperimentConfig, run_trials
from .objectives import catalog_1d_names, sum_abs, test_function_1d
from .specular import specular_gradient


def _load_config(path: str, seed=None, trials=None) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from err
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}:{err.lineno}: malformed JSON: {err.msg}") from err
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    if seed is not None:
        raw["seed"] = seed
    if trials is not None:
        raw["trials"] = trials
    return ExperimentConfig.from_dict(raw)


def write_bundle(out_dir: Path, cfg: ExperimentConfig, stats, records, wall_time_s: float) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)

    stats_doc = {method: asdict(ms) for method, ms in stats.per_method.items()}
    (out_dir / "stats.json").write_text(
        json.dumps(stats_doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    lines = ["method,trial,iter,f_current,f_best,grad_norm"]
    for method in sorted(records):
        for trial, rec in enumerate(records[method]):
            for i in range(len(rec)):
                lines.append(
                    f"{method},{trial},{int(rec.iters[i])},"
                    f"{float(rec.f_current[i])!r},{float(rec.f_best[i])!r},{float(rec.grad_norm[i])!r}")
    (out_dir / "trajectories.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    meta = {
        "config": cfg.as_dict(),
        "seed": cfg.seed,
        "versions": {
            "specopt": __version__,
            "numpy": np.__version__,
            "python": sys.version.split()[0],
        },
        "wall_time_s": wall_time_s,
        "statuses": {method: [rec.status for rec in records[method]] for method in sorted(records)},
    }
    (out_dir / "runmeta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _execute(cfg: ExperimentConfig, out_dir: Path) -> int:
    start = time.perf_counter()
    stats, records = run_trials(cfg)
    write_bundle(out_dir, cfg, stats, records, time.perf_counter() - start)
    failed = sum(ms.failed for ms in stats.per_method.values())
    return 2 if failed else 0


def cmd_run(args) -> int:
    try:
        cfg = _load_config(args.config, args.seed, args.trials)
        return _execute(cfg, Path(args.out))
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 1


def _parse_lambda_list(text: str | None) -> list[float]:
    if not text:
        return []
    values = []
    for token in text.split(","):
        token = token.strip()
        if token:
            values.append(float(token))
    return values


def cmd_sweep(args) -> int:
    try:
        base = _load_config(args.config, args.seed, args.trials)
        l1s = _parse_lambda_list(args.l1)
        l2s = _parse_lambda_list(args.l2)
        if not l1s or not l2s:
            raise ConfigError("sweep needs nonempty --l1 and --l2 lists")
    except (ConfigError, ValueError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return 1
    out_root = Path(args.out)
    manifest = []
    worst = 0
    for l1 in l1s:
        for l2 in l2s:
            cell_dir = out_root / f"l1_{l1:g}_l2_{l2:g}"
            raw = base.as_dict()
            raw["lambda1"], raw["lambda2"] = l1, l2
            try:
                code = _execute(ExperimentConfig.from_dict(raw), cell_dir)
            except Exception as err:  # keep sweeping the remaining cells
                print(f"cell l1={l1:g} l2={l2:g} failed: {err}", file=sys.stderr)
                code = 2
            manifest.append({"lambda1": l1, "lambda2": l2,
                             "dir": cell_dir.name, "exit_code": code})
            worst = max(worst, code)
    out_root.mkdir(parents=True, exist_ok=True)
    (out_root / "index.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return worst


def cmd_check(args) -> int:
    from .checks import run_suites

    results = run_suites(args.level)
    for res in results:
        print(f"[{'PASS' if res.passed else 'FAIL'}] {res.name}: {res.detail}")
    return 0 if all(r.passed for r in results) else 1


def _specgrad_catalog(name: str):
    if name == "abs2d":
        return sum_abs(2)
    if name in catalog_1d_names():
        return test_function_1d(name)
    raise ValueError(f"unknown function {name!r}; choose from abs2d, {', '.join(catalog_1d_names())}")


def cmd_specgrad(args) -> int:
    try:
        obj = _specgrad_catalog(args.function)
        point = np.array([float(tok) for tok in args.point.split(",") if tok.strip()])
        if point.size != obj.dimension:
            raise ValueError(f"{args.function} expects {obj.dimension} coordinates, got {point.size}")
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    grad = specular_gradient(obj, point)
    pairs = []
    for i in range(obj.dimension):
        e = np.zeros(obj.dimension)
        e[i] = 1.0
        pair = obj.one_sided(point, e)
        pairs.append({"plus": pair.plus, "minus": pair.minus})
    print(json.dumps({"function": args.function, "point": point.tolist(),
                      "gradient": grad.tolist(), "one_sided": pairs}, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="specopt", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a seeded experiment from a JSON config")
    run_p.add_argument("--config", required=True, help="path to the JSON config")
    run_p.add_argument("--out", required=True, help="output bundle directory")
    run_p.add_argument("--seed", type=int, default=None, help="override the config seed")
    run_p.add_argument("--trials", type=int, default=None, help="override the trial count")
    run_p.set_defaults(func=cmd_run)

    sweep_p = sub.add_parser("sweep", help="run a grid of lambda1 x lambda2 cells")
    sweep_p.add_argument("--config", required=True)
    sweep_p.add_argument("--out", required=True)
    sweep_p.add_argument("--l1", required=True, help="comma-separated lambda1 values")
    sweep_p.add_argument("--l2", required=True, help="comma-separated lambda2 values")
    sweep_p.add_argument("--seed", type=int, default=None)
    sweep_p.add_argument("--trials", type=int, default=None)
    sweep_p.set_defaults(func=cmd_sweep)

    check_p = sub.add_parser("check", help="run the numerical invariant suites")
    check_p.add_argument("--level", choices=("fast", "full"), default="fast")
    check_p.set_defaults(func=cmd_check)

    spec_p = sub.add_parser("specgrad", help="print the specular gradient of a catalog function")
    spec_p.add_argument("function", help="catalog name, e.g. abs2d or maxaffine")
    spec_p.add_argument("point", help="comma-separated coordinates")
    spec_p.set_defaults(func=cmd_specgrad)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
