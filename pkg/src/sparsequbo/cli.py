"""Command-line interface.

Subcommands:
  run CONFIG          run a sweep experiment from a JSON config (file path
                      or preset name) and write outputs to a directory
  list-presets        show the bundled experiment configurations
  export-qubo         build one instance and write its assembled QUBO in
                      dense CSV or sparse upper-triangular COO form

Exit codes: 0 success, 1 configuration error, 2 run finished with partial
cell failures.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

from .encoding import FixedPointFormat
from .harness import ExperimentGrid, aggregate, emit_outputs, run_experiment
from .instances import make_instance, save_matrix_csv
from .qubo import assemble_total, build_l0_qubo, build_l2_qubo


def preset_names() -> list[str]:
    files = resources.files("sparsequbo.presets")
    return sorted(p.name[: -len(".json")] for p in files.iterdir() if p.name.endswith(".json"))


def load_config(spec: str) -> ExperimentGrid:
    """Load a grid from a JSON file path or a bundled preset name."""
    if os.path.exists(spec):
        return ExperimentGrid.from_json_file(spec)
    name = spec[: -len(".json")] if spec.endswith(".json") else spec
    if name in preset_names():
        text = resources.files("sparsequbo.presets").joinpath(f"{name}.json").read_text()
        return ExperimentGrid.from_json_dict(json.loads(text))
    raise ValueError(f"no such config file or preset: {spec!r}")


def _parse_values(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _cmd_run(args) -> int:
    try:
        grid = load_config(args.config)
        overrides = {}
        if args.sweep is not None:
            overrides["sweep"] = args.sweep
        if args.values is not None:
            overrides["values"] = _parse_values(args.values)
        if args.reps is not None:
            overrides["repetitions"] = args.reps
        if args.methods is not None:
            overrides["methods"] = [m.strip() for m in args.methods.split(",")]
        if args.seed is not None:
            overrides["base_seed"] = args.seed
        if overrides:
            spec = grid.to_json_dict()
            spec.update(overrides)
            grid = ExperimentGrid.from_json_dict(spec)
    except (ValueError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    rows, failures = run_experiment(grid, workers=args.workers)
    written = emit_outputs(rows, aggregate(rows), args.out, grid, failures)
    for path in written:
        print(path)
    if failures:
        print(f"{len(failures)} cell(s) failed:", file=sys.stderr)
        for f in failures:
            print(
                f"  value={f.sweep_value} rep={f.repetition} "
                f"method={f.method}: {f.message}",
                file=sys.stderr,
            )
        return 2
    return 0


def _cmd_list_presets(_args) -> int:
    for name in preset_names():
        text = resources.files("sparsequbo.presets").joinpath(f"{name}.json").read_text()
        spec = json.loads(text)
        print(
            f"{name}: N={spec['N']} P={spec['P']} sweep={spec['sweep']} "
            f"values={spec['values']} reps={spec['repetitions']} "
            f"methods={','.join(spec['methods'])}"
        )
    return 0


def _cmd_export_qubo(args) -> int:
    try:
        fmt = FixedPointFormat.uniform(args.cols, args.c_min, args.d, args.bits)
        instance = make_instance(
            args.rows, args.cols, args.cardinality, args.sigma, fmt, seed=args.seed
        )
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    problem = assemble_total(
        build_l2_qubo(instance.A, instance.b, fmt), build_l0_qubo(fmt), args.penalty
    )
    os.makedirs(args.out, exist_ok=True)
    written = []
    if args.format == "csv":
        matrix_path = os.path.join(args.out, "qubo_matrix.csv")
        meta_path = os.path.join(args.out, "qubo_meta.json")
        problem.to_dense_csv(matrix_path, meta_path)
        written += [matrix_path, meta_path]
    else:
        coo_path = os.path.join(args.out, "qubo.coo")
        problem.to_coo(coo_path)
        written.append(coo_path)
    inst_path = os.path.join(args.out, "instance_A.csv")
    save_matrix_csv(inst_path, instance.A)
    meas_path = os.path.join(args.out, "instance_b.csv")
    save_matrix_csv(meas_path, instance.b[None, :])
    written += [inst_path, meas_path]
    for path in written:
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparsequbo",
        description="Sparse recovery experiments via QUBO formulations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a sweep experiment")
    p_run.add_argument("config", help="JSON config path or preset name")
    p_run.add_argument("--sweep", choices=["M", "sigma", "k"])
    p_run.add_argument("--values", help="comma-separated sweep values")
    p_run.add_argument("--reps", type=int)
    p_run.add_argument("--methods", help="comma-separated method subset")
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--out", default="results", help="output directory")
    p_run.add_argument("--workers", type=int, default=None)
    p_run.set_defaults(func=_cmd_run)

    p_list = sub.add_parser("list-presets", help="show bundled configurations")
    p_list.set_defaults(func=_cmd_list_presets)

    p_exp = sub.add_parser("export-qubo", help="write one assembled QUBO problem")
    p_exp.add_argument("--rows", type=int, required=True, help="measurement count M")
    p_exp.add_argument("--cols", type=int, required=True, help="signal length N")
    p_exp.add_argument("--cardinality", type=int, required=True, help="true nonzeros")
    p_exp.add_argument("--sigma", type=float, default=0.1, help="noise level")
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--bits", type=int, default=1, help="bits per coordinate")
    p_exp.add_argument("--c-min", type=float, default=0.0)
    p_exp.add_argument("--d", type=float, default=1.0)
    p_exp.add_argument("--penalty", type=float, default=0.1, help="L0 weight")
    p_exp.add_argument("--format", choices=["csv", "coo"], default="csv")
    p_exp.add_argument("--out", default="qubo_export")
    p_exp.set_defaults(func=_cmd_export_qubo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
