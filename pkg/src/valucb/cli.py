"""Command-line interface.

Subcommands
-----------
hardness : print hardness quantities and the lower bound for an instance
run      : run seeded trials of one algorithm on one instance
catalog  : list the built-in benchmark instances
verify   : run the self-check property suite

Instances come either from the built-in catalog (``--case``/``--j``) or
from a JSON file (``--instance``) shaped like::

    {
      "arms": [
        {"kind": "bernoulli", "p": 0.4},
        {"kind": "beta", "alpha": 2.0, "beta": 3.0},
        {"kind": "beta", "mean": 0.5, "variance": 0.05},
        {"kind": "gaussian", "mu": 0.9, "sigma": 0.1}
      ],
      "sigma_bar_sq": 0.09,
      "subg_proxy": 0.5,
      "eps_v": 0.0
    }

File outputs are written atomically (temp file + rename), so a partial
file never appears under the target name.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from typing import Optional, Sequence

from . import __version__, _backend, verify as verify_mod
from .distributions import Bernoulli, Beta, DistributionSpec, Gaussian, beta_from_moments
from .engine import DEFAULT_MAX_TIME_STEPS
from .experiments import (
    ALGORITHMS,
    CatalogEntry,
    catalog_cases,
    catalog_entry,
    inline_entry,
    iter_catalog,
    run_trials,
)
from .hardness import h_va, h_va_sigma, hardness_report, scale
from .instance import BanditInstance

__all__ = ["main", "build_parser", "parse_instance", "load_instance", "records_to_csv"]

CSV_COLUMNS = ("algorithm", "case", "j", "trial", "seed", "tau", "time_steps", "success")


def parse_instance(obj: dict) -> BanditInstance:
    """Build an instance from its JSON object form."""
    if not isinstance(obj, dict):
        raise ValueError(f"instance must be a JSON object, got {type(obj).__name__}")
    try:
        arm_specs = obj["arms"]
        sigma_bar_sq = float(obj["sigma_bar_sq"])
    except KeyError as exc:
        raise ValueError(f"instance is missing required key {exc}") from None
    if not isinstance(arm_specs, list):
        raise ValueError("'arms' must be a list")
    arms: list[DistributionSpec] = []
    for pos, spec in enumerate(arm_specs):
        if not isinstance(spec, dict) or "kind" not in spec:
            raise ValueError(f"arm {pos} must be an object with a 'kind' key")
        kind = spec["kind"]
        try:
            if kind == "bernoulli":
                arms.append(Bernoulli(float(spec["p"])))
            elif kind == "beta" and "alpha" in spec:
                arms.append(Beta(float(spec["alpha"]), float(spec["beta"])))
            elif kind == "beta":
                arms.append(
                    beta_from_moments(float(spec["mean"]), float(spec["variance"]))
                )
            elif kind == "gaussian":
                arms.append(Gaussian(float(spec["mu"]), float(spec["sigma"])))
            else:
                raise ValueError(
                    f"arm {pos}: unknown kind {kind!r} "
                    "(expected bernoulli, beta, or gaussian)"
                )
        except KeyError as exc:
            raise ValueError(f"arm {pos} ({kind}) is missing parameter {exc}") from None
    subg_proxy = obj.get("subg_proxy")
    return BanditInstance(
        arms=tuple(arms),
        sigma_bar_sq=sigma_bar_sq,
        subg_proxy=None if subg_proxy is None else float(subg_proxy),
        eps_v=float(obj.get("eps_v", 0.0)),
    )


def load_instance(path: str) -> BanditInstance:
    with open(path, "r", encoding="utf-8") as f:
        try:
            obj = json.load(f)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON ({exc})") from None
    return parse_instance(obj)


def write_text_atomic(path: str, text: str) -> None:
    """Write via a sibling temp file and rename over the target."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=os.path.basename(path) + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        write_text_atomic(out, text)


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(
            [r.algorithm, r.case_id, r.j, r.trial, r.seed, r.tau, r.time_steps, int(r.success)]
        )
    return buf.getvalue()


def _add_instance_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--case", help="catalog case id (with --j)")
    sub.add_argument("--j", type=int, help="catalog difficulty index")
    sub.add_argument("--instance", metavar="FILE", help="instance JSON file")


def _select_entry(args: argparse.Namespace) -> CatalogEntry:
    from_file = args.instance is not None
    from_catalog = args.case is not None or args.j is not None
    if from_file and from_catalog:
        raise ValueError("choose either --instance or --case/--j, not both")
    if from_file:
        return inline_entry(load_instance(args.instance))
    if args.case is None or args.j is None:
        raise ValueError("select an instance with --case CASE --j J or --instance FILE")
    return catalog_entry(args.case, args.j)


def cmd_hardness(args: argparse.Namespace) -> int:
    entry = _select_entry(args)
    report = hardness_report(entry.ground_truth, args.delta).to_dict()
    payload = {
        "case": entry.case_id,
        "j": entry.j,
        "n_arms": entry.instance.n_arms,
        "sigma_bar_sq": entry.instance.sigma_bar_sq,
        **report,
    }
    if entry.instance.subg_proxy is not None:
        h_sig, h_sig_floor = h_va_sigma(entry.ground_truth, entry.instance.subg_proxy)
        payload["h_va_sigma"] = h_sig
        payload["h_va_sigma_floor"] = h_sig_floor
    _emit(json.dumps(payload, indent=2), args.out)
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    entry = _select_entry(args)
    aggregate, records = run_trials(
        args.algorithm,
        entry,
        args.delta,
        args.trials,
        args.seed,
        max_time_steps=args.max_steps,
        parallel=args.parallel,
        backend=args.backend,
    )
    if args.csv is not None:
        write_text_atomic(args.csv, records_to_csv(records))
    payload = {**aggregate.to_dict(), "backend": _backend.resolve(args.backend)}
    _emit(json.dumps(payload, indent=2), args.out)
    return 0


def cmd_catalog(args: argparse.Namespace) -> int:
    entries = [
        e
        for e in iter_catalog()
        if args.case is None or e.case_id == args.case
    ]
    if not entries:
        raise ValueError(f"no catalog entries match case {args.case!r}")
    rows = []
    for e in entries:
        h = h_va(e.ground_truth)
        rows.append(
            {
                "case": e.case_id,
                "j": e.j,
                "n_arms": e.instance.n_arms,
                "flag": e.ground_truth.flag,
                "h_va": h,
                "scale": scale(h, args.delta),
            }
        )
    if args.json:
        _emit(json.dumps(rows, indent=2), args.out)
        return 0
    lines = [f"{'case':<5} {'j':>2} {'arms':>4} {'flag':>4} {'h_va':>14} {'scale':>16}"]
    for r in rows:
        lines.append(
            f"{r['case']:<5} {r['j']:>2} {r['n_arms']:>4} {r['flag']:>4} "
            f"{r['h_va']:>14.4f} {r['scale']:>16.1f}"
        )
    _emit("\n".join(lines), args.out)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    results = verify_mod.run_all(
        master_seed=args.seed,
        n_trials=args.trials,
        n_instances=args.instances,
        backend=args.backend,
    )
    for r in results:
        status = "ok  " if r.passed else "FAIL"
        print(f"{status} {r.name}: {r.detail}")
    n_pass = sum(1 for r in results if r.passed)
    print(f"{n_pass}/{len(results)} checks passed")
    return 0 if n_pass == len(results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="valucb",
        description="Variance-constrained best-arm identification benchmarks.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_hard = sub.add_parser("hardness", help="hardness quantities for one instance")
    _add_instance_args(p_hard)
    p_hard.add_argument("--delta", type=float, default=0.05, help="confidence level")
    p_hard.add_argument("--out", metavar="FILE", help="write JSON here instead of stdout")
    p_hard.set_defaults(func=cmd_hardness)

    p_run = sub.add_parser("run", help="run seeded trials of one algorithm")
    _add_instance_args(p_run)
    p_run.add_argument(
        "--algorithm", choices=ALGORITHMS, default="valucb", help="algorithm to run"
    )
    p_run.add_argument("--delta", type=float, default=0.05, help="confidence level")
    p_run.add_argument("--trials", type=int, default=20, help="number of trials")
    p_run.add_argument("--seed", type=int, required=True, help="master seed")
    p_run.add_argument(
        "--parallel", type=int, default=1, help="worker processes (same records any value)"
    )
    p_run.add_argument(
        "--max-steps",
        type=int,
        default=DEFAULT_MAX_TIME_STEPS,
        help="abort a trial after this many time steps",
    )
    p_run.add_argument(
        "--backend",
        choices=_backend.BACKENDS,
        default="auto",
        help="trial engine implementation",
    )
    p_run.add_argument("--csv", metavar="FILE", help="write per-trial records here")
    p_run.add_argument("--out", metavar="FILE", help="write aggregate JSON here")
    p_run.set_defaults(func=cmd_run)

    p_cat = sub.add_parser("catalog", help="list built-in benchmark instances")
    p_cat.add_argument("--case", choices=sorted(catalog_cases()), help="filter by case")
    p_cat.add_argument("--delta", type=float, default=0.05, help="confidence level")
    p_cat.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    p_cat.add_argument("--out", metavar="FILE", help="write here instead of stdout")
    p_cat.set_defaults(func=cmd_catalog)

    p_ver = sub.add_parser("verify", help="run the self-check property suite")
    p_ver.add_argument("--seed", type=int, required=True, help="master seed")
    p_ver.add_argument("--trials", type=int, default=100, help="coverage-check trials")
    p_ver.add_argument(
        "--instances", type=int, default=100, help="random instances per hardness check"
    )
    p_ver.add_argument(
        "--backend",
        choices=_backend.BACKENDS,
        default="auto",
        help="trial engine implementation",
    )
    p_ver.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
