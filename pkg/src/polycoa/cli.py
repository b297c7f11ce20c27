"""Command-line front end: inequality checks, sweeps, oracle comparisons.

Exit codes: 0 clean, 1 usage or input error, 2 inequality violation. A
violation is a first-class result: the offending state is dumped to a
``.violation.json`` file next to the requested output and the run exits 2
after writing every row, so sweeps double as counterexample hunts.

All CSV output is byte-stable for a fixed config: floats at 17 significant
digits, LF line endings, rows in sample order regardless of worker count.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from functools import partial
from multiprocessing import Pool

import numpy as np

from .concurrence import tau_a
from .polygamy import (
    MODE_GENERAL,
    MODE_MULTIQUBIT,
    csv_header,
    format_float,
    polygamy_report_general,
    polygamy_report_multiqubit,
    subspace_sum_diagnostic,
)
from .oracle import optimize_coa_lower_bound
from .qtypes import DensityMatrix, Ket
from .states import (
    dm_to_json,
    haar_random_pure,
    ket_to_json,
    load_state,
    random_mixed_state,
)

SLACK_FLOOR = -1e-9
GAP_FLOOR = -1e-6

MODE_ORACLE = "oracle-compare"
MODE_DIAGNOSTIC = "diagnostic"

DIAGNOSTIC_FIELDS = (
    "state_id",
    "mode",
    "n",
    "dims",
    "focus",
    "cut_sq",
    "subspace_sum_sq",
    "excess",
)
ORACLE_FIELDS = (
    "state_id",
    "dims",
    "rank",
    "tau",
    "oracle_lower",
    "gap",
    "oracle_converged",
    "oracle_iterations",
)


@dataclass(frozen=True)
class SweepConfig:
    dims: tuple
    samples: int
    seed: int
    mode: str
    focus: int
    oracle_budget: int
    output_path: str
    rank: int = 2
    jobs: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if not self.dims or any(d < 2 for d in self.dims):
            raise ValueError(f"dims must all be >= 2, got {self.dims}")
        if not 0 <= self.focus < len(self.dims):
            raise ValueError(f"focus {self.focus} out of range for dims {self.dims}")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; 2 is reserved for violations here.
    def error(self, message):
        raise _UsageError(message)


def _dims(text: str) -> tuple:
    try:
        dims = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise _UsageError(f"cannot parse dims {text!r}, expected e.g. 2,2,2")
    return dims


def _resolve_mode(mode: str, dims) -> str:
    if mode == "auto":
        return MODE_MULTIQUBIT if all(d == 2 for d in dims) else MODE_GENERAL
    return mode


def _write_rows(path: str, header, rows, footer_lines) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")
        for line in footer_lines:
            fh.write(line + "\n")


def _dump_violations(path: str, payloads) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump({"violations": payloads}, fh, sort_keys=True)
        fh.write("\n")


def _sample_row(cfg: SweepConfig, index: int):
    """One sweep sample: returns (csv fields, footer metric, violation|None)."""
    sid = f"s{index}"
    if cfg.mode == MODE_ORACLE:
        ss = np.random.SeedSequence(cfg.seed, spawn_key=(index,))
        rho = random_mixed_state(cfg.dims, cfg.rank, ss)
        oracle_seed = int(
            np.random.SeedSequence(cfg.seed, spawn_key=(index, 1)).generate_state(
                1, np.uint64
            )[0]
        )
        result = optimize_coa_lower_bound(
            rho, budget=cfg.oracle_budget, seed=oracle_seed
        )
        tau = tau_a(rho).tau
        gap = tau - result.best_average
        fields = [
            sid,
            "x".join(str(d) for d in cfg.dims),
            str(cfg.rank),
            format_float(tau),
            format_float(result.best_average),
            format_float(gap),
            str(int(result.converged)),
            str(result.iterations_used),
        ]
        violation = None
        if gap < GAP_FLOOR:
            violation = {"sample": index, "gap": gap, "state": dm_to_json(rho)}
        return fields, gap, violation

    psi = haar_random_pure(cfg.dims, np.random.SeedSequence(cfg.seed, spawn_key=(index,)))
    if cfg.mode == MODE_DIAGNOSTIC:
        cut_sq, sum_sq = subspace_sum_diagnostic(psi, cfg.focus)
        excess = sum_sq - cut_sq
        fields = [
            sid,
            MODE_DIAGNOSTIC,
            str(len(cfg.dims)),
            "x".join(str(d) for d in cfg.dims),
            str(cfg.focus),
            format_float(cut_sq),
            format_float(sum_sq),
            format_float(excess),
        ]
        violation = None
        if excess < SLACK_FLOOR:
            violation = {"sample": index, "excess": excess, "state": ket_to_json(psi)}
        return fields, excess, violation

    if cfg.mode == MODE_MULTIQUBIT:
        report = polygamy_report_multiqubit(psi, cfg.focus)
    else:
        report = polygamy_report_general(psi, cfg.focus)
    slack = report.slack
    violation = None
    if slack < SLACK_FLOOR:
        violation = {"sample": index, "slack": slack, "state": ket_to_json(psi)}
    return report.csv_row(sid), slack, violation


def _run_sweep(cfg: SweepConfig, metric_name: str, header) -> int:
    if cfg.jobs > 1:
        with Pool(processes=cfg.jobs) as pool:
            results = pool.map(partial(_sample_row, cfg), range(cfg.samples))
    else:
        results = [_sample_row(cfg, i) for i in range(cfg.samples)]
    rows = [r[0] for r in results]
    metrics = [r[1] for r in results]
    violations = [r[2] for r in results if r[2] is not None]
    footer = [
        f"# min_{metric_name}={format_float(min(metrics))}"
        f" mean_{metric_name}={format_float(math.fsum(metrics) / len(metrics))}"
    ]
    _write_rows(cfg.output_path, header, rows, footer)
    if violations:
        _dump_violations(cfg.output_path + ".violation.json", violations)
        print(
            f"{len(violations)} violation(s); details in "
            f"{cfg.output_path}.violation.json",
            file=sys.stderr,
        )
        return 2
    return 0


def cmd_sweep(cfg: SweepConfig) -> int:
    n_partners = len(cfg.dims) - 1
    return _run_sweep(cfg, "slack", csv_header(n_partners))


def cmd_oracle_compare(cfg: SweepConfig) -> int:
    if len(cfg.dims) != 2:
        raise _UsageError(f"oracle-compare needs exactly two dims, got {cfg.dims}")
    if not 1 <= cfg.rank <= cfg.dims[0] * cfg.dims[1]:
        raise _UsageError(f"rank {cfg.rank} out of range for dims {cfg.dims}")
    return _run_sweep(cfg, "gap", list(ORACLE_FIELDS))


def cmd_diagnostic(cfg: SweepConfig) -> int:
    if len(cfg.dims) < 3:
        raise _UsageError("diagnostic needs at least three subsystems")
    return _run_sweep(cfg, "excess", list(DIAGNOSTIC_FIELDS))


def cmd_check(state_file: str, focus: int, mode: str) -> int:
    state = load_state(state_file)
    if not isinstance(state, Ket):
        raise ValueError("check needs a pure-state (ket) file")
    mode = _resolve_mode(mode, state.dims)
    sid = os.path.basename(state_file)
    if mode == MODE_DIAGNOSTIC:
        cut_sq, sum_sq = subspace_sum_diagnostic(state, focus)
        metric = sum_sq - cut_sq
        fields = [
            sid,
            MODE_DIAGNOSTIC,
            str(len(state.dims)),
            "x".join(str(d) for d in state.dims),
            str(focus),
            format_float(cut_sq),
            format_float(sum_sq),
            format_float(metric),
        ]
        header = list(DIAGNOSTIC_FIELDS)
        payload = {"excess": metric, "state": ket_to_json(state)}
    else:
        if mode == MODE_MULTIQUBIT:
            report = polygamy_report_multiqubit(state, focus)
        elif mode == MODE_GENERAL:
            report = polygamy_report_general(state, focus)
        else:
            raise _UsageError(f"unknown check mode {mode!r}")
        metric = report.slack
        fields = report.csv_row(sid)
        header = csv_header(len(report.rhs_terms))
        payload = {"slack": metric, "state": ket_to_json(state)}
    print(",".join(header))
    print(",".join(fields))
    if metric < SLACK_FLOOR:
        path = state_file + ".violation.json"
        _dump_violations(path, [payload])
        print(f"violation; details in {path}", file=sys.stderr)
        return 2
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="polycoa", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_focus=True):
        p.add_argument("--dims", type=_dims, required=True, help="e.g. 2,2,2")
        p.add_argument("--samples", type=int, default=100)
        p.add_argument("--seed", type=int, default=0)
        if needs_focus:
            p.add_argument("--focus", type=int, default=0)
        p.add_argument("--budget", type=int, default=2000, help="oracle iterations")
        p.add_argument("--out", required=True, help="CSV output path")
        p.add_argument("--jobs", type=int, default=1, help="worker processes")

    p_check = sub.add_parser("check", help="verify one state file")
    p_check.add_argument("state_file")
    p_check.add_argument("--focus", type=int, default=0)
    p_check.add_argument(
        "--mode",
        default="auto",
        choices=["auto", MODE_GENERAL, MODE_MULTIQUBIT, MODE_DIAGNOSTIC],
    )

    p_sweep = sub.add_parser("sweep", help="polygamy sweep over random states")
    common(p_sweep)
    p_sweep.add_argument(
        "--mode", default="auto", choices=["auto", MODE_GENERAL, MODE_MULTIQUBIT]
    )

    p_oracle = sub.add_parser(
        "oracle-compare", help="fidelity-sum bound vs decomposition search"
    )
    common(p_oracle, needs_focus=False)
    p_oracle.add_argument("--rank", type=int, default=2, help="sampled state rank")

    p_diag = sub.add_parser("diagnostic", help="subspace-decomposition sums")
    common(p_diag)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "check":
            return cmd_check(args.state_file, args.focus, args.mode)
        cfg = SweepConfig(
            dims=args.dims,
            samples=args.samples,
            seed=args.seed,
            mode=_resolve_mode(getattr(args, "mode", args.command), args.dims),
            focus=getattr(args, "focus", 0),
            oracle_budget=args.budget,
            output_path=args.out,
            rank=getattr(args, "rank", 2),
            jobs=args.jobs,
        )
        if args.command == "sweep":
            return cmd_sweep(cfg)
        if args.command == "oracle-compare":
            return cmd_oracle_compare(cfg)
        return cmd_diagnostic(cfg)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
