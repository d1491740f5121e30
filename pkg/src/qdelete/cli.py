"""Command line front end: ``qdelete {run,sweep-phi,table,verify,bench}``.

Exit codes: 0 success, 1 usage or validation error, 2 a numerical check
failed. Output goes to stdout as an aligned text table (default), CSV, or
JSON. CSV and JSON carry full round-trip float precision; the text tables
round to 12 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time

from . import __version__, analytic, benchmark, deletion
from .statevector import fidelity, qubit_cap
from .verify import run_invariants

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2

AMPLITUDE_TABLE_MAX_N = 12
ORACLE_FIDELITY_FLOOR = 1 - 1e-6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; 2 is reserved for failed checks
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common_flags(suppress: bool) -> argparse.ArgumentParser:
    # Global flags are accepted before or after the subcommand. The copies
    # on the subparsers default to SUPPRESS so they don't clobber the top
    # level value.
    default = argparse.SUPPRESS if suppress else None
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("text", "csv", "json"), default=default,
                   help="output format (default: text; csv for `table`)")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS if suppress else 0,
                   help="seed for randomized checks; echoed in reports")
    p.add_argument("--cap", type=int, default=default,
                   help="qubit cap (overrides $QDELETE_CAP, default 26)")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qdelete", description=__doc__.splitlines()[0],
                     parents=[_common_flags(False)])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = [_common_flags(True)]

    p = sub.add_parser("run", parents=common, help="simulate k deletion steps")
    p.add_argument("--n", type=int, required=True, help="qubit count")
    p.add_argument("--tau", type=int, required=True, help="marked basis index")
    p.add_argument("--k", type=int, default=1, help="number of deletion steps (default 1)")
    p.add_argument("--mode", choices=[m.value for m in deletion.Mode], default="exact")
    p.add_argument("--normalize", action="store_true",
                   help="divide out the predicted global phase")
    p.add_argument("--dump-amps", action="store_true",
                   help=f"print amplitudes even above n={AMPLITUDE_TABLE_MAX_N}")

    p = sub.add_parser("sweep-phi", parents=common, help="matched phase against database size")
    p.add_argument("--n-min", "--n_min", dest="n_min", type=int, default=1)
    p.add_argument("--n-max", "--n_max", dest="n_max", type=int, default=20)

    p = sub.add_parser("table", parents=common, help="sin/cos of k*pi/3 and their (-1)^k variants")
    p.add_argument("--k-max", "--k_max", dest="k_max", type=int, default=12)

    p = sub.add_parser("verify", parents=common, help="run the invariant suite")
    p.add_argument("--n-max", "--n_max", dest="n_max", type=int, default=10)
    p.add_argument("--trials", type=int, default=3)

    p = sub.add_parser("bench", parents=common, help="time one deletion step per size")
    p.add_argument("--n", dest="ns", type=int, nargs="+", default=[16, 18, 20])
    p.add_argument("--repetitions", type=int, default=3)
    return parser


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _text_table(header, rows) -> str:
    cells = [list(header)] + [[c if isinstance(c, str) else _fmt(c) if isinstance(c, float) else str(c)
                               for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in cells) + "\n"


def _csv_table(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(c) if isinstance(c, float) else c for c in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _cap(args) -> int:
    return qubit_cap() if args.cap is None else args.cap


def _resolve_format(args, default="text") -> str:
    return args.format or default


def cmd_run(args, out) -> int:
    cap = _cap(args)
    config = deletion.DeletionConfig(args.n, args.tau, args.k, args.mode, args.normalize)
    benchmark.warm_up()  # keep kernel loading out of elapsed_ms
    start = time.perf_counter()
    outcome = deletion.run(config, cap=cap)
    elapsed_ms = (time.perf_counter() - start) * 1e3

    # fidelity is |<a|b>|, so a normalized global phase does not affect it
    predicted, _ = analytic.predict_final(config.N, config.k, config.mode)
    expected = analytic.lift_to_full(predicted, config.tau, config.n, cap)
    oracle_fidelity = fidelity(outcome.final_state, expected)

    amps = None
    if args.dump_amps or config.n <= AMPLITUDE_TABLE_MAX_N:
        amps = outcome.final_state.amps

    report = {
        "config": {
            "n": config.n,
            "tau": config.tau,
            "k": config.k,
            "mode": config.mode.value,
            "normalize_global_phase": config.normalize_global_phase,
        },
        "case": outcome.case_tag.value,
        "residual": outcome.residual_marked_magnitude,
        "fidelity": oracle_fidelity,
        "elapsed_ms": elapsed_ms,
        "seed": args.seed,
        "version": __version__,
    }
    fmt = _resolve_format(args)
    if fmt == "json":
        if amps is not None:
            report["amplitudes"] = [{"index": i, "re": float(a.real), "im": float(a.imag)} for i, a in enumerate(amps)]
        out.write(_json(report))
    elif fmt == "csv":
        header = ["n", "tau", "k", "mode", "normalize_global_phase", "case", "residual",
                  "fidelity", "elapsed_ms", "seed", "version"]
        c = report["config"]
        row = [c["n"], c["tau"], c["k"], c["mode"], c["normalize_global_phase"], report["case"],
               report["residual"], report["fidelity"], report["elapsed_ms"], args.seed, __version__]
        out.write(_csv_table(header, [row]))
        if amps is not None:
            out.write("\n")
            out.write(_csv_table(["index", "re", "im"],
                                 [[i, float(a.real), float(a.imag)] for i, a in enumerate(amps)]))
    else:
        c = report["config"]
        lines = [
            f"n={c['n']} N={config.N} tau={c['tau']} k={c['k']} mode={c['mode']} "
            f"normalize={c['normalize_global_phase']} seed={args.seed}",
            f"phi               {_fmt(outcome.phi)}",
            f"case              {report['case']}",
            f"residual |a_tau|  {_fmt(report['residual'])}",
            f"oracle fidelity   {_fmt(oracle_fidelity)}",
            f"oracle calls      {outcome.oracle_calls}",
            f"elapsed           {elapsed_ms:.3f} ms",
        ]
        out.write("\n".join(lines) + "\n")
        if amps is not None:
            out.write("\n")
            out.write(_text_table(["index", "re", "im", "|amp|"],
                                  [[i, float(a.real), float(a.imag), float(abs(a))]
                                   for i, a in enumerate(amps)]))
    if not oracle_fidelity >= ORACLE_FIDELITY_FLOOR:
        print(f"qdelete: oracle fidelity {oracle_fidelity!r} below {ORACLE_FIDELITY_FLOOR!r} "
              f"for config {report['config']}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_sweep_phi(args, out) -> int:
    cap = _cap(args)
    if not 1 <= args.n_min <= args.n_max <= cap:
        raise UsageError(f"need 1 <= n_min <= n_max <= cap, got n_min={args.n_min} "
                         f"n_max={args.n_max} cap={cap}")
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        phi = deletion.matched_phase(1 << n).phi
        rows.append([n, 1 << n, phi, phi - math.pi / 3])
    header = ["n", "N", "phi", "phi_minus_pi_over_3"]
    fmt = _resolve_format(args)
    if fmt == "json":
        out.write(_json({"rows": [dict(zip(header, r)) for r in rows],
                         "seed": args.seed, "version": __version__}))
    elif fmt == "csv":
        out.write(_csv_table(header, rows))
    else:
        out.write(_text_table(header, rows))
    return EXIT_OK


TABLE_LABELS = ("sin(theta)", "cos(theta)", "(-1)^k sin(theta)", "(-1)^k cos(theta)")


def cmd_table(args, out) -> int:
    if args.k_max < 1:
        raise UsageError(f"k_max must be >= 1, got {args.k_max}")
    table = analytic.trig_period_table(args.k_max)
    fmt = _resolve_format(args, default="csv")
    if fmt == "json":
        out.write(_json({"rows": [r._asdict() for r in table], "seed": args.seed,
                         "version": __version__}))
        return EXIT_OK
    # one row per function, one column per k
    header = ["k"] + [str(r.k) for r in table]
    rows = [[label] + [r[i + 1] for r in table] for i, label in enumerate(TABLE_LABELS)]
    out.write(_csv_table(header, rows) if fmt == "csv" else _text_table(header, rows))
    return EXIT_OK


def cmd_verify(args, out) -> int:
    if args.n_max < 1 or args.n_max > _cap(args):
        raise UsageError(f"n_max must be in [1, {_cap(args)}], got {args.n_max}")
    if args.trials < 1:
        raise UsageError(f"trials must be >= 1, got {args.trials}")
    results = run_invariants(args.n_max, args.seed, args.trials)
    header = ["invariant", "max_deviation", "tolerance", "checks", "status"]
    rows = [[r.name, r.max_deviation, r.tolerance, r.checked, "PASS" if r.passed else "FAIL"]
            for r in results]
    ok = all(r.passed for r in results)
    fmt = _resolve_format(args)
    if fmt == "json":
        out.write(_json({
            "invariants": [dict(zip(header, row), failing_config=r.failing_config)
                           for row, r in zip(rows, results)],
            "passed": ok, "n_max": args.n_max, "trials": args.trials,
            "seed": args.seed, "version": __version__,
        }))
    elif fmt == "csv":
        out.write(_csv_table(header, rows))
    else:
        out.write(f"seed={args.seed} n_max={args.n_max} trials={args.trials}\n")
        out.write(_text_table(header, rows))
    for r in results:
        if not r.passed:
            print(f"qdelete: invariant {r.name} failed (tolerance {r.tolerance!r}); "
                  f"reproduce with seed={args.seed} config={r.failing_config}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_bench(args, out) -> int:
    cap = _cap(args)
    for n in args.ns:
        if not 1 <= n <= cap:
            raise UsageError(f"bench size n={n} outside [1, {cap}]")
    if args.repetitions < 1:
        raise UsageError(f"repetitions must be >= 1, got {args.repetitions}")
    rows = benchmark.bench(args.ns, args.repetitions, cap)
    header = ["n", "N", "step_seconds", "amplitudes_per_second", "quantum_queries",
              "classical_avg_queries"]
    table = [[r.n, r.N, r.step_seconds, r.amplitudes_per_second, r.quantum_queries,
              r.classical_avg_queries] for r in rows]
    slope = None
    if len({r.n for r in rows}) >= 2:
        slope = benchmark.loglog_slope([r.N for r in rows], [r.step_seconds for r in rows])
    fmt = _resolve_format(args)
    if fmt == "json":
        out.write(_json({"rows": [dict(zip(header, row)) for row in table],
                         "loglog_slope": slope, "repetitions": args.repetitions,
                         "seed": args.seed, "version": __version__}))
    elif fmt == "csv":
        out.write(_csv_table(header, table))
    else:
        out.write(_text_table(header, table))
        if slope is not None:
            out.write(f"log-log slope of step time vs N: {slope:.3f}\n")
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "sweep-phi": cmd_sweep_phi,
    "table": cmd_table,
    "verify": cmd_verify,
    "bench": cmd_bench,
}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cap is not None and args.cap < 1:
        parser.error(f"--cap must be >= 1, got {args.cap}")
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, ValueError, IndexError) as exc:
        print(f"qdelete {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # reader went away (e.g. `| head`); silence the flush at exit
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK
