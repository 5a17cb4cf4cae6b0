"""Command-line entry point: entropy, frequencies, lyapunov, egorov and verify subcommands."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import analysis, entropy, io, quantize, verify
from .torus import MapParam

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _partition_args(ap):
    g = ap.add_mutually_exclusive_group(required=True)
    g.add_argument("--partition", help="explicit labels 'x,y;x,y;...'")
    g.add_argument("--partition-random", type=int, metavar="D", help="D labels drawn without replacement")
    ap.add_argument("--seed", type=int, default=0, help="seed for --partition-random (default 0)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tdent", description="Dynamical entropy of discretized sawtooth maps.")
    ap.add_argument("--threads", type=int, default=None,
                    help="worker threads (TDENT_THREADS overrides; default: logical cores)")
    sub = ap.add_subparsers(dest="command", required=True)

    e = sub.add_parser("entropy", help="entropy series H(n), h(n) as CSV")
    e.add_argument("--alpha", type=float, required=True)
    e.add_argument("--n-lattice", type=int, required=True)
    e.add_argument("--steps", type=int, required=True)
    e.add_argument("--method", choices=["auto", "spectral", "frequency"], default="auto")
    e.add_argument("--out", required=True)
    _partition_args(e)

    f = sub.add_parser("frequencies", help="frequency-field heatmaps (PGM), one per step")
    f.add_argument("--alpha", type=float, required=True)
    f.add_argument("--n-lattice", type=int, required=True)
    f.add_argument("--steps", type=int, required=True)
    f.add_argument("--out-dir", required=True)
    _partition_args(f)

    ly = sub.add_parser("lyapunov", help="Lagrange-extrapolated Lyapunov estimates over an alpha sweep")
    ly.add_argument("--alpha-start", type=float, required=True)
    ly.add_argument("--alpha-end", type=float, required=True)
    ly.add_argument("--alpha-step", type=float, required=True)
    ly.add_argument("--n-lattice", type=int, required=True)
    ly.add_argument("--steps", type=int, required=True)
    ly.add_argument("--degree", default="2,3,4,5", help="comma-separated degrees m")
    ly.add_argument("--out", required=True)
    _partition_args(ly)

    eg = sub.add_parser("egorov", help="Egorov defect along an N ladder")
    eg.add_argument("--alpha", type=float, required=True)
    eg.add_argument("--n-lattice", default="32,64,128", help="comma-separated N values")
    eg.add_argument("--steps", type=int, default=2)
    eg.add_argument("--scheme", choices=["diagonal", "cat"], default="diagonal")
    eg.add_argument("--out", required=True)

    v = sub.add_parser("verify", help="run invariant checks")
    v.add_argument("--suite", choices=["all", "weyl", "cs", "quantize", "entropy", "geometry"], default="all")
    v.add_argument("--seed", type=int, default=0)
    return ap


def thread_count(flag) -> int:
    env = os.environ.get("TDENT_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise UsageError(f"TDENT_THREADS must be an integer, got {env!r}") from exc
    else:
        n = flag if flag is not None else (os.cpu_count() or 1)
    if n < 1:
        raise UsageError("thread count must be >= 1")
    return n


def _int_list(text: str, what: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad {what} list {text!r}") from exc


def _partition(args) -> entropy.PartitionSpec:
    try:
        if args.partition is not None:
            return entropy.PartitionSpec(args.n_lattice, entropy.parse_labels(args.partition))
        return entropy.random_partition(args.n_lattice, args.partition_random, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _check_common(args):
    if args.n_lattice < 2:
        raise UsageError("--n-lattice must be >= 2")
    if args.steps < 1:
        raise UsageError("--steps must be >= 1")


def alpha_grid(start: float, end: float, step: float) -> list:
    if step <= 0 or end < start:
        raise UsageError("need --alpha-step > 0 and --alpha-end >= --alpha-start")
    count = int(np.floor((end - start) / step + 1e-9)) + 1
    # rounding keeps grid values such as 0.35 exact in the output
    return [round(start + k * step, 12) for k in range(count)]


def cmd_entropy(args) -> int:
    _check_common(args)
    p = MapParam(args.alpha, args.n_lattice)
    if args.method == "frequency" and not p.is_integer:
        raise UsageError("--method frequency requires an integer alpha (the T_alpha subfamily)")
    series = entropy.entropy_series(p, _partition(args), args.steps, args.method)
    io.write_entropy_csv(series, args.out)
    return EXIT_OK


def cmd_frequencies(args) -> int:
    _check_common(args)
    p = MapParam(args.alpha, args.n_lattice)
    if not p.is_integer:
        raise UsageError("frequencies require an integer alpha (the T_alpha subfamily)")
    part = _partition(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for n in range(1, args.steps + 1):
        nu = entropy.frequency_field(p, part, n)
        io.write_heatmap_pgm(nu, out / f"frame_{n:03d}.pgm")
        rows.append((n, entropy.support_set(nu)[1], entropy.shannon_entropy(nu)))
    io.write_table(out / "support.csv", ["n", "support", "H"], rows)
    return EXIT_OK


def cmd_lyapunov(args, threads: int) -> int:
    _check_common(args)
    degrees = _int_list(args.degree, "degree")
    if not degrees or min(degrees) < 2 or max(degrees) > args.steps:
        raise UsageError("degrees must satisfy 2 <= m <= --steps")
    alphas = alpha_grid(args.alpha_start, args.alpha_end, args.alpha_step)
    rows = analysis.lyapunov_sweep(alphas, args.n_lattice, _partition(args), args.steps, degrees, threads)
    io.write_lyapunov_csv(rows, args.out)
    return EXIT_OK


def cmd_egorov(args) -> int:
    ladder = _int_list(args.n_lattice, "N")
    f = quantize.sin_x1()
    rows = []
    for n in ladder:
        if args.scheme == "diagonal":
            d = quantize.egorov_defect(MapParam(args.alpha, n), f, args.steps)
        else:
            if not float(args.alpha).is_integer():
                raise UsageError("--scheme cat requires an integer alpha")
            d = quantize.egorov_defect_cat(int(args.alpha), f, n, args.steps)
        rows.append((n, args.steps, d))
    io.write_table(args.out, ["N", "k", "defect"], rows)
    return EXIT_OK


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        threads = thread_count(args.threads)
        if args.command == "entropy":
            return cmd_entropy(args)
        if args.command == "frequencies":
            return cmd_frequencies(args)
        if args.command == "lyapunov":
            return cmd_lyapunov(args, threads)
        if args.command == "egorov":
            return cmd_egorov(args)
        return EXIT_OK if verify.run_suite(args.suite, args.seed) else EXIT_VERIFY
    except UsageError as exc:
        print(f"tdent: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"tdent: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
