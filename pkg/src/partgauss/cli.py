"""Simulate and verify a stationary sequence with Gaussian (k-1)-marginals.

Exit codes: 0 success, 1 a check failed, 2 usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time

import numpy as np

from . import __version__
from .dist import PerturbedGaussianParams, StreamState, sample_nu_batch
from .errors import CapabilityError, InvalidInputError
from .exact import cf_block_convolution, cf_marginal, exact_mixed_moment
from .pathio import FormatError, write_pgsp, write_samples_csv, write_segment
from .process import VectorStream, generate_segment
from .stats import GRID_VALUES
from .verify import run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("partgauss")


def _k(text):
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid k {text!r}") from None
    if k < 2:
        raise argparse.ArgumentTypeError("k must be >= 2")
    return k


def _positive(text):
    try:
        v = int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid count {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _seed(text):
    try:
        s = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= s < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return s


def _floats(text):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed number list {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _ints(text):
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed index list {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=_k, default=3, help="dimension of the perturbed Gaussian law (>= 2)")
    common.add_argument("--seed", type=_seed, default=0, help="64-bit root seed")
    common.add_argument("--perturbation-sign", type=float, choices=(-1.0, 0.0, 1.0), default=1.0,
                        help="1: the law; 0: Gaussian reference; -1: sign-flipped law (detector checks)")
    common.add_argument("--json", metavar="PATH", help="write JSON output here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="partgauss", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", parents=[common], help="draw i.i.d. vectors of the law")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--offset", type=int, default=0, help="first vector index")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "pgsp"), help="default: csv for *.csv, else pgsp")

    p = sub.add_parser("simulate", parents=[common], help="write a path segment (PGSP)")
    p.add_argument("--len", dest="length", type=_positive, required=True)
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("verify", parents=[common], help="run exact and Monte Carlo checks")
    p.add_argument("--n", type=_positive, default=100_000, help="independent realizations per check")
    p.add_argument("--len", dest="length", type=_positive, default=1_000_000, help="single-path length")
    p.add_argument("--grid", type=_floats, default=list(GRID_VALUES), help="grid coordinate magnitudes")
    p.add_argument("--tol-scale", type=float, default=1.0, help="multiplier on every threshold")
    p.add_argument("--no-exact", action="store_true", help="skip the exact identity checks")

    p = sub.add_parser("exact", parents=[common], help="exact CF or mixed moment of a marginal")
    p.add_argument("--indices", type=_ints, required=True, help="strictly increasing, e.g. 1,2,3")
    p.add_argument("--t", type=_floats, help="frequency point, one entry per index")
    p.add_argument("--orders", type=_ints, help="moment orders instead of a CF")
    p.add_argument("--method", choices=("marginal", "block"), default="marginal")
    return parser


def _emit(args, payload_lines):
    text = "\n".join(payload_lines) + "\n"
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_sample(args) -> int:
    params = PerturbedGaussianParams(args.k)
    state = StreamState(args.seed, position=args.offset, perturbation_sign=args.perturbation_sign)
    x = sample_nu_batch(params, state, args.n)
    fmt = args.format or ("csv" if args.out.lower().endswith(".csv") else "pgsp")
    if fmt == "csv":
        write_samples_csv(args.out, x)
    else:
        write_pgsp(args.out, x, args.k, args.offset, args.seed)
    log.info("wrote %d draws to %s (acceptance %.4f)", args.n, args.out, state.acceptance_rate)
    return EXIT_OK


def cmd_simulate(args) -> int:
    stream = VectorStream(args.seed, args.k, args.perturbation_sign)
    seg = generate_segment(stream, args.offset, args.length)
    write_segment(args.out, seg)
    log.info("wrote Y[%d..%d] to %s", args.offset, args.offset + args.length - 1, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    stream = VectorStream(args.seed, args.k, args.perturbation_sign)
    t0 = time.perf_counter()
    reports = run_suite(stream, args.n, args.length, tuple(args.grid), args.tol_scale, not args.no_exact)
    elapsed = time.perf_counter() - t0
    for r in reports:
        r.config.setdefault("run", {"k": args.k, "seed": args.seed, "n": args.n, "len": args.length,
                                    "grid": args.grid, "tol_scale": args.tol_scale,
                                    "perturbation_sign": args.perturbation_sign})
        print(r.line(), file=sys.stderr)
    _emit(args, [r.to_json() for r in reports])
    failed = [r.name for r in reports if r.failed]
    print(f"{len(reports)} checks in {elapsed:.1f}s; {len(failed)} failed", file=sys.stderr)
    if failed:
        print("FAILED: " + ", ".join(failed), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.15g} {z.imag:+.15g}i"


def cmd_exact(args, parser) -> int:
    params = PerturbedGaussianParams(args.k)
    idx = args.indices
    if any(b <= a for a, b in zip(idx, idx[1:])):
        parser.error("--indices must be strictly increasing")
    if (args.t is None) == (args.orders is None):
        parser.error("give exactly one of --t or --orders")
    if args.orders is not None:
        if len(args.orders) != len(idx):
            parser.error("--orders needs one entry per index")
        value = exact_mixed_moment(params, idx, args.orders)
        result = {"indices": idx, "orders": args.orders, "moment": value}
        line = f"{value:.15g}"
    else:
        if len(args.t) != len(idx):
            parser.error("--t needs one entry per index")
        if args.method == "block":
            if idx != list(range(idx[0], idx[0] + len(idx))):
                parser.error("--method block needs consecutive indices")
            z = cf_block_convolution(params, len(idx), args.t)
        else:
            z = cf_marginal(params, idx, args.t)
        result = {"indices": idx, "t": args.t, "method": args.method, "cf": [z.real, z.imag]}
        line = _fmt_complex(z)
    if args.json:
        _emit(args, [json.dumps({"k": args.k, **result})])
    print(line)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "sample":
            return cmd_sample(args)
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_exact(args, parser)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    except (InvalidInputError, CapabilityError) as exc:
        print(f"partgauss: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, FormatError) as exc:
        print(f"partgauss: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
