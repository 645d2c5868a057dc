"""
sorbd command line
Benchmark, verification and step-size studies emitting CSV
"""

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from .config import settings
from .models.errors import ErrorResponse, SorbdError, UsageError, VerificationFailedError
from .services.benchmark import ALGORITHMS, MODEL_KINDS, ORACLE_METHODS, VERIFIABLE, BenchmarkService, parse_model_spec
from .services.model_loader import dump_model

logger = logging.getLogger(__name__)

# Exit codes
EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2

FLOAT_FORMAT = '%.17g'


def parse_sizes(text: str) -> List[int]:
    """'10,20,40' -> [10, 20, 40]"""
    try:
        sizes = [int(s) for s in text.split(',') if s.strip()]
    except ValueError:
        raise UsageError(f"sizes must be comma-separated integers, got {text!r}")
    if not sizes or min(sizes) < 1:
        raise UsageError(f"sizes must be positive, got {text!r}")
    return sizes


def parse_steps(text: str, points: int = 15) -> List[float]:
    """
    Step grid from 'lo..hi' (log-spaced, `points` values) or a comma list.
    """
    try:
        if '..' in text:
            lo, hi = (float(x) for x in text.split('..', 1))
        else:
            steps = [float(x) for x in text.split(',') if x.strip()]
    except ValueError:
        raise UsageError(f"steps must be 'lo..hi' or comma-separated numbers, got {text!r}")
    if '..' in text:
        if lo <= 0 or hi <= lo or points < 2:
            raise UsageError(f"step range must satisfy 0 < lo < hi with at least 2 points, got {text!r}")
        return [float(h) for h in np.logspace(np.log10(lo), np.log10(hi), points)]
    if not steps or min(steps) <= 0:
        raise UsageError(f"steps must be positive, got {text!r}")
    return steps


def parse_kinds(text: Optional[str]) -> Optional[List[str]]:
    if not text:
        return None
    return [k.strip() for k in text.split(',') if k.strip()]


def _write_table(frame, out: str) -> None:
    if out == '-':
        frame.to_csv(sys.stdout, index=False, float_format=FLOAT_FORMAT)
    else:
        frame.to_csv(out, index=False, float_format=FLOAT_FORMAT)
        logger.info(f"Wrote {len(frame)} rows to {out}")


def _service(args) -> BenchmarkService:
    return BenchmarkService(samples=getattr(args, 'samples', None), warmups=getattr(args, 'warmups', None))


# -- subcommands ---------------------------------------------------------------

def cmd_bench(args) -> int:
    algorithms = [a.strip() for a in args.algo.split(',')]
    service = _service(args)
    frame = service.bench(algorithms, args.model, parse_sizes(args.sizes), seed=args.seed,
                          baseline=args.baseline, breakdown=args.breakdown)
    _write_table(frame, args.out)
    if args.fit:
        _write_table(service.fit_slopes(frame), args.fit)
    return EXIT_OK


def cmd_verify(args) -> int:
    model = parse_model_spec(args.model, parse_kinds(args.kinds), args.floating_base, args.seed)
    service = BenchmarkService(threads=args.threads)
    report = service.verify(args.algo, args.oracle, model, seed=args.seed, count=args.count, step=args.step)
    print(report.model_dump_json())

    fn, _ = VERIFIABLE[args.algo]
    threshold = args.threshold
    if threshold is None:
        threshold = settings.id_rmsre_threshold if fn == 'rnea' else settings.fd_rmsre_threshold
    if report.rmsre > threshold:
        raise VerificationFailedError(
            f"{args.algo} vs {args.oracle}: rmsre {report.rmsre:.3e} exceeds threshold {threshold:.1e}")
    logger.info(f"{args.algo} vs {args.oracle}: rmsre {report.rmsre:.3e} within {threshold:.1e}")
    return EXIT_OK


def cmd_accuracy(args) -> int:
    methods = [m.strip() for m in args.methods.split(',')]
    frame = BenchmarkService().accuracy(methods, args.model, parse_sizes(args.sizes), seed=args.seed,
                                        fn=args.function)
    _write_table(frame, args.out)
    return EXIT_OK


def cmd_sweep_step(args) -> int:
    model = parse_model_spec(args.model, parse_kinds(args.kinds), args.floating_base, args.seed)
    frame = BenchmarkService().sweep_step(args.method, model, parse_steps(args.h, args.points), seed=args.seed,
                                          fn=args.function, grid=args.grid)
    _write_table(frame, args.out)
    return EXIT_OK


def cmd_calibrate_crossover(args) -> int:
    crossover, frame = _service(args).calibrate_crossover(args.model, parse_sizes(args.sizes), seed=args.seed)
    _write_table(frame, args.out)
    if crossover is None:
        print("crossover: none", file=sys.stderr)
    else:
        print(f"crossover: {crossover} (set SORBD_INNER_CROSSOVER_N={crossover})", file=sys.stderr)
    return EXIT_OK


def cmd_gen_model(args) -> int:
    model = parse_model_spec(args.model, parse_kinds(args.kinds), args.floating_base, args.seed)
    text = dump_model(model)
    if args.out == '-':
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding='utf-8')
        logger.info(f"Wrote model with N={model.N}, n={model.n} to {args.out}")
    return EXIT_OK


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sorbd", description="Second-order rigid-body dynamics derivatives")
    parser.add_argument("--log-level", choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help="Log level (default: SORBD_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model_help: str, model_default: Optional[str] = None):
        p.add_argument("--model", default=model_default, required=model_default is None, help=model_help)
        p.add_argument("--seed", type=int, default=0, help="RNG seed of states and link parameters")
        p.add_argument("--out", default='-', help="Output path, '-' for stdout")

    def shape(p):
        p.add_argument("--kinds", help="Comma-separated joint kinds cycled over the bodies")
        p.add_argument("--floating-base", action="store_true", help="Make body 1's joint floating")

    bench = sub.add_parser("bench", help="Time algorithms over model sizes")
    common(bench, f"Model family {list(MODEL_KINDS)}")
    bench.add_argument("--algo", required=True, help=f"Comma-separated algorithms from {list(ALGORITHMS)}")
    bench.add_argument("--sizes", required=True, help="Comma-separated body counts")
    bench.add_argument("--samples", type=int, help="Timed samples per point")
    bench.add_argument("--warmups", type=int, help="Untimed warm-up calls per point")
    bench.add_argument("--baseline", help="Algorithm for the speedup column")
    bench.add_argument("--breakdown", action="store_true", help="Per-stage rows for fdsva-so")
    bench.add_argument("--fit", help="Also write log-log slope fits to this path")
    bench.set_defaults(handler=cmd_bench)

    verify = sub.add_parser("verify", help="Check an analytical bundle against an oracle")
    common(verify, "chain:N, bintree:N or a model file")
    shape(verify)
    verify.add_argument("--algo", required=True, choices=list(VERIFIABLE))
    verify.add_argument("--oracle", default='bicomplex', choices=list(ORACLE_METHODS))
    verify.add_argument("--count", type=int, default=1, help="Number of random states")
    verify.add_argument("--step", type=float, help="Oracle step size")
    verify.add_argument("--threshold", type=float, help="RMSRE pass threshold")
    verify.add_argument("--threads", type=int, help="Worker threads (default: SORBD_VERIFY_THREADS)")
    verify.set_defaults(handler=cmd_verify)

    accuracy = sub.add_parser("accuracy", help="Error metrics against the bi-complex reference")
    common(accuracy, f"Model family {list(MODEL_KINDS)}")
    accuracy.add_argument("--sizes", required=True, help="Comma-separated body counts")
    accuracy.add_argument("--methods", default='analytical,fd1,fd2')
    accuracy.add_argument("--function", default='rnea', choices=['rnea', 'aba'])
    accuracy.set_defaults(handler=cmd_accuracy)

    sweep = sub.add_parser("sweep-step", help="Finite-difference error against step size")
    common(sweep, "chain:N, bintree:N or a model file")
    shape(sweep)
    sweep.add_argument("--method", required=True, choices=['fd1', 'fd2'])
    sweep.add_argument("--h", default='1e-8..1e-1', help="'lo..hi' or comma-separated steps")
    sweep.add_argument("--points", type=int, default=15, help="Values in a 'lo..hi' range")
    sweep.add_argument("--grid", action="store_true", help="Sweep h and k independently (fd1)")
    sweep.add_argument("--function", default='rnea', choices=['rnea', 'aba'])
    sweep.set_defaults(handler=cmd_sweep_step)

    crossover = sub.add_parser("calibrate-crossover", help="Time Inner-Term DTM against IDFOZA")
    common(crossover, f"Model family {list(MODEL_KINDS)}", model_default='chain')
    crossover.add_argument("--sizes", default='10,20,30,40,60,80,100')
    crossover.add_argument("--samples", type=int)
    crossover.add_argument("--warmups", type=int)
    crossover.set_defaults(handler=cmd_calibrate_crossover)

    gen = sub.add_parser("gen-model", help="Write a synthetic model file")
    common(gen, "chain:N or bintree:N")
    shape(gen)
    gen.set_defaults(handler=cmd_gen_model)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    # Configure logging
    logging.basicConfig(
        level=getattr(logging, args.log_level or settings.log_level),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )

    try:
        return args.handler(args)
    except VerificationFailedError as e:
        logger.warning(e.message)
        print(ErrorResponse.from_exception(e).model_dump_json(exclude_none=True), file=sys.stderr)
        return EXIT_VERIFY_FAILED
    except (SorbdError, ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(ErrorResponse.from_exception(e).model_dump_json(exclude_none=True), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
