import argparse
import csv
import json
import logging
import math
import os
import sys
from typing import Iterable, List, Optional, Sequence, Tuple

from .combinatorics import B_METHODS, build_btable
from .enumerators import Enumerator, brute_force_stopping, brute_force_weight, theorem1_stopping
from .errors import ConsistencyError, DomainError, MatrixFormatError, ResourceLimitError
from .gf2 import MAX_HAMMING_M, load_matrix
from .hamming import METHODS, exponential_form, format_exponential_form, hamming_stopping_enumerator
from .metrics import write_metrics
from .peeling import (
    ErasurePattern,
    exact_failure_probability,
    exhaustive_failure_profile,
    monte_carlo_failure,
    peel,
)

logger = logging.getLogger("stopset")

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_RESOURCE = 4

FORMATS = ("text", "json", "csv")
MAX_BTABLE = 64


def _configure_logging(level: Optional[str]):
    level = (level or os.getenv("STOPSET_LOG_LEVEL", "WARNING")).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s [%(levelname)s] %(name)s - %(message)s",
        stream=sys.stderr,
    )
    logging.getLogger("stopset").setLevel(getattr(logging, level, logging.WARNING))


def _write_csv(header: Sequence[str], rows: Iterable[Sequence[object]]):
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def _write_json(payload):
    sys.stdout.write(json.dumps(payload) + "\n")


def emit_enumerator(enum: Enumerator, fmt: str, label: str):
    if fmt == "json":
        _write_json(enum.to_json())
    elif fmt == "csv":
        _write_csv(("l", f"{label}_l"), enum.csv_rows())
    else:
        print(enum.polynomial())


def cmd_hamming(args):
    if args.m > MAX_HAMMING_M:
        raise DomainError(f"m must be at most {MAX_HAMMING_M}, got {args.m}")
    if args.method == "brute" and args.m == 5:
        logger.warning("Brute force at m=5 enumerates 2^31 column subsets; expect minutes of runtime")
    enum = hamming_stopping_enumerator(args.m, args.method, args.upto, workers=args.workers)
    emit_enumerator(enum, args.format, "S")


def cmd_enumerate(args):
    matrix = load_matrix(args.matrix_file)
    if args.kind == "weight":
        if args.method != "brute":
            raise DomainError("weight enumeration is only available with --method brute")
        enum = brute_force_weight(matrix, workers=args.workers)
        emit_enumerator(enum, args.format, "A")
        return
    if args.method == "brute":
        enum = brute_force_stopping(matrix, workers=args.workers)
    else:
        enum = theorem1_stopping(matrix)
    emit_enumerator(enum, args.format, "S")


def cmd_btable(args):
    vmax = args.qmax if args.vmax is None else args.vmax
    if not (0 <= args.qmax <= MAX_BTABLE and 0 <= vmax <= MAX_BTABLE):
        raise DomainError(f"qmax and vmax must be in 0..{MAX_BTABLE}")
    table = build_btable(args.qmax, vmax, args.method)
    if args.verify:
        for other in B_METHODS:
            if other == args.method:
                continue
            if build_btable(args.qmax, vmax, other).values != table.values:
                raise ConsistencyError(f"b table from {args.method} disagrees with {other}")
        logger.info("b table verified against %s", ", ".join(m for m in B_METHODS if m != args.method))
    if args.format == "json":
        _write_json({
            "qmax": table.qmax,
            "vmax": table.vmax,
            "b": [[str(x) for x in row] for row in table.values],
        })
    elif args.format == "csv":
        _write_csv(["q"] + [str(v) for v in range(vmax + 1)],
                   ([q] + [str(x) for x in row] for q, row in enumerate(table.values)))
    else:
        width = max(len(str(x)) for row in table.values for x in row)
        width = max(width, len(str(vmax)))
        print("q\\v " + " ".join(str(v).rjust(width) for v in range(vmax + 1)))
        for q, row in enumerate(table.values):
            print(f"{q:<3} " + " ".join(str(x).rjust(width) for x in row))


def cmd_formula(args):
    form = exponential_form(args.l)
    if args.format == "json":
        _write_json({"l": args.l, "denominator": str(math.factorial(args.l)),
                     "terms": [[str(base), str(c)] for base, c in form.items()]})
    elif args.format == "csv":
        _write_csv(("base", "coefficient"), ((base, str(c)) for base, c in form.items()))
    else:
        print(format_exponential_form(form, args.l))


def cmd_peel(args):
    matrix = load_matrix(args.matrix_file)
    outcome = peel(matrix, ErasurePattern.parse(args.erase))
    if args.format == "json":
        _write_json(outcome.to_json())
    elif args.format == "csv":
        _write_csv(("status", "residual", "steps"),
                   [(outcome.status.value, " ".join(str(j) for j in sorted(outcome.residual)), outcome.steps)])
    else:
        residual = ",".join(str(j) for j in sorted(outcome.residual))
        print(f"{outcome.status.value} residual={{{residual}}} steps={outcome.steps}")


def cmd_profile(args):
    matrix = load_matrix(args.matrix_file)
    profile = exhaustive_failure_profile(matrix)
    if args.format == "json":
        _write_json(profile.to_json())
    elif args.format == "csv":
        _write_csv(("l", "U_l"), profile.csv_rows())
    else:
        print(Enumerator(profile.U).polynomial())


def cmd_bec(args):
    matrix = load_matrix(args.matrix_file)
    run_exact = args.exact or args.trials is None
    payload: List[Tuple[str, object]] = [("epsilon", args.epsilon)]
    if run_exact:
        profile = exhaustive_failure_profile(matrix)
        payload.append(("exact", exact_failure_probability(profile, args.epsilon)))
    if args.trials is not None:
        result = monte_carlo_failure(matrix, args.epsilon, args.trials, args.seed, workers=args.workers)
        payload += [("estimate", result.estimate), ("stderr", result.stderr),
                    ("trials", result.trials), ("seed", result.seed)]
    if args.format == "json":
        _write_json(dict(payload))
    elif args.format == "csv":
        _write_csv([k for k, _ in payload], [[repr(v) if isinstance(v, float) else v for _, v in payload]])
    else:
        print(" ".join(f"{k}={v!r}" if isinstance(v, float) else f"{k}={v}" for k, v in payload))


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stopset",
        description="Exact stopping-set and weight enumerators of binary parity-check matrices.",
    )
    parser.add_argument("--log-level", default=None, help="logging level (default: $STOPSET_LOG_LEVEL or WARNING)")
    parser.add_argument("--metrics-out", default=None, help="write Prometheus metrics to this file on success")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")

    parallel = argparse.ArgumentParser(add_help=False)
    parallel.add_argument("--workers", type=_positive_int, default=None,
                          help="worker processes (default: $STOPSET_WORKERS or CPU count)")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hamming", parents=[common, parallel],
                       help="stopping-set enumerator of the full-rank Hamming parity-check matrix")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--method", choices=METHODS, default="theorem2")
    p.add_argument("--upto", type=int, default=None, help="last coefficient to print (default n)")
    p.set_defaults(handler=cmd_hamming)

    p = sub.add_parser("enumerate", parents=[common, parallel], help="enumerator of a matrix file")
    p.add_argument("matrix_file")
    p.add_argument("--kind", choices=("stopping", "weight"), default="stopping")
    p.add_argument("--method", choices=("brute", "inclusion-exclusion"), default="brute")
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("btable", parents=[common], help="table of b(q, v)")
    p.add_argument("--qmax", type=int, default=7)
    p.add_argument("--vmax", type=int, default=None)
    p.add_argument("--method", choices=tuple(B_METHODS), default="recursion")
    p.add_argument("--verify", action="store_true", help="cross-check against the other two methods")
    p.set_defaults(handler=cmd_btable)

    p = sub.add_parser("formula", parents=[common], help="S_l as a sum of exponentials in m")
    p.add_argument("--l", type=int, required=True)
    p.set_defaults(handler=cmd_formula)

    p = sub.add_parser("peel", parents=[common], help="peel one erasure pattern")
    p.add_argument("matrix_file")
    p.add_argument("--erase", default="", help="comma-separated 1-based column indices")
    p.set_defaults(handler=cmd_peel)

    p = sub.add_parser("profile", parents=[common], help="failing erasure patterns per size")
    p.add_argument("matrix_file")
    p.set_defaults(handler=cmd_profile)

    p = sub.add_parser("bec", parents=[common, parallel], help="block failure probability on the BEC")
    p.add_argument("matrix_file")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--exact", action="store_true", help="exact value from the exhaustive profile")
    p.add_argument("--trials", type=_positive_int, default=None, help="Monte Carlo trials")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_bec)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.log_level)
    try:
        args.handler(args)
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (MatrixFormatError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FORMAT
    except ResourceLimitError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except Exception:
        logger.exception("Internal error while running %s", args.command)
        return EXIT_INTERNAL
    if args.metrics_out:
        write_metrics(args.metrics_out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
