# command line entry point for the dual arrangement toolkit. The library can also be used directly through the
# arrangelib package; every subcommand here is a thin wrapper over arrangelib/cli.py
import argparse
import sys
from functools import wraps

import arrangelib.cli as cli
import arrangelib.parameters as params
import arrangelib.utils as utils
from arrangelib.exceptions import *
from arrangelib.pair_file import load_pair_file
from arrangelib.quadrature import QuadratureSpec

# setup class logger
log = utils.setup_logging()

DOMAIN_EXCEPTIONS = (DimensionException, RankDeficiencyException, NotAPairException, InadmissiblePairException,
                     VertexAtInfinityException, DegenerateParallelismException, ChartException,
                     UnsupportedArrangementException, ConstructionFailureException, BijectionException,
                     SingularEvaluationException, WeightDomainException, DualityViolationException,
                     InvariantViolationException)


def _emit(content, as_json: bool):
    if as_json or params.RESULTS not in content:
        print(utils.decorate(content))
    else:
        print(utils.render_summary(content))


def cli_function(f):
    @wraps(f)
    def wrapper(args) -> int:
        try:
            log.debug(f"Function: {f.__name__}")
            log.debug(f"ARGS: {vars(args)}")

            result = f(args)

            log.debug(f"Result of {f.__name__}: {result.get(params.VERDICT)}")
            _emit(result, args.json)

            return params.EXIT_FAILED if result.get(params.VERDICT) == params.FAIL else params.EXIT_OK
        except InvalidArgumentsException as iae:
            log.error(str(iae))
            _emit({params.ERROR: type(iae).__name__, params.MESSAGE: str(iae)}, True)
            return params.EXIT_INVALID_ARGUMENTS
        except DOMAIN_EXCEPTIONS as de:
            log.error(str(de))
            _emit({params.ERROR: type(de).__name__, params.MESSAGE: str(de)}, True)
            return params.EXIT_DOMAIN_ERROR
        except QuadratureAccuracyException as qae:
            log.error(str(qae))
            _emit({params.ERROR: type(qae).__name__, params.MESSAGE: str(qae), "achieved": qae.achieved}, True)
            return params.EXIT_FAILED

    return wrapper


def _quadrature(args) -> QuadratureSpec:
    return QuadratureSpec.from_env(args.quad_degree, args.quad_subdiv, args.tol, args.workers)


@cli_function
def info(args):
    return cli.cmd_info(load_pair_file(args.file))


@cli_function
def matroid(args):
    return cli.cmd_matroid(load_pair_file(args.file), args.side)


@cli_function
def dual(args):
    return cli.cmd_dual(load_pair_file(args.file))


@cli_function
def chambers(args):
    return cli.cmd_chambers(load_pair_file(args.file), args.side)


@cli_function
def betafn(args):
    return cli.cmd_betafn(load_pair_file(args.file), args.side)


@cli_function
def periods(args):
    return cli.cmd_periods(load_pair_file(args.file), args.side, _quadrature(args))


@cli_function
def verify(args):
    return cli.cmd_verify(load_pair_file(args.file), args.which, _quadrature(args), args.verify_tol, args.seed)


@cli_function
def sample(args):
    return cli.cmd_sample(args.k, args.n, args.seed, args.entry_range)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=params.APP_SHORTNAME,
                                     description="Dual hyperplane arrangements, period matrices and their "
                                                 "determinant identities")
    parser.add_argument("--json", action="store_true", help="print the raw JSON report")
    commands = parser.add_subparsers(dest=params.COMMAND, required=True)

    def _add(name, handler, helptext, side=False, quadrature=False):
        p = commands.add_parser(name, help=helptext)
        p.add_argument("file", help="pair file with k, B and optional alpha")
        if side:
            p.add_argument("--side", choices=[params.SIDE_PRIMAL, params.SIDE_DUAL], default=params.SIDE_PRIMAL)
        if quadrature:
            p.add_argument("--quad-degree", type=int, default=None)
            p.add_argument("--quad-subdiv", type=int, default=None, help="maximum refinement steps")
            p.add_argument("--tol", type=float, default=None, help="relative quadrature target")
            p.add_argument("--workers", type=int, default=None)
        p.set_defaults(handler=handler)
        return p

    _add("info", info, "dimensions, admissibility and beta on both sides")
    _add("matroid", matroid, "Tutte polynomial, spacious flats and parallelisms", side=True)
    _add("dual", dual, "dual matrix, completion determinant and dual pair file")
    _add("chambers", chambers, "chambers of the affine arrangement", side=True)
    _add("betafn", betafn, "beta function and critical values", side=True)
    _add("periods", periods, "period matrix and its determinant", side=True, quadrature=True)
    v = _add("verify", verify, "run the identity checks", quadrature=True)
    v.add_argument("--which", choices=params.VERIFY_CHOICES, default=params.VERIFY_ALL)
    v.add_argument("--verify-tol", type=float, default=params.DEFAULT_VERIFY_TOLERANCE)
    v.add_argument("--seed", type=int, default=params.DEFAULT_SEED)

    s = commands.add_parser("sample", help="draw a random admissible pair file")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=params.DEFAULT_SEED)
    s.add_argument("--entry-range", type=int, default=params.DEFAULT_ENTRY_RANGE)
    s.set_defaults(handler=sample)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
