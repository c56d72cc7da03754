"""
Command-line entry point.

Subcommands:
    matrix-exp       noise-grid sweep of matrix recovery (--approx, --check-bound)
    tensor-exp       noise-grid sweep of tensor recovery plus the n3 sweep
    data-compare     tensor vs slicewise recovery on a TNS1 file
    validate-lemmas  Monte Carlo checks of the random-matrix facts
    bound            evaluate one closed-form error bound
    gen-tensor       write a synthetic low-tubal-rank TNS1 file

Results go to --out (stdout by default); logs always go to stderr.
"""

import argparse
import logging
import sys
from dataclasses import asdict

from sketchlab.analysis.bounds import BOUND_VARIANTS, BoundInput
from sketchlab.analysis.lemmas import (
    validate_gordon,
    validate_square_gaussian_law,
    validate_truncated_haar,
)
from sketchlab.constants import (
    DEFAULT_APPROX_DECAY,
    DEFAULT_DELTA,
    DEFAULT_FIELD_MODE,
    DEFAULT_N,
    DEFAULT_NOISE_GRID,
    DEFAULT_NOISE_MODE,
    DEFAULT_R0,
    DEFAULT_TRIALS,
    DEFAULT_WORKERS,
    EXIT_IO,
    EXIT_OK,
    FIELD_MODES,
    LOG_FORMAT,
    NOISE_MODES,
)
from sketchlab.core.sampling import Seed
from sketchlab.errors import SketchlabError
from sketchlab.io.results import FORMATS, emit_document, emit_results
from sketchlab.io.tensor_file import save_tensor_file
from sketchlab.simulation.data_compare import run_data_tensor_comparison
from sketchlab.simulation.experiments import (
    run_approx_experiment,
    run_bound_validation,
    run_matrix_experiment,
    run_tensor_experiment,
    tensor_target,
)
from sketchlab.simulation.spec import ExperimentSpec

logger = logging.getLogger(__name__)

LEMMAS = ("square", "gordon", "haar", "all")


def _add_common(parser):
    parser.add_argument("--out", default=None, help="output path (default: stdout)")
    parser.add_argument("--log-level", default="INFO", choices=("DEBUG", "INFO", "WARNING", "ERROR"))
    parser.add_argument("--workers", type=int, default=DEFAULT_WORKERS)


def _add_grid(parser):
    parser.add_argument("--seed", type=int, required=True, help="master seed (64-bit)")
    parser.add_argument("--n1", type=int, default=DEFAULT_N)
    parser.add_argument("--n2", type=int, default=DEFAULT_N)
    parser.add_argument("--r0", type=int, default=DEFAULT_R0)
    parser.add_argument("--r", type=int, nargs="+", default=[DEFAULT_R0 + 1, 2 * DEFAULT_R0, DEFAULT_N - 1])
    parser.add_argument("--eps1", type=float, nargs="+", default=list(DEFAULT_NOISE_GRID))
    parser.add_argument("--eps2", type=float, nargs="+", default=list(DEFAULT_NOISE_GRID))
    parser.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    parser.add_argument("--noise-mode", default=DEFAULT_NOISE_MODE, choices=NOISE_MODES)
    parser.add_argument("--field-mode", default=DEFAULT_FIELD_MODE, choices=FIELD_MODES)
    parser.add_argument("--format", default="csv", choices=FORMATS)
    parser.add_argument(
        "--check-bound",
        action="store_true",
        help="report how often the first cell's error stays below its bound (JSON)",
    )
    parser.add_argument("--delta1", type=float, default=DEFAULT_DELTA)
    parser.add_argument("--delta2", type=float, default=DEFAULT_DELTA)
    parser.add_argument("--epsilon", type=float, default=DEFAULT_DELTA)


def build_parser():
    parser = argparse.ArgumentParser(prog="sketchlab", description="Double-sketch recovery experiments")
    commands = parser.add_subparsers(dest="command", required=True)

    matrix = commands.add_parser("matrix-exp", help="matrix recovery over a noise grid")
    _add_common(matrix)
    _add_grid(matrix)
    matrix.add_argument("--approx", action="store_true", help="approximately low-rank target")
    matrix.add_argument("--decay", type=float, default=DEFAULT_APPROX_DECAY)
    matrix.set_defaults(handler=cmd_matrix)

    tensor = commands.add_parser("tensor-exp", help="tensor recovery over a noise grid")
    _add_common(tensor)
    _add_grid(tensor)
    tensor.add_argument("--n3", type=int, default=4)
    tensor.add_argument("--n3-list", type=int, nargs="*", default=[])
    tensor.set_defaults(handler=cmd_tensor)

    compare = commands.add_parser("data-compare", help="tensor vs slicewise recovery on a TNS1 file")
    _add_common(compare)
    compare.add_argument("path")
    compare.add_argument("--seed", type=int, required=True)
    compare.add_argument("--r", type=int, required=True)
    compare.add_argument("--eps1", type=float, default=0.01)
    compare.add_argument("--eps2", type=float, default=0.01)
    compare.add_argument("--noise-mode", default=DEFAULT_NOISE_MODE, choices=NOISE_MODES)
    compare.set_defaults(handler=cmd_compare)

    lemmas = commands.add_parser("validate-lemmas", help="Monte Carlo random-matrix checks")
    _add_common(lemmas)
    lemmas.add_argument("--seed", type=int, required=True)
    lemmas.add_argument("--lemma", default="all", choices=LEMMAS)
    lemmas.add_argument("--samples", type=int, default=2000)
    lemmas.add_argument("--n", type=int, default=50, help="square size / Gordon columns / Haar size")
    lemmas.add_argument("--m", type=int, default=200, help="Gordon rows")
    lemmas.add_argument("--r", type=int, default=10, help="Haar truncation")
    lemmas.add_argument("--eps-grid", type=float, nargs="+", default=[0.25, 0.5, 1.0])
    lemmas.add_argument("--delta-grid", type=float, nargs="+", default=[0.05, 0.2])
    lemmas.set_defaults(handler=cmd_lemmas)

    bound = commands.add_parser("bound", help="evaluate a closed-form error bound")
    _add_common(bound)
    bound.add_argument("--variant", default="robust", choices=sorted(BOUND_VARIANTS))
    bound.add_argument("--n1", type=int, required=True)
    bound.add_argument("--n2", type=int, required=True)
    bound.add_argument("--r", type=int, required=True)
    bound.add_argument("--r-low", type=int, required=True, help="r0, or r1 for the approximation bounds")
    bound.add_argument("--delta1", type=float, required=True)
    bound.add_argument("--delta2", type=float, required=True)
    bound.add_argument("--epsilon", type=float, required=True)
    bound.add_argument("--z-norm", type=float, default=0.0)
    bound.add_argument("--z-tilde-norm", type=float, default=0.0)
    bound.add_argument("--sigma-tail", type=float, default=0.0)
    bound.add_argument("--n3", type=int, default=1)
    bound.set_defaults(handler=cmd_bound)

    gen = commands.add_parser("gen-tensor", help="write a synthetic low-tubal-rank TNS1 file")
    _add_common(gen)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--n1", type=int, default=DEFAULT_N)
    gen.add_argument("--n2", type=int, default=DEFAULT_N)
    gen.add_argument("--n3", type=int, default=4)
    gen.add_argument("--r0", type=int, default=DEFAULT_R0)
    gen.add_argument("--field-mode", default="real-target", choices=FIELD_MODES)
    gen.set_defaults(handler=cmd_gen_tensor)
    return parser


def spec_from_args(args, kind):
    return ExperimentSpec(
        kind=kind,
        n1=args.n1,
        n2=args.n2,
        n3=getattr(args, "n3", 1),
        r0=args.r0,
        r_list=tuple(args.r),
        eps1_grid=tuple(args.eps1),
        eps2_grid=tuple(args.eps2),
        trials=args.trials,
        master_seed=args.seed,
        noise_mode=args.noise_mode,
        field_mode=args.field_mode,
        n3_list=tuple(getattr(args, "n3_list", ())),
        decay=getattr(args, "decay", DEFAULT_APPROX_DECAY),
        workers=args.workers,
        output=args.out,
    )


def _emit_bound_check(spec, args):
    check = run_bound_validation(spec, args.delta1, args.delta2, args.epsilon)
    emit_document(
        {
            "kind": check.kind,
            "bound": asdict(check.bound),
            "trials": check.trials,
            "frequency": check.frequency,
            "required": check.required,
            "passed": check.passed,
            "field_mode": spec.field_mode,
        },
        args.out,
    )


def cmd_matrix(args):
    if args.check_bound:
        _emit_bound_check(spec_from_args(args, "matrix"), args)
    elif args.approx:
        spec = spec_from_args(args, "approx")
        emit_results(run_approx_experiment(spec, args.delta1, args.delta2, args.epsilon), args.format, args.out)
    else:
        emit_results(run_matrix_experiment(spec_from_args(args, "matrix")), args.format, args.out)


def cmd_tensor(args):
    spec = spec_from_args(args, "tensor")
    if args.check_bound:
        _emit_bound_check(spec, args)
        return
    emit_results(run_tensor_experiment(spec), args.format, args.out)


def cmd_compare(args):
    report = run_data_tensor_comparison(args.path, args.r, args.eps1, args.eps2, Seed(args.seed), args.noise_mode)
    emit_document(report.as_dict(), args.out)


def cmd_lemmas(args):
    seed = Seed(args.seed)
    selected = ("square", "gordon", "haar") if args.lemma == "all" else (args.lemma,)
    reports = []
    if "square" in selected:
        reports.append(validate_square_gaussian_law(args.n, args.eps_grid, args.samples, seed, args.workers))
    if "gordon" in selected:
        reports.append(validate_gordon(args.m, args.n, args.delta_grid, args.samples, seed, args.workers))
    if "haar" in selected:
        reports.append(validate_truncated_haar(args.n, args.r, args.delta_grid, args.samples, seed, args.workers))
    for report in reports:
        if not report.passed:
            logger.warning("%s: empirical frequencies outside tolerance", report.lemma)
    emit_document(
        {
            "passed": all(report.passed for report in reports),
            "checks": [row for report in reports for row in report.as_rows()],
        },
        args.out,
    )


def cmd_bound(args):
    inp = BoundInput(
        args.n1,
        args.n2,
        args.r,
        args.r_low,
        args.delta1,
        args.delta2,
        args.epsilon,
        z_norm=args.z_norm,
        z_tilde_norm=args.z_tilde_norm,
        sigma_tail=args.sigma_tail,
        n3=args.n3,
    )
    out = BOUND_VARIANTS[args.variant](inp)
    emit_document({"variant": args.variant, "input": asdict(inp), **asdict(out)}, args.out)


def cmd_gen_tensor(args):
    if args.out is None:
        raise SketchlabError("gen-tensor needs --out")
    spec = ExperimentSpec(
        kind="tensor",
        n1=args.n1,
        n2=args.n2,
        n3=args.n3,
        r0=args.r0,
        master_seed=args.seed,
        field_mode=args.field_mode,
    ).validate()
    save_tensor_file(tensor_target(spec, spec.n3), args.out)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, format=LOG_FORMAT, stream=sys.stderr, force=True)
    try:
        args.handler(args)
    except SketchlabError as exc:
        logger.error("%s", exc)
        logger.debug("details", exc_info=True)
        return exc.exit_code
    except OSError as exc:
        logger.error("I/O failure: %s", exc)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
