#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
import argparse
import math
import time
import sys
import traceback
from pathlib import Path
import numpy as np

from esav.Experiments.ExperimentSpec import ExperimentSpec
from esav.Experiments.ExperimentRunner import ExperimentRunner
from esav.Experiments.MethodRegistry import MethodRegistry
from esav.Experiments.ResultRow import ResultRow, EnergySample
from esav.Experiments.SvgPlot import SvgPlot
from esav.Integrators.SplittingSav import SplittingSav
from esav.Problems.CpdProblem import CpdState
from esav.Problems.ProblemCatalog import ProblemCatalog
from esav.SchemeRunner import SchemeRunner
from esav.Utils.EsavErrors import NumericalError
from esav.Utils.EsavLogger import EsavLogger
from esav.Utils.RunConfiguration import RunConfiguration


def _positive_float(text):
    """
    A validator for positive real arguments
    :raises: argparse.ArgumentTypeError when the value is not a positive number
    """
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'{text} is not a number') from None
    if not value > 0 or not math.isfinite(value):
        raise argparse.ArgumentTypeError(f'{text} is not a positive number')
    return value


def _method_list(text):
    return tuple(method.strip() for method in text.split(',') if method.strip())


def _default_k_range(problem):
    return (3, 8) if problem.startswith('cpd') else (6, 12)


def _default_final_time(args):
    if args.command == 'energy':
        if not args.long:
            return 1000.0
        return 2000.0 if args.problem == 'sine-gordon' else 10000.0
    if args.command == 'bench':
        return 10.0
    return 1.0


def _step_sizes(args):
    if args.h is not None:
        return tuple(args.h)
    kmin, kmax = _default_k_range(args.problem)
    kmin = kmin if args.kmin is None else args.kmin
    kmax = kmax if args.kmax is None else args.kmax
    if args.command != 'converge' and args.kmin is None and args.kmax is None:
        raise ValueError(f'{args.command} needs --h or --kmin/--kmax')
    return ExperimentSpec.dyadic_steps(kmin, kmax)


def _spec_from_args(args):
    params = {'eps': args.eps, 'omega': args.omega, 'k': args.k, 'N': args.N, 'C0': args.C0}
    methods = args.methods if args.methods else args.method
    if not methods:
        raise ValueError(f'no method given. Valid methods: {", ".join(MethodRegistry.methods)}')
    return ExperimentSpec(args.command, args.problem, methods, _step_sizes(args),
                          args.T if args.T is not None else _default_final_time(args),
                          {key: val for key, val in params.items() if val is not None})


def _config_from_args(args):
    return RunConfiguration({'outputPath': args.out, 'svgPath': args.svg, 'errorMode': args.error_mode,
                             'predictor': args.predictor, 'energyKind': args.energy, 'fuse': args.fuse})


def _write_svg(plot, config):
    if config.svgPath is not None:
        config.write_output(plot.to_svg(), config.svgPath)


def _plot_rows(runner, rows, column, y_label, config):
    """
    Writes an SVG plot of one column of the result rows against h, one series per method
    """
    plot = SvgPlot(f'{runner.spec.problem}: {y_label} at T={runner.spec.T}', 'h', y_label, log_x=True)
    for method in runner.spec.methods:
        method_rows = [row for row in rows if row.method == method]
        plot.add_series(method, [row.h for row in method_rows], [getattr(row, column) for row in method_rows])
    _write_svg(plot, config)


def _run_converge(runner, config):
    logger = EsavLogger()
    logger.mute()
    try:
        rows, fits = runner.convergence_study()
    finally:
        logger.unmute()
        logger.flush_messages()
    config.write_output(ResultRow.to_csv(rows), config.outputPath)
    for method, fit in fits.items():
        print(f'slope {method}: ' + ('saturated' if fit.saturated else f'{fit.slope:.3f}'))
    _plot_rows(runner, rows, 'global_error', 'global error', config)
    return 0


def _run_energy(runner, config):
    rows, samples = runner.energy_study()
    config.write_output(EnergySample.to_csv(samples), config.outputPath)
    for row in rows:
        EsavLogger().log_message(f'{row.method} h={row.h}: max energy error {row.max_energy_error:.3e}', level='I')
    plot = SvgPlot(f'{runner.spec.problem}: {config.energyKind} energy error', 't', 'energy error')
    for method in runner.spec.methods:
        for h in runner.spec.step_sizes:
            series = [sample for sample in samples if sample.method == method and sample.h == h]
            plot.add_series(f'{method} h={h}', [sample.t for sample in series],
                            [sample.energy_error for sample in series])
    _write_svg(plot, config)
    return 0


def _run_adjoint(args):
    """
    Prints the adjoint defect of the SAV subflow at the initial state and at random perturbations of it
    """
    instance = ProblemCatalog.build(args.problem, eps=args.eps, C0=args.C0)
    if instance.kind != 'cpd':
        raise ValueError(f'adjoint applies to charged-particle problems only: '
                         f'{", ".join(tag for tag in ProblemCatalog.tags() if tag.startswith("cpd"))}')
    rng = np.random.default_rng(args.seed)
    start = instance.lift()
    states = [start] + [CpdState(start.x + 0.1 * rng.standard_normal(3), start.v + 0.1 * rng.standard_normal(3),
                                 start.r, 0.0) for _ in range(args.samples)]
    for h in _step_sizes(args):
        defect = max(SplittingSav.adjoint_defect(state, instance.system, h) for state in states)
        print(f'h={h!r} adjoint defect={defect!r}')
    return 0


def run_args(args):
    """
    Runs the sub-command given in the command line
    :param Namespace args: argparse-style parsed cmdline
    :return: the exit code
    :rtype: int
    """
    if args.command == 'list':
        print('problems: ' + ', '.join(ProblemCatalog.tags()))
        for method in MethodRegistry.methods:
            print(f'{method}: ' + ', '.join(tag for tag in ProblemCatalog.tags()
                                            if MethodRegistry.applies_to(method, ProblemCatalog.build(tag).kind)))
        return 0
    if args.command == 'scheme':
        return SchemeRunner(args.scheme_file, args.out, args.debug).run_scheme()
    if args.command == 'adjoint':
        return _run_adjoint(args)

    config = _config_from_args(args)
    runner = ExperimentRunner(_spec_from_args(args), config)
    if args.command == 'converge':
        return _run_converge(runner, config)
    if args.command == 'energy':
        return _run_energy(runner, config)
    rows = runner.bench() if args.command == 'bench' else runner.run()
    config.write_output(ResultRow.to_csv(rows), config.outputPath)
    if args.command == 'bench':
        _plot_rows(runner, rows, 'cpu_seconds', 'cpu seconds', config)
    else:
        _plot_rows(runner, rows, 'global_error', 'global error', config)
    return 0


def _add_common_arguments(parser):
    parser.add_argument('--problem', type=str, required=True, help=f'One of {", ".join(ProblemCatalog.tags())}')
    parser.add_argument('--method', type=_method_list, help='Method tag (or comma-separated tags)')
    parser.add_argument('--methods', type=_method_list, help='Comma-separated method tags')
    parser.add_argument('--h', type=_positive_float, action='append', help='Step size (may be repeated)')
    parser.add_argument('--kmin', type=int, help='Smallest k of the step sizes h = 1/2^k')
    parser.add_argument('--kmax', type=int, help='Largest k of the step sizes h = 1/2^k')
    parser.add_argument('--T', type=_positive_float, help='Final time')
    parser.add_argument('--eps', type=_positive_float, help='Stiffness parameter epsilon')
    parser.add_argument('--omega', type=_positive_float, help='Duffing frequency omega')
    parser.add_argument('--k', type=_positive_float, help='Duffing nonlinearity k')
    parser.add_argument('--N', type=int, help='Number of sine-Gordon grid points')
    parser.add_argument('--C0', type=_positive_float, help='Shift of the scalar auxiliary variable')
    parser.add_argument('--predictor', choices=['linear', 'corrected'], help='Midpoint predictor of E2-SAV')
    parser.add_argument('--out', type=str, help='A file path to which the CSV output is written')
    parser.add_argument('--svg', type=str, help='A file path to which an SVG plot is written')
    parser.add_argument('--long', action='store_true', help='Use the full energy-drift horizons')
    parser.add_argument('--seed', type=int, default=0, help='Seed of the random states (adjoint only)')
    parser.add_argument('--error-mode', dest='error_mode', choices=['final', 'max'], default='final',
                        help='Global error at the final time or maximal over all steps')
    parser.add_argument('--energy', choices=['modified', 'original'], default='modified',
                        help='Energy whose error is tracked')
    parser.add_argument('--fuse', action='store_true',
                        help='Merge adjacent magnetic substeps of splitting schemes, also across steps')
    parser.add_argument('--samples', type=int, default=10, help='Number of random states (adjoint only)')


def esav_main(argv=None):
    """
    This is the main function for the esav command line
    :param argv: command-line arguments (None means using sys.argv)
    :return: 0 on success, 2 on bad arguments, 3 on a numerical failure
    :rtype: int
    """
    parser = argparse.ArgumentParser(description='Energy-preserving SAV integrators and their benchmarks')
    parser.add_argument('--version', '-v', action='store_true', help='Print version and exit')
    parser.add_argument('--debug', '-d', action='store_true', help='Print tracebacks of failures')
    subparsers = parser.add_subparsers(dest='command')
    for command, description in (('run', 'Integrate and report one row per method and step size'),
                                 ('converge', 'Measure convergence orders over h = 1/2^k'),
                                 ('energy', 'Record the energy-error series of long runs'),
                                 ('bench', 'Time full trajectories (median of repeats)'),
                                 ('adjoint', 'Report the adjoint defect of the SAV subflow')):
        _add_common_arguments(subparsers.add_parser(command, help=description))
    subparsers.add_parser('list', help='List problems and methods')
    scheme_parser = subparsers.add_parser('scheme', help='Run the experiments of a YAML scheme file')
    scheme_parser.add_argument('scheme_file', type=str, help='The scheme file')
    scheme_parser.add_argument('--out', type=str, help='Directory for relative output paths of the scheme')

    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    if args.version:
        version_file_path = Path(__file__).parent.resolve() / 'VERSION.txt'
        with open(version_file_path) as version_file:
            print(f'esav version {version_file.readline().strip()}')
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2

    start = time.time()
    try:
        ret_val = run_args(args)
        end = time.time()
        print(f'Total run time: {(end - start):6.2f} seconds')
        return ret_val
    except NumericalError as e:
        print(f'Numerical failure: {e}', file=sys.stderr)
        if args.debug:
            print(traceback.format_exc(), file=sys.stderr)
        return 3
    except (ValueError, SyntaxError, OSError) as e:
        print(f'Error: {e}', file=sys.stderr)
        print(f'Valid problems: {", ".join(ProblemCatalog.tags())}', file=sys.stderr)
        print(f'Valid methods: {", ".join(MethodRegistry.methods)}', file=sys.stderr)
        if args.debug:
            print(traceback.format_exc(), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(esav_main())
