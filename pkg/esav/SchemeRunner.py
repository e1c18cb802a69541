#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
import time
from os import path
from sys import stderr
import yaml

from esav.Experiments.ExperimentSpec import ExperimentSpec
from esav.Experiments.ExperimentRunner import ExperimentRunner
from esav.Experiments.ResultRow import ResultRow, EnergySample
from esav.Experiments.SvgPlot import SvgPlot
from esav.Utils.EsavErrors import NumericalError
from esav.Utils.EsavLogger import EsavLogger
from esav.Utils.RunConfiguration import RunConfiguration


class SchemeRunner:
    """
    This class takes a scheme file and runs all the experiments listed in it
    """
    experiment_keys = {'name': [1, str], 'mode': [0, str], 'problem': [1, str], 'methods': [1, (list, str)],
                       'eps': [0, (int, float)], 'omega': [0, (int, float)], 'k': [0, (int, float)], 'N': [0, int],
                       'C0': [0, (int, float)], 'h': [0, (list, int, float)], 'kmin': [0, int], 'kmax': [0, int],
                       'T': [0, (int, float)], 'predictor': [0, str], 'out': [0, str], 'svg': [0, str],
                       'errorMode': [0, str], 'energy': [0, str], 'fuse': [0, bool], 'expectedSlopes': [0, dict]}
    allowed_values = {'mode': ExperimentSpec.modes, 'predictor': ['linear', 'corrected'],
                      'errorMode': ['final', 'max'], 'energy': ['modified', 'original']}
    slope_tolerance = 0.2

    def __init__(self, scheme_file_name, output_dir=None, debug=False):
        self.scheme_file_name = scheme_file_name
        self.output_dir = output_dir
        self.debug = debug
        with open(scheme_file_name) as stream:
            try:
                self.scheme = yaml.load(stream, Loader=getattr(yaml, 'CSafeLoader', yaml.SafeLoader))
            except yaml.MarkedYAMLError as parse_error:
                self.syntax_error(f'{parse_error.problem} {parse_error.problem_mark}')
        if not isinstance(self.scheme, dict):
            self.syntax_error("The scheme's top-level object must be a map")

    def syntax_error(self, msg):
        """
        Just raise a SyntaxError Exception with the scheme file name as context
        :param str msg: The message to print
        """
        raise SyntaxError(msg, (self.scheme_file_name, 0, 0, '')) from None

    def check_fields_validity(self, dict_to_check, dict_name, allowed_keys, allowed_values=None):
        """
        Check that all keys in dict_to_check are legal (appear in allowed_keys), that mandatory keys exist
        and that values have the specified types
        :param dict dict_to_check: The dictionary for which the keys should be checked
        :param str dict_name: A name for the dictionary (providing context in error messages)
        :param dict allowed_keys: Map from allowed keys to usage code (0-optional, 1-must have), optionally with a type
        :param dict allowed_values: Map from a key name to its allowed values (optional)
        :raises SyntaxError: if some keys are not allowed/missing
        """
        for key, key_info in allowed_keys.items():
            code, value_type = key_info if isinstance(key_info, list) else (key_info, None)
            if code == 1 and dict_to_check.get(key) is None:
                self.syntax_error(f'{dict_name} must have {key} entry')
            value = dict_to_check.get(key)
            if value is None:
                continue
            if value_type is not None and (not isinstance(value, value_type) or
                                           (isinstance(value, bool) and value_type is not bool)):
                self.syntax_error(f'type of {key} is not {value_type} in {dict_name}')
            if allowed_values and key in allowed_values and value not in allowed_values[key]:
                self.syntax_error(f'{key} has invalid value in {dict_name}')

        bad_keys = set(dict_to_check.keys()).difference(allowed_keys.keys())
        if bad_keys:
            self.syntax_error(f'{bad_keys.pop()} is not a valid entry in the specification of {dict_name}')

    def _output_file(self, given_path):
        if given_path is None or path.isabs(given_path):
            return given_path
        base_dir = self.output_dir or path.dirname(path.realpath(self.scheme_file_name))
        return path.join(base_dir, given_path)

    def _spec_of(self, experiment):
        methods = experiment['methods']
        if isinstance(methods, str):
            methods = [method.strip() for method in methods.split(',')]
        if 'h' in experiment:
            steps = experiment['h'] if isinstance(experiment['h'], list) else [experiment['h']]
        else:
            default_range = (3, 8) if experiment['problem'].startswith('cpd') else (6, 12)
            steps = ExperimentSpec.dyadic_steps(experiment.get('kmin', default_range[0]),
                                                experiment.get('kmax', default_range[1]))
        params = {key: experiment[key] for key in ('eps', 'omega', 'k', 'N', 'C0') if key in experiment}
        mode = experiment.get('mode', 'converge')
        return ExperimentSpec(mode, experiment['problem'], tuple(methods), tuple(float(h) for h in steps),
                              float(experiment.get('T', 1000.0 if mode == 'energy' else 1.0)), params)

    def _run_experiment(self, experiment):
        """
        Runs a single experiment of the scheme
        :param dict experiment: the experiment entry
        :return: the number of slopes off their expected value
        :rtype: int
        """
        name = experiment['name']
        spec = self._spec_of(experiment)
        config = RunConfiguration({'outputPath': self._output_file(experiment.get('out')),
                                   'svgPath': self._output_file(experiment.get('svg')),
                                   'errorMode': experiment.get('errorMode'), 'predictor': experiment.get('predictor'),
                                   'energyKind': experiment.get('energy'), 'fuse': experiment.get('fuse')})
        runner = ExperimentRunner(spec, config)
        print(f'Running {name}: {spec.mode} {spec.problem} {",".join(spec.methods)}')
        if spec.mode == 'energy':
            rows, samples = runner.energy_study()
            if config.outputPath:
                config.write_output(EnergySample.to_csv(samples), config.outputPath)
            for row in rows:
                print(f'{name}: {row.method} h={row.h} max energy error {row.max_energy_error:.3e}')
            return 0
        if spec.mode != 'converge':
            rows = runner.bench() if spec.mode == 'bench' else runner.run()
            config.write_output(ResultRow.to_csv(rows), config.outputPath)
            return 0

        EsavLogger().mute()
        try:
            rows, fits = runner.convergence_study()
        finally:
            EsavLogger().unmute()
            EsavLogger().flush_messages()
        if config.outputPath:
            config.write_output(ResultRow.to_csv(rows), config.outputPath)
        if config.svgPath:
            plot = SvgPlot(f'{name}: global error', 'h', 'global error', log_x=True)
            for method in spec.methods:
                method_rows = [row for row in rows if row.method == method]
                plot.add_series(method, [row.h for row in method_rows], [row.global_error for row in method_rows])
            config.write_output(plot.to_svg(), config.svgPath)

        mismatches = 0
        for method, expected in (experiment.get('expectedSlopes') or {}).items():
            fit = fits.get(method)
            if fit is None or fit.saturated or abs(fit.slope - expected) > self.slope_tolerance:
                observed = 'none' if fit is None or fit.saturated else f'{fit.slope:.3f}'
                print(f'{name}: {method} order {observed}, expected {expected}', file=stderr)
                mismatches += 1
            else:
                print(f'{name}: {method} order {fit.slope:.3f} (expected {expected})')
        return mismatches

    def run_scheme(self):
        """
        This is the main method to run a scheme file
        :return: The number of unexpected convergence orders plus the number of experiments that failed
        :rtype: int
        """
        self.check_fields_validity(self.scheme, 'scheme', {'experiments': [1, list]})
        experiments = self.scheme['experiments']
        for experiment in experiments:
            if not isinstance(experiment, dict):
                self.syntax_error('every experiment must be a map')
            self.check_fields_validity(experiment, f'experiment {experiment.get("name", "")}', self.experiment_keys,
                                       self.allowed_values)

        start = time.time()
        global_res = 0
        for experiment in experiments:
            try:
                global_res += self._run_experiment(experiment)
            except NumericalError as e:
                print(f'{experiment["name"]}: numerical failure: {e}', file=stderr)
                global_res += 1
        print(f'Total time: {(time.time() - start):6.2f} seconds')
        return global_res
