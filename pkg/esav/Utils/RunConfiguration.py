#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
import sys


class RunConfiguration(dict):
    """
    The settings of one experiment run, with defaults, readable as attributes
    """

    def __init__(self, run_config_dict=None):
        default_run_config = {'outputPath': None, 'svgPath': None, 'errorMode': 'final', 'predictor': None,
                              'energyKind': 'modified', 'fuse': False,
                              'fixedPointTol': 1e-10, 'fixedPointMaxIter': 1000, 'quadraturePoints': 3,
                              'refTol': 1e-12, 'reference': 'auto', 'benchRepeats': 3, 'energySamples': 100000}

        super().__init__(default_run_config)
        if run_config_dict is not None:
            self.update({key: val for key, val in run_config_dict.items() if val is not None})

    def __getattr__(self, name):
        try:
            return super().__getitem__(name)
        except KeyError:
            raise AttributeError(name) from None

    @staticmethod
    def write_output(output, path=None):
        """
        Writes the output to the given file, or to stdout
        :param str output: the text to write
        :param str path: the file to write, or None for stdout
        :return: True if the output was written
        :rtype: bool
        """
        if path is None:
            sys.stdout.write(output)
            return True
        try:
            with open(path, 'w', newline='\n') as f:
                f.write(output)
            print(f'wrote output to: {path}')
        except OSError as e:
            print(f'{type(e).__name__}: cannot write output to {path}', file=sys.stderr)
            return False
        return True
