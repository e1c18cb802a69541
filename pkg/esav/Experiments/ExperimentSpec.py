#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
from dataclasses import dataclass, field

from esav.Problems.ProblemCatalog import ProblemCatalog
from esav.Experiments.MethodRegistry import MethodRegistry


@dataclass(frozen=True)
class ExperimentSpec:
    """
    A declarative description of an experiment: which methods to run on which problem, with which step sizes
    """
    mode: str
    problem: str
    methods: tuple
    step_sizes: tuple
    T: float
    params: dict = field(default_factory=dict)

    modes = ('run', 'converge', 'energy', 'bench')

    def __post_init__(self):
        if self.mode not in self.modes:
            raise ValueError(f'unknown mode "{self.mode}". Valid modes: {", ".join(self.modes)}')
        if self.problem not in ProblemCatalog.tags():
            raise ValueError(f'unknown problem "{self.problem}". Valid problems: {", ".join(ProblemCatalog.tags())}')
        if not self.methods:
            raise ValueError('no method given')
        for method in self.methods:
            if method not in MethodRegistry.methods:
                raise ValueError(f'unknown method "{method}". Valid methods: {", ".join(MethodRegistry.methods)}')
        if not self.step_sizes or any(not h > 0 for h in self.step_sizes):
            raise ValueError('step sizes must be positive')
        if not self.T > 0:
            raise ValueError(f'final time must be positive, got {self.T}')
        if self.mode == 'converge' and len(self.step_sizes) < 3:
            raise ValueError('a convergence study needs at least 3 step sizes')

    @staticmethod
    def dyadic_steps(kmin, kmax):
        """
        :return: the step sizes 1/2^k for k = kmin..kmax, largest first
        :rtype: tuple
        """
        if kmin > kmax:
            raise ValueError(f'kmin={kmin} exceeds kmax={kmax}')
        return tuple(2.0 ** -k for k in range(kmin, kmax + 1))

    def build_problem(self):
        return ProblemCatalog.build(self.problem, **self.params)
