#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
from dataclasses import dataclass
from typing import Callable, Optional, Union
import numpy as np

from esav.Problems.OsdeProblem import OsdeProblem
from esav.Problems.GeneralSavSystem import GeneralSavSystem
from esav.Problems.CpdProblem import CpdProblem


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """
    A benchmark problem with its initial data.
    Every system is also viewed as a first-order system y' = f(y), y = (xi, eta), whose first half is the
    position-like part and second half the velocity-like part; global errors are measured on that split.
    """
    tag: str
    system: Union[OsdeProblem, GeneralSavSystem, CpdProblem]
    y0: np.ndarray
    param_name: str
    param_value: float
    exact_solution: Optional[Callable[[float], np.ndarray]] = None

    def __post_init__(self):
        object.__setattr__(self, 'y0', np.array(self.y0, dtype=float))
        if not np.all(np.isfinite(self.y0)):
            raise ValueError(f'{self.tag}: initial data must be finite')
        if self.y0.size % 2:
            raise ValueError(f'{self.tag}: the first-order state must have even length')

    @property
    def kind(self):
        if isinstance(self.system, OsdeProblem):
            return 'osde'
        if isinstance(self.system, CpdProblem):
            return 'cpd'
        return 'general'

    @property
    def C0(self):
        return self.system.C0

    @property
    def half_dim(self):
        return self.y0.size // 2

    def split(self, y):
        """
        :param np.ndarray y: a first-order state
        :return: the position-like and velocity-like halves
        :rtype: tuple(np.ndarray, np.ndarray)
        """
        return y[:self.half_dim], y[self.half_dim:]

    def rhs(self, y):
        return self.system.rhs(y)

    def original_energy(self, y):
        """
        :param np.ndarray y: a first-order state
        :return: the original (non-SAV) energy of the state
        :rtype: float
        """
        if self.kind == 'general':
            return self.system.original_energy(y)
        return self.system.original_energy(*self.split(y))

    def lift(self):
        """
        :return: the SAV-augmented initial state
        """
        if self.kind == 'general':
            return self.system.lift_state(self.y0)
        return self.system.lift_state(*self.split(self.y0))
