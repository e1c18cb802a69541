#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
from dataclasses import dataclass
from typing import Callable
import numpy as np


@dataclass(frozen=True, eq=False)
class GeneralFirstOrderSystem:
    """
    y' = rhs(t, y) in R^dim
    """
    dim: int
    rhs: Callable[[float, np.ndarray], np.ndarray]

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f'dimension must be positive, got {self.dim}')

    @classmethod
    def as_first_order(cls, instance):
        """
        The problem without its auxiliary variable: (q, p) for oscillatory problems, (x, v) for
        charged particles and u itself for general systems
        :param ProblemInstance instance: the problem
        :rtype: GeneralFirstOrderSystem
        """
        return cls(instance.y0.size, lambda t, y: instance.rhs(y))


def as_first_order(instance):
    return GeneralFirstOrderSystem.as_first_order(instance)
