#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
from dataclasses import dataclass
import numpy as np

from esav.Utils.EsavErrors import DivergenceError


@dataclass(frozen=True)
class FixedPointConfig:
    tol: float = 1e-10
    max_iter: int = 1000

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f'fixed-point tolerance must be positive, got {self.tol}')
        if self.max_iter < 1:
            raise ValueError(f'max_iter must be a positive integer, got {self.max_iter}')


@dataclass(frozen=True, eq=False)
class FixedPointResult:
    value: np.ndarray
    iterations: int
    converged: bool


class FixedPointSolver:
    """
    Plain fixed-point iteration x <- map(x), stopping when successive iterates differ by at most tol.
    Hitting max_iter is reported through the result, not raised
    """

    @staticmethod
    def solve(func, guess, config=FixedPointConfig()):
        """
        :param func: the map, a function of a vector
        :param np.ndarray guess: the starting iterate
        :param FixedPointConfig config: tolerance and iteration cap
        :return: the last iterate, the number of iterations and whether the tolerance was met
        :rtype: FixedPointResult
        :raises DivergenceError: if an iterate is not finite
        """
        current = np.asarray(guess, dtype=float)
        for iteration in range(1, config.max_iter + 1):
            following = np.asarray(func(current), dtype=float)
            if not np.all(np.isfinite(following)):
                raise DivergenceError(f'fixed-point iteration diverged after {iteration} iterations')
            if np.linalg.norm(following - current) <= config.tol:
                return FixedPointResult(following, iteration, True)
            current = following
        return FixedPointResult(current, config.max_iter, False)


def fixed_point_solve(func, guess, config=FixedPointConfig()):
    return FixedPointSolver.solve(func, guess, config)
