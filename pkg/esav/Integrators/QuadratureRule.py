#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
from dataclasses import dataclass
from numpy.polynomial import legendre
import numpy as np

from esav.Utils.EsavErrors import QuadratureOrderError


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """
    A quadrature rule on [0, 1]
    """
    nodes: np.ndarray
    weights: np.ndarray

    max_points = 10

    @classmethod
    def gauss_legendre(cls, n):
        """
        :param int n: number of points, 1 <= n <= 10
        :return: the n-point Gauss-Legendre rule mapped to [0, 1], exact up to degree 2n-1
        :rtype: QuadratureRule
        """
        if not isinstance(n, (int, np.integer)) or not 1 <= n <= cls.max_points:
            raise QuadratureOrderError(f'Gauss-Legendre rules are available for 1..{cls.max_points} points, got {n}')
        nodes, weights = legendre.leggauss(int(n))
        return cls(0.5 * (nodes + 1.0), 0.5 * weights)

    def integrate(self, func):
        """
        :param func: a function on [0, 1], scalar or vector valued
        :return: the weighted sum of its values at the nodes
        """
        return sum(weight * np.asarray(func(node)) for node, weight in zip(self.nodes, self.weights))


def gauss_legendre(n):
    return QuadratureRule.gauss_legendre(n)
