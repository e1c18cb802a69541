#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
import numpy as np

from esav.Integrators.FixedPointSolver import FixedPointConfig, FixedPointSolver
from esav.Integrators.QuadratureRule import QuadratureRule


class Baselines:
    """
    The comparison integrators: the average vector field method and the implicit trapezoidal rule,
    both solved by fixed-point iteration from an explicit Euler guess, and the Boris pusher
    """

    @staticmethod
    def avf_step(rhs, y, h, quad=None, config=FixedPointConfig()):
        """
        y' = y + h * int_0^1 f((1 - xi) y + xi y') d xi, the integral replaced by the quadrature rule
        :param rhs: the vector field f
        :param np.ndarray y: the current state
        :param float h: the step size
        :param QuadratureRule quad: the quadrature rule (3-point Gauss-Legendre by default)
        :param FixedPointConfig config: fixed-point settings
        :rtype: FixedPointResult
        """
        if quad is None:
            quad = QuadratureRule.gauss_legendre(3)

        def avf_map(y_new):
            return y + h * quad.integrate(lambda xi: rhs((1.0 - xi) * y + xi * y_new))

        return FixedPointSolver.solve(avf_map, y + h * rhs(y), config)

    @staticmethod
    def ito2_step(rhs, y, h, config=FixedPointConfig()):
        """
        y' = y + h/2 (f(y) + f(y'))
        :rtype: FixedPointResult
        """
        slope = rhs(y)
        return FixedPointSolver.solve(lambda y_new: y + 0.5 * h * (slope + rhs(y_new)), y + h * slope, config)

    @staticmethod
    def boris_step(x, v, t, problem, h):
        """
        The velocity-synchronized Boris step: half electric kick, magnetic rotation, half kick, drift
        :param np.ndarray x: position
        :param np.ndarray v: velocity
        :param float t: time
        :param CpdProblem problem: the problem
        :param float h: the step size
        :return: the new position, velocity and time
        :rtype: tuple(np.ndarray, np.ndarray, float)
        """
        half_kick = 0.5 * h * problem.electric(x)
        v_minus = v + half_kick
        t_vec = 0.5 * h * problem.magnetic(x)
        s_vec = 2.0 * t_vec / (1.0 + t_vec @ t_vec)
        v_prime = v_minus + np.cross(v_minus, t_vec)
        v_plus = v_minus + np.cross(v_prime, s_vec)
        v_new = v_plus + half_kick
        return x + h * v_new, v_new, t + h


def avf_step(rhs, y, h, quad=None, config=FixedPointConfig()):
    return Baselines.avf_step(rhs, y, h, quad, config)


def ito2_step(rhs, y, h, config=FixedPointConfig()):
    return Baselines.ito2_step(rhs, y, h, config)


def boris_step(x, v, t, problem, h):
    return Baselines.boris_step(x, v, t, problem, h)
