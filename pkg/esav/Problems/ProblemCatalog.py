#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
import numpy as np

from esav.Problems.OsdeProblem import OsdeProblem
from esav.Problems.GeneralSavSystem import GeneralSavSystem
from esav.Problems.CpdProblem import CpdProblem
from esav.Problems.ProblemInstance import ProblemInstance
from esav.Problems.JacobiElliptic import JacobiElliptic
from esav.Utils.EsavErrors import ModulusError


class ProblemCatalog:
    """
    The benchmark problems, addressable by tag.
    Each builder takes the problem parameters as keyword arguments; parameters a problem does not use are ignored
    """
    default_params = {
        'henon': {'eps': 1.0, 'C0': 100.0},
        'duffing': {'omega': 5.0, 'k': 0.07, 'C0': 100.0},
        'sine-gordon': {'N': 16, 'C0': 100.0},
        'cpd-constant': {'eps': 1.0, 'C0': 1.0},
        'cpd-general': {'eps': 1.0, 'C0': 1.0},
    }

    # the parameter swept by experiments on each problem
    swept_param = {'henon': 'eps', 'duffing': 'omega', 'sine-gordon': 'N', 'cpd-constant': 'eps',
                   'cpd-general': 'eps'}

    @staticmethod
    def tags():
        return list(ProblemCatalog.default_params)

    @staticmethod
    def build(tag, **params):
        """
        :param str tag: one of the problem tags
        :param params: problem parameters overriding the defaults (None values are ignored)
        :return: the problem instance
        :rtype: ProblemInstance
        """
        if tag not in ProblemCatalog.default_params:
            raise ValueError(f'unknown problem "{tag}". Valid problems: {", ".join(ProblemCatalog.tags())}')
        actual = dict(ProblemCatalog.default_params[tag])
        actual.update({key: val for key, val in params.items() if key in actual and val is not None})
        builder = {'henon': ProblemCatalog.henon_heiles, 'duffing': ProblemCatalog.duffing,
                   'sine-gordon': ProblemCatalog.sine_gordon, 'cpd-constant': ProblemCatalog.cpd_constant,
                   'cpd-general': ProblemCatalog.cpd_general}[tag]
        return builder(**actual)

    @staticmethod
    def henon_heiles(eps, C0=100.0):
        if not eps > 0:
            raise ValueError(f'eps must be positive, got {eps}')
        jmat = GeneralSavSystem.canonical_structure(2)
        half = np.diag([1.0, 0.0])
        zero = np.zeros((2, 2))
        rmat = jmat @ np.block([[half, zero], [zero, half]]) / eps

        def potential(u):
            q1, q2, _, p2 = u
            return 0.5 * (p2 ** 2 + q2 ** 2) + q1 ** 2 * q2 - q2 ** 3 / 3.0

        def grad_potential(u):
            q1, q2, _, p2 = u
            return np.array([2.0 * q1 * q2, q2 + q1 ** 2 - q2 ** 2, 0.0, p2])

        system = GeneralSavSystem(rmat, jmat, potential, grad_potential, C0, 'henon')
        return ProblemInstance('henon', system, np.full(4, 0.12), 'eps', eps)

    @staticmethod
    def duffing(omega, k, C0=100.0):
        """
        Duffing's equation q'' + (omega**2 + k**2) q = 2 k**2 q**3 with q(0) = 0, p(0) = omega.
        The exact solution is sn(omega t; k/omega), with the second argument the elliptic modulus
        """
        if not k < omega:
            raise ModulusError(f'Duffing needs k < omega, got k={k}, omega={omega}')
        if not k > 0:
            raise ValueError(f'k must be positive, got {k}')
        modulus = k / omega
        stiffness = np.array([[omega ** 2 + k ** 2]])

        def exact_solution(t):
            sn, cn, dn = JacobiElliptic.sn_cn_dn(omega * t, modulus)
            return np.array([sn, omega * cn * dn])

        # trajectories stay in |q| <= 1, where V >= -k**2/2
        problem = OsdeProblem(stiffness, 1.0, lambda q: 2.0 * k ** 2 * q ** 3, lambda q: -0.5 * k ** 2 * float(q @ q ** 3),
                              C0, 0.5 * k ** 2, name='duffing')
        return ProblemInstance('duffing', problem, [0.0, omega], 'omega', omega, exact_solution)

    @staticmethod
    def sine_gordon_matrix(N):
        """
        :param int N: number of grid points on the periodic interval [-1, 1]
        :return: the periodic second-difference matrix divided by dx**2, dx = 2/N
        :rtype: np.ndarray
        """
        dx = 2.0 / N
        stencil = 2.0 * np.eye(N) - np.roll(np.eye(N), 1, axis=1) - np.roll(np.eye(N), -1, axis=1)
        return stencil / dx ** 2

    @staticmethod
    def sine_gordon(N, C0=100.0):
        N = int(N)
        if N < 4 or N % 2:
            raise ValueError(f'N must be an even integer >= 4, got {N}')
        problem = OsdeProblem(ProblemCatalog.sine_gordon_matrix(N), 1.0, lambda u: -np.sin(u),
                              lambda u: -float(np.sum(np.cos(u))), C0, float(N), name='sine-gordon')
        grid = np.arange(1, N + 1)
        velocity = np.sqrt(N) * (0.01 + np.sin(2.0 * np.pi * grid / N))
        return ProblemInstance('sine-gordon', problem, np.concatenate((np.full(N, np.pi), velocity)), 'N', N)

    @staticmethod
    def _radial_potential(x):
        return 1.0 / (100.0 * np.hypot(x[0], x[1]))

    @staticmethod
    def _radial_field(x):
        rho = np.hypot(x[0], x[1])
        return np.array([x[0], x[1], 0.0]) / (100.0 * rho ** 3)

    _x0 = (0.7, 1.0, 0.1)
    _v0 = (0.9, 0.5, 0.4)

    @staticmethod
    def cpd_constant(eps, C0=1.0):
        if not eps > 0:
            raise ValueError(f'eps must be positive, got {eps}')
        field = np.array([0.0, 0.0, 1.0 / eps])
        problem = CpdProblem(lambda x: field, ProblemCatalog._radial_field, ProblemCatalog._radial_potential,
                             C0, 0.0, eps, 'cpd-constant')
        return ProblemInstance('cpd-constant', problem, ProblemCatalog._x0 + ProblemCatalog._v0, 'eps', eps)

    @staticmethod
    def cpd_general(eps, C0=1.0):
        """
        A position-dependent magnetic field B(x) = (0, 0, rho/eps), rho = |(x1, x2)|.
        It is the curl of the vector potential (-x2 rho, x1 rho, 0)/(3 eps), so div B = 0
        """
        if not eps > 0:
            raise ValueError(f'eps must be positive, got {eps}')
        problem = CpdProblem(lambda x: np.array([0.0, 0.0, np.hypot(x[0], x[1]) / eps]), ProblemCatalog._radial_field,
                             ProblemCatalog._radial_potential, C0, 0.0, eps, 'cpd-general')
        return ProblemInstance('cpd-general', problem, ProblemCatalog._x0 + ProblemCatalog._v0, 'eps', eps)

    @staticmethod
    def gradient_mismatch(func, grad, points, step=1e-6):
        """
        Compares an analytic gradient to central finite differences
        :param func: a scalar function of a vector
        :param grad: its claimed gradient
        :param points: iterable of evaluation points
        :param float step: the finite-difference step
        :return: the largest relative mismatch over the points
        :rtype: float
        """
        worst = 0.0
        for point in points:
            point = np.asarray(point, dtype=float)
            analytic = np.asarray(grad(point), dtype=float)
            numeric = np.empty_like(point)
            for i in range(point.size):
                shift = np.zeros_like(point)
                shift[i] = step
                numeric[i] = (func(point + shift) - func(point - shift)) / (2 * step)
            worst = max(worst, np.linalg.norm(analytic - numeric) / max(np.linalg.norm(analytic), 1.0))
        return worst
