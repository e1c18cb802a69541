#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
from dataclasses import dataclass
from typing import Callable
import numpy as np

from esav.Utils.EsavErrors import InvalidShiftError, SingularPotentialError


@dataclass(frozen=True, eq=False)
class GeneralSavState:
    """
    A state (u, s) of a general SAV-augmented system at time t
    """
    u: np.ndarray
    s: float
    t: float = 0.0

    def flat(self):
        return self.u.copy()


@dataclass(frozen=True, eq=False)
class GeneralSavSystem:
    """
    A first-order system u' = R u + J grad V(u) with a constant linear part R = J M.
    The SAV form replaces J grad V(u) by J g(u, s) with g(u, s) = grad V(u) s / sqrt(V(u) + C0)
    """
    R: np.ndarray
    Jmat: np.ndarray
    potential: Callable[[np.ndarray], float]
    grad_potential: Callable[[np.ndarray], np.ndarray]
    C0: float
    name: str = 'general'

    skew_tolerance = 1e-12

    def __post_init__(self):
        object.__setattr__(self, 'R', np.asarray(self.R, dtype=float))
        object.__setattr__(self, 'Jmat', np.asarray(self.Jmat, dtype=float))
        if self.R.shape != self.Jmat.shape or self.R.shape[0] != self.R.shape[1]:
            raise ValueError(f'R {self.R.shape} and J {self.Jmat.shape} must be square of equal size')
        if np.linalg.norm(self.Jmat + self.Jmat.T) > self.skew_tolerance * max(np.linalg.norm(self.Jmat), 1.0):
            raise ValueError('J must be skew-symmetric')
        # M = J^{-1} R is the matrix of the quadratic part of the energy
        object.__setattr__(self, 'Mmat', np.linalg.solve(self.Jmat, self.R))

    @classmethod
    def canonical_structure(cls, half_dim):
        """
        :param int half_dim: d
        :return: the canonical structure matrix [[0, I], [-I, 0]] of size 2d
        :rtype: np.ndarray
        """
        eye = np.eye(half_dim)
        zero = np.zeros((half_dim, half_dim))
        return np.block([[zero, eye], [-eye, zero]])

    @classmethod
    def from_osde(cls, problem):
        """
        The oscillatory system q'' + A q / eps**2 = F(q) written as z' = J M z + J grad_z V with z = (q, p)
        :param OsdeProblem problem: the oscillatory problem
        :rtype: GeneralSavSystem
        """
        dim = problem.dim
        jmat = cls.canonical_structure(dim)
        mmat = np.block([[problem.A / problem.eps ** 2, np.zeros((dim, dim))], [np.zeros((dim, dim)), np.eye(dim)]])
        return cls(jmat @ mmat, jmat,
                   lambda z: problem.potential(z[:dim]),
                   lambda z: np.concatenate((problem.grad_potential(z[:dim]), np.zeros(dim))),
                   problem.C0, problem.name)

    @property
    def dim(self):
        return self.R.shape[0]

    def lift_state(self, u0):
        """
        :param np.ndarray u0: the initial state
        :return: the state (u0, sqrt(V(u0) + C0)) at t = 0
        :rtype: GeneralSavState
        """
        u0 = np.array(u0, dtype=float)
        radicand = self.potential(u0) + self.C0
        if not radicand > 0:
            raise InvalidShiftError(f'V(u0) + C0 = {radicand} is not positive')
        return GeneralSavState(u0, float(np.sqrt(radicand)), 0.0)

    def scaled_gradient(self, u, t=None):
        """
        :param np.ndarray u: the point
        :param float t: the time (for diagnostics only)
        :return: grad V(u) / sqrt(V(u) + C0)
        :rtype: np.ndarray
        """
        radicand = self.potential(u) + self.C0
        if not radicand > 0:
            raise SingularPotentialError(f'V(u) + C0 = {radicand} is not positive', t, u)
        return self.grad_potential(u) / np.sqrt(radicand)

    def g(self, u, s):
        """
        :return: the SAV-scaled nonlinearity grad V(u) s / sqrt(V(u) + C0)
        :rtype: np.ndarray
        """
        return self.scaled_gradient(u) * s

    def modified_energy(self, state):
        """
        :param GeneralSavState state: the state
        :return: 1/2 u^T M u + s**2 - C0
        :rtype: float
        """
        return 0.5 * (state.u @ (self.Mmat @ state.u)) + state.s ** 2 - self.C0

    def original_energy(self, u):
        return 0.5 * (u @ (self.Mmat @ u)) + self.potential(u)

    def rhs(self, u):
        """
        :param np.ndarray u: the state
        :return: R u + J grad V(u)
        :rtype: np.ndarray
        """
        return self.R @ u + self.Jmat @ self.grad_potential(u)
