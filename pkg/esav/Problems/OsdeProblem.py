#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
from dataclasses import dataclass
from typing import Callable, Optional
import numpy as np

from esav.CoreDS.SpectralDecomp import SpectralDecomp
from esav.Utils.EsavErrors import InvalidShiftError


@dataclass(frozen=True, eq=False)
class OsdeState:
    """
    A state (q, p, s) of the SAV-augmented oscillatory system at time t
    """
    q: np.ndarray
    p: np.ndarray
    s: float
    t: float = 0.0

    def flat(self):
        """
        :return: the first-order state (q, p), without the auxiliary variable
        :rtype: np.ndarray
        """
        return np.concatenate((self.q, self.p))


@dataclass(frozen=True, eq=False)
class OsdeProblem:
    """
    The oscillatory second-order system q'' + (1/eps**2) A q = F(q) with F = -grad V.
    C0 is the shift of the scalar auxiliary variable s = sqrt(V(q) + C0), and c0 is the stated
    lower bound V >= -c0 on the region the trajectories visit
    """
    A: np.ndarray
    eps: float
    force: Callable[[np.ndarray], np.ndarray]
    potential: Callable[[np.ndarray], float]
    C0: float
    c0: float
    grad_potential: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = 'osde'

    def __post_init__(self):
        object.__setattr__(self, 'A', SpectralDecomp.check_symmetric(np.atleast_2d(self.A)))
        if not 0 < self.eps <= 1:
            raise ValueError(f'eps must lie in (0, 1], got {self.eps}')
        if not self.C0 > self.c0:
            raise ValueError(f'the SAV shift C0={self.C0} must exceed the potential bound c0={self.c0}')
        if self.grad_potential is None:
            object.__setattr__(self, 'grad_potential', lambda q: -self.force(q))

    @property
    def dim(self):
        return self.A.shape[0]

    def lift_state(self, q0, p0):
        """
        :param np.ndarray q0: initial position
        :param np.ndarray p0: initial velocity
        :return: the state (q0, p0, sqrt(V(q0)+C0)) at t = 0
        :rtype: OsdeState
        :raises InvalidShiftError: if V(q0) + C0 <= 0
        """
        q0 = np.array(q0, dtype=float)
        p0 = np.array(p0, dtype=float)
        radicand = self.potential(q0) + self.C0
        if not radicand > 0:
            raise InvalidShiftError(f'V(q0) + C0 = {radicand} is not positive')
        return OsdeState(q0, p0, float(np.sqrt(radicand)), 0.0)

    def quadratic_energy(self, q, p):
        return 0.5 * (p @ p) + 0.5 * (q @ (self.A @ q)) / self.eps ** 2

    def modified_energy(self, state):
        """
        :param OsdeState state: the state
        :return: 1/2 p^T p + 1/(2 eps**2) q^T A q + s**2 - C0
        :rtype: float
        """
        return self.quadratic_energy(state.q, state.p) + state.s ** 2 - self.C0

    def original_energy(self, q, p):
        """
        :param np.ndarray q: position
        :param np.ndarray p: velocity
        :return: 1/2 p^T p + 1/(2 eps**2) q^T A q + V(q)
        :rtype: float
        """
        return self.quadratic_energy(q, p) + self.potential(q)

    def rhs(self, y):
        """
        :param np.ndarray y: the first-order state (q, p)
        :return: (p, -A q / eps**2 + F(q))
        :rtype: np.ndarray
        """
        q, p = y[:self.dim], y[self.dim:]
        return np.concatenate((p, -(self.A @ q) / self.eps ** 2 + self.force(q)))
