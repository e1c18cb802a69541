#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
from dataclasses import dataclass
from typing import Callable
import numpy as np

from esav.Utils.EsavErrors import InvalidShiftError


@dataclass(frozen=True, eq=False)
class CpdState:
    """
    A state (x, v, r) of the SAV-augmented charged-particle system at time t
    """
    x: np.ndarray
    v: np.ndarray
    r: float
    t: float = 0.0

    def flat(self):
        return np.concatenate((self.x, self.v))


@dataclass(frozen=True, eq=False)
class CpdProblem:
    """
    Charged-particle dynamics x'' = x' x B(x) + E(x) in R^3, with E = -grad U and a divergence-free
    magnetic field B. The auxiliary variable is r = sqrt(U(x) + C0), and c0 bounds U from below
    """
    magnetic: Callable[[np.ndarray], np.ndarray]
    electric: Callable[[np.ndarray], np.ndarray]
    potential: Callable[[np.ndarray], float]
    C0: float
    c0: float
    eps: float = 1.0
    name: str = 'cpd'

    dim = 3

    def __post_init__(self):
        if not self.C0 > self.c0:
            raise ValueError(f'the SAV shift C0={self.C0} must exceed the potential bound c0={self.c0}')

    def lift_state(self, x0, v0):
        """
        :param np.ndarray x0: initial position
        :param np.ndarray v0: initial velocity
        :return: the state (x0, v0, sqrt(U(x0)+C0)) at t = 0
        :rtype: CpdState
        """
        x0 = np.array(x0, dtype=float)
        v0 = np.array(v0, dtype=float)
        if x0.shape != (3,) or v0.shape != (3,):
            raise ValueError('charged-particle states live in R^3')
        radicand = self.potential(x0) + self.C0
        if not radicand > 0:
            raise InvalidShiftError(f'U(x0) + C0 = {radicand} is not positive')
        return CpdState(x0, v0, float(np.sqrt(radicand)), 0.0)

    def modified_energy(self, state):
        """
        :param CpdState state: the state
        :return: 1/2 |v|^2 + r^2 - C0
        :rtype: float
        """
        return 0.5 * (state.v @ state.v) + state.r ** 2 - self.C0

    def original_energy(self, x, v):
        """
        :return: 1/2 |v|^2 + U(x)
        :rtype: float
        """
        return 0.5 * (v @ v) + self.potential(x)

    def rhs(self, y):
        """
        :param np.ndarray y: the first-order state (x, v)
        :return: (v, v x B(x) + E(x))
        :rtype: np.ndarray
        """
        x, v = y[:3], y[3:]
        return np.concatenate((v, np.cross(v, self.magnetic(x)) + self.electric(x)))
