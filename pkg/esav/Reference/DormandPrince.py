#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
from dataclasses import dataclass
import numpy as np

from esav.Utils.EsavErrors import DomainError, StepSizeUnderflowError


@dataclass(frozen=True, eq=False)
class ReferenceTrajectory:
    times: np.ndarray
    states: np.ndarray
    atol: float
    rtol: float
    accepted_steps: int = 0
    rejected_steps: int = 0

    def final_state(self):
        return self.states[-1]

    def state_at(self, index):
        return self.states[index]


class DormandPrince:
    """
    The Dormand-Prince 5(4) embedded Runge-Kutta pair with PI step-size control.
    Steps are clipped so that the integration lands exactly on each requested sample time
    """

    nodes = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
    tableau = [[],
               [1 / 5],
               [3 / 40, 9 / 40],
               [44 / 45, -56 / 15, 32 / 9],
               [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
               [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
               [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]]
    weights = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
    # difference between the fifth and fourth order weights
    error_weights = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])

    min_step = 1e-14
    safety = 0.9
    min_factor = 0.2
    max_factor = 10.0
    pi_beta = 0.04
    pi_alpha = 0.2 - 0.75 * 0.04

    @staticmethod
    def _stages(system, t, y, h):
        slopes = np.empty((7, y.size))
        for stage in range(7):
            argument = y + h * (np.dot(DormandPrince.tableau[stage], slopes[:stage]) if stage else 0.0)
            slopes[stage] = system.rhs(t + DormandPrince.nodes[stage] * h, argument)
            if not np.all(np.isfinite(slopes[stage])):
                raise DomainError(f'right-hand side is not finite at t={t + DormandPrince.nodes[stage] * h}')
        return slopes

    @staticmethod
    def step(system, t, y, h):
        """
        :return: the fifth-order solution after one step and the embedded error estimate
        :rtype: tuple(np.ndarray, np.ndarray)
        """
        slopes = DormandPrince._stages(system, t, y, h)
        return y + h * (DormandPrince.weights @ slopes), h * (DormandPrince.error_weights @ slopes)

    @staticmethod
    def _initial_step(system, t, y, atol, rtol):
        scale = atol + rtol * np.abs(y)
        slope = system.rhs(t, y)
        d0 = np.sqrt(np.mean((y / scale) ** 2))
        d1 = np.sqrt(np.mean((slope / scale) ** 2))
        h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
        d2 = np.sqrt(np.mean(((system.rhs(t + h0, y + h0 * slope) - slope) / scale) ** 2)) / h0
        largest = max(d1, d2)
        h1 = max(1e-6, 1e-3 * h0) if largest <= 1e-15 else (0.01 / largest) ** 0.2
        return min(100 * h0, h1)

    @staticmethod
    def adapt_integrate(system, y0, sample_times, atol=1e-12, rtol=1e-12, initial_step=None, initial_step_factor=1.0):
        """
        :param GeneralFirstOrderSystem system: the system
        :param np.ndarray y0: the state at t = 0
        :param sample_times: ascending times >= 0 at which to report the state (0 is always reported)
        :param float atol: absolute tolerance
        :param float rtol: relative tolerance
        :param float initial_step: first trial step (estimated when None)
        :param float initial_step_factor: multiplies the first trial step
        :return: the states at 0 and at every sample time
        :rtype: ReferenceTrajectory
        :raises StepSizeUnderflowError: if the step size falls below min_step
        :raises DomainError: if the right-hand side is not finite
        """
        if not atol > 0 or not rtol > 0:
            raise ValueError('tolerances must be positive')
        times = np.asarray(sample_times, dtype=float)
        if times.size and (times[0] < 0 or np.any(np.diff(times) <= 0)):
            raise ValueError('sample times must be strictly increasing and non-negative')
        if not times.size or times[0] > 0:
            times = np.concatenate(([0.0], times))
        y = np.array(y0, dtype=float)
        t = 0.0
        h = DormandPrince._initial_step(system, t, y, atol, rtol) if initial_step is None else initial_step
        h *= initial_step_factor
        previous_error = 1e-4
        accepted = rejected = 0
        states = [y.copy()]
        for target in times[1:]:
            while target - t > DormandPrince.min_step * max(1.0, abs(target)):
                clipped = h >= target - t
                trial = target - t if clipped else h
                y_new, estimate = DormandPrince.step(system, t, y, trial)
                scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
                error = float(np.max(np.abs(estimate) / scale))
                if not np.isfinite(error):
                    raise DomainError(f'error estimate is not finite at t={t}')
                if error <= 1.0:
                    accepted += 1
                    t = target if clipped else t + trial
                    y = y_new
                    factor = DormandPrince.safety * max(error, 1e-10) ** -DormandPrince.pi_alpha * \
                        previous_error ** DormandPrince.pi_beta
                    previous_error = max(error, 1e-4)
                    if not clipped:
                        h = trial * min(DormandPrince.max_factor, max(DormandPrince.min_factor, factor))
                else:
                    rejected += 1
                    h = trial * max(DormandPrince.min_factor, DormandPrince.safety * error ** -0.2)
                if h < DormandPrince.min_step:
                    raise StepSizeUnderflowError(f'step size {h:.3e} underflow at t={t}: stiff or singular problem',
                                                 t)
            t = target
            states.append(y.copy())
        return ReferenceTrajectory(times, np.array(states), atol, rtol, accepted, rejected)

    @staticmethod
    def fixed_step_integrate(system, y0, t_end, n_steps):
        """
        Integrates with n_steps equal steps and no error control
        :return: the state at t_end
        :rtype: np.ndarray
        """
        y = np.array(y0, dtype=float)
        h = t_end / n_steps
        for index in range(n_steps):
            y, _ = DormandPrince.step(system, index * h, y, h)
        return y


def adapt_integrate(system, y0, sample_times, atol=1e-12, rtol=1e-12):
    return DormandPrince.adapt_integrate(system, y0, sample_times, atol, rtol)
