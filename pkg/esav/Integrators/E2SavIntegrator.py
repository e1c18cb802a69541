#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
from dataclasses import dataclass
import numpy as np

from esav.CoreDS.MatrixFunctions import MatrixFunctions
from esav.Problems.OsdeProblem import OsdeState
from esav.Problems.GeneralSavSystem import GeneralSavState
from esav.Utils.EsavErrors import SingularPotentialError


class E2Sav:
    """
    The linearly implicit energy-preserving exponential SAV scheme for q'' + A q / eps**2 = F(q).
    With the SAV s = sqrt(V(q) + C0) the force is written F(q) s / sqrt(V(q) + C0), evaluated at a
    midpoint predictor, so the step reduces to one rank-1 linear solve while
    1/2 p^T p + 1/(2 eps**2) q^T A q + s**2 - C0 is conserved exactly
    """

    predictor_modes = ('linear', 'corrected')

    @staticmethod
    def _check_mode(mode):
        if mode not in E2Sav.predictor_modes:
            raise ValueError(f'unknown predictor mode {mode}, expected one of {E2Sav.predictor_modes}')

    @staticmethod
    def _scaled_force(problem, q, t=None):
        radicand = problem.potential(q) + problem.C0
        if not radicand > 0:
            raise SingularPotentialError(f'V(q) + C0 = {radicand} is not positive', t, q)
        return problem.force(q) / np.sqrt(radicand)

    @staticmethod
    def lift_state(q0, p0, problem):
        return problem.lift_state(q0, p0)

    @staticmethod
    def predict_midpoint(state, kernel, mode, problem):
        """
        The midpoint predictor of the position: the first block of 1/2 (I + exp(hR)) z, and for the
        corrected mode additionally h**2/2 g1(h Omega) F(q) s / sqrt(V(q) + C0)
        :param OsdeState state: the current state
        :param OscillatorKernel kernel: the kernel of the problem for the current step size
        :param str mode: 'linear' or 'corrected'
        :param OsdeProblem problem: the problem
        :return: the predicted position
        :rtype: np.ndarray
        """
        E2Sav._check_mode(mode)
        q_tilde = 0.5 * (state.q + kernel.cosM @ state.q + kernel.h * (kernel.sincM @ state.p))
        if mode == 'corrected':
            scaled = E2Sav._scaled_force(problem, state.q, state.t)
            q_tilde = q_tilde + 0.5 * kernel.h ** 2 * (kernel.g1M @ scaled) * state.s
        return q_tilde

    @staticmethod
    def step(state, problem, kernel, mode='linear', predictor=None):
        """
        One step of the scheme.
        The position solves (I + gamma w^T) q' = l with w = F(q~)/sqrt(V(q~) + C0) and
        gamma = h**2/4 g1 w, then s and p follow explicitly
        :param OsdeState state: the current state
        :param OsdeProblem problem: the problem
        :param OscillatorKernel kernel: the kernel for the step size to take
        :param str mode: predictor mode
        :param np.ndarray predictor: overrides the predicted midpoint (the energy identity holds for any predictor)
        :return: the state at t + h
        :rtype: OsdeState
        """
        h = kernel.h
        q_tilde = E2Sav.predict_midpoint(state, kernel, mode, problem) if predictor is None else predictor
        scaled = E2Sav._scaled_force(problem, q_tilde, state.t)
        g1_scaled = kernel.g1M @ scaled
        gamma = 0.25 * h * h * g1_scaled
        q_lin, p_lin = kernel.propagate(state.q, state.p)
        rhs = q_lin + h * h * g1_scaled * state.s + gamma * (scaled @ state.q)
        q_new = MatrixFunctions.rank1_solve(gamma, scaled, rhs)
        s_new = state.s - 0.5 * (scaled @ (q_new - state.q))
        s_half = 0.5 * (state.s + s_new)
        p_new = p_lin + h * (kernel.sincM @ scaled) * s_half
        return OsdeState(q_new, p_new, float(s_new), state.t + h)

    @staticmethod
    def modified_energy(state, problem):
        return problem.modified_energy(state)

    @staticmethod
    def original_energy(q, p, problem):
        return problem.original_energy(q, p)


@dataclass(frozen=True, eq=False)
class GeneralPropagator:
    """
    exp(hR) and h phi(hR) J of a general SAV system, computed once per step size
    """
    h: float
    expR: np.ndarray
    phiJ: np.ndarray

    @classmethod
    def build(cls, system, h):
        if not h > 0:
            raise ValueError(f'step size must be positive, got {h}')
        hr = h * system.R
        return cls(h, MatrixFunctions.dense_exp(hr), h * MatrixFunctions.dense_phi(hr) @ system.Jmat)


class GeneralE2Sav:
    """
    The same scheme for u' = R u + J grad V(u) with a general constant R, using dense exp(hR) and phi(hR)
    """

    @staticmethod
    def predict_midpoint(state, system, propagator, mode='corrected'):
        """
        :return: 1/2 (I + exp(hR)) u, plus h/2 phi(hR) J g(u, s) in corrected mode
        :rtype: np.ndarray
        """
        E2Sav._check_mode(mode)
        u_tilde = 0.5 * (state.u + propagator.expR @ state.u)
        if mode == 'corrected':
            u_tilde = u_tilde + 0.5 * (propagator.phiJ @ system.scaled_gradient(state.u, state.t)) * state.s
        return u_tilde

    @staticmethod
    def step(state, system, propagator, mode='corrected', predictor=None):
        """
        u' = exp(hR) u + h phi(hR) J w s_half and s' = s + w^T (u' - u)/2 with w = grad V(u~)/sqrt(V(u~) + C0).
        Substituting s_half = s + w^T (u' - u)/4 gives (I - c w^T/4) u' = exp(hR) u + c s - c w^T u/4
        with c = h phi(hR) J w
        :param GeneralSavState state: the current state
        :param GeneralSavSystem system: the system
        :param GeneralPropagator propagator: exp and phi of hR for the step size to take
        :param str mode: predictor mode
        :param np.ndarray predictor: overrides the predicted midpoint
        :return: the state at t + h
        :rtype: GeneralSavState
        """
        u_tilde = GeneralE2Sav.predict_midpoint(state, system, propagator, mode) if predictor is None else predictor
        scaled = system.scaled_gradient(u_tilde, state.t)
        coupling = propagator.phiJ @ scaled
        gamma = -0.25 * coupling
        rhs = propagator.expR @ state.u + coupling * state.s + gamma * (scaled @ state.u)
        u_new = MatrixFunctions.rank1_solve(gamma, scaled, rhs)
        s_new = state.s + 0.5 * (scaled @ (u_new - state.u))
        return GeneralSavState(u_new, float(s_new), state.t + propagator.h)


def e2sav_step(state, problem, kernel, mode='linear'):
    return E2Sav.step(state, problem, kernel, mode)


def e2sav_step_general(state, system, h, mode='corrected', propagator=None):
    if propagator is None or propagator.h != h:
        propagator = GeneralPropagator.build(system, h)
    return GeneralE2Sav.step(state, system, propagator, mode)
