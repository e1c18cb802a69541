#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
from dataclasses import dataclass, replace
import numpy as np

from esav.CoreDS.MatrixFunctions import MatrixFunctions
from esav.Problems.CpdProblem import CpdState
from esav.Utils.EsavErrors import NumericalError, SingularPotentialError, StageError


@dataclass(frozen=True, eq=False)
class PhiNLCoefficients:
    """
    The coefficients of the explicit form of the linearly implicit SAV subflow, for the scaled
    field e = E(x^)/sqrt(U(x^) + C0) at the predicted midpoint x^
    """
    A_n: np.ndarray
    B_n: np.ndarray
    a_n: float
    b_n: float
    c_n: float
    scaledE: np.ndarray

    @classmethod
    def from_field(cls, scaled_e, h):
        outer = np.outer(scaled_e, scaled_e)
        a_n = 1.0 + h * h * (scaled_e @ scaled_e) / 8.0
        a_mat = np.eye(3) - (h * h / (8.0 * a_n)) * outer
        b_mat = np.eye(3) - (h * h / 4.0) * (outer @ a_mat)
        b_n = 1.0 - (h * h / 4.0) * (scaled_e @ (a_mat @ scaled_e))
        return cls(a_mat, b_mat, float(a_n), float(b_n), float(0.5 * (b_n + 1.0)), scaled_e)

    def advance(self, x, v, r, h):
        """
        :return: the explicit update (x', v', r') of the subflow
        :rtype: tuple(np.ndarray, np.ndarray, float)
        """
        e = self.scaledE
        x_new = x + self.A_n @ (h * v + 0.5 * h * h * e * r)
        v_new = self.B_n @ v + self.c_n * h * e * r
        r_new = self.b_n * r - 0.5 * h * (e @ (self.A_n @ v))
        return x_new, v_new, float(r_new)


class SplittingSav:
    """
    Splitting SAV schemes for charged-particle dynamics.
    The system x' = v, v' = v x B(x) + E(x) s/sqrt(U(x) + C0), r' = -x'^T E / (2 sqrt(U + C0))
    is split into the exact magnetic rotation (L) and a linearly implicit SAV step (NL).
    Both conserve 1/2 |v|**2 + r**2, hence every composition does
    """

    @staticmethod
    def lift_cpd(x0, v0, problem):
        return problem.lift_state(x0, v0)

    @staticmethod
    def _scaled_field(problem, point, t):
        radicand = problem.potential(point) + problem.C0
        if not radicand > 0 or not np.isfinite(radicand):
            raise SingularPotentialError(f'U(x) + C0 = {radicand} is not positive at t={t}', t, point)
        return problem.electric(point) / np.sqrt(radicand)

    @staticmethod
    def phi_L(state, problem, t):
        """
        The exact magnetic subflow: v <- exp(t B^(x)) v with B^ v = v x B(x); x, r and time unchanged
        :param CpdState state: the state
        :param CpdProblem problem: the problem
        :param float t: the (possibly negative) time
        :rtype: CpdState
        """
        rotation = MatrixFunctions.rodrigues_exp(problem.magnetic(state.x), t)
        return replace(state, v=rotation @ state.v)

    @staticmethod
    def phi_NL(state, problem, h):
        """
        The linearly implicit SAV subflow in explicit form, advancing t by h
        :param CpdState state: the state
        :param CpdProblem problem: the problem
        :param float h: the (possibly negative) step
        :rtype: CpdState
        :raises SingularPotentialError: if U + C0 is not positive at the predicted midpoint
        """
        midpoint = state.x + 0.5 * h * state.v
        coefficients = PhiNLCoefficients.from_field(SplittingSav._scaled_field(problem, midpoint, state.t), h)
        x_new, v_new, r_new = coefficients.advance(state.x, state.v, state.r, h)
        return CpdState(x_new, v_new, r_new, state.t + h)

    @staticmethod
    def compose_step(state, problem, scheme, h):
        """
        :param CpdState state: the state
        :param CpdProblem problem: the problem
        :param SplitScheme scheme: the composition
        :param float h: the step size
        :return: the state at t + h
        :rtype: CpdState
        :raises StageError: if one of the subflows fails
        """
        return SplittingSav.apply_stages(state, problem, scheme.stages, h, scheme.name)

    @staticmethod
    def apply_stages(state, problem, stages, h, name=''):
        """
        Applies (subflow, fraction of h) stages in order
        :return: the state advanced by h
        :rtype: CpdState
        :raises StageError: if one of the subflows fails
        """
        current = state
        for index, (tag, fraction) in enumerate(stages):
            try:
                if tag == 'L':
                    current = SplittingSav.phi_L(current, problem, fraction * h)
                else:
                    current = SplittingSav.phi_NL(current, problem, fraction * h)
            except NumericalError as err:
                raise StageError(f'stage {index} ({tag}) of {name} failed: {err}', index) from err
        return replace(current, t=state.t + h)

    @staticmethod
    def s1sav_explicit_step(state, problem, h):
        """
        The first-order scheme in closed form: rotate v by exp(h B^(x)), then take the SAV step
        from x~ = x + h/2 exp(h B^(x)) v
        :rtype: CpdState
        """
        rotated = MatrixFunctions.rodrigues_exp(problem.magnetic(state.x), h) @ state.v
        midpoint = state.x + 0.5 * h * rotated
        coefficients = PhiNLCoefficients.from_field(SplittingSav._scaled_field(problem, midpoint, state.t), h)
        x_new, v_new, r_new = coefficients.advance(state.x, rotated, state.r, h)
        return CpdState(x_new, v_new, r_new, state.t + h)

    @staticmethod
    def adjoint_defect(state, problem, h):
        """
        :return: |Phi_-h(Phi_h(y)) - y| for the SAV subflow, zero iff it is symmetric at y
        :rtype: float
        """
        there = SplittingSav.phi_NL(state, problem, h)
        back = SplittingSav.phi_NL(there, problem, -h)
        return float(np.linalg.norm(np.concatenate((back.x - state.x, back.v - state.v, [back.r - state.r]))))

    @staticmethod
    def implicit_phi_NL(state, problem, h, tol=1e-15, max_iter=200):
        """
        Solves the implicit form of the SAV subflow by fixed-point iteration:
        x' = x + h v + h**2/2 e r_half, v' = v + h e r_half, r' = r - (x' - x)^T e / 2,
        with r_half = (r + r')/2 and e the scaled field at x + h/2 v
        :rtype: CpdState
        """
        e = SplittingSav._scaled_field(problem, state.x + 0.5 * h * state.v, state.t)
        r_new = state.r
        for _ in range(max_iter):
            r_half = 0.5 * (state.r + r_new)
            x_new = state.x + h * state.v + 0.5 * h * h * e * r_half
            candidate = state.r - 0.5 * ((x_new - state.x) @ e)
            done = abs(candidate - r_new) <= tol
            r_new = candidate
            if done:
                break
        r_half = 0.5 * (state.r + r_new)
        return CpdState(state.x + h * state.v + 0.5 * h * h * e * r_half, state.v + h * e * r_half, float(r_new),
                        state.t + h)

    @staticmethod
    def modified_energy_cpd(state, problem):
        return problem.modified_energy(state)

    @staticmethod
    def original_energy_cpd(x, v, problem):
        return problem.original_energy(x, v)
