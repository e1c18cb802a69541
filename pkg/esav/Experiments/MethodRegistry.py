#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
from dataclasses import dataclass
import numpy as np

from esav.Integrators.OscillatorKernel import OscillatorKernel
from esav.Integrators.E2SavIntegrator import E2Sav, GeneralE2Sav, GeneralPropagator
from esav.Integrators.SplitScheme import SplitScheme
from esav.Integrators.SplittingSav import SplittingSav
from esav.Problems.CpdProblem import CpdState
from esav.Integrators.Baselines import Baselines
from esav.Integrators.FixedPointSolver import FixedPointConfig
from esav.Integrators.QuadratureRule import QuadratureRule
from esav.Utils.EsavLogger import EsavLogger


@dataclass(frozen=True, eq=False)
class FirstOrderState:
    y: np.ndarray
    t: float = 0.0

    def flat(self):
        return self.y


class MethodStepper:
    """
    A method bound to a problem instance and a step size: creates the initial state, advances it by one step
    and evaluates the energies of a state
    """
    name = ''
    kinds = ()

    def __init__(self, instance, h, config):
        """
        :param ProblemInstance instance: the problem
        :param float h: the step size
        :param RunConfiguration config: the run settings
        """
        if instance.kind not in self.kinds:
            raise ValueError(f'method {self.name} does not apply to problem {instance.tag}')
        self.instance = instance
        self.h = h
        self.config = config
        self.unconverged_steps = 0

    @property
    def converged(self):
        return self.unconverged_steps == 0

    def initial_state(self):
        return self.instance.lift()

    def advance(self, state):
        raise NotImplementedError

    @staticmethod
    def flat(state):
        return state.flat()

    def original_energy(self, state):
        return self.instance.original_energy(self.flat(state))

    def modified_energy(self, state):
        return self.instance.system.modified_energy(state)

    def energy(self, state, kind):
        """
        :param state: a state of this method
        :param str kind: 'modified' or 'original'; methods without an auxiliary variable always use the original
        :rtype: float
        """
        return self.modified_energy(state) if kind == 'modified' else self.original_energy(state)


class E2SavStepper(MethodStepper):
    name = 'e2sav'
    kinds = ('osde', 'general')

    def __init__(self, instance, h, config):
        super().__init__(instance, h, config)
        if instance.kind == 'osde':
            self.mode = config.predictor or 'linear'
            self.kernel = OscillatorKernel.build(instance.system, h)
        else:
            self.mode = config.predictor or 'corrected'
            self.propagator = GeneralPropagator.build(instance.system, h)

    def advance(self, state):
        if self.instance.kind == 'osde':
            return E2Sav.step(state, self.instance.system, self.kernel, self.mode)
        return GeneralE2Sav.step(state, self.instance.system, self.propagator, self.mode)


@dataclass(frozen=True, eq=False)
class PendingRotationState:
    """
    A splitting state whose trailing magnetic stage (pending * h) is not applied yet.
    The magnetic subflow leaves x, r and |v| unchanged, so both energies can be read off the lagging state
    """
    lagging: CpdState
    pending: float

    @property
    def t(self):
        return self.lagging.t


class SplitSavStepper(MethodStepper):
    """
    With fuse, adjacent magnetic stages are merged inside a step and, for schemes that start and end
    with a magnetic stage, the trailing stage of a step is merged with the leading stage of the next one
    """
    kinds = ('cpd',)

    def __init__(self, instance, h, config, scheme_name):
        self.name = scheme_name
        super().__init__(instance, h, config)
        self.scheme = SplitScheme.by_name(scheme_name)
        if config.fuse:
            self.scheme = self.scheme.fused()
        stages = self.scheme.stages
        self.carries_rotation = config.fuse and len(stages) > 2 and stages[0][0] == 'L' and stages[-1][0] == 'L'

    def advance(self, state):
        if not self.carries_rotation:
            return SplittingSav.compose_step(state, self.instance.system, self.scheme, self.h)
        current, carried = (state.lagging, state.pending) if isinstance(state, PendingRotationState) else (state, 0.0)
        stages = list(self.scheme.stages[:-1])
        stages[0] = ('L', stages[0][1] + carried)
        advanced = SplittingSav.apply_stages(current, self.instance.system, stages, self.h, self.name)
        return PendingRotationState(advanced, self.scheme.stages[-1][1])

    def synchronized(self, state):
        """
        :return: the state with its pending magnetic stage applied
        :rtype: CpdState
        """
        if isinstance(state, PendingRotationState):
            return SplittingSav.phi_L(state.lagging, self.instance.system, state.pending * self.h)
        return state

    def flat(self, state):
        return self.synchronized(state).flat()

    def modified_energy(self, state):
        lagging = state.lagging if isinstance(state, PendingRotationState) else state
        return self.instance.system.modified_energy(lagging)

    def original_energy(self, state):
        lagging = state.lagging if isinstance(state, PendingRotationState) else state
        return self.instance.original_energy(lagging.flat())


class ImplicitBaselineStepper(MethodStepper):
    """
    AVF and the implicit trapezoidal rule, applied to the first-order form of any problem
    """
    kinds = ('osde', 'general', 'cpd')

    def __init__(self, instance, h, config, method):
        self.name = method
        super().__init__(instance, h, config)
        self.fixed_point = FixedPointConfig(config.fixedPointTol, config.fixedPointMaxIter)
        self.quadrature = QuadratureRule.gauss_legendre(config.quadraturePoints) if method == 'avf' else None

    def initial_state(self):
        return FirstOrderState(self.instance.y0.copy(), 0.0)

    def modified_energy(self, state):
        return self.original_energy(state)

    def advance(self, state):
        if self.name == 'avf':
            result = Baselines.avf_step(self.instance.rhs, state.y, self.h, self.quadrature, self.fixed_point)
        else:
            result = Baselines.ito2_step(self.instance.rhs, state.y, self.h, self.fixed_point)
        if not result.converged:
            if self.unconverged_steps == 0:
                EsavLogger().log_message(f'{self.name}: fixed-point iteration did not converge within '
                                         f'{self.fixed_point.max_iter} iterations at t={state.t + self.h}', level='W')
            self.unconverged_steps += 1
        return FirstOrderState(result.value, state.t + self.h)


class BorisStepper(MethodStepper):
    name = 'boris'
    kinds = ('cpd',)

    def initial_state(self):
        return FirstOrderState(self.instance.y0.copy(), 0.0)

    def modified_energy(self, state):
        return self.original_energy(state)

    def advance(self, state):
        x, v, t = Baselines.boris_step(state.y[:3], state.y[3:], state.t, self.instance.system, self.h)
        return FirstOrderState(np.concatenate((x, v)), t)


class MethodRegistry:
    """
    The integration methods, addressable by tag
    """
    methods = ('e2sav', 's1sav', 's2sav', 's4sav', 's6sav', 'avf', 'ito2', 'boris')
    kinds = {'e2sav': E2SavStepper.kinds, 's1sav': SplitSavStepper.kinds, 's2sav': SplitSavStepper.kinds,
             's4sav': SplitSavStepper.kinds, 's6sav': SplitSavStepper.kinds, 'avf': ImplicitBaselineStepper.kinds,
             'ito2': ImplicitBaselineStepper.kinds, 'boris': BorisStepper.kinds}

    @staticmethod
    def applies_to(method, kind):
        return kind in MethodRegistry.kinds.get(method, ())

    @staticmethod
    def create(method, instance, h, config):
        """
        :param str method: the method tag
        :param ProblemInstance instance: the problem
        :param float h: the step size
        :param RunConfiguration config: the run settings
        :rtype: MethodStepper
        """
        if method == 'e2sav':
            return E2SavStepper(instance, h, config)
        if method in ('s1sav', 's2sav', 's4sav', 's6sav'):
            return SplitSavStepper(instance, h, config, method)
        if method in ('avf', 'ito2'):
            return ImplicitBaselineStepper(instance, h, config, method)
        if method == 'boris':
            return BorisStepper(instance, h, config)
        raise ValueError(f'unknown method "{method}". Valid methods: {", ".join(MethodRegistry.methods)}')
