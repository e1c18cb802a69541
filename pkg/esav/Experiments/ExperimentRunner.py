#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
import math
import statistics
import time
from dataclasses import dataclass
import numpy as np

from esav.Experiments.MethodRegistry import MethodRegistry
from esav.Experiments.ResultRow import ResultRow, EnergySample
from esav.Reference.DormandPrince import DormandPrince
from esav.Reference.GeneralFirstOrderSystem import GeneralFirstOrderSystem
from esav.Utils.EsavErrors import DegenerateReferenceError, NumericalError
from esav.Utils.EsavLogger import EsavLogger
from esav.Utils.RunConfiguration import RunConfiguration


@dataclass(frozen=True)
class SlopeFit:
    """
    Least-squares slope of log2(error) against log2(h); slope is None when fewer than two points remain
    """
    method: str
    slope: float
    used_points: int
    excluded_steps: tuple

    @property
    def saturated(self):
        return self.slope is None


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    energies: np.ndarray
    final_state: np.ndarray
    states: np.ndarray = None
    converged: bool = True


class ExperimentRunner:
    """
    Runs the cells (method x step size) of an experiment and evaluates them against a reference solution
    """
    saturation_floor = 1e-12
    # a relative global error this large means the step does not resolve the solution
    resolution_ceiling = 0.1
    energy_floor = 1e-14

    def __init__(self, spec, config=None):
        """
        :param ExperimentSpec spec: the experiment
        :param RunConfiguration config: the run settings
        """
        self.spec = spec
        self.config = config if config is not None else RunConfiguration()
        self.instance = spec.build_problem()
        for method in spec.methods:
            if not MethodRegistry.applies_to(method, self.instance.kind):
                raise ValueError(f'method {method} does not apply to problem {spec.problem}')
        self._references = {}

    @staticmethod
    def global_error(numerical, reference):
        """
        |xi - xi_ref| / |xi_ref| + |eta - eta_ref| / |eta_ref|
        :param tuple numerical: the position-like and velocity-like parts of the numerical state
        :param tuple reference: the same parts of the reference state
        :rtype: float
        :raises DegenerateReferenceError: if a part of the reference state vanishes
        """
        total = 0.0
        for approx, exact in zip(numerical, reference):
            norm = np.linalg.norm(exact)
            if norm == 0.0:
                raise DegenerateReferenceError('reference state has a zero component block')
            total += np.linalg.norm(np.asarray(approx) - exact) / norm
        return float(total)

    @staticmethod
    def energy_error_series(times, energies, initial=None):
        """
        |H_n - H_0| / |H_0|, or the absolute error when |H_0| < 1e-14
        :param times: the sample times
        :param energies: the energy at each sample time
        :param float initial: H_0 (the first energy by default)
        :return: the (t, error) pairs and whether the errors are absolute
        :rtype: tuple(list, bool)
        """
        energies = np.asarray(energies, dtype=float)
        initial = energies[0] if initial is None else initial
        absolute = abs(initial) < ExperimentRunner.energy_floor
        errors = np.abs(energies - initial) if absolute else np.abs(energies - initial) / abs(initial)
        if absolute:
            EsavLogger().log_message('initial energy vanishes, reporting absolute energy errors', level='W')
        return list(zip((float(t) for t in times), (float(e) for e in errors))), absolute

    @staticmethod
    def fit_slope(step_sizes, errors, method='', floor=None, ceiling=None):
        """
        :param step_sizes: the step sizes
        :param errors: the errors (NaN for failed cells)
        :param str method: the method name, for reporting
        :param float floor: errors below it are excluded from the fit
        :param float ceiling: errors above it are pre-asymptotic and excluded from the fit
        :rtype: SlopeFit
        """
        floor = ExperimentRunner.saturation_floor if floor is None else floor
        ceiling = ExperimentRunner.resolution_ceiling if ceiling is None else ceiling

        def in_range(err):
            return math.isfinite(err) and floor <= err <= ceiling

        usable = [(h, err) for h, err in zip(step_sizes, errors) if in_range(err)]
        excluded = tuple(h for h, err in zip(step_sizes, errors) if not in_range(err))
        if len(usable) < 2:
            return SlopeFit(method, None, len(usable), excluded)
        log_h = np.log2([h for h, _ in usable])
        log_err = np.log2([err for _, err in usable])
        slope = np.polyfit(log_h, log_err, 1)[0]
        return SlopeFit(method, float(slope), len(usable), excluded)

    def step_count(self, h):
        steps = int(round(self.spec.T / h))
        if steps < 1 or abs(steps * h - self.spec.T) > 1e-9 * self.spec.T:
            raise ValueError(f'final time {self.spec.T} is not a multiple of the step size {h}')
        return steps

    def integrate(self, stepper, n_steps, record_states=False):
        """
        :param MethodStepper stepper: the method bound to problem and step size
        :param int n_steps: the number of steps
        :param bool record_states: keep the first-order state after every step
        :return: the trajectory, with the energy after every step
        :rtype: Trajectory
        """
        kind = self.config.energyKind
        state = stepper.initial_state()
        times = np.empty(n_steps + 1)
        energies = np.empty(n_steps + 1)
        times[0] = state.t
        energies[0] = stepper.energy(state, kind)
        states = [stepper.flat(state)] if record_states else None
        for step in range(1, n_steps + 1):
            state = stepper.advance(state)
            times[step] = state.t
            energies[step] = stepper.energy(state, kind)
            if record_states:
                states.append(stepper.flat(state))
        return Trajectory(times, energies, stepper.flat(state), np.array(states) if record_states else None,
                          stepper.converged)

    def reference_states(self, times):
        """
        :param times: ascending sample times > 0
        :return: the reference first-order states at the times, from the exact solution if the problem has one
        :rtype: np.ndarray
        """
        key = tuple(times)
        if key not in self._references:
            if self.instance.exact_solution is not None and self.config.reference == 'auto':
                states = np.array([self.instance.exact_solution(t) for t in times])
            else:
                tol = self.config.refTol
                factor = 1.0
                if self.instance.param_name == 'eps' and self.instance.param_value <= 0.01:
                    tol = min(tol, 1e-13)
                    factor = 0.5
                system = GeneralFirstOrderSystem.as_first_order(self.instance)
                trajectory = DormandPrince.adapt_integrate(system, self.instance.y0, times, tol, tol,
                                                           initial_step_factor=factor)
                states = trajectory.states[1:]
            self._references[key] = states
        return self._references[key]

    def _error_of(self, trajectory, h, n_steps):
        split = self.instance.split
        if self.config.errorMode == 'max':
            times = [step * h for step in range(1, n_steps + 1)]
            references = self.reference_states(times)
            return max(self.global_error(split(state), split(ref))
                       for state, ref in zip(trajectory.states[1:], references))
        reference = self.reference_states([self.spec.T])[0]
        return self.global_error(split(trajectory.final_state), split(reference))

    def _row(self, method, h, global_error, energy_error, cpu_seconds, converged):
        return ResultRow(self.spec.problem, method, self.instance.param_name, float(self.instance.param_value),
                         float(h), float(self.spec.T), float(global_error), float(energy_error), float(cpu_seconds),
                         bool(converged))

    def run_cell(self, method, h, with_error=True, tolerate_failure=False):
        """
        Integrates one method with one step size. cpu_seconds is left NaN; only bench measures it,
        so the rows of the other studies are reproducible byte for byte
        :param str method: the method tag
        :param float h: the step size
        :param bool with_error: compute the global error against the reference
        :param bool tolerate_failure: turn a numerical failure into a flagged row instead of raising
        :return: the result row and the trajectory (None on failure)
        :rtype: tuple(ResultRow, Trajectory)
        """
        n_steps = self.step_count(h)
        try:
            stepper = MethodRegistry.create(method, self.instance, h, self.config)
            trajectory = self.integrate(stepper, n_steps, record_states=with_error and self.config.errorMode == 'max')
            error = self._error_of(trajectory, h, n_steps) if with_error else math.nan
        except NumericalError as e:
            if not tolerate_failure:
                raise
            EsavLogger().log_message(f'{method} failed with h={h}: {e}', level='W')
            return self._row(method, h, math.nan, math.nan, math.nan, False), None
        _, energy_error = self._max_energy_error(trajectory)
        return self._row(method, h, error, energy_error, math.nan, trajectory.converged), trajectory

    def _max_energy_error(self, trajectory):
        series, absolute = self.energy_error_series(trajectory.times, trajectory.energies)
        return absolute, max(err for _, err in series)

    def run(self):
        """
        :return: one row per method and step size
        :rtype: list[ResultRow]
        """
        rows = [self.run_cell(method, h)[0] for method in self.spec.methods for h in self.spec.step_sizes]
        return sorted(rows, key=ResultRow.sort_key)

    def convergence_study(self):
        """
        Runs every method over all step sizes and fits the observed order of each method.
        Failed cells are flagged and left out of the fit
        :return: the rows and the slope fit per method
        :rtype: tuple(list[ResultRow], dict)
        """
        rows = []
        fits = {}
        for method in self.spec.methods:
            method_rows = [self.run_cell(method, h, tolerate_failure=True)[0] for h in self.spec.step_sizes]
            rows.extend(method_rows)
            fit = self.fit_slope([row.h for row in method_rows],
                                 [row.global_error if row.converged else math.nan for row in method_rows], method)
            if fit.excluded_steps:
                EsavLogger().log_message(f'{method}: step sizes {list(fit.excluded_steps)} excluded from the order fit '
                                         f'(failed, below {self.saturation_floor} or above {self.resolution_ceiling})',
                                         level='I')
            fits[method] = fit
        return sorted(rows, key=ResultRow.sort_key), fits

    def energy_study(self):
        """
        Long-time energy behaviour; the global error is not computed (NaN)
        :return: one summary row per method and step size, and the sampled energy-error series
        :rtype: tuple(list[ResultRow], list[EnergySample])
        """
        rows = []
        samples = []
        for method in self.spec.methods:
            for h in self.spec.step_sizes:
                row, trajectory = self.run_cell(method, h, with_error=False)
                rows.append(row)
                series, absolute = self.energy_error_series(trajectory.times, trajectory.energies)
                stride = max(1, math.ceil((len(series) - 1) / self.config.energySamples))
                samples.extend(EnergySample(self.spec.problem, method, self.instance.param_name,
                                            float(self.instance.param_value), float(h), t, err, bool(absolute))
                               for t, err in series[stride::stride])
        return sorted(rows, key=ResultRow.sort_key), samples

    def time_trajectory(self, method, h, n_steps):
        """
        :return: the wall-clock seconds of one full trajectory of n_steps steps
        :rtype: float
        """
        stepper = MethodRegistry.create(method, self.instance, h, self.config)
        start = time.perf_counter()
        state = stepper.initial_state()
        for _ in range(n_steps):
            state = stepper.advance(state)
        return time.perf_counter() - start

    def bench(self):
        """
        Times every cell serially, reporting the median wall-clock time over the configured number of repeats
        :rtype: list[ResultRow]
        """
        rows = []
        for method in self.spec.methods:
            for h in self.spec.step_sizes:
                n_steps = self.step_count(h)
                timings = [self.time_trajectory(method, h, n_steps) for _ in range(self.config.benchRepeats)]
                row, _ = self.run_cell(method, h)
                rows.append(self._row(method, h, row.global_error, row.max_energy_error, statistics.median(timings),
                                      row.converged))
        return sorted(rows, key=ResultRow.sort_key)

    def local_error_ratio(self, method, h):
        """
        Ratio of the one-step errors from the initial data with step sizes h and h/2:
        8 for a local error of O(h^3). From Duffing's initial data q = 0 the F and V terms of the
        h^3 error vanish, and E2-SAV shows 16 there
        :rtype: float
        """
        errors = []
        for step in (h, 0.5 * h):
            stepper = MethodRegistry.create(method, self.instance, step, self.config)
            state = stepper.advance(stepper.initial_state())
            reference = self.reference_states([step])[0]
            errors.append(np.linalg.norm(stepper.flat(state) - reference))
        return float(errors[0] / errors[1])
