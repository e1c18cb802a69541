import math
import unittest
import numpy as np
from esav.CoreDS.MatrixFunctions import MatrixFunctions
from esav.Integrators.Baselines import Baselines, avf_step, ito2_step, boris_step
from esav.Integrators.FixedPointSolver import FixedPointConfig, FixedPointSolver, fixed_point_solve
from esav.Integrators.QuadratureRule import QuadratureRule, gauss_legendre
from esav.Problems.CpdProblem import CpdProblem
from esav.Problems.ProblemCatalog import ProblemCatalog
from esav.Utils.EsavErrors import DivergenceError, QuadratureOrderError


class TestGaussLegendre(unittest.TestCase):
    def test_small_rules(self):
        rule = gauss_legendre(1)
        np.testing.assert_allclose(rule.nodes, [0.5], atol=1e-15)
        np.testing.assert_allclose(rule.weights, [1.0], atol=1e-15)
        rule = gauss_legendre(2)
        np.testing.assert_allclose(rule.nodes, [(1 - 1 / math.sqrt(3)) / 2, (1 + 1 / math.sqrt(3)) / 2], atol=1e-15)
        np.testing.assert_allclose(rule.weights, [0.5, 0.5], atol=1e-15)
        self.assertAlmostEqual(gauss_legendre(3).integrate(lambda xi: xi ** 5), 1 / 6, delta=1e-15)

    def test_exactness(self):
        for n in range(1, 11):
            rule = QuadratureRule.gauss_legendre(n)
            self.assertAlmostEqual(float(np.sum(rule.weights)), 1.0, delta=1e-14)
            self.assertTrue(np.all(rule.weights > 0))
            self.assertTrue(np.all((rule.nodes > 0) & (rule.nodes < 1)))
            for degree in range(2 * n):
                self.assertAlmostEqual(rule.integrate(lambda xi: xi ** degree), 1 / (degree + 1), delta=1e-13)

    def test_vector_integrand(self):
        value = gauss_legendre(2).integrate(lambda xi: np.array([1.0, xi, xi ** 3]))
        np.testing.assert_allclose(value, [1.0, 0.5, 0.25], atol=1e-15)

    def test_out_of_range(self):
        for n in (0, 11, 2.5):
            with self.assertRaises(QuadratureOrderError):
                gauss_legendre(n)


class TestFixedPointSolver(unittest.TestCase):
    def test_identity(self):
        result = fixed_point_solve(lambda x: x, np.array([1.0, 2.0]))
        self.assertTrue(result.converged)
        self.assertEqual(result.iterations, 1)
        np.testing.assert_array_equal(result.value, [1.0, 2.0])

    def test_contraction(self):
        result = FixedPointSolver.solve(lambda x: x / 2, np.array([1.0]))
        self.assertTrue(result.converged)
        self.assertLessEqual(abs(result.value[0]), 1e-10)

    def test_not_converged(self):
        result = FixedPointSolver.solve(lambda x: -x, np.array([1.0]), FixedPointConfig(max_iter=5))
        self.assertFalse(result.converged)
        self.assertEqual(result.iterations, 5)

    def test_divergence(self):
        with self.assertRaises(DivergenceError):
            FixedPointSolver.solve(lambda x: x * 1e200, np.array([1e200]))

    def test_config(self):
        self.assertEqual((FixedPointConfig().tol, FixedPointConfig().max_iter), (1e-10, 1000))
        with self.assertRaises(ValueError):
            FixedPointConfig(tol=0.0)
        with self.assertRaises(ValueError):
            FixedPointConfig(max_iter=0)


class TestImplicitBaselines(unittest.TestCase):
    def setUp(self):
        rng = np.random.default_rng(30)
        self.matrix = rng.uniform(-1, 1, (4, 4))
        self.y = rng.uniform(-1, 1, 4)
        self.h = 0.1
        eye = np.eye(4)
        self.trapezoidal = np.linalg.solve(eye - 0.5 * self.h * self.matrix, (eye + 0.5 * self.h * self.matrix) @ self.y)

    def test_zero_field(self):
        for result in (avf_step(lambda y: np.zeros_like(y), self.y, 0.1),
                       ito2_step(lambda y: np.zeros_like(y), self.y, 0.1)):
            self.assertTrue(result.converged)
            np.testing.assert_array_equal(result.value, self.y)

    def test_linear_avf(self):
        result = Baselines.avf_step(lambda y: self.matrix @ y, self.y, self.h)
        self.assertTrue(result.converged)
        np.testing.assert_allclose(result.value, self.trapezoidal, atol=1e-9)

    def test_linear_ito2(self):
        result = Baselines.ito2_step(lambda y: self.matrix @ y, self.y, self.h)
        self.assertTrue(result.converged)
        np.testing.assert_allclose(result.value, self.trapezoidal, atol=1e-9)

    def test_duffing_ito2_converges(self):
        instance = ProblemCatalog.duffing(5.0, 0.07)
        result = Baselines.ito2_step(instance.rhs, instance.y0, 1 / 64)
        self.assertTrue(result.converged)
        self.assertLess(result.iterations, 50)
        residual = result.value - instance.y0 - (0.5 / 64) * (instance.rhs(instance.y0) + instance.rhs(result.value))
        self.assertLessEqual(np.linalg.norm(residual), 10 * FixedPointConfig().tol)

    def test_avf_conserves_duffing_energy(self):
        instance = ProblemCatalog.duffing(5.0, 0.07)
        rule = QuadratureRule.gauss_legendre(2)
        y = instance.y0
        for _ in range(100):
            previous = instance.original_energy(y)
            y = Baselines.avf_step(instance.rhs, y, 0.01, rule).value
            self.assertLessEqual(abs(instance.original_energy(y) - previous), 100 * FixedPointConfig().tol)


class TestBoris(unittest.TestCase):
    @staticmethod
    def magnetic_only(field):
        field = np.array(field, dtype=float)
        return CpdProblem(lambda x: field, lambda x: np.zeros(3), lambda x: 0.0, 1.0, 0.0)

    def test_drift(self):
        x, v = np.array([1.0, 2.0, 3.0]), np.array([0.3, -0.2, 0.1])
        x_new, v_new, t_new = boris_step(x, v, 0.5, self.magnetic_only((0, 0, 0)), 0.1)
        np.testing.assert_allclose(x_new, x + 0.1 * v, atol=1e-15)
        np.testing.assert_array_equal(v_new, v)
        self.assertAlmostEqual(t_new, 0.6, delta=1e-15)

    def test_norm_preserved(self):
        rng = np.random.default_rng(31)
        problem = self.magnetic_only((0.2, -0.5, 3.0))
        for _ in range(20):
            v = rng.uniform(-1, 1, 3)
            _, v_new, _ = Baselines.boris_step(np.zeros(3), v, 0.0, problem, rng.uniform(0.01, 1.0))
            self.assertAlmostEqual(np.linalg.norm(v_new), np.linalg.norm(v), delta=1e-14)

    def test_rotation_angle(self):
        field = np.array([0.2, -0.5, 3.0])
        problem = self.magnetic_only(field)
        h = 0.4
        v = np.array([0.9, 0.5, 0.4])
        _, v_new, _ = Baselines.boris_step(np.zeros(3), v, 0.0, problem, h)
        strength = np.linalg.norm(field)
        angle = 2 * math.atan(0.5 * h * strength)
        np.testing.assert_allclose(v_new, MatrixFunctions.rodrigues_exp(field, angle / strength) @ v, atol=1e-13)

    def test_electric_kick(self):
        field = np.array([0.0, 0.0, 1.0])
        problem = CpdProblem(lambda x: np.zeros(3), lambda x: field, lambda x: -x[2], 1.0, 0.0)
        x_new, v_new, _ = Baselines.boris_step(np.zeros(3), np.zeros(3), 0.0, problem, 0.1)
        np.testing.assert_allclose(v_new, 0.1 * field, atol=1e-15)
        np.testing.assert_allclose(x_new, 0.01 * field, atol=1e-15)


if __name__ == '__main__':
    unittest.main()
