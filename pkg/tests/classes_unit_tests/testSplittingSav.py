import math
import unittest
import numpy as np
from esav.CoreDS.MatrixFunctions import MatrixFunctions
from esav.Integrators.SplitScheme import SplitScheme
from esav.Integrators.SplittingSav import SplittingSav, PhiNLCoefficients
from esav.Problems.CpdProblem import CpdProblem, CpdState
from esav.Problems.ProblemCatalog import ProblemCatalog
from esav.Reference.DormandPrince import DormandPrince
from esav.Reference.GeneralFirstOrderSystem import GeneralFirstOrderSystem
from esav.Utils.EsavErrors import SingularPotentialError, StageError


def field_free_problem(field=(0.0, 0.0, 0.0), potential=0.0):
    magnetic = np.array(field, dtype=float)
    return CpdProblem(lambda x: magnetic, lambda x: np.zeros(3), lambda x: potential, 1.0, 0.0)


def random_state(rng):
    radius, angle = rng.uniform(0.5, 2.0), rng.uniform(0, 2 * math.pi)
    x = np.array([radius * math.cos(angle), radius * math.sin(angle), rng.uniform(-1, 1)])
    return CpdState(x, rng.uniform(-1, 1, 3), rng.uniform(0.9, 1.2))


def implicit_first_order_step(state, problem, h, sweeps=200):
    """
    The first-order scheme in its implicit form, solved jointly for (x', v', r') by fixed-point sweeps:
    v* = exp(h B^(x)) v, e = E/sqrt(U + C0) at x + h/2 v*, v' = v* + h e (r + r')/2,
    x' = x + h/2 (v* + v'), r' = r - e^T (x' - x)/2
    """
    rotated = MatrixFunctions.dense_exp(h * MatrixFunctions.hat_matrix(problem.magnetic(state.x))) @ state.v
    midpoint = state.x + 0.5 * h * rotated
    e = problem.electric(midpoint) / math.sqrt(problem.potential(midpoint) + problem.C0)
    x_new, v_new, r_new = state.x, rotated, state.r
    for _ in range(sweeps):
        v_new = rotated + h * e * (0.5 * (state.r + r_new))
        x_new = state.x + 0.5 * h * (rotated + v_new)
        r_new = state.r - 0.5 * (e @ (x_new - state.x))
    return CpdState(x_new, v_new, float(r_new), state.t + h)


def nl_fractions(scheme):
    return [fraction for tag, fraction in scheme.stages if tag == 'NL']


class TestSplitScheme(unittest.TestCase):
    def test_fractions(self):
        for name, order in (('s1sav', 1), ('s2sav', 2), ('s4sav', 4), ('s6sav', 6)):
            scheme = SplitScheme.by_name(name)
            self.assertEqual(scheme.order, order)
            for tag in SplitScheme.subflows:
                total = sum(fraction for stage_tag, fraction in scheme.stages if stage_tag == tag)
                self.assertAlmostEqual(total, 1.0, delta=1e-14)

    def test_triple_jump_weights(self):
        tau = SplitScheme.triple_jump_weights(2)
        self.assertAlmostEqual(tau[0], 1.35120719, delta=1e-8)
        self.assertAlmostEqual(tau[1], -1.70241438, delta=1e-8)
        self.assertEqual(tau[0], tau[2])
        self.assertAlmostEqual(sum(tau), 1.0, delta=1e-14)
        self.assertAlmostEqual(sum(w ** 3 for w in tau), 0.0, delta=1e-14)
        theta = SplitScheme.triple_jump_weights(4)
        self.assertAlmostEqual(sum(theta), 1.0, delta=1e-14)
        self.assertAlmostEqual(sum(w ** 5 for w in theta), 0.0, delta=1e-14)
        self.assertAlmostEqual(sum(w ** 3 for w in nl_fractions(SplitScheme.by_name('s4sav'))), 0.0, delta=1e-14)

    def test_stage_layout(self):
        self.assertEqual(SplitScheme.by_name('s1sav').stages, (('L', 1.0), ('NL', 1.0)))
        self.assertEqual(SplitScheme.by_name('s2sav').stages, (('L', 0.5), ('NL', 1.0), ('L', 0.5)))
        self.assertEqual(len(SplitScheme.by_name('s4sav').stages), 9)
        self.assertEqual(len(SplitScheme.by_name('s6sav').stages), 27)

    def test_fused(self):
        fused = SplitScheme.by_name('s4sav').fused()
        self.assertEqual(len(fused.stages), 7)
        self.assertEqual([tag for tag, _ in fused.stages], ['L', 'NL', 'L', 'NL', 'L', 'NL', 'L'])
        self.assertEqual(len(SplitScheme.by_name('s6sav').fused().stages), 19)
        self.assertEqual(SplitScheme.by_name('s1sav').fused().stages, SplitScheme.by_name('s1sav').stages)

    def test_invalid_schemes(self):
        with self.assertRaises(ValueError):
            SplitScheme.by_name('s3sav')
        with self.assertRaises(ValueError):
            SplitScheme('bad', (('L', 1.0), ('X', 1.0)), 1)
        with self.assertRaises(ValueError):
            SplitScheme('bad', (('L', 0.5), ('NL', 1.0)), 1)


class TestMagneticSubflow(unittest.TestCase):
    def test_zero_field(self):
        state = CpdState(np.array([1.0, 2.0, 3.0]), np.array([0.1, 0.2, 0.3]), 1.5, 0.25)
        moved = SplittingSav.phi_L(state, field_free_problem(), 0.7)
        np.testing.assert_array_equal(moved.v, state.v)
        np.testing.assert_array_equal(moved.x, state.x)
        self.assertEqual((moved.r, moved.t), (1.5, 0.25))

    def test_isometry_and_inverse(self):
        rng = np.random.default_rng(20)
        problem = ProblemCatalog.cpd_general(0.1).system
        for _ in range(20):
            state = random_state(rng)
            t = rng.uniform(-1, 1)
            moved = SplittingSav.phi_L(state, problem, t)
            self.assertAlmostEqual(np.linalg.norm(moved.v), np.linalg.norm(state.v), delta=1e-13)
            np.testing.assert_array_equal(moved.x, state.x)
            self.assertEqual(moved.r, state.r)
            np.testing.assert_allclose(SplittingSav.phi_L(moved, problem, -t).v, state.v, atol=1e-12)

    def test_full_gyration(self):
        eps = 0.1
        problem = ProblemCatalog.cpd_constant(eps).system
        state = problem.lift_state([0.7, 1.0, 0.1], [0.9, 0.5, 0.4])
        moved = SplittingSav.phi_L(state, problem, 2 * math.pi * eps)
        np.testing.assert_allclose(moved.v, state.v, atol=1e-12)

    def test_against_reference_integration(self):
        problem = ProblemCatalog.cpd_general(1.0).system
        state = problem.lift_state([0.7, 1.0, 0.1], [0.9, 0.5, 0.4])
        field = problem.magnetic(state.x)
        system = GeneralFirstOrderSystem(3, lambda t, v: np.cross(v, field))
        reference = DormandPrince.adapt_integrate(system, state.v, [0.1], 1e-12, 1e-12).final_state()
        np.testing.assert_allclose(SplittingSav.phi_L(state, problem, 0.1).v, reference, atol=1e-11)

    def test_cross_product_sign(self):
        field = np.array([0.3, -0.4, 1.2])
        self.assertEqual(MatrixFunctions.hat_matrix(field)[1, 0], -field[2])
        v = np.array([1.0, 2.0, -0.5])
        np.testing.assert_allclose(MatrixFunctions.hat_matrix(field) @ v, np.cross(v, field), atol=1e-15)


class TestSavSubflow(unittest.TestCase):
    def test_pure_drift(self):
        state = CpdState(np.array([1.0, 0.0, 0.0]), np.array([0.5, -0.5, 2.0]), 1.0)
        moved = SplittingSav.phi_NL(state, field_free_problem(), 0.1)
        np.testing.assert_allclose(moved.x, state.x + 0.1 * state.v, atol=1e-15)
        np.testing.assert_array_equal(moved.v, state.v)
        self.assertEqual(moved.r, 1.0)
        self.assertAlmostEqual(moved.t, 0.1, delta=1e-15)

    def test_energy_conservation(self):
        rng = np.random.default_rng(21)
        problem = ProblemCatalog.cpd_constant(1.0).system
        for _ in range(50):
            state = random_state(rng)
            h = rng.uniform(-0.2, 0.2)
            moved = SplittingSav.phi_NL(state, problem, h)
            before = 0.5 * state.v @ state.v + state.r ** 2
            after = 0.5 * moved.v @ moved.v + moved.r ** 2
            self.assertAlmostEqual(after, before, delta=1e-13)

    def test_coefficients(self):
        rng = np.random.default_rng(22)
        for _ in range(10):
            e, h = rng.uniform(-2, 2, 3), rng.uniform(0.01, 1.0)
            coefficients = PhiNLCoefficients.from_field(e, h)
            np.testing.assert_allclose(coefficients.A_n, coefficients.A_n.T, atol=1e-15)
            self.assertGreater(np.linalg.eigvalsh(coefficients.A_n)[0], 0.0)
            self.assertAlmostEqual(coefficients.c_n, 1.0 / coefficients.a_n, delta=1e-14)
            self.assertAlmostEqual(coefficients.b_n + 0.25 * h * h * e @ coefficients.A_n @ e, 1.0, delta=1e-14)

    def test_implicit_oracle(self):
        rng = np.random.default_rng(25)
        problem = ProblemCatalog.cpd_general(0.5).system
        for _ in range(100):
            state = random_state(rng)
            h = rng.uniform(0.01, 0.2)
            explicit = SplittingSav.phi_NL(state, problem, h)
            implicit = SplittingSav.implicit_phi_NL(state, problem, h)
            np.testing.assert_allclose(explicit.x, implicit.x, rtol=0, atol=1e-12)
            np.testing.assert_allclose(explicit.v, implicit.v, rtol=0, atol=1e-12)
            self.assertAlmostEqual(explicit.r, implicit.r, delta=1e-12)

    def test_symmetric(self):
        rng = np.random.default_rng(23)
        problem = ProblemCatalog.cpd_general(1.0).system
        for _ in range(10):
            self.assertLessEqual(SplittingSav.adjoint_defect(random_state(rng), problem, 0.1), 1e-13)

    def test_singular_potential(self):
        problem = field_free_problem(potential=-5.0)
        state = CpdState(np.array([1.0, 0.0, 0.0]), np.zeros(3), 1.0, 2.0)
        with self.assertRaises(SingularPotentialError) as context:
            SplittingSav.phi_NL(state, problem, 0.1)
        self.assertEqual(context.exception.t, 2.0)
        np.testing.assert_array_equal(context.exception.point, state.x)


class TestComposition(unittest.TestCase):
    def test_magnetic_drift(self):
        problem = field_free_problem((0.0, 0.0, 2.0))
        state = CpdState(np.zeros(3), np.array([1.0, 0.0, 0.5]), 1.0, 1.0)
        moved = SplittingSav.compose_step(state, problem, SplitScheme.lie(), 0.1)
        self.assertAlmostEqual(np.linalg.norm(moved.v), np.linalg.norm(state.v), delta=1e-15)
        rotated = MatrixFunctions.rodrigues_exp(np.array([0.0, 0.0, 2.0]), 0.1) @ state.v
        np.testing.assert_allclose(moved.x, 0.1 * rotated, atol=1e-15)
        self.assertAlmostEqual(moved.t, 1.1, delta=1e-15)

    def test_energy_conservation(self):
        for tag in ('cpd-constant', 'cpd-general'):
            instance = ProblemCatalog.build(tag)
            problem = instance.system
            for name in ('s1sav', 's2sav', 's4sav', 's6sav'):
                scheme = SplitScheme.by_name(name)
                for h in (1e-2, 1e-1):
                    state = instance.lift()
                    initial = SplittingSav.modified_energy_cpd(state, problem)
                    for _ in range(100):
                        previous = SplittingSav.modified_energy_cpd(state, problem)
                        state = SplittingSav.compose_step(state, problem, scheme, h)
                        current = SplittingSav.modified_energy_cpd(state, problem)
                        self.assertLessEqual(abs(current - previous), 1e-12 * max(1.0, abs(previous)))
                    self.assertLessEqual(abs(current - initial), 1e-10 * abs(initial))
                    self.assertAlmostEqual(state.t, 100 * h, delta=1e-12)

    def test_explicit_first_order_form(self):
        rng = np.random.default_rng(24)
        problem = ProblemCatalog.cpd_general(0.5).system
        for _ in range(100):
            state = random_state(rng)
            h = rng.uniform(0.01, 0.2)
            expected = implicit_first_order_step(state, problem, h)
            for computed in (SplittingSav.s1sav_explicit_step(state, problem, h),
                             SplittingSav.compose_step(state, problem, SplitScheme.lie(), h)):
                np.testing.assert_allclose(computed.x, expected.x, rtol=0, atol=1e-12)
                np.testing.assert_allclose(computed.v, expected.v, rtol=0, atol=1e-12)
                self.assertAlmostEqual(computed.r, expected.r, delta=1e-12)

    def test_fused_matches_unfused(self):
        instance = ProblemCatalog.cpd_general(1.0)
        scheme = SplitScheme.by_name('s6sav')
        plain = fused = instance.lift()
        for _ in range(10):
            plain = SplittingSav.compose_step(plain, instance.system, scheme, 0.1)
            fused = SplittingSav.compose_step(fused, instance.system, scheme.fused(), 0.1)
        np.testing.assert_allclose(fused.flat(), plain.flat(), atol=1e-12)

    def test_stage_error(self):
        problem = field_free_problem(potential=-5.0)
        state = CpdState(np.array([1.0, 0.0, 0.0]), np.zeros(3), 1.0)
        with self.assertRaises(StageError) as context:
            SplittingSav.compose_step(state, problem, SplitScheme.strang(), 0.1)
        self.assertEqual(context.exception.stage_index, 1)
        self.assertIsInstance(context.exception.__cause__, SingularPotentialError)


class TestCpdEnergies(unittest.TestCase):
    def test_examples(self):
        instance = ProblemCatalog.cpd_constant(1.0)
        problem = instance.system
        self.assertEqual(SplittingSav.modified_energy_cpd(CpdState(np.ones(3), np.zeros(3), 1.0), problem), 0.0)
        state = SplittingSav.lift_cpd([0.7, 1.0, 0.1], [0.9, 0.5, 0.4], problem)
        original = SplittingSav.original_energy_cpd(state.x, state.v, problem)
        self.assertAlmostEqual(SplittingSav.modified_energy_cpd(state, problem), original, delta=1e-15)
        self.assertAlmostEqual(original, 0.61 + 1 / (100 * math.sqrt(1.49)), delta=1e-15)
        self.assertEqual(SplittingSav.lift_cpd(np.zeros(3), np.zeros(3), field_free_problem()).r, 1.0)
        self.assertEqual(SplittingSav.original_energy_cpd(np.zeros(3), np.zeros(3), field_free_problem()), 0.0)


if __name__ == '__main__':
    unittest.main()
