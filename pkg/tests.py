"""
Comprehensive Unit Tests for Anisotropic Material Models
Tests principal curves, implicit models, material laws, closed forms, analysis, CLI and API
"""

import contextlib
import io
import json
import os
import tempfile
import unittest

import numpy as np

from analysis.contours import (fields_at_angles, hard_axis,
                               locus_constant_induction, trace_contour)
from analysis.convexity import convexity_scan, polygon_is_convex
from analysis.legendre import legendre_oracle, legendre_suite
from analysis.value_function import ModelPair, value_function
from closed_form.pnorm_model import (PNormModel, conjugate_exponent,
                                     pnorm_gradient, pnorm_hessian,
                                     pnorm_model_to_implicit, pnorm_value)
from closed_form.special_model import (SpecialModel, special_gradient,
                                       special_value)
from cli.commands import run
from common.errors import (ArgmaxOnBoundary, AxisSingularity,
                           ConfigParseError, ExponentNotConjugable,
                           InvalidExponent, InvalidPoint, MissingOrigin,
                           NonMonotoneData, NonPositiveCoefficient,
                           NonPositiveLevel, OriginSingularity,
                           ProportionalityViolated, TooFewSamples)
from common.parallel import chunked_map
from common.root_finding import safeguarded_newton
from common.settings import load_settings
from curves.energy_profile import COENERGY, ENERGY, EnergyProfile
from curves.principal_curve import make_linear_curve, make_tabulated_curve
from law.material_law import (VARIABLE_EXPONENT_DERIVATIVE,
                              differential_tensor_pair, evaluate, gradient,
                              gradients, hessian, hessians)
from law.sym_tensor import SymTensor2
from model.exponent_rule import ExponentRule
from model.level_function import check_uniqueness, level_state, residual
from model.level_solver import (NON_MONOTONE_RESIDUAL, solve_level,
                                solve_level_report, solve_levels)
from model.model_config import SolverSettings, make_model, model_hash
from storage.config_loader import load_curve_csv, load_model, parse_model
from storage.output_writer import format_number, read_polylines

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'fixtures')
N13_3 = 13.0 / 3.0
P13_10 = 13.0 / 10.0


def fixture(name):
    return os.path.join(FIXTURES, name)


def linear_model(frame, c1, c2, exponent):
    return make_model(frame, make_linear_curve(c1), make_linear_curve(c2), exponent)


def steel_curves():
    return load_curve_csv(fixture('rolling.csv')), load_curve_csv(fixture('transverse.csv'))


def random_off_axis(rng, count, low=0.2, high=5.0):
    magnitudes = rng.uniform(low, high, size=(count, 2))
    signs = rng.choice([-1.0, 1.0], size=(count, 2))
    return magnitudes * signs


def fd_gradient(func, points, rel_step=1e-5):
    """Central differences of a vectorized scalar function"""
    result = np.zeros_like(points)
    for axis in range(2):
        step = rel_step * np.maximum(np.abs(points[:, axis]), 1.0)
        shift = np.zeros_like(points)
        shift[:, axis] = step
        result[:, axis] = (func(points + shift) - func(points - shift)) / (2.0 * step)
    return result


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        status = run(argv)
    return status, out.getvalue(), err.getvalue()


class PrincipalCurveTestCase(unittest.TestCase):
    """Unit tests for principal curves and axis energy profiles"""

    @classmethod
    def setUpClass(cls):
        """Set up test configuration"""
        print("\n" + "=" * 60)
        print("Anisotropic Material Models - Unit Test Suite")
        print("=" * 60)
        print("Testing: Curves, Models, Laws, Closed Forms, Analysis, CLI")
        print("=" * 60 + "\n")

    # Test 1: Linear curve
    def test_01_linear_curve(self):
        """Test linear law, coenergy and inverse"""
        print("\n1. Testing linear curve...")

        curve = make_linear_curve(2.0)
        self.assertAlmostEqual(float(curve.eval_b(4.0)), 1.0, places=15)
        self.assertAlmostEqual(float(curve.eval_db(-3.0)), 0.25, places=15)
        self.assertAlmostEqual(float(curve.coenergy(-4.0)), 2.0, places=14)
        print("   - b(4) = 1, b'(h) = 1/c^2, coenergy even")

        x_hat, dx_hat = EnergyProfile(curve).inverse(2.0)
        self.assertAlmostEqual(float(x_hat), 4.0, places=13)
        self.assertAlmostEqual(float(dx_hat), 1.0 / float(curve.eval_b(4.0)), places=13)
        print(f"   - h_hat(2) = {float(x_hat)}")

        for bad in (0.0, -1.0, float('nan')):
            with self.assertRaises(NonPositiveCoefficient):
                make_linear_curve(bad)
        print("   - Non-positive coefficients rejected")

    # Test 2: Tabulated curve
    def test_02_tabulated_curve(self):
        """Test monotone interpolation of measured samples"""
        print("\n2. Testing tabulated curve...")

        rolling, _ = steel_curves()
        h, b = rolling.samples[:, 0], rolling.samples[:, 1]
        np.testing.assert_allclose(rolling.eval_b(h), b, rtol=0, atol=1e-12)
        np.testing.assert_allclose(rolling.eval_b(-h), -b, rtol=0, atol=1e-12)
        print(f"   - {len(h)} nodes reproduced, odd extension")

        midpoints = 0.5 * (h[1:] + h[:-1])
        step = 1e-6 * midpoints
        fd = (rolling.eval_b(midpoints + step) - rolling.eval_b(midpoints - step)) / (2 * step)
        np.testing.assert_allclose(rolling.eval_db(midpoints), fd, rtol=1e-5)
        print("   - Derivative matches finite differences between knots")

        grid = np.linspace(0.0, 2.0 * rolling.h_max, 400)
        self.assertTrue(np.all(np.diff(rolling.eval_b(grid)) > 0))
        np.testing.assert_allclose(rolling.eval_h(rolling.eval_b(grid)), grid, rtol=1e-10, atol=1e-8)
        print("   - Strictly increasing, exact inverse")

    # Test 3: Curve validation
    def test_03_curve_validation(self):
        """Test rejection of invalid samples"""
        print("\n3. Testing curve validation...")

        with self.assertRaises(MissingOrigin):
            make_tabulated_curve([(1, 0.1), (2, 0.2), (3, 0.3)])
        with self.assertRaises(TooFewSamples):
            make_tabulated_curve([(0, 0), (1, 0.1)])
        with self.assertRaises(NonMonotoneData):
            make_tabulated_curve([(0, 0), (1, 0.5), (2, 0.4)])
        with self.assertRaises(NonMonotoneData):
            make_tabulated_curve([(0, 0), (1, 0.5), (1, 0.6)])
        with self.assertRaises(NonMonotoneData):
            make_tabulated_curve([(0, 0), (1, 0.5), (2, 2.0)], slope_bounds=(0.0, 1.0))
        print("   - Missing origin, too few samples, non-monotone data rejected")

    # Test 4: Young equality and inverses
    def test_04_energy_profiles(self):
        """Test coenergy/energy duality and inverse axis energies"""
        print("\n4. Testing energy profiles...")

        rolling, _ = steel_curves()
        h = np.geomspace(1e-2, 3e4, 60)
        gap = EnergyProfile(rolling).young_gap(h)
        scale = h * rolling.eval_b(h)
        self.assertLess(float(np.max(np.abs(gap) / scale)), 1e-10)
        print("   - Young equality w*(h) + w(b(h)) = h b(h)")

        levels = np.geomspace(1e-4, 1e4, 40)
        for frame in (COENERGY, ENERGY):
            profile = EnergyProfile(rolling, frame)
            x_hat, d1, d2 = profile.inverse_derivatives(levels)
            np.testing.assert_allclose(profile.energy(x_hat), levels, rtol=1e-9)

            step = 1e-6 * levels
            fd = (profile.inverse(levels + step)[0] - profile.inverse(levels - step)[0]) / (2 * step)
            np.testing.assert_allclose(d1, fd, rtol=1e-5)
            self.assertTrue(np.all(np.isfinite(d2)))
            print(f"   - {frame}: inverse and derivative consistent")

    # Test 5: CSV loading
    def test_05_csv_loading(self):
        """Test curve CSV ingestion"""
        print("\n5. Testing curve CSV loading...")

        rolling, transverse = steel_curves()
        self.assertEqual(len(rolling.samples), 12)
        self.assertEqual(len(transverse.samples), 12)
        print("   - Fixture curves loaded (12 samples each)")

        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'bad.csv')
            with open(path, 'w') as handle:
                handle.write("field,flux\n0,0\n1,1\n2,2\n")
            with self.assertRaises(ConfigParseError):
                load_curve_csv(path)
            with self.assertRaises(ConfigParseError):
                load_curve_csv(os.path.join(folder, 'missing.csv'))
        print("   - Bad header and missing file rejected")


class ImplicitModelTestCase(unittest.TestCase):
    """Unit tests for the level equation and its solver"""

    # Test 1: Worked examples
    def test_01_linear_examples(self):
        """Test linear anisotropic levels"""
        print("\n1. Testing linear examples...")

        model = linear_model(COENERGY, 2.0, 1.0, 2.0)
        self.assertAlmostEqual(solve_level(model, (2.0, 1.0)), 1.0, places=12)
        self.assertEqual(solve_level(model, (0.0, 0.0)), 0.0)
        self.assertAlmostEqual(solve_level(model, (3.0, 0.0)), 0.5 * 9.0 / 4.0, places=14)
        print("   - w*(2, 1) = 1, w*(0, 0) = 0, on-axis reproduction")

        self.assertAlmostEqual(residual(model, (2.0, 1.0), 1.0), 0.0, places=12)
        with self.assertRaises(NonPositiveLevel):
            residual(model, (2.0, 1.0), 0.0)
        with self.assertRaises(InvalidPoint):
            solve_levels(model, np.zeros((3, 3)))
        with self.assertRaises(InvalidPoint):
            solve_level(model, (np.nan, 1.0))
        print("   - Residual and input validation")

    # Test 2: Closed-form equivalence
    def test_02_closed_form_equivalence(self):
        """Test implicit levels against the explicit p-norm"""
        print("\n2. Testing closed-form equivalence...")

        axis = np.linspace(-10.0, 10.0, 41)
        grid_x, grid_y = np.meshgrid(axis, axis)
        points = np.stack([grid_x.ravel(), grid_y.ravel()], axis=1)

        for n in (2.0, N13_3):
            model = linear_model(COENERGY, 2.0, 1.0, n)
            implicit = solve_levels(model, points)
            explicit = pnorm_value(PNormModel(COENERGY, (2.0, 1.0), n), points)
            error = np.abs(implicit - explicit) / np.maximum(explicit, 1e-300)
            error[explicit == 0] = np.abs(implicit[explicit == 0])
            self.assertLess(float(error.max()), 1e-10)
            print(f"   - n={n:.4f}: max relative error {error.max():.2e}")

    # Test 3: Axis reproduction
    def test_03_axis_reproduction(self):
        """Test on-axis levels against the axis coenergy"""
        print("\n3. Testing axis reproduction...")

        h = np.geomspace(1e-3, 1e3, 100)
        rolling, transverse = steel_curves()
        for curve in (make_linear_curve(2.0), rolling):
            model = make_model(COENERGY, curve, transverse, 3.0)
            levels = solve_levels(model, np.stack([h, np.zeros_like(h)], axis=1))
            expected = curve.coenergy(h)
            self.assertLess(float(np.max(np.abs(levels - expected) / expected)), 1e-10)
            print(f"   - {curve.kind} curve reproduced on 100 points")

    # Test 4: Uniqueness for constant exponents
    def test_04_constant_exponent_uniqueness(self):
        """Test single sign change of the residual for constant exponents"""
        print("\n4. Testing constant-exponent uniqueness...")

        rng = np.random.default_rng(7)
        for _ in range(64):
            c1, c2 = rng.uniform(0.5, 3.0, size=2)
            n = rng.uniform(1.0, 8.0)
            model = linear_model(COENERGY, c1, c2, n)
            point = random_off_axis(rng, 1, 0.01, 10.0)[0]
            level = solve_level(model, point)
            report = check_uniqueness(model, point, (level / 1e3, level * 1e3))
            self.assertEqual(report.sign_changes, 1)
            self.assertTrue(report.monotone)

        rolling, transverse = steel_curves()
        model = make_model(ENERGY, rolling, transverse, 1.7)
        level = solve_level(model, (1.2, 0.9))
        report = check_uniqueness(model, (1.2, 0.9), (level / 100, level * 100))
        self.assertEqual(report.sign_changes, 1)
        print("   - 64 random linear models and one tabulated model: one sign change")

    # Test 5: Non-uniqueness fixture
    def test_05_nonunique_fixture(self):
        """Test the frozen variable-exponent model with several roots"""
        print("\n5. Testing non-uniqueness fixture...")

        model = load_model(fixture('nonunique.json'))
        report = check_uniqueness(model, (1.0, 1.0), (0.01, 100.0))
        self.assertGreaterEqual(report.sign_changes, 2)
        self.assertFalse(report.monotone)
        self.assertFalse(report.reliable)
        print(f"   - {report.sign_changes} sign changes at (1, 1)")

        self.assertTrue(model.screening.flagged)
        solution = solve_level_report(model, (1.0, 1.0))
        self.assertIn(NON_MONOTONE_RESIDUAL, solution.warnings)
        self.assertLessEqual(abs(solution.residual), 1e-12)
        print(f"   - Screened at construction, warning carried: level {solution.level:.6f}")

    # Test 6: Solver robustness
    def test_06_solver_robustness(self):
        """Test certified solves over random models and points"""
        print("\n6. Testing solver robustness...")

        rng = np.random.default_rng(11)
        total = 0
        for _ in range(20):
            c1, c2 = rng.uniform(0.3, 5.0, size=2)
            n = rng.uniform(1.0, 10.0)
            frame = COENERGY if rng.uniform() < 0.5 else ENERGY
            model = linear_model(frame, c1, c2, n)

            points = random_off_axis(rng, 500, 1e-3, 1.0) * 10.0 ** rng.uniform(-3, 3, size=(500, 1))
            levels = solve_levels(model, points)
            state = level_state(model, np.abs(points).T, levels)
            self.assertTrue(np.all(np.isfinite(levels)) and np.all(levels > 0))
            self.assertLessEqual(float(np.max(np.abs(state.residual))), 1e-12)
            total += len(points)
        print(f"   - {total} points certified with |F| <= 1e-12")

    # Test 7: Exponent rules
    def test_07_exponent_rule(self):
        """Test constant and tabulated exponents"""
        print("\n7. Testing exponent rules...")

        rule = ExponentRule.tabulated([[1.0, 2.0], [3.0, 4.0]])
        self.assertFalse(rule.is_constant)
        self.assertAlmostEqual(float(rule.value(2.0)), 3.0)
        self.assertAlmostEqual(float(rule.value(0.1)), 2.0)
        self.assertAlmostEqual(float(rule.value(10.0)), 4.0)
        self.assertAlmostEqual(float(rule.derivative(2.0)), 1.0)
        self.assertAlmostEqual(float(rule.derivative(10.0)), 0.0)
        self.assertTrue(ExponentRule.constant(13.0 / 3.0).is_constant)
        print("   - Piecewise-linear, clamped outside the table")

        with self.assertRaises(InvalidExponent):
            ExponentRule.constant(0.0)
        with self.assertRaises(InvalidExponent):
            ExponentRule.tabulated([[2.0, 2.0], [1.0, 3.0]])
        print("   - Non-positive exponents and unordered tables rejected")

    # Test 8: Settings, hashing and parallel evaluation
    def test_08_settings_and_hash(self):
        """Test environment settings, model hashes and chunked evaluation"""
        print("\n8. Testing settings and hashing...")

        settings = load_settings({'MAGANISO_THREADS': '4', 'MAGANISO_REL_TOL': '1e-11'})
        self.assertEqual(settings.threads, 4)
        self.assertEqual(settings.rel_tol, 1e-11)
        self.assertEqual(SolverSettings.from_settings(settings).rel_tol, 1e-11)
        for bad in ({'MAGANISO_THREADS': '0'}, {'MAGANISO_THREADS': 'many'},
                    {'MAGANISO_LOG_LEVEL': 'LOUD'}):
            with self.assertRaises(ConfigParseError):
                load_settings(bad)
        print("   - Settings parsed and validated")

        first = linear_model(COENERGY, 2.0, 1.0, 2.0)
        second = linear_model(COENERGY, 2.0, 1.0, 2.0)
        third = linear_model(COENERGY, 2.0, 1.0, 3.0)
        self.assertEqual(model_hash(first), model_hash(second))
        self.assertNotEqual(model_hash(first), model_hash(third))
        print(f"   - Model hash {model_hash(first)}")

        points = np.random.default_rng(3).uniform(-5, 5, size=(20000, 2))
        serial = chunked_map(lambda block: block.sum(axis=1), points, 1)
        threaded = chunked_map(lambda block: block.sum(axis=1), points, 4)
        np.testing.assert_array_equal(serial, threaded)
        print("   - Threaded chunks preserve order")

    # Test 9: Small and mixed-magnitude points
    def test_09_small_magnitude_points(self):
        """Test certified solves for points of any sign and magnitude"""
        print("\n9. Testing small-magnitude points...")

        rng = np.random.default_rng(11)
        total = 0
        for _ in range(20):
            c1, c2 = rng.uniform(0.3, 5.0, size=2)
            n = rng.uniform(1.0, 10.0)
            frame = COENERGY if rng.uniform() < 0.5 else ENERGY
            model = linear_model(frame, c1, c2, n)

            points = rng.uniform(-1.0, 1.0, size=(5000, 2)) * 10.0 ** rng.uniform(-3, 3, size=(5000, 1))
            levels = solve_levels(model, points)
            state = level_state(model, np.abs(points).T, levels)
            self.assertTrue(np.all(np.isfinite(levels)) and np.all(levels > 0))
            self.assertLessEqual(float(np.max(np.abs(state.residual))), 1e-12)
            total += len(points)
        print(f"   - {total} points certified with |F| <= 1e-12")

        model = linear_model(COENERGY, 0.52018, 3.94306, 6.5625)
        solution = solve_level_report(model, (8.03e-5, 2.156e-3))
        self.assertGreater(solution.level, 0.0)
        self.assertLessEqual(abs(solution.residual), 1e-12)
        print(f"   - Narrow-bracket point: level {solution.level:.6e}, |F| = {abs(solution.residual):.1e}")

    # Test 10: Settled Newton iterate
    def test_10_newton_keeps_evaluated_iterate(self):
        """Test that the xtol/ftol exit returns the point where f was measured"""
        print("\n10. Testing Newton exit point...")

        def shifted(x):
            return x - 1.0, np.ones_like(x)

        start = 1.0 + 1e-13
        x, iterations, converged = safeguarded_newton(
            shifted, np.array([0.0]), np.array([2.0]), x0=start, rtol=0.0, xtol=1e-12, ftol=1e-12)
        self.assertTrue(converged.all())
        self.assertEqual(iterations, 1)
        self.assertEqual(float(x[0]), start)
        self.assertLessEqual(abs(shifted(x)[0][0]), 1e-12)
        print("   - Exit on |step| <= xtol and |f| <= ftol keeps the evaluated x")


class MaterialLawTestCase(unittest.TestCase):
    """Unit tests for vector laws and differential tensors"""

    # Test 1: Linear law
    def test_01_linear_gradient(self):
        """Test b(h) of the linear anisotropic model"""
        print("\n1. Testing linear gradient...")

        model = linear_model(COENERGY, 2.0, 1.0, 2.0)
        np.testing.assert_allclose(gradient(model, (2.0, 1.0)), [0.5, 1.0], rtol=1e-12)
        np.testing.assert_array_equal(gradient(model, (0.0, 0.0)), [0.0, 0.0])
        print("   - b(2, 1) = (0.5, 1), b(0) = 0")

        tensor = hessian(model, (1.3, -0.4))
        np.testing.assert_allclose(tensor.to_list(), [0.25, 0.0, 1.0], atol=1e-12)
        self.assertTrue(tensor.is_positive_definite())
        print("   - mu' = diag(1/c1^2, 1/c2^2)")

    # Test 2: Gradient against finite differences
    def test_02_gradient_finite_differences(self):
        """Test implicit-differentiation gradients"""
        print("\n2. Testing gradients against finite differences...")

        rng = np.random.default_rng(21)
        points = random_off_axis(rng, 200)
        for n in (2.0, 3.0, N13_3):
            model = linear_model(COENERGY, 2.0, 1.0, n)
            analytic = gradients(model, points)
            fd = fd_gradient(lambda p: solve_levels(model, p), points)
            error = np.max(np.abs(analytic - fd), axis=1) / np.max(np.abs(analytic), axis=1)
            self.assertLess(float(error.max()), 1e-6)
            print(f"   - n={n:.4f}: max relative error {error.max():.2e}")

    # Test 3: Hessian against finite differences
    def test_03_hessian_finite_differences(self):
        """Test implicit-differentiation Hessians"""
        print("\n3. Testing Hessians against finite differences...")

        rng = np.random.default_rng(22)
        points = random_off_axis(rng, 200)
        for n in (2.0, 3.0, N13_3):
            model = linear_model(COENERGY, 2.0, 1.0, n)
            analytic = hessians(model, points)
            d1 = fd_gradient(lambda p: gradients(model, p)[:, 0], points)
            d2 = fd_gradient(lambda p: gradients(model, p)[:, 1], points)
            fd = np.stack([d1[:, 0], 0.5 * (d1[:, 1] + d2[:, 0]), d2[:, 1]], axis=1)
            error = np.max(np.abs(analytic - fd), axis=1) / np.max(np.abs(analytic), axis=1)
            self.assertLess(float(error.max()), 1e-5)
            print(f"   - n={n:.4f}: max relative error {error.max():.2e}")

    # Test 4: Variable exponent derivatives
    def test_04_variable_exponent_derivatives(self):
        """Test derivatives with a level-dependent exponent"""
        print("\n4. Testing variable-exponent derivatives...")

        rule = ExponentRule.tabulated([[0.1, 2.0], [10.0, 4.0]])
        model = make_model(COENERGY, make_linear_curve(2.0), make_linear_curve(1.0), rule)
        points = np.array([[2.0, 1.0], [1.5, -1.2], [-3.0, 0.7], [0.8, 2.0]])
        levels = solve_levels(model, points)
        self.assertTrue(np.all((levels > 0.2) & (levels < 9.0)))

        analytic = gradients(model, points)
        fd = fd_gradient(lambda p: solve_levels(model, p), points)
        np.testing.assert_allclose(analytic, fd, rtol=1e-6, atol=1e-9)
        print("   - Gradient matches finite differences")

        analytic = hessians(model, points)
        d1 = fd_gradient(lambda p: gradients(model, p)[:, 0], points)
        d2 = fd_gradient(lambda p: gradients(model, p)[:, 1], points)
        np.testing.assert_allclose(analytic[:, 0], d1[:, 0], rtol=1e-5, atol=1e-6)
        np.testing.assert_allclose(analytic[:, 1], d1[:, 1], rtol=1e-5, atol=1e-6)
        np.testing.assert_allclose(analytic[:, 2], d2[:, 1], rtol=1e-5, atol=1e-6)
        print("   - Hessian matches finite differences")

        result = evaluate(model, (2.0, 1.0), with_hessian=True)
        self.assertIn(VARIABLE_EXPONENT_DERIVATIVE, result.warnings)
        print(f"   - Warning tag carried: {result.warnings}")

    # Test 5: Singularities
    def test_05_singularities(self):
        """Test axis and origin singularity contracts"""
        print("\n5. Testing singularities...")

        energy = linear_model(ENERGY, 2.0, 1.0, P13_10)
        with self.assertRaises(AxisSingularity):
            hessian(energy, (1.0, 0.0))
        print("   - Energy frame p=1.3 on axis: AxisSingularity")

        coenergy = linear_model(COENERGY, 2.0, 1.0, N13_3)
        with self.assertRaises(OriginSingularity):
            hessian(coenergy, (0.0, 0.0))
        self.assertTrue(np.all(np.isfinite(hessian(coenergy, (1.0, 0.0)).to_list())))
        print("   - Origin singular, n > 2 finite on axis")

        result = evaluate(coenergy, (0.0, 0.0))
        self.assertEqual(result.level, 0.0)
        self.assertEqual(result.gradient, (0.0, 0.0))
        print("   - evaluate at origin returns zero level and field")

    # Test 6: Tensor pair
    def test_06_tensor_pair(self):
        """Test mu' nu' = I for a conjugate pair"""
        print("\n6. Testing differential tensor pair...")

        coenergy = linear_model(COENERGY, 2.0, 1.0, N13_3)
        energy = linear_model(ENERGY, 2.0, 1.0, P13_10)
        rng = np.random.default_rng(5)
        worst = 0.0
        for h in random_off_axis(rng, 50, 0.1, 3.0):
            mu, nu, error = differential_tensor_pair(coenergy, energy, h)
            self.assertTrue(mu.is_positive_definite())
            worst = max(worst, error)
        self.assertLessEqual(worst, 1e-6)
        print(f"   - 50 points, max |mu' nu' - I| = {worst:.2e}")

    # Test 7: Symmetric tensors
    def test_07_sym_tensor(self):
        """Test symmetric 2x2 tensor helpers"""
        print("\n7. Testing symmetric tensors...")

        tensor = SymTensor2.from_matrix([[2.0, 1.0], [1.0, 3.0]])
        low, high = tensor.eigenvalues()
        np.testing.assert_allclose([low, high], np.linalg.eigvalsh(tensor.matrix()), rtol=1e-14)
        self.assertLess(tensor.product_error(tensor.inverse()), 1e-14)
        self.assertFalse(SymTensor2(1.0, 2.0, 1.0).is_positive_definite())
        print("   - Eigenvalues, inverse and definiteness")

    # Test 8: Warning tags on every route
    def test_08_warning_routes(self):
        """Test warning tags from the vectorized routes and evaluate"""
        print("\n8. Testing warning routes...")

        rule = ExponentRule.tabulated([[0.1, 2.0], [10.0, 4.0]])
        model = make_model(COENERGY, make_linear_curve(2.0), make_linear_curve(1.0), rule)
        with self.assertLogs('law.material_law', level='WARNING') as logs:
            value_function(model).gradient((2.0, 1.0))
        self.assertTrue(any(VARIABLE_EXPONENT_DERIVATIVE in line for line in logs.output))
        print("   - Gradient route logs VariableExponentDerivative")

        with self.assertLogs('law.material_law', level='DEBUG') as logs:
            hessians(model, np.array([[2.0, 1.0]]))
        self.assertTrue(all(VARIABLE_EXPONENT_DERIVATIVE in line for line in logs.output))
        self.assertTrue(all(line.startswith('DEBUG') for line in logs.output))
        print("   - Repeat calls on the same model log at DEBUG")

        nonunique = load_model(fixture('nonunique.json'))
        result = evaluate(nonunique, (3.0, 3.0))
        self.assertIn(NON_MONOTONE_RESIDUAL, result.warnings)
        self.assertIn(VARIABLE_EXPONENT_DERIVATIVE, result.warnings)
        print(f"   - evaluate merges level warnings: {result.warnings}")

        tensor = hessian(linear_model(COENERGY, 2.0, 1.0, N13_3), (1.5, -0.7))
        matrix = tensor.matrix()
        self.assertEqual(matrix[0, 1], matrix[1, 0])
        print("   - Hessian stored symmetric")


class ClosedFormTestCase(unittest.TestCase):
    """Unit tests for explicit reference models"""

    # Test 1: p-norm values
    def test_01_pnorm_values(self):
        """Test squared p-norm coenergy and energy"""
        print("\n1. Testing p-norm values...")

        coenergy = PNormModel(COENERGY, (2.0, 1.0), 2.0)
        self.assertAlmostEqual(pnorm_value(coenergy, (2.0, 1.0)), 1.0, places=15)
        self.assertEqual(pnorm_value(coenergy, (0.0, 0.0)), 0.0)
        energy = PNormModel(ENERGY, (2.0, 1.0), P13_10)
        self.assertAlmostEqual(pnorm_value(energy, (0.0, 0.7)), 0.5 * 0.49, places=15)
        print("   - Worked examples reproduced")

        large = PNormModel(COENERGY, (2.0, 1.0), N13_3)
        value = pnorm_value(large, (1e6, -3e5))
        self.assertTrue(np.isfinite(value))
        print(f"   - Stable at |h| = 1e6: {value:.6e}")

        with self.assertRaises(InvalidExponent):
            PNormModel(COENERGY, (1.0, 1.0), 0.5)
        with self.assertRaises(NonPositiveCoefficient):
            PNormModel(COENERGY, (0.0, 1.0), 2.0)

    # Test 2: p-norm gradients
    def test_02_pnorm_gradient(self):
        """Test analytic gradients of the p-norm"""
        print("\n2. Testing p-norm gradients...")

        model = PNormModel(COENERGY, (2.0, 1.0), 2.0)
        np.testing.assert_allclose(pnorm_gradient(model, (2.0, 1.0)), [0.5, 1.0], rtol=1e-15)

        model = PNormModel(COENERGY, (2.0, 1.0), N13_3)
        point = np.array([1.3, -0.7])
        np.testing.assert_allclose(pnorm_gradient(model, -point), -pnorm_gradient(model, point), rtol=1e-15)
        print("   - Quadratic example and odd symmetry")

        rng = np.random.default_rng(31)
        points = random_off_axis(rng, 100)
        for e in (1.5, 2.0, N13_3):
            model = PNormModel(ENERGY, (2.0, 1.0), e)
            fd = fd_gradient(lambda p: pnorm_value(model, p), points)
            np.testing.assert_allclose(pnorm_gradient(model, points), fd, rtol=1e-7, atol=1e-9)
        print("   - Gradients match finite differences")

    # Test 3: p-norm Hessians
    def test_03_pnorm_hessian(self):
        """Test analytic Hessians and their singularities"""
        print("\n3. Testing p-norm Hessians...")

        model = PNormModel(COENERGY, (2.0, 1.0), 2.0)
        np.testing.assert_allclose(pnorm_hessian(model, (3.0, -1.0)).to_list(), [0.25, 0.0, 1.0], rtol=1e-14)
        np.testing.assert_allclose(pnorm_hessian(model, (0.0, 0.0)).to_list(), [0.25, 0.0, 1.0], rtol=1e-14)
        print("   - n=2: diag(1/c1^2, 1/c2^2) everywhere")

        rng = np.random.default_rng(32)
        points = random_off_axis(rng, 50)
        for e in (1.5, N13_3):
            model = PNormModel(COENERGY, (2.0, 1.0), e)
            for point in points:
                d1 = fd_gradient(lambda p: pnorm_gradient(model, p)[:, 0], point[None, :])[0]
                d2 = fd_gradient(lambda p: pnorm_gradient(model, p)[:, 1], point[None, :])[0]
                np.testing.assert_allclose(pnorm_hessian(model, point).to_list(),
                                           [d1[0], d1[1], d2[1]], rtol=1e-5, atol=1e-9)
        print("   - Hessians match finite differences")

        with self.assertRaises(AxisSingularity):
            pnorm_hessian(PNormModel(ENERGY, (2.0, 1.0), P13_10), (1.0, 0.0))
        with self.assertRaises(OriginSingularity):
            pnorm_hessian(PNormModel(COENERGY, (2.0, 1.0), 3.0), (0.0, 0.0))
        print("   - Axis and origin singularities raised")

    # Test 4: Conjugate exponents
    def test_04_conjugate_exponent(self):
        """Test e / (e - 1) and the dual model"""
        print("\n4. Testing conjugate exponents...")

        self.assertEqual(conjugate_exponent(2.0), 2.0)
        self.assertAlmostEqual(conjugate_exponent(N13_3), P13_10, places=14)
        self.assertAlmostEqual(conjugate_exponent(P13_10), N13_3, places=13)
        with self.assertRaises(ExponentNotConjugable):
            conjugate_exponent(1.0)
        print("   - 2 -> 2, 13/3 <-> 13/10")

        dual = PNormModel(COENERGY, (2.0, 1.0), N13_3).conjugate()
        self.assertEqual(dual.frame, ENERGY)
        self.assertAlmostEqual(dual.exponent, P13_10, places=14)
        self.assertEqual(dual.scales, (2.0, 1.0))
        print("   - Dual model swaps frame and exponent")

    # Test 5: Homogeneity and convexity
    def test_05_homogeneity_and_convexity(self):
        """Test degree-2 homogeneity and midpoint convexity"""
        print("\n5. Testing homogeneity and convexity...")

        rng = np.random.default_rng(41)
        points = rng.uniform(-10, 10, size=(1000, 2))
        scales = rng.uniform(0.1, 10.0, size=1000)
        for e in (1.0, 1.5, N13_3):
            model = PNormModel(COENERGY, (2.0, 1.0), e)
            scaled = pnorm_value(model, points * scales[:, None])
            np.testing.assert_allclose(scaled, scales ** 2 * pnorm_value(model, points), rtol=1e-13)

            first = rng.uniform(-10, 10, size=(10000, 2))
            second = rng.uniform(-10, 10, size=(10000, 2))
            average = 0.5 * (pnorm_value(model, first) + pnorm_value(model, second))
            middle = pnorm_value(model, 0.5 * (first + second))
            self.assertFalse(np.any(middle > average + 1e-12 * np.maximum(1.0, average)))
        print("   - Homogeneous of degree 2, midpoint convex on 10^4 triples")

    # Test 6: Proportional-axes model
    def test_06_special_model(self):
        """Test the explicit solution for proportional axis inverses"""
        print("\n6. Testing proportional-axes model...")

        axis = np.linspace(-5.0, 5.0, 21)
        grid_x, grid_y = np.meshgrid(axis, axis)
        points = np.stack([grid_x.ravel(), grid_y.ravel()], axis=1)

        for n in (1.5, 2.0, N13_3):
            model = linear_model(COENERGY, 2.0, 1.0, n)
            special = SpecialModel.from_profiles(model.axis1, model.axis2, n)
            self.assertAlmostEqual(special.lam, 2.0, places=12)

            expected = solve_levels(model, points)
            values = special_value(special, points)
            np.testing.assert_allclose(values, expected, rtol=1e-10, atol=1e-300)

            off_axis = points[np.all(points != 0, axis=1)]
            np.testing.assert_allclose(special_gradient(special, off_axis), gradients(model, off_axis), rtol=1e-9)
        print("   - Values and gradients equal the implicit solve on a 21x21 grid")

        special = SpecialModel.from_profiles(model.axis1, model.axis2, 2.0)
        self.assertEqual(special_value(special, (0.0, 0.0)), 0.0)
        self.assertAlmostEqual(special_value(special, (3.0, 0.0)), float(model.axis1.curve.coenergy(3.0)), places=14)
        print("   - Origin and axis reproduction")

        rolling, transverse = steel_curves()
        with self.assertRaises(ProportionalityViolated):
            SpecialModel.from_profiles(EnergyProfile(rolling), EnergyProfile(transverse), 2.0)
        print("   - Non-proportional measured axes rejected")

    # Test 7: Implicit counterpart
    def test_07_pnorm_to_implicit(self):
        """Test conversion of a p-norm model to an implicit model"""
        print("\n7. Testing p-norm to implicit conversion...")

        closed = PNormModel(ENERGY, (2.0, 1.0), P13_10)
        implicit = pnorm_model_to_implicit(closed)
        points = random_off_axis(np.random.default_rng(51), 100)
        np.testing.assert_allclose(solve_levels(implicit, points), pnorm_value(closed, points), rtol=1e-10)
        np.testing.assert_allclose(gradients(implicit, points), pnorm_gradient(closed, points), rtol=1e-9)
        print("   - Values and gradients agree")


class AnalysisTestCase(unittest.TestCase):
    """Unit tests for contours, loci, duality and convexity"""

    # Test 1: Contours of quadratic models
    def test_01_quadratic_contours(self):
        """Test circle and ellipse contours"""
        print("\n1. Testing quadratic contours...")

        circle = trace_contour(linear_model(COENERGY, 1.0, 1.0, 2.0), 0.5, samples=64)
        np.testing.assert_allclose(circle.radii, 1.0, atol=1e-10)
        self.assertTrue(circle.closed)
        print("   - Isotropic level 0.5: unit circle")

        model = linear_model(COENERGY, 2.0, 1.0, 2.0)
        ellipse = trace_contour(model, 0.5, samples=64)
        self.assertAlmostEqual(float(ellipse.radii[0]), float(model.axis1.inverse(0.5)[0]), places=12)
        self.assertAlmostEqual(float(ellipse.radii[0]), 2.0, places=12)
        self.assertAlmostEqual(float(ellipse.radii[16]), 1.0, places=12)
        self.assertAlmostEqual(float(ellipse.radii[0] / ellipse.radii[16]), 2.0, delta=1e-8)
        print("   - Anisotropic: semi-axes (2, 1)")

    # Test 2: Contour geometry
    def test_02_contour_geometry(self):
        """Test symmetry, nesting and radial monotonicity"""
        print("\n2. Testing contour geometry...")

        model = linear_model(COENERGY, 2.0, 1.0, N13_3)
        samples = 64
        inner = trace_contour(model, 0.5, samples)
        outer = trace_contour(model, 1.0, samples)

        mirrored = inner.points[(samples // 2 - np.arange(samples)) % samples] * np.array([-1.0, 1.0])
        np.testing.assert_allclose(inner.points, mirrored, atol=1e-10)
        self.assertTrue(np.all(inner.radii < outer.radii))
        self.assertTrue(polygon_is_convex(inner.points))
        print("   - Mirror symmetric, nested, convex")

        thetas = np.linspace(0.0, 2.0 * np.pi, 16, endpoint=False)
        radii = np.linspace(0.1, 5.0, 32)
        for theta in thetas:
            ray = radii[:, None] * np.array([np.cos(theta), np.sin(theta)])
            self.assertTrue(np.all(np.diff(solve_levels(model, ray)) > 0))
        print("   - Values strictly increase along 16 rays")

        with self.assertRaises(NonPositiveLevel):
            trace_contour(model, 0.0)

    # Test 3: Constant-induction loci
    def test_03_locus(self):
        """Test fields producing inductions of fixed magnitude"""
        print("\n3. Testing constant-induction loci...")

        pair = ModelPair(energy=linear_model(ENERGY, 2.0, 1.0, 2.0))
        np.testing.assert_allclose(fields_at_angles(pair, 1.0, [0.0])[0], [4.0, 0.0], atol=1e-12)
        print("   - phi = 0: h = (4, 0)")

        locus = locus_constant_induction(linear_model(COENERGY, 1.0, 1.0, 2.0), 1.0, samples=32)
        np.testing.assert_allclose(locus.radii, 1.0, atol=1e-10)
        print("   - Isotropic locus is the unit circle")

    # Test 4: Energy and coenergy routes
    def test_04_locus_routes_agree(self):
        """Test direct and Newton-inverted loci of a conjugate pair"""
        print("\n4. Testing locus routes...")

        coenergy = linear_model(COENERGY, 2.0, 1.0, N13_3)
        energy = linear_model(ENERGY, 2.0, 1.0, P13_10)
        direct = locus_constant_induction(ModelPair(energy=energy), 1.0, samples=64)
        inverted = locus_constant_induction(ModelPair(coenergy=coenergy), 1.0, samples=64)

        scale = np.max(np.abs(direct.points))
        self.assertLessEqual(float(np.max(np.abs(direct.points - inverted.points))), 1e-6 * scale)
        b = gradients(coenergy, inverted.points)
        np.testing.assert_allclose(np.hypot(b[:, 0], b[:, 1]), 1.0, rtol=1e-9)
        print("   - 64 angles agree within 1e-6")

    # Test 5: Hard axis
    def test_05_hard_axis(self):
        """Test the direction of hard magnetization"""
        print("\n5. Testing hard axis...")

        quadratic = ModelPair(coenergy=linear_model(COENERGY, 2.0, 1.0, 2.0),
                              energy=linear_model(ENERGY, 2.0, 1.0, 2.0))
        result = hard_axis(quadratic, 1.0)
        self.assertAlmostEqual(result.angle, 0.0, delta=1e-4)
        self.assertFalse(result.degenerate)
        print(f"   - n=2: phi = {result.angle}")

        isotropic = hard_axis(linear_model(ENERGY, 1.0, 1.0, 2.0), 1.0)
        self.assertTrue(isotropic.degenerate)
        self.assertAlmostEqual(isotropic.field_magnitude, 1.0, places=12)
        print("   - Isotropic: degenerate")

        pair = ModelPair(coenergy=linear_model(COENERGY, 2.0, 1.0, N13_3),
                         energy=linear_model(ENERGY, 2.0, 1.0, P13_10))
        result = hard_axis(pair, 1.0)
        self.assertGreater(result.angle, 0.05)
        self.assertLess(result.angle, 1.52)
        self.assertGreater(result.field_magnitude, 4.0)

        inverted = hard_axis(ModelPair(coenergy=pair.coenergy), 1.0)
        self.assertAlmostEqual(inverted.angle, result.angle, delta=1e-4)
        print(f"   - n=13/3: phi = {result.angle:.5f} rad off the principal axes")

    # Test 6: Legendre oracle
    def test_06_legendre_oracle(self):
        """Test the grid convex conjugate"""
        print("\n6. Testing Legendre oracle...")

        quadratic = PNormModel(ENERGY, (1.0, 1.0), 2.0)
        value = legendre_oracle(quadratic, (1.0, 0.0), box=(-3, 3, -3, 3), resolution=601)
        self.assertAlmostEqual(value, 0.5, delta=5 * 0.01)
        self.assertEqual(legendre_oracle(quadratic, (0.0, 0.0)), 0.0)
        print(f"   - Quadratic self-conjugate: {value:.6f}")

        energy = PNormModel(ENERGY, (2.0, 1.0), P13_10)
        with self.assertRaises(ArgmaxOnBoundary):
            legendre_oracle(energy, (1.0, 1.0), box=(-0.1, 0.1, -0.1, 0.1), resolution=51)
        print("   - Undersized grid rejected")

    # Test 7: Duality suite
    def test_07_duality(self):
        """Test the energy conjugate against the coenergy model"""
        print("\n7. Testing duality...")

        axis = np.linspace(-2.0, 2.0, 9)
        grid_x, grid_y = np.meshgrid(axis, axis)
        points = np.stack([grid_x.ravel(), grid_y.ravel()], axis=1)

        energy = linear_model(ENERGY, 2.0, 1.0, P13_10)
        coenergy = linear_model(COENERGY, 2.0, 1.0, N13_3)
        result = legendre_suite(energy, coenergy, points, resolution=401)
        self.assertTrue(result.passed)
        self.assertLessEqual(result.max_scaled_deviation, 5.0)
        print(f"   - 81 points, max deviation {result.max_deviation:.2e} (spacing {result.spacing:.3e})")

    # Test 8: Convexity of proportional-axes models
    def test_08_convexity_scan(self):
        """Test convexity scans of linear-axes models"""
        print("\n8. Testing convexity scans...")

        for n in (1.5, 2.0, N13_3):
            model = linear_model(COENERGY, 2.0, 1.0, n)
            report = convexity_scan(model, (-5, 5, -5, 5), grid=41, triples=2000, contour_samples=128)
            self.assertGreater(report.min_eigenvalue, 0.0)
            self.assertEqual(report.midpoint_violations, 0)
            self.assertTrue(all(report.contour_convex.values()))
            self.assertTrue(report.convex)
            if n == 2.0:
                self.assertAlmostEqual(report.min_eigenvalue, 0.25, places=10)
            print(f"   - n={n:.4f}: min eigenvalue {report.min_eigenvalue:.4e}")

    # Test 9: Non-convex variable exponent
    def test_09_nonconvex_fixture(self):
        """Test a variable exponent that breaks convexity"""
        print("\n9. Testing non-convex fixture...")

        model = load_model(fixture('nonconvex.json'))
        x, y = np.array([0.5, 0.5]), np.array([1.4, 1.4])
        middle = solve_level(model, 0.5 * (x + y))
        average = 0.5 * (solve_level(model, x) + solve_level(model, y))
        self.assertGreater(middle, average)
        print(f"   - w*(mid) = {middle:.4f} > average {average:.4f}")

        report = convexity_scan(model, (0.0, 1.5, 0.0, 1.5), grid=31, triples=2000, contour_samples=64)
        self.assertFalse(report.convex)
        print(f"   - Scan: min eigenvalue {report.min_eigenvalue:.4e}, "
              f"{report.midpoint_violations} midpoint violations")

    # Test 10: Value function adapter
    def test_10_value_function(self):
        """Test the model adapter and model pairs"""
        print("\n10. Testing value function adapter...")

        closed = PNormModel(COENERGY, (2.0, 1.0), N13_3)
        implicit = pnorm_model_to_implicit(closed)
        point = (1.2, -0.4)
        self.assertAlmostEqual(value_function(closed).value(point), value_function(implicit).value(point), places=12)
        self.assertIs(value_function(value_function(closed)).model, closed)

        with self.assertRaises(TypeError):
            value_function(object())
        with self.assertRaises(ValueError):
            ModelPair()
        with self.assertRaises(ValueError):
            ModelPair(coenergy=linear_model(ENERGY, 1.0, 1.0, 2.0))
        print("   - Implicit and closed forms interchangeable, pairs validated")


class CommandLineTestCase(unittest.TestCase):
    """Unit tests for config files, the CLI and the HTTP service"""

    # Test 1: Eval
    def test_01_cli_eval(self):
        """Test eval, grad and hess commands"""
        print("\n1. Testing CLI evaluation...")

        status, out, _ = run_cli(['eval', '--model', fixture('lin_n2.json'), '--point', '2,1'])
        self.assertEqual(status, 0)
        self.assertEqual(out.strip(), '1.0')
        status, out, _ = run_cli(['eval', '--model', fixture('lin_n2.json'), '--point', '0,0'])
        self.assertEqual(out.strip(), '0.0')
        print("   - eval 2,1 -> 1.0, eval 0,0 -> 0.0")

        status, out, _ = run_cli(['grad', '--model', fixture('lin_n2.json'), '--point', '2,1'])
        self.assertEqual(out.strip(), '0.5,1.0')
        status, out, _ = run_cli(['hess', '--model', fixture('lin_n2.json'), '--point', '2,1'])
        np.testing.assert_allclose([float(v) for v in out.strip().split(',')], [0.25, 0.0, 1.0], atol=1e-12)
        status, out, _ = run_cli(['eval', '--model', fixture('pnorm_n13_3.json'), '--point', '2,1'])
        self.assertAlmostEqual(float(out), pnorm_value(PNormModel(COENERGY, (2.0, 1.0), N13_3), (2.0, 1.0)), places=11)
        print("   - grad, hess and closed-form configs")

    # Test 2: Errors
    def test_02_cli_errors(self):
        """Test exit codes and diagnostics"""
        print("\n2. Testing CLI errors...")

        status, _, err = run_cli(['eval', '--model', fixture('lin_n2.json')])
        self.assertEqual(status, 2)
        status, _, err = run_cli(['eval', '--model', fixture('lin_n2.json'), '--point', 'a,b'])
        self.assertEqual(status, 2)
        status, _, err = run_cli(['explode', '--model', fixture('lin_n2.json')])
        self.assertEqual(status, 2)
        print("   - Usage errors exit 2")

        status, _, err = run_cli(['eval', '--model', fixture('missing.json'), '--point', '1,1'])
        self.assertEqual(status, 1)
        errors = [line for line in err.splitlines() if line.startswith('error: ')]
        self.assertEqual(len(errors), 1)
        self.assertTrue(errors[0].startswith('error: ConfigParseError: '))

        status, _, err = run_cli(['hess', '--model', fixture('energy_p13_10.json'), '--point', '1,0'])
        self.assertEqual(status, 1)
        self.assertIn('error: AxisSingularity: ', err)
        print("   - Model errors exit 1 with a one-line diagnostic")

    # Test 3: Contour output
    def test_03_cli_contour(self):
        """Test contour CSV output, round trip and determinism"""
        print("\n3. Testing CLI contour...")

        with tempfile.TemporaryDirectory() as folder:
            first = os.path.join(folder, 'first.csv')
            second = os.path.join(folder, 'second.csv')
            argv = ['contour', '--model', fixture('steel_n3.json'), '--levels', '50,400', '--samples', '32']
            self.assertEqual(run_cli(argv + ['--output', first])[0], 0)
            self.assertEqual(run_cli(argv + ['--output', second])[0], 0)

            with open(first) as handle:
                text = handle.read()
            with open(second) as handle:
                self.assertEqual(handle.read(), text)
            print("   - Byte-identical output on repeat")

            model = load_model(fixture('steel_n3.json'))
            self.assertTrue(text.startswith(f"# maganiso contour {model_hash(model)}\ntheta,x1,x2\n"))

            with open(first) as handle:
                blocks = read_polylines(handle)
            self.assertEqual([label for label, _ in blocks], ['level=50.0', 'level=400.0'])
            for label, rows in blocks:
                level = float(label.split('=')[1])
                self.assertEqual(len(rows), 32)
                points = np.array([row[1:] for row in rows])
                np.testing.assert_allclose(solve_levels(model, points), level, rtol=1e-9)
            print("   - Vertices re-evaluate to their levels")

    # Test 4: Hard axis and locus
    def test_04_cli_figures(self):
        """Test hard-axis, locus and check-uniqueness commands"""
        print("\n4. Testing CLI figure commands...")

        status, out, _ = run_cli(['hard-axis', '--model', fixture('pair_n13_3.json'), '--bmag', '1'])
        self.assertEqual(status, 0)
        angle = float(out)
        self.assertTrue(0.0 < angle < 1.5707)
        print(f"   - hard-axis: {angle}")

        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'locus.csv')
            status, _, _ = run_cli(['locus', '--model', fixture('energy_p13_10.json'), '--bmag', '1',
                                    '--samples', '16', '--output', path])
            self.assertEqual(status, 0)
            with open(path) as handle:
                blocks = read_polylines(handle)
            self.assertEqual(blocks[0][0], 'bmag=1.0')
            self.assertEqual(len(blocks[0][1]), 16)
            self.assertAlmostEqual(blocks[0][1][0][1], 4.0, places=10)
            print("   - locus written")

            path = os.path.join(folder, 'unique.json')
            status, _, _ = run_cli(['check-uniqueness', '--model', fixture('nonunique.json'), '--point', '1,1',
                                    '--range', '0.01,100', '--output', path])
            self.assertEqual(status, 0)
            with open(path) as handle:
                report = json.load(handle)
            self.assertGreaterEqual(report['sign_changes'], 2)
            self.assertEqual(report['subcommand'], 'check-uniqueness')
            print(f"   - check-uniqueness: {report['sign_changes']} sign changes")

    # Test 5: Conjugate check and convexity
    def test_05_cli_checks(self):
        """Test conjugate-check and convexity commands"""
        print("\n5. Testing CLI checks...")

        status, out, _ = run_cli(['conjugate-check', '--model', fixture('energy_p13_10.json'),
                                  '--dual', fixture('pnorm_n13_3.json'), '--resolution', '201'])
        self.assertEqual(status, 0)
        self.assertLess(float(out), 0.1)
        print(f"   - conjugate-check max deviation {out.strip()}")

        status, out, _ = run_cli(['convexity', '--model', fixture('lin_n2.json'), '--box', '-5,5,-5,5',
                                  '--grid', '11', '--triples', '200'])
        self.assertEqual(status, 0)
        report = json.loads(out)
        self.assertTrue(report['convex'])
        self.assertAlmostEqual(report['min_eigenvalue'], 0.25, places=10)
        print("   - convexity report")

    # Test 6: Config files
    def test_06_config_files(self):
        """Test model config parsing"""
        print("\n6. Testing model config files...")

        steel = load_model(fixture('steel_n3.json'))
        self.assertGreater(solve_level(steel, (100.0, 50.0)), 0.0)
        variable = load_model(fixture('steel_variable.json'))
        result = evaluate(variable, (1.2, 0.6))
        self.assertIn(VARIABLE_EXPONENT_DERIVATIVE, result.warnings)
        print("   - Measured curves with constant and tabulated exponents")

        pair = load_model(fixture('pair_n13_3.json'))
        self.assertIsInstance(pair, ModelPair)
        self.assertEqual(pair.coenergy.frame, COENERGY)

        for bad in ([], {'frame': 'coenergy'}, {'frame': 'magnetic', 'axis1': {'linear': 1},
                                                 'axis2': {'linear': 1}, 'exponent': {'constant': 2}},
                    {'frame': 'coenergy', 'axis1': {'spline': 1}, 'axis2': {'linear': 1},
                     'exponent': {'constant': 2}},
                    {'frame': 'coenergy', 'axis1': {'linear': 1}, 'axis2': {'linear': 1},
                     'exponent': {'constant': 2}, 'solver': {'tolerance': 1}}):
            with self.assertRaises(ConfigParseError):
                parse_model(bad)
        print("   - Malformed configs rejected")

        self.assertEqual(format_number(0.1 + 0.2), '0.3')
        self.assertEqual(format_number(1), '1.0')

    # Test 7: HTTP service
    def test_07_api(self):
        """Test the Flask JSON service"""
        print("\n7. Testing HTTP service...")

        from api.app import app
        client = app.test_client()
        model = {'frame': 'coenergy', 'axis1': {'linear': 2.0}, 'axis2': {'linear': 1.0},
                 'exponent': {'constant': 2.0}}

        self.assertEqual(client.get('/health').get_json()['status'], 'healthy')

        response = client.post('/api/eval', json={'model': model, 'point': [2.0, 1.0]})
        self.assertEqual(response.status_code, 200)
        self.assertAlmostEqual(response.get_json()['value'], 1.0, places=12)

        response = client.post('/api/grad', json={'model': model, 'point': [2.0, 1.0]})
        np.testing.assert_allclose(response.get_json()['gradient'], [0.5, 1.0], rtol=1e-12)
        self.assertEqual(response.get_json()['warnings'], [])

        variable = dict(model, exponent={'table': [[0.1, 2.0], [10.0, 4.0]]})
        response = client.post('/api/grad', json={'model': variable, 'point': [2.0, 1.0]})
        self.assertIn('VariableExponentDerivative', response.get_json()['warnings'])

        response = client.post('/api/hess', json={'model': model, 'point': [1.0, 1.0]})
        self.assertTrue(response.get_json()['positive_definite'])

        response = client.post('/api/contour', json={'model': model, 'level': 0.5, 'samples': 8})
        self.assertEqual(len(response.get_json()['points']), 8)
        print("   - health, eval, grad, hess, contour")

        response = client.post('/api/eval', json={'model': {'frame': 'coenergy'}, 'point': [1, 1]})
        self.assertEqual(response.status_code, 400)
        self.assertEqual(response.get_json()['error'], 'ConfigParseError')

        response = client.post('/api/hess', json={'model': model, 'point': [0.0, 0.0]})
        self.assertEqual(response.status_code, 400)
        self.assertEqual(response.get_json()['error'], 'OriginSingularity')
        print("   - Errors mapped to HTTP 400")


TEST_CASES = (
    PrincipalCurveTestCase,
    ImplicitModelTestCase,
    MaterialLawTestCase,
    ClosedFormTestCase,
    AnalysisTestCase,
    CommandLineTestCase,
)


def run_tests():
    """Run all unit tests"""
    # Create test suite
    loader = unittest.TestLoader()
    test_suite = unittest.TestSuite(loader.loadTestsFromTestCase(case) for case in TEST_CASES)

    # Run tests with detailed output
    runner = unittest.TextTestRunner(verbosity=2)
    result = runner.run(test_suite)

    # Print summary
    print("\n" + "=" * 60)
    print("TEST SUMMARY")
    print("=" * 60)
    print(f"Tests run: {result.testsRun}")
    print(f"Successes: {result.testsRun - len(result.failures) - len(result.errors)}")
    print(f"Failures: {len(result.failures)}")
    print(f"Errors: {len(result.errors)}")

    if result.testsRun > 0:
        success_rate = ((result.testsRun - len(result.failures) - len(result.errors)) / result.testsRun * 100)
        print(f"Success rate: {success_rate:.1f}%")

    if result.failures:
        print("\nFAILURES:")
        for test, traceback in result.failures:
            print(f"  - {test}")

    if result.errors:
        print("\nERRORS:")
        for test, traceback in result.errors:
            print(f"  - {test}")

    if not result.failures and not result.errors:
        print("\nALL TESTS PASSED!")

    print("=" * 60)

    return result.wasSuccessful()


if __name__ == "__main__":
    print("Anisotropic Material Models - Unit Test Suite")
    print("=" * 60)

    try:
        success = run_tests()
        exit(0 if success else 1)
    except KeyboardInterrupt:
        print("\n\nTests interrupted by user")
        exit(1)
