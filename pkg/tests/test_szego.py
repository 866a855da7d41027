import math
import unittest

import numpy as np
from numpy.testing import assert_allclose

from newton_ensemble import polytope, szego
from newton_ensemble.asymptotics import monomial_decay_rate
from newton_ensemble.errors import LatticeOverflow, OutOfSimplex

SQUARE = polytope.from_vertices([(0, 0), (1, 0), (0, 1), (1, 1)])
SEGMENT = polytope.from_vertices([(1,), (2,)])
TRAPEZOID = polytope.from_vertices([(0, 0), (1, 0), (2, 0), (0, 1), (1, 1)])


class TestKernelDiag(unittest.TestCase):

    # (name, polytope, N, s, kernel value)
    VALUES = [
        ('square', SQUARE, 1, (0.0, 0.0), 28 / 3),
        ('segment', SEGMENT, 1, (0.0,), 9 / 4),
        ('simplex', polytope.simplex(2), 3, (0.4, -1.3), 20.0),
        ('simplex3', polytope.simplex(3, 2), 2, (0.1, 0.2, -0.5), 7 * 6 * 5),
    ]

    def test_values(self):
        for name, P, N, s, expected in TestKernelDiag.VALUES:
            with self.subTest(name):
                self.assertAlmostEqual(expected, szego.kernel_diag(P, N, s).value, places=10)

    def test_result_fields(self):
        result = szego.kernel_diag(SQUARE, 1, (0.0, 0.0))
        self.assertEqual(4, result.term_count)
        self.assertIn(result.argmax_alpha, {(1, 0), (0, 1), (1, 1)})
        self.assertEqual((2, 0), szego.kernel_diag(SQUARE, 2, (5.0, -5.0)).argmax_alpha)

    def test_large_arguments(self):
        # terms of size exp(2000) stay finite in log space
        result = szego.kernel_diag(SQUARE, 50, (20.0, 20.0))
        self.assertTrue(np.isfinite(result.log_value))
        self.assertGreater(result.log_value, 0.0)

    def test_batch_matches_single(self):
        points = np.random.default_rng(3).uniform(-5, 5, size=(300, 2))
        batch = szego.kernel_diag_batch(TRAPEZOID, 7, points, chunk=64)
        single = [szego.kernel_diag(TRAPEZOID, 7, s).log_value for s in points]
        assert_allclose(single, batch, rtol=1e-12, atol=1e-12)

    def test_mass_density(self):
        self.assertAlmostEqual(7 / 3, szego.mass_density(SQUARE, 1, (0.0, 0.0)))

    def test_full_simplex_kernel(self):
        # the multinomial theorem makes the sum over N p Sigma exact
        rng = np.random.default_rng(13)
        for m in (1, 2):
            for p in (1, 2, 3):
                P = polytope.simplex(m, p)
                for N in range(1, 11):
                    s = rng.uniform(-3.0, 3.0, m)
                    with self.subTest(m=m, p=p, N=N):
                        expected = szego.log_simplex_kernel(N * p, m)
                        self.assertAlmostEqual(expected, szego.kernel_diag(P, N, s).log_value,
                                               delta=1e-10 * max(1.0, expected))

    def test_mass_density_in_the_allowed_region(self):
        # p^m / Vol(P) for the square
        self.assertAlmostEqual(4.0, szego.mass_density(SQUARE, 100, (0.0, 0.0)), delta=0.08)

    def test_lattice_cap(self):
        with self.assertRaises(LatticeOverflow):
            szego.kernel_diag(SQUARE, 100, (0.0, 0.0), cap=100)


class TestPotential(unittest.TestCase):

    def setUp(self):
        self.points = np.random.default_rng(11).uniform(-4, 4, size=(20, 2))

    def test_gradient_lies_in_polytope(self):
        for s in self.points:
            x = szego.grad_u_N(TRAPEZOID, 6, s)
            self.assertTrue(np.all(TRAPEZOID.slacks(x) >= -1e-12))

    def test_gradient_matches_finite_differences(self):
        h = 1e-5
        for s in self.points[:5]:
            numeric = [(szego.u_N(SQUARE, 4, s + h * e) - szego.u_N(SQUARE, 4, s - h * e)) / (2 * h)
                       for e in np.eye(2)]
            assert_allclose(numeric, szego.grad_u_N(SQUARE, 4, s), atol=1e-7)

    def test_hessian_is_positive_semidefinite(self):
        for s in self.points:
            hessian = szego.hess_u_N(TRAPEZOID, 5, s)
            assert_allclose(hessian, hessian.T)
            self.assertGreaterEqual(np.linalg.eigvalsh(hessian).min(), -1e-12)

    def test_hessian_matches_finite_differences(self):
        h = 1e-5
        for s in self.points[:5]:
            numeric = [(szego.grad_u_N(TRAPEZOID, 4, s + h * e) - szego.grad_u_N(TRAPEZOID, 4, s - h * e)) / (2 * h)
                       for e in np.eye(2)]
            assert_allclose(numeric, szego.hess_u_N(TRAPEZOID, 4, s), atol=1e-7)

    def test_u_N_relation(self):
        s = np.array([0.3, -0.7])
        expected = szego.kernel_diag(SQUARE, 3, s).log_value / 3 \
            + SQUARE.p * math.log1p(np.exp(s).sum())
        self.assertAlmostEqual(expected, szego.u_N(SQUARE, 3, s), places=10)


class TestMonomials(unittest.TestCase):

    def test_fs_norm(self):
        # ||1||^2 = p! / (p+m)!
        self.assertAlmostEqual(math.log(1 / 12), szego.fs_norm_sq_log((0, 0), 2, 2))
        with self.assertRaises(OutOfSimplex):
            szego.fs_norm_sq_log((3, 0), 2, 2)
        with self.assertRaises(OutOfSimplex):
            szego.fs_norm_sq_log((-1, 1), 2, 2)

    def test_monomial_decay_rate(self):
        x = np.array([0.25, 0.25])
        s = np.zeros(2)
        mu = np.array([1 / 3, 1 / 3, 1 / 3])
        full = np.array([0.5, 0.25, 0.25])
        divergence = float((full * np.log(full / mu)).sum())
        rate = monomial_decay_rate(x, 2, s, [100, 200, 400, 800])
        self.assertAlmostEqual(2 * divergence, rate, delta=0.01)

    def test_monomial_at_moment_map_does_not_decay(self):
        rate = monomial_decay_rate([1 / 3, 1 / 3], 3, np.zeros(2), [100, 200, 400, 800])
        self.assertLess(abs(rate), 0.01)
