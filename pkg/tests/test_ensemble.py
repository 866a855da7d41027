import unittest
from unittest import mock

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from newton_ensemble import ensemble, polytope, szego
from newton_ensemble.ensemble import PolySample
from newton_ensemble.errors import (
    ConfigError,
    DegenerateSystem,
    DimensionUnsupported,
    ResultantIllConditioned,
    RootFindingFailed,
)

SQUARE = polytope.from_vertices([(0, 0), (1, 0), (0, 1), (1, 1)])
SEGMENT = polytope.from_vertices([(1,), (2,)])


class TestSampling(unittest.TestCase):

    def test_support_is_the_lattice(self):
        f = ensemble.sample_poly(SQUARE, 3, np.random.default_rng(0))
        assert_array_equal(polytope.lattice_points(SQUARE, 3), f.support)
        self.assertEqual(16, len(f.coefficients))

    def test_streams_are_reproducible(self):
        first = ensemble.sample_poly(SQUARE, 2, ensemble.rng_stream(42, 3, 0))
        second = ensemble.sample_poly(SQUARE, 2, ensemble.rng_stream(42, 3, 0))
        other = ensemble.sample_poly(SQUARE, 2, ensemble.rng_stream(42, 4, 0))
        assert_array_equal(first.coefficients, second.coefficients)
        self.assertFalse(np.allclose(first.coefficients, other.coefficients))

    def test_expected_mass_is_the_kernel(self):
        z = np.exp(0.5 * np.array([0.3, -0.2]))
        rng = np.random.default_rng(17)
        masses = [np.exp(ensemble.fs_mass_log(ensemble.sample_poly(SQUARE, 2, rng), z))
                  for _ in range(2000)]
        kernel = szego.kernel_diag(SQUARE, 2, np.log(np.abs(z) ** 2)).value
        self.assertAlmostEqual(1.0, np.mean(masses) / kernel, delta=0.1)

    def test_from_terms(self):
        f = PolySample.from_terms({(1, 1): 1, (0, 0): -2})
        self.assertEqual(2, f.dim)
        self.assertEqual(0, f((1.0, 2.0)))
        assert_allclose([2.0, 1.0], f.gradient((1.0, 2.0)))


class TestRoots(unittest.TestCase):

    def test_roots_1d(self):
        f = PolySample.from_terms({(1,): -4, (3,): 1})
        assert_allclose([-2.0, 2.0], np.sort(ensemble.roots_1d(f).real), atol=1e-12)
        with self.assertRaises(DimensionUnsupported):
            ensemble.roots_1d(PolySample.from_terms({(1, 1): 1, (0, 0): -2}))

    def test_linear_root(self):
        assert_allclose([1.0], ensemble.roots_1d(PolySample.from_terms({(0,): -1, (1,): 1})), atol=1e-15)

    def test_zero_end_coefficients_are_dropped(self):
        f = PolySample.from_terms({(0,): 0, (1,): 1, (2,): -1, (3,): 0})
        assert_allclose([1.0], ensemble.roots_1d(f), atol=1e-15)

    def test_hyperbola_and_line(self):
        f = PolySample.from_terms({(1, 1): 1, (0, 0): -1})
        g = PolySample.from_terms({(1, 0): 1, (0, 0): -2})
        assert_allclose([[2.0, 0.5]], ensemble.zeros_2d(f, g), atol=1e-10)

    def test_torus_chart(self):
        f = PolySample.from_terms({(1, 1): 1, (2, 0): 3j, (0, 1): -2, (0, 0): 1})
        scale = np.array([0.5 * np.exp(0.3j), 2.0 * np.exp(-1.1j)])
        w = np.array([0.7 + 0.2j, -1.3 + 0.4j])
        self.assertAlmostEqual(f(scale * w), ensemble.torus_chart(f, scale)(w), places=12)
        self.assertAlmostEqual(f(scale * w[::-1]), ensemble.torus_chart(f, scale, swap=True)(w), places=12)

    def test_rotated_chart_after_ill_conditioned_resultant(self):
        resultant = ensemble._resultant_in_z1
        calls = []

        def fail_once(F, G, rng, attempts=3):
            calls.append(F.shape)
            if len(calls) == 1:
                raise ResultantIllConditioned('resultant interpolation did not settle')
            return resultant(F, G, rng, attempts)

        f = PolySample.from_terms({(1, 1): 1, (0, 0): -1})
        g = PolySample.from_terms({(1, 0): 1, (0, 0): -2})
        with mock.patch.object(ensemble, '_resultant_in_z1', side_effect=fail_once):
            zeros = ensemble.zeros_2d(f, g, np.random.default_rng(4))
        self.assertEqual(2, len(calls))
        assert_allclose([[2.0, 0.5]], zeros, atol=1e-10)

    def test_every_chart_ill_conditioned(self):
        f = PolySample.from_terms({(1, 1): 1, (0, 0): -1})
        g = PolySample.from_terms({(1, 0): 1, (0, 0): -2})
        failure = ResultantIllConditioned('resultant interpolation did not settle')
        with mock.patch.object(ensemble, '_resultant_in_z1', side_effect=failure) as resultant:
            with self.assertRaises(ResultantIllConditioned):
                ensemble.zeros_2d(f, g, np.random.default_rng(4), rotations=3)
        self.assertEqual(4, resultant.call_count)

    def test_linear_system(self):
        f = PolySample.from_terms({(1, 0): 1, (0, 0): -2})
        g = PolySample.from_terms({(0, 1): 1, (0, 0): -3})
        assert_allclose([[2.0, 3.0]], ensemble.zeros_2d(f, g), atol=1e-10)

    def test_two_zeros(self):
        f = PolySample.from_terms({(1, 1): 1, (0, 0): -2})
        g = PolySample.from_terms({(1, 0): 1, (0, 1): 1, (0, 0): -3})
        zeros = ensemble.zeros_2d(f, g)
        zeros = zeros[np.argsort(zeros[:, 0].real)]
        assert_allclose([[1.0, 2.0], [2.0, 1.0]], zeros, atol=1e-10)

    def test_degenerate_system(self):
        f = PolySample.from_terms({(1, 0): 1, (0, 1): 1, (0, 0): -3})
        g = PolySample.from_terms({(1, 0): 2, (0, 1): 2, (0, 0): -6})
        with self.assertRaises(DegenerateSystem):
            ensemble.zeros_2d(f, g)

    def test_degree_cap(self):
        rng = np.random.default_rng(0)
        f = ensemble.sample_poly(SQUARE, 6, rng)
        with self.assertRaises(ConfigError):
            ensemble.zeros_2d(f, f, rng)

    def test_random_square_system(self):
        rng = ensemble.rng_stream(5, 0)
        f = ensemble.sample_poly(SQUARE, 2, rng)
        g = ensemble.sample_poly(SQUARE, 2, rng)
        zeros = ensemble.zeros_2d(f, g, rng)
        self.assertEqual(8, len(zeros))
        for z in zeros:
            self.assertLess(f.relative_residual(z), 1e-8)
            self.assertLess(g.relative_residual(z), 1e-8)


class TestZeroStatistics(unittest.TestCase):

    def test_one_variable(self):
        stats = ensemble.zero_statistics(SEGMENT, 40, 200, seed=2024)
        counts = [count for count in stats.counts if count is not None]
        self.assertGreater(len(counts), 190)
        self.assertEqual({40}, set(counts))
        self.assertLess(stats.ks_distance, 0.05)
        self.assertEqual(sum(stats.histogram[1]), len(stats.s_values))

    def test_limit_distance_decreases(self):
        distances = [ensemble.zero_statistics(SEGMENT, N, 200, seed=2024).ks_distance_limit
                     for N in (10, 20, 40)]
        self.assertGreater(distances[0], distances[1])
        self.assertGreater(distances[1], distances[2])

    def test_full_simplex_is_allowed(self):
        stats = ensemble.zero_statistics(polytope.simplex(1, 2), 10, 20, seed=1)
        self.assertEqual(1.0, stats.allowed_mean)

    def test_square_counts(self):
        stats = ensemble.zero_statistics(SQUARE, 2, 100, seed=7)
        self.assertEqual(8, stats.expected_count)
        self.assertGreaterEqual(stats.kouchnirenko_rate, 0.95)
        self.assertTrue(all(point['bucket'] in ('allowed', 'forbidden', 'boundary')
                            for point in stats.points))

    def test_allowed_fraction_grows(self):
        coarse = ensemble.zero_statistics(SQUARE, 1, 100, seed=11)
        fine = ensemble.zero_statistics(SQUARE, 4, 100, seed=11)
        self.assertGreater(fine.allowed_mean, coarse.allowed_mean)

    def test_threads_do_not_change_results(self):
        single = ensemble.zero_statistics(SQUARE, 2, 12, seed=3, threads=1)
        pooled = ensemble.zero_statistics(SQUARE, 2, 12, seed=3, threads=4)
        self.assertEqual(single.counts, pooled.counts)
        self.assertEqual(single.to_dict(), pooled.to_dict())

    def test_expected_cdf(self):
        s = np.linspace(-15, 15, 61)
        cdf = ensemble.expected_zero_cdf(SEGMENT, 20, s)
        self.assertTrue(np.all(np.diff(cdf) > 0))
        self.assertLess(cdf[0], 1e-3)
        self.assertGreater(cdf[-1], 1 - 1e-3)
        limit = ensemble.limit_zero_cdf(SEGMENT, s)
        assert_allclose(0.0, limit[s < -1])

    def test_dimension_three(self):
        with self.assertRaises(DimensionUnsupported):
            ensemble.zero_statistics(polytope.simplex(3), 1, 1, seed=0)

    def test_root_finding_failures_are_counted(self):
        failure = RootFindingFailed('root certification failed for degree 10')
        with mock.patch.object(ensemble, 'aberth_roots', side_effect=failure):
            stats = ensemble.zero_statistics(SEGMENT, 5, 3, seed=1)
        self.assertEqual([None, None, None], stats.counts)
        self.assertEqual({'RootFindingFailed': 3}, stats.failures)
