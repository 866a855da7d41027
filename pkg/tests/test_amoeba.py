import unittest

import numpy as np

from newton_ensemble import amoeba, ensemble, polytope
from newton_ensemble.ensemble import PolySample
from newton_ensemble.errors import DimensionUnsupported, EmptyRestriction
from newton_ensemble.polytope import SimplexFacet

SQUARE = polytope.from_vertices([(0, 0), (1, 0), (0, 1), (1, 1)])
TRAPEZOID = polytope.from_vertices([(0, 0), (1, 0), (2, 0), (0, 1), (1, 1)])


class TestTentacles(unittest.TestCase):

    # (name, polytope, length, facets with no free roots)
    CASES = [
        ('square', SQUARE, 2, {SimplexFacet.INFINITY}),
        ('trapezoid', TRAPEZOID, 4, set()),
    ]

    def test_counts(self):
        N = 20
        for name, P, length, empty in TestTentacles.CASES:
            with self.subTest(name):
                results = amoeba.tentacle_trials(P, N, 50, seed=99)
                self.assertTrue(all(result.total == length * N for result in results))
                self.assertTrue(all(result.length == length for result in results))
                for facet in empty:
                    self.assertTrue(all(result.per_facet[facet].count == 0 for result in results))
                mean = np.mean([result.nu_at for result in results]) / N
                self.assertAlmostEqual(length, mean, delta=0.15 * length)

    def test_records_follow_counts(self):
        rng = np.random.default_rng(4)
        f = ensemble.sample_poly(TRAPEZOID, 5, rng)
        stats = amoeba.tentacle_stats(f, TRAPEZOID, 5, rng)
        self.assertEqual(stats.total, len(stats.records))
        self.assertEqual(stats.nu_at, sum(record.allowed for record in stats.records))
        # the bottom edge of the trapezoid spans the whole facet of 2Σ
        bottom = stats.per_facet[SimplexFacet.AXIS_2]
        self.assertEqual(10, bottom.count)
        self.assertEqual(10, bottom.allowed)
        self.assertEqual(stats.to_dict()['facets']['x2=0']['segment'], [0, 2])

    def test_restriction(self):
        f = PolySample.from_terms({(0, 0): 1, (0, 2): -4, (1, 1): 3, (2, 0): 5})
        restricted = amoeba.restrict_to_facet(f, SimplexFacet.AXIS_1, 2)
        self.assertEqual([[0], [2]], restricted.support.tolist())
        top = amoeba.restrict_to_facet(f, SimplexFacet.INFINITY, 2)
        self.assertEqual([[2], [1], [0]], top.support.tolist())
        with self.assertRaises(EmptyRestriction):
            amoeba.restrict_to_facet(PolySample.from_terms({(1, 1): 1, (0, 0): 1}), SimplexFacet.AXIS_2, 2)

    def test_dimension(self):
        segment = polytope.from_vertices([(1,), (2,)])
        f = ensemble.sample_poly(segment, 2, np.random.default_rng(0))
        with self.assertRaises(DimensionUnsupported):
            amoeba.tentacle_stats(f, segment, 2)
        with self.assertRaises(DimensionUnsupported):
            amoeba.amoeba_points(f, [0.0])


class TestAmoebaPoints(unittest.TestCase):

    def test_line(self):
        # 1 + z1 + z2 = 0
        f = PolySample.from_terms({(0, 0): 1, (1, 0): 1, (0, 1): 1})
        sample = amoeba.amoeba_points(f, np.linspace(-4, 4, 9), phases=8)
        self.assertEqual(len(sample.points), len(sample.zeros))
        self.assertGreater(len(sample), 60)
        for z in sample.zeros:
            self.assertLess(abs(1 + z[0] + z[1]), 1e-10)
        assert_points = np.log(np.abs(sample.zeros))
        np.testing.assert_allclose(assert_points, sample.points)

    def test_hyperbola_lies_on_the_antidiagonal(self):
        # z1 z2 = 1 gives log|z1| + log|z2| = 0
        f = PolySample.from_terms({(1, 1): 1, (0, 0): -1})
        sample = amoeba.amoeba_points(f, np.linspace(-3, 3, 7), phases=8)
        self.assertEqual(7 * 8, len(sample.points))
        np.testing.assert_allclose(0.0, sample.points.sum(axis=1), atol=1e-10)
