import math
import unittest

import numpy as np
from numpy.testing import assert_allclose

from newton_ensemble import oracles
from newton_ensemble.cli.handlers import oracle_comparison
from newton_ensemble.config import GridSpec
from newton_ensemble.geometry import softplus_logsum


class TestClosedForms(unittest.TestCase):

    # (case, s, label)
    LABELS = [
        ('square', (0.0, 0.0), oracles.ALLOWED),
        ('square', (0.0, math.log(4.0)), 'R_F'),
        ('square', (math.log(4.0), 0.0), 'R_F*'),
        ('trapezoid', (0.0, math.log(4.0)), 'R_F'),
        ('trapezoid', (math.log(4.0), 0.0), oracles.ALLOWED),
        ('hirzebruch2', (-1.0, -2.0), oracles.ALLOWED),
        ('hirzebruch2', (1.0, -1.0), oracles.ALLOWED),
        ('hirzebruch2', (-1.0, 1.0), 'R_F'),
        ('hirzebruch2', (1.0, 1.0), "R_F'"),
        ('hirzebruch2', (1.0, 3.0), 'R_v'),
        ('hirzebruch3', (-2.0, 1.0), 'R_F'),
        ('hirzebruch3', (1.0, 1.0), "R_F'"),
        ('hirzebruch3', (1.0, 5.0), 'R_v'),
    ]

    def test_labels_and_ranks(self):
        for name, s, label in TestClosedForms.LABELS:
            with self.subTest(case=name, s=s):
                case = oracles.ORACLE_CASES[name]
                result = case.evaluate(np.array(s))
                self.assertEqual(label, result.label)
                self.assertEqual(case.ranks[label], result.rank)
                self.assertEqual(result.rank, np.linalg.matrix_rank(result.hessian, tol=1e-10))
                self.assertGreaterEqual(result.b, 0.0)

    def test_square_value(self):
        self.assertAlmostEqual(math.log(9 / 8), oracles.square_oracle((0.0, math.log(4.0))).b)

    def test_hessian_of_u(self):
        h = 1e-4
        for name, s, label in TestClosedForms.LABELS:
            case = oracles.ORACLE_CASES[name]
            p = case.polytope().p

            def u(t):
                return p * float(softplus_logsum(t)) - case.evaluate(t).b

            s = np.array(s)
            numeric = np.empty((2, 2))
            for i, e in enumerate(np.eye(2) * h):
                for j, d in enumerate(np.eye(2) * h):
                    numeric[i, j] = (u(s + e + d) - u(s + e - d) - u(s - e + d) + u(s - e - d)) / (4 * h * h)
            with self.subTest(case=name, s=s.tolist()):
                assert_allclose(case.evaluate(s).hessian, numeric, atol=1e-5)

    def test_b_is_continuous(self):
        epsilon = 1e-7
        for n in (2, 3):
            critical = -math.log(n - 1)
            # a2 = (n-1)^(n-1) a1^n at s1 = critical + 1
            cusp = (n - 1) * math.log(n - 1) + n * (critical + 1.0)
            # (point on an interface, direction crossing it)
            crossings = [
                ((critical, critical + 2.0), (1.0, 0.0)),
                ((critical + 1.0, cusp), (0.0, 1.0)),
                ((critical + 1.0, critical), (0.0, 1.0)),
                ((-1.5, math.log((math.exp(-1.5) + 1) / n)), (0.0, 1.0)),
            ]
            for point, direction in crossings:
                with self.subTest(n=n, point=point):
                    step = epsilon * np.array(direction)
                    before = oracles.hirzebruch_oracle(n, np.array(point) - step)
                    after = oracles.hirzebruch_oracle(n, np.array(point) + step)
                    self.assertNotEqual(before.label, after.label)
                    self.assertAlmostEqual(before.b, after.b, delta=1e-5)

    def test_hirzebruch_needs_n(self):
        with self.assertRaises(ValueError):
            oracles.hirzebruch_oracle(1, (0.0, 0.0))
        self.assertEqual(((0, 0), (3, 0), (0, 1), (1, 1)), oracles.hirzebruch_polytope(2).vertices)


class TestSolverAgainstClosedForms(unittest.TestCase):

    def test_square_forbidden_grid(self):
        grid = GridSpec.parse('-3:1:20x2:5:20')
        rows = oracle_comparison(oracles.ORACLE_CASES['square'], grid)
        self.assertTrue(all(row.passed for row in rows), rows)
        self.assertEqual(400, rows[0].points)

    def test_all_cases(self):
        grid = GridSpec.parse('-4:4:40x-4:4:40')
        for name, case in oracles.ORACLE_CASES.items():
            with self.subTest(name):
                rows = oracle_comparison(case, grid)
                failed = [row for row in rows if not row.passed]
                self.assertEqual([], failed)
