import math
import unittest

import numpy as np
from numpy.testing import assert_allclose

from newton_ensemble import oracles, polytope, region
from newton_ensemble.config import Tolerances
from newton_ensemble.errors import ConfigError, NonDelzant, TransitionPoint

SQUARE = polytope.from_vertices([(0, 0), (1, 0), (0, 1), (1, 1)])
SEGMENT = polytope.from_vertices([(1,), (2,)])
TRAPEZOID = polytope.from_vertices([(0, 0), (1, 0), (2, 0), (0, 1), (1, 1)])
HIRZEBRUCH2 = oracles.hirzebruch_polytope(2)


def forbidden_points(P, count, seed, bound=4.0):
    rng = np.random.default_rng(seed)
    candidates = rng.uniform(-bound, bound, size=(20 * count, P.dim))
    batch = region.classify(P, candidates)
    keep = ~batch.allowed & ~batch.transition
    return candidates[keep][:count]


class TestSolveRegion(unittest.TestCase):

    def test_square_top_edge(self):
        result = region.solve_region(SQUARE, (0.0, math.log(4.0)))
        self.assertFalse(result.allowed)
        self.assertEqual(1, result.face.dim)
        self.assertEqual(((0, 1), (1, 1)), result.face.vertices)
        assert_allclose([0.0, -math.log(2.0)], result.tau, atol=1e-10)
        assert_allclose([0.5, 1.0], result.q, atol=1e-10)
        self.assertAlmostEqual(math.log(9 / 8), result.b, places=10)
        self.assertFalse(result.transition)

    def test_segment_vertex(self):
        result = region.solve_region(SEGMENT, (math.log(0.25),))
        self.assertEqual(0, result.face.dim)
        self.assertEqual(((1,),), result.face.vertices)
        assert_allclose([math.log(4.0)], result.tau, atol=1e-12)
        assert_allclose([1.0], result.q, atol=1e-12)
        self.assertAlmostEqual(math.log(25 / 16), result.b, places=12)

    def test_allowed_point(self):
        result = region.solve_region(SQUARE, (0.0, 0.0))
        self.assertTrue(result.allowed)
        self.assertEqual(0.0, result.b)
        assert_allclose([2 / 3, 2 / 3], result.q)
        assert_allclose([0.0, 0.0], region.grad_b(SQUARE, (0.0, 0.0)), atol=1e-15)

    def test_top_edge_family(self):
        s1 = np.linspace(-2.0, 2.0, 41)
        points = np.stack([s1, np.log(np.exp(s1) + 2.0)], axis=1)
        batch = region.classify(SQUARE, points)
        top = next(face for face in SQUARE.faces if face.vertices == ((0, 1), (1, 1)))
        self.assertTrue(all(batch.faces[i] == top for i in batch.face_index))
        expected = [oracles.square_oracle(s).b for s in points]
        assert_allclose(expected, batch.b, atol=1e-9)
        self.assertEqual(1, batch.accepted.max())

    def test_transition_point(self):
        # a2 = a1 + 1 is the boundary of the allowed region
        result = region.solve_region(SQUARE, (0.0, math.log(2.0)))
        self.assertTrue(result.transition)
        self.assertLess(result.b, 1e-12)
        with self.assertRaises(TransitionPoint):
            region.psi_hessian(SQUARE, (0.0, math.log(2.0)))

    def test_non_delzant(self):
        with self.assertRaises(NonDelzant):
            region.solve_region(polytope.from_vertices([(0, 0), (2, 1), (1, 2)]), (0.0, 0.0))

    def test_dimension_mismatch(self):
        with self.assertRaises(ConfigError):
            region.classify(SQUARE, np.zeros((3, 3)))

    def test_tolerances_are_part_of_the_cache_key(self):
        # just outside the allowed region: only a wide face tolerance lets the interior accept too
        s = (0.0, math.log(2.0) + 1e-7)
        loose = Tolerances(face=1e-5, transition=1e-5)
        self.assertTrue(region.solve_region(SQUARE, s, loose).transition)
        self.assertFalse(region.solve_region(SQUARE, s).transition)

    def test_deep_edge_point_is_no_transition(self):
        s = (-18.0, 5.0)
        batch = region.classify(SQUARE, [s])
        self.assertEqual([1], batch.accepted.tolist())
        self.assertFalse(batch.transition[0])
        result = region.solve_region(SQUARE, s)
        self.assertEqual(((0, 1), (1, 1)), result.face.vertices)
        self.assertGreater(result.b, 0.0)
        # saturated q: only the absence of TransitionPoint is checked, not the rank
        self.assertEqual(result.face, region.psi_hessian(SQUARE, s).face)
        _, ranks, _ = region.psi_hessian_batch(SQUARE, [s])
        self.assertNotEqual(-1, ranks[0])

    def test_segment_endpoint_of_allowed_interval(self):
        # q = p mu_sigma(0) = 1 sits on the vertex 1 of [1, 2]
        self.assertTrue(region.solve_region(SEGMENT, (0.0,)).transition)

    def test_one_face_accepts_random_points(self):
        for P in (SEGMENT, SQUARE, TRAPEZOID, HIRZEBRUCH2):
            with self.subTest(polytope=P.vertices):
                points = np.random.default_rng(17).uniform(-15.0, 15.0, size=(10000, P.dim))
                batch = region.classify(P, points)
                self.assertEqual(1, batch.accepted.min())
                self.assertTrue(np.all(batch.accepted[~batch.transition] == 1))
                self.assertLessEqual(int(batch.transition.sum()), 10)

    def test_q_is_monotone(self):
        rng = np.random.default_rng(23)
        for P in (SEGMENT, SQUARE, TRAPEZOID, HIRZEBRUCH2):
            with self.subTest(polytope=P.vertices):
                s = rng.uniform(-8.0, 8.0, size=(2000, P.dim))
                t = rng.uniform(-8.0, 8.0, size=(2000, P.dim))
                q_s, q_t = region.classify(P, s).q, region.classify(P, t).q
                self.assertGreaterEqual(((q_s - q_t) * (s - t)).sum(axis=1).min(), -1e-8)


class TestLimitPotential(unittest.TestCase):

    def test_gradients_match_finite_differences(self):
        h = 1e-5
        for P in (SQUARE, HIRZEBRUCH2, SEGMENT):
            m = P.dim
            solver = region.region_solver(P)
            points = np.random.default_rng(5).uniform(-4, 4, size=(100, m))
            base = solver.solve_batch(points)
            offsets = np.concatenate([np.eye(m), -np.eye(m)]) * h
            stencil = solver.solve_batch((points[:, None, :] + offsets).reshape(-1, m))
            straddle = (stencil.face_index.reshape(-1, 2 * m) != base.face_index[:, None]).any(axis=1)
            checked = 0
            for i in np.flatnonzero(~straddle & ~base.transition):
                s = points[i]
                grad_u = [(region.u_infty(P, s + h * e) - region.u_infty(P, s - h * e)) / (2 * h)
                          for e in np.eye(m)]
                grad_b = [(region.decay_b(P, s + h * e) - region.decay_b(P, s - h * e)) / (2 * h)
                          for e in np.eye(m)]
                assert_allclose(grad_u, base.q[i], atol=1e-6)
                assert_allclose(grad_b, region.grad_b(P, s), atol=1e-6)
                checked += 1
            self.assertGreater(checked, 90)

    def test_b_is_c1_across_the_interface(self):
        epsilon = 1e-6
        for s1 in np.linspace(-3.0, 3.0, 20):
            # a2 = a1 + 1 is the upper boundary of the allowed region
            s2 = math.log1p(math.exp(s1))
            inside = region.solve_region(SQUARE, (s1, s2 - epsilon))
            outside = region.solve_region(SQUARE, (s1, s2 + epsilon))
            self.assertTrue(inside.allowed)
            self.assertFalse(outside.allowed)
            assert_allclose(region.grad_b(SQUARE, (s1, s2 - epsilon)),
                            region.grad_b(SQUARE, (s1, s2 + epsilon)), atol=1e-4)
            self.assertLess(abs(outside.b - inside.b), 1e-8)

    def test_action_matches_b(self):
        for P in (SEGMENT, SQUARE, TRAPEZOID, HIRZEBRUCH2):
            for s in forbidden_points(P, 50, seed=9):
                with self.subTest(polytope=P.vertices, s=s.tolist()):
                    self.assertAlmostEqual(region.decay_b(P, s), region.decay_b_action(P, s), delta=1e-6)

    def test_action_needs_steps(self):
        with self.assertRaises(ConfigError):
            region.decay_b_action(SQUARE, (0.0, 2.0), steps=4)

    def test_b_is_nonnegative(self):
        points = np.random.default_rng(2).uniform(-6, 6, size=(2000, 2))
        self.assertGreaterEqual(region.classify(HIRZEBRUCH2, points).b.min(), 0.0)


class TestPsiHessian(unittest.TestCase):

    # (polytope, s, rank)
    RANKS = [
        (SQUARE, (0.0, 0.0), 2),
        (SQUARE, (0.0, math.log(4.0)), 1),
        (SQUARE, (math.log(4.0), 0.0), 1),
        (HIRZEBRUCH2, (-1.0, 1.0), 1),
        (HIRZEBRUCH2, (1.0, 1.0), 1),
        (HIRZEBRUCH2, (1.0, 3.0), 0),
        (SEGMENT, (1.0,), 1),
        (SEGMENT, (-3.0,), 0),
    ]

    def test_ranks(self):
        for P, s, rank in TestPsiHessian.RANKS:
            with self.subTest(polytope=P.vertices, s=s):
                result = region.psi_hessian(P, s)
                self.assertEqual(rank, result.rank)
                self.assertEqual(rank, result.face.dim)

    def test_allowed_hessian(self):
        s = np.array([0.2, -0.1])
        expected = oracles.square_oracle(s).hessian
        assert_allclose(expected, region.psi_hessian(SQUARE, s).matrix, atol=1e-7)

    def test_batch_marks_transitions(self):
        points = np.array([[0.0, 0.0], [0.0, math.log(2.0)]])
        _, ranks, _ = region.psi_hessian_batch(SQUARE, points)
        self.assertEqual([2, -1], ranks.tolist())

    def test_normals_of_the_face_are_in_the_kernel(self):
        for P in (SQUARE, TRAPEZOID, HIRZEBRUCH2, SEGMENT):
            with self.subTest(polytope=P.vertices):
                points = forbidden_points(P, 200, seed=31)
                hessians, ranks, base = region.psi_hessian_batch(P, points)
                checked = 0
                for i in np.flatnonzero(ranks >= 0):
                    face = base.faces[base.face_index[i]]
                    normals = P.normals[list(face.active)]
                    assert_allclose(normals @ hessians[i], 0.0, atol=1e-5)
                    checked += 1
                self.assertGreater(checked, 150)


class TestMongeAmpere(unittest.TestCase):

    def test_total_mass_is_volume(self):
        for P in (SEGMENT, SQUARE, TRAPEZOID):
            with self.subTest(polytope=P.vertices):
                expected = float(polytope.volume(P))
                self.assertAlmostEqual(expected, region.monge_ampere_mass(P), delta=0.01 * expected)
