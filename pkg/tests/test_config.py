import os
import unittest
from unittest import mock

from newton_ensemble.config import THREADS_ENV, GridSpec, RunConfig, Tolerances, default_threads
from newton_ensemble.errors import ConfigError, GridSpecError


class TestGridSpec(unittest.TestCase):

    MALFORMED = ['', '1:2', '1:2:3:4', 'a:b:3', '0:1:1', '1:0:5', '-1:1:2.5']

    def test_parse(self):
        grid = GridSpec.parse('-3:3:61x-2:2:5')
        self.assertEqual(2, grid.dim)
        self.assertEqual((61, 5), grid.shape)
        self.assertEqual('-3:3:61x-2:2:5', str(grid))
        points = grid.points()
        self.assertEqual((305, 2), points.shape)
        self.assertEqual([-3.0, -2.0], points[0].tolist())
        self.assertEqual([-3.0, -1.0], points[1].tolist())
        self.assertEqual([3.0, 2.0], points[-1].tolist())

    def test_malformed(self):
        for text in TestGridSpec.MALFORMED:
            with self.subTest(text):
                with self.assertRaises(GridSpecError):
                    GridSpec.parse(text)


class TestConfig(unittest.TestCase):

    def test_tolerance_overrides(self):
        tolerances = Tolerances().replace(residual=1e-8, cone=None)
        self.assertEqual(1e-8, tolerances.residual)
        self.assertEqual(Tolerances().cone, tolerances.cone)
        with self.assertRaises(ConfigError):
            Tolerances().replace(bogus=1.0)

    def test_run_config(self):
        self.assertEqual('csv', RunConfig().output_format)
        for overrides in [dict(output_format='xml'), dict(coords='polar'), dict(seed=-1),
                          dict(seed=2 ** 64), dict(threads=0)]:
            with self.subTest(**overrides):
                with self.assertRaises(ConfigError):
                    RunConfig(**overrides)

    def test_threads_from_environment(self):
        with mock.patch.dict(os.environ, {THREADS_ENV: '4'}):
            self.assertEqual(4, default_threads())
        with mock.patch.dict(os.environ, {THREADS_ENV: 'many'}):
            with self.assertRaises(ConfigError):
                default_threads()
        with mock.patch.dict(os.environ, {}, clear=True):
            self.assertEqual(1, default_threads())
