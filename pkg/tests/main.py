import unittest

from tests.test_amoeba import TestAmoebaPoints, TestTentacles
from tests.test_arguments import TestArgumentDesc, TestValueTypes
from tests.test_asymptotics import TestAsymptotics
from tests.test_cli import TestCli
from tests.test_config import TestConfig, TestGridSpec
from tests.test_ensemble import TestRoots, TestSampling, TestZeroStatistics
from tests.test_geometry import TestGeometry
from tests.test_oracles import TestClosedForms, TestSolverAgainstClosedForms
from tests.test_polytope import TestPolytope
from tests.test_region import TestLimitPotential, TestMongeAmpere, TestPsiHessian, TestSolveRegion
from tests.test_rootfinding import TestAberth, TestCoefficients
from tests.test_szego import TestKernelDiag, TestMonomials, TestPotential

CASES = (
    TestPolytope, TestGeometry, TestGridSpec, TestConfig,
    TestKernelDiag, TestPotential, TestMonomials,
    TestSolveRegion, TestLimitPotential, TestPsiHessian, TestMongeAmpere,
    TestAsymptotics, TestAberth, TestCoefficients,
    TestSampling, TestRoots, TestZeroStatistics,
    TestTentacles, TestAmoebaPoints,
    TestClosedForms, TestSolverAgainstClosedForms,
    TestArgumentDesc, TestValueTypes, TestCli,
)


def suite():
    suite = unittest.TestSuite()
    for case in CASES:
        suite.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(case))
    return suite


if __name__ == '__main__':
    runner = unittest.TextTestRunner()
    runner.run(suite())
