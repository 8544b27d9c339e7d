"""
哈密顿量核心原语测试
"""

import math
import sys
import unittest
from pathlib import Path

import numpy as np

# 添加 src 目录到Python路径
sys.path.insert(0, str(Path(__file__).resolve().parent.parent.parent / "src"))

from antithetic_hmc.services.core.exceptions import FactorizationError
from antithetic_hmc.services.core.hamiltonian import (
    LOG_2PI,
    MassKind,
    MassSpec,
    PhasePoint,
    RealizedMass,
    acceptance_probability,
    hamiltonian,
    kinetic_energy,
    kinetic_gradient,
    metropolis,
    realize_mass,
    sample_momentum,
)
from antithetic_hmc.services.business.models.benchmark_targets import GaussianTarget


class ShiftedTarget:
    """势能整体平移常数 c 的目标"""

    def __init__(self, model, c):
        self.model = model
        self.c = c

    def neg_log_posterior(self, w):
        return self.model.neg_log_posterior(w) + self.c


class PhasePointTest(unittest.TestCase):
    """相空间点测试"""

    def test_dimension_mismatch_rejected(self):
        with self.assertRaises(ValueError):
            PhasePoint(np.zeros(2), np.zeros(3))

    def test_flipped_negates_momentum(self):
        x = PhasePoint(np.array([1.0, 2.0]), np.array([0.5, -0.5]))
        flipped = x.flipped()
        np.testing.assert_array_equal(flipped.position, x.position)
        np.testing.assert_array_equal(flipped.momentum, -x.momentum)


class MassTest(unittest.TestCase):
    """质量矩阵测试"""

    def test_identity_realizes_to_unit_diagonal(self):
        mass = MassSpec.identity().realize(3)
        np.testing.assert_array_equal(mass.diagonal, np.ones(3), "单位质量应走对角路径")
        self.assertEqual(mass.logdet, 0.0)

    def test_fixed_dense_logdet(self):
        matrix = np.array([[2.0, 0.5], [0.5, 1.0]])
        mass = MassSpec.fixed_dense(matrix).realize(2)
        self.assertAlmostEqual(mass.logdet, math.log(np.linalg.det(matrix)), places=12)
        np.testing.assert_allclose(mass.matrix(), matrix, atol=1e-12)

    def test_fixed_dense_wrong_shape(self):
        with self.assertRaises(FactorizationError):
            MassSpec.fixed_dense(np.eye(3)).realize(2)

    def test_stochastic_mass_cannot_be_fixed(self):
        with self.assertRaises(ValueError):
            MassSpec.stochastic_diagonal(0.0, 1.0).realize(2)

    def test_negative_lognormal_scale_rejected(self):
        with self.assertRaises(ValueError):
            MassSpec.stochastic_diagonal(0.0, -0.1)
        self.assertIs(MassSpec.stochastic_diagonal(0.0, 0.0).kind, MassKind.STOCHASTIC_DIAGONAL)

    def test_non_positive_definite_names_matrix(self):
        with self.assertRaises(FactorizationError) as ctx:
            realize_mass(np.array([[1.0, 2.0], [2.0, 1.0]]), name="test_matrix")
        self.assertIn("test_matrix", str(ctx.exception), "错误信息应包含矩阵名称")
        self.assertEqual(ctx.exception.matrix_name, "test_matrix")

    def test_asymmetric_matrix_rejected(self):
        with self.assertRaises(FactorizationError):
            realize_mass(np.array([[1.0, 0.3], [0.0, 1.0]]))

    def test_non_positive_diagonal_rejected(self):
        with self.assertRaises(FactorizationError):
            RealizedMass.from_diagonal(np.array([1.0, 0.0]))

    def test_inverse_apply_dense(self):
        matrix = np.array([[2.0, 0.5], [0.5, 1.0]])
        p = np.array([1.0, -2.0])
        np.testing.assert_allclose(kinetic_gradient(p, matrix), np.linalg.solve(matrix, p), rtol=1e-12)


class EnergyTest(unittest.TestCase):
    """能量与动量抽样测试"""

    def test_kinetic_energy_identity(self):
        p = np.array([1.0, 2.0, 3.0])
        expected = 0.5 * 3 * LOG_2PI + 0.5 * 14.0
        self.assertAlmostEqual(kinetic_energy(p, np.eye(3)), expected, places=12)

    def test_kinetic_energy_includes_logdet(self):
        p = np.zeros(2)
        mass = RealizedMass.from_diagonal(np.array([math.e, math.e]))
        self.assertAlmostEqual(kinetic_energy(p, mass), LOG_2PI + 1.0, places=12)

    def test_hamiltonian_is_potential_plus_kinetic(self):
        model = GaussianTarget(dimension=2)
        x = PhasePoint(np.array([0.3, -0.4]), np.array([1.0, 0.5]))
        mass = MassSpec.identity().realize(2)
        expected = model.neg_log_posterior(x.position) + kinetic_energy(x.momentum, mass)
        self.assertAlmostEqual(hamiltonian(model, x, mass), expected, places=12)

    def test_kinetic_energy_even_in_momentum(self):
        mass = realize_mass(np.array([[2.0, 0.5], [0.5, 1.0]]))
        for p in (np.array([0.7, -1.3]), np.array([3.0, 0.1])):
            self.assertEqual(kinetic_energy(p, mass), kinetic_energy(-p, mass), "K(p) 应等于 K(−p)")

    def test_kinetic_gradient_matches_finite_differences(self):
        mass = realize_mass(np.array([[2.0, 0.5, 0.1], [0.5, 1.0, 0.2], [0.1, 0.2, 1.5]]))
        p = np.array([0.4, -1.1, 0.8])
        h = 1e-5
        numeric = np.empty(3)
        for i in range(3):
            step = np.zeros(3)
            step[i] = h
            numeric[i] = (kinetic_energy(p + step, mass) - kinetic_energy(p - step, mass)) / (2 * h)
        np.testing.assert_allclose(kinetic_gradient(p, mass), numeric, rtol=1e-7, atol=1e-9)

    def test_hamiltonian_shifts_with_potential(self):
        base = GaussianTarget(dimension=2)
        c = 7.25
        shifted = ShiftedTarget(base, c)
        x = PhasePoint(np.array([0.3, -0.4]), np.array([1.0, 0.5]))
        mass = MassSpec.identity().realize(2)
        self.assertAlmostEqual(hamiltonian(shifted, x, mass) - hamiltonian(base, x, mass), c, places=12,
                               msg="势能平移 c 时哈密顿量应平移 c")

    def test_momentum_covariance(self):
        matrix = np.array([[2.0, 0.5], [0.5, 1.0]])
        mass = realize_mass(matrix)
        rng = np.random.default_rng(3)
        draws = np.array([sample_momentum(mass, rng) for _ in range(20000)])
        np.testing.assert_allclose(np.cov(draws, rowvar=False), matrix, atol=0.08,
                                   err_msg="动量样本协方差应接近质量矩阵")

    def test_momentum_consumes_exactly_d_normals(self):
        mass = realize_mass(np.array([[2.0, 0.5], [0.5, 1.0]]))
        rng_a = np.random.default_rng(11)
        rng_b = np.random.default_rng(11)
        sample_momentum(mass, rng_a)
        rng_b.standard_normal(2)
        self.assertEqual(rng_a.random(), rng_b.random(), "动量抽样应恰好消耗 D 个正态数")


class AcceptanceTest(unittest.TestCase):
    """Metropolis 接受测试"""

    def test_positive_delta_accepts(self):
        self.assertEqual(acceptance_probability(0.5), 1.0)
        self.assertEqual(acceptance_probability(1e308), 1.0)

    def test_negative_delta(self):
        self.assertAlmostEqual(acceptance_probability(-1.0), math.exp(-1.0), places=15)

    def test_non_finite_delta_rejects(self):
        self.assertEqual(acceptance_probability(float("nan")), 0.0)
        self.assertEqual(acceptance_probability(-math.inf), 0.0)

    def test_metropolis_decision(self):
        current = np.array([0.0])
        proposed = np.array([1.0])
        self.assertIs(metropolis(0.3, 0.5, proposed, current), current, "α < u 时应拒绝")
        self.assertIs(metropolis(0.5, 0.5, proposed, current), proposed, "α = u 时应接受")
        self.assertIs(metropolis(1.0, 0.999, proposed, current), proposed)

    def test_metropolis_acceptance_frequency(self):
        rng = np.random.default_rng(2024)
        trials = 100000
        current = np.array([0.0])
        proposed = np.array([1.0])
        for alpha in (0.1, 0.5, 0.9):
            accepted = sum(metropolis(alpha, u, proposed, current) is proposed for u in rng.random(trials))
            se = math.sqrt(alpha * (1 - alpha) / trials)
            self.assertLess(abs(accepted / trials - alpha), 3 * se, f"α = {alpha} 时接受频率偏离过大")


if __name__ == "__main__":
    unittest.main()
