"""
有效样本量诊断测试
"""

import math
import sys
import unittest
from pathlib import Path

import numpy as np
from scipy import signal

# 添加 src 目录到Python路径
sys.path.insert(0, str(Path(__file__).resolve().parent.parent.parent / "src"))

from antithetic_hmc.services.core.exceptions import DiagnosticsError
from antithetic_hmc.services.business.diagnostics.ess import (
    antithetic_mess,
    batch_means_ess,
    cross_correlations,
    is_degenerate_rho,
    max_cross_correlation,
    multivariate_ess,
    normalized_ess,
    round_mess,
    round_normalized,
)


# 五个数据集上六种算法的 (mESS, 耗时秒数, 记录的 mESS/t)
BENCHMARK_RESULTS = {
    "sp500": [(667, 690, 1.01), (1499, 1381, 1.14), (758, 705, 1.11),
              (1619, 1411, 1.20), (108, 3481, 0.03), (177, 6962, 0.03)],
    "usdzar": [(152, 680, 0.23), (204, 1361, 0.15), (187, 666, 0.28),
               (385, 1332, 0.30), (87, 2740, 0.03), (154, 5480, 0.03)],
    "australian": [(1273, 235, 5.41), (3406, 470, 7.24), (2113, 248, 8.51),
                   (4704, 496, 9.47), (16791, 1116, 15.04), (38354, 2233, 17.23)],
    "fraud": [(1249, 260, 4.81), (2919, 520, 5.62), (1901, 275, 6.94),
              (4072, 551, 7.43), (1437, 1298, 1.11), (5866, 2596, 2.27)],
    "german": [(1260, 251, 5.01), (2910, 503, 5.79), (2193, 257, 8.52),
               (5159, 514, 10.03), (6690, 1708, 3.91), (22182, 3417, 6.45)],
}


class MultivariateEssTest(unittest.TestCase):
    """mESS 测试"""

    def test_ar1_matches_theory(self):
        rng = np.random.default_rng(2024)
        n = 200_000
        phi = 0.5
        x = signal.lfilter([1.0], [1.0, -phi], rng.standard_normal(n))
        expected = n * (1.0 - phi) / (1.0 + phi)
        ess = multivariate_ess(x).m_ess
        self.assertAlmostEqual(ess / expected, 1.0, delta=0.2, msg=f"AR(1) 的 ESS {ess:.0f} 应接近 N/3")

    def test_iid_ratio_near_one(self):
        rng = np.random.default_rng(11)
        x = rng.standard_normal((40_000, 3))
        ratio = multivariate_ess(x).m_ess / 40_000
        self.assertGreater(ratio, 0.75, f"独立样本的 mESS/N = {ratio:.3f}")
        self.assertLess(ratio, 1.25, f"独立样本的 mESS/N = {ratio:.3f}")

    def test_one_dimension_equals_batch_means(self):
        rng = np.random.default_rng(5)
        x = signal.lfilter([1.0], [1.0, -0.3], rng.standard_normal(5000))
        self.assertAlmostEqual(multivariate_ess(x[:, None]).m_ess / batch_means_ess(x), 1.0, places=10)

    def test_affine_invariance(self):
        rng = np.random.default_rng(8)
        x = signal.lfilter([1.0], [1.0, -0.4], rng.standard_normal((3000, 3)), axis=0)
        A = np.array([[2.0, 0.3, 0.0], [0.1, 1.0, -0.5], [0.0, 0.4, 3.0]])
        y = x @ A + np.array([10.0, -5.0, 1.0])
        self.assertAlmostEqual(multivariate_ess(y).m_ess / multivariate_ess(x).m_ess, 1.0,
                               delta=1e-8, msg="mESS 应在仿射变换下不变")

    def test_report_fields(self):
        x = np.random.default_rng(0).standard_normal((1000, 2))
        report = multivariate_ess(x)
        self.assertEqual((report.n, report.d), (1000, 2))
        self.assertEqual(report.batch_size, 31)
        self.assertEqual(report.n_batches, 32)

    def test_constant_column_rejected(self):
        x = np.random.default_rng(0).standard_normal((100, 2))
        x[:, 1] = 3.0
        with self.assertRaises(DiagnosticsError) as ctx:
            multivariate_ess(x)
        self.assertIn("1", str(ctx.exception))

    def test_too_few_samples(self):
        with self.assertRaises(DiagnosticsError):
            multivariate_ess(np.arange(3.0))
        with self.assertRaises(DiagnosticsError):
            multivariate_ess(np.zeros((4, 2, 2)))


class AntitheticEssTest(unittest.TestCase):
    """反向 mESS 与跨链相关测试"""

    def test_formula(self):
        self.assertAlmostEqual(antithetic_mess(100.0, -0.5), 400.0)
        self.assertAlmostEqual(antithetic_mess(100.0, 0.0), 200.0)
        self.assertAlmostEqual(antithetic_mess(100.0, 1.0), 100.0)

    def test_degenerate_sentinel(self):
        self.assertEqual(antithetic_mess(100.0, -1.0), math.inf)
        self.assertEqual(antithetic_mess(100.0, -1.0 + 1e-13), math.inf)
        self.assertTrue(math.isfinite(antithetic_mess(100.0, -0.999)))
        self.assertTrue(is_degenerate_rho(-1.0))
        self.assertFalse(is_degenerate_rho(-0.5))

    def test_cross_correlations(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal((500, 2))
        y = np.column_stack([-x[:, 0], x[:, 1] + 0.1 * rng.standard_normal(500)])
        correlations = cross_correlations(x, y)
        self.assertAlmostEqual(correlations[0], -1.0, places=12)
        self.assertGreater(correlations[1], 0.9)
        self.assertAlmostEqual(max_cross_correlation(x, y), correlations[1])

    def test_constant_dimension_skipped(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal((100, 2))
        y = rng.standard_normal((100, 2))
        x[:, 0] = 1.0
        correlations = cross_correlations(x, y)
        self.assertTrue(math.isnan(correlations[0]))
        self.assertAlmostEqual(max_cross_correlation(x, y), correlations[1])

    def test_all_constant_rejected(self):
        with self.assertRaises(DiagnosticsError):
            max_cross_correlation(np.ones((10, 2)), np.ones((10, 2)))

    def test_shape_mismatch_rejected(self):
        with self.assertRaises(DiagnosticsError):
            cross_correlations(np.zeros((10, 2)), np.zeros((11, 2)))


class NormalizedEssTest(unittest.TestCase):
    """按耗时归一化与报告取整测试"""

    def test_benchmark_ratios(self):
        for dataset, rows in BENCHMARK_RESULTS.items():
            for m_ess, seconds, printed in rows:
                value = round_normalized(normalized_ess(m_ess, seconds))
                self.assertLess(abs(value - printed), 0.1,
                                f"{dataset}: {m_ess}/{seconds} = {value}，记录值 {printed}")

    def test_non_positive_time_rejected(self):
        with self.assertRaises(DiagnosticsError):
            normalized_ess(100.0, 0.0)

    def test_rounding(self):
        self.assertEqual(round_mess(1234.6), 1235.0)
        self.assertEqual(round_mess(math.inf), math.inf)
        self.assertIsNone(round_mess(None))
        self.assertEqual(round_normalized(1.2345), 1.23)
        self.assertIsNone(round_normalized(None))


if __name__ == "__main__":
    unittest.main()
