"""
采样内核测试：HMC、QIHMC、RMHMC、注册表与对偶平均
"""

import math
import sys
import unittest
from pathlib import Path

import numpy as np
from scipy import stats

# 添加 src 目录到Python路径
sys.path.insert(0, str(Path(__file__).resolve().parent.parent.parent / "src"))

from antithetic_hmc.services.core.exceptions import ModelEvaluationError
from antithetic_hmc.services.core.hamiltonian import MassSpec
from antithetic_hmc.services.core.interfaces import ITargetModel
from antithetic_hmc.services.business.integrators.generalized_leapfrog import FixedPointConfig
from antithetic_hmc.services.business.models.benchmark_targets import BananaTarget, GaussianTarget
from antithetic_hmc.services.business.samplers import (
    DualAveraging,
    DualAveragingState,
    HMCSampler,
    QIHMCSampler,
    RMHMCSampler,
    SamplerConfig,
    SamplerRegistry,
    adapt_then_sample,
    dual_averaging_step,
    get_sampler_registry,
    hmc_run,
    qihmc_run,
    rmhmc_run,
)
from antithetic_hmc.services.business.samplers.config import ChainOutput
from antithetic_hmc.utils.rng import RandomStreams


class _NoHessianModel(ITargetModel):
    """只提供梯度的模型"""

    name = "no_hessian"

    @property
    def dimension(self) -> int:
        return 2

    def neg_log_posterior(self, w):
        return 0.5 * float(w @ w)

    def grad(self, w):
        return np.asarray(w, dtype=float)


class SamplerConfigTest(unittest.TestCase):
    """采样配置测试"""

    def test_validation(self):
        for kwargs in ({"n_samples": 0}, {"n_burnin": -1}, {"step_size": 0.0},
                       {"step_size": math.inf}, {"trajectory_length": 0}, {"adapt_target": 1.0}):
            with self.assertRaises(ValueError, msg=f"应拒绝 {kwargs}"):
                SamplerConfig(**kwargs)

    def test_with_overrides(self):
        config = SamplerConfig(step_size=0.1)
        changed = config.with_overrides(step_size=0.2)
        self.assertEqual(config.step_size, 0.1)
        self.assertEqual(changed.step_size, 0.2)


class HMCTest(unittest.TestCase):
    """HMC 采样测试"""

    def test_standard_normal_ks(self):
        model = GaussianTarget(dimension=1)
        config = SamplerConfig(n_samples=2000, step_size=0.157, trajectory_length=10, seed=20240101)
        output = hmc_run(model, config)
        samples = output.samples[:, 0]
        statistic = stats.kstest(samples, "norm").statistic
        critical = 1.628 / math.sqrt(samples.size)
        self.assertLess(statistic, critical, f"KS 统计量 {statistic:.4f} 超过临界值 {critical:.4f}")

    def test_correlated_gaussian_moments(self):
        cov = np.array([[1.0, 0.5], [0.5, 2.0]])
        model = GaussianTarget(mean=np.array([1.0, -1.0]), covariance=cov)
        config = SamplerConfig(n_samples=5000, n_burnin=200, step_size=0.2, trajectory_length=10, seed=5)
        output = hmc_run(model, config)
        np.testing.assert_allclose(output.samples.mean(axis=0), [1.0, -1.0], atol=0.15, err_msg="样本均值偏差过大")
        np.testing.assert_allclose(np.cov(output.samples, rowvar=False), cov, atol=0.3, err_msg="样本协方差偏差过大")
        self.assertGreater(output.acceptance_rate, 0.5)

    def test_output_shapes(self):
        config = SamplerConfig(n_samples=50, n_burnin=20, step_size=0.3, trajectory_length=5, seed=1)
        output = hmc_run(GaussianTarget(dimension=3), config)
        self.assertIsInstance(output, ChainOutput)
        self.assertEqual(output.samples.shape, (50, 3))
        self.assertEqual(output.delta_h.size, 70)
        self.assertEqual(output.accept_probabilities.size, 50)
        self.assertEqual(output.burnin_accept_probabilities.size, 20)
        self.assertGreater(output.step_size, 0.0)

    def test_summary_reports_chain_statistics(self):
        config = SamplerConfig(n_samples=40, n_burnin=10, step_size=0.3, trajectory_length=5, seed=2)
        with self.assertLogs("antithetic_hmc.services.business.samplers.runner", level="DEBUG") as logs:
            output = hmc_run(GaussianTarget(dimension=2), config)
        summary = output.summary()
        self.assertTrue(any("acceptance_rate" in line for line in logs.output), "完成日志应包含链摘要")
        self.assertEqual((summary["n_samples"], summary["dimension"]), (40, 2))
        self.assertEqual(summary["acceptance_rate"], output.acceptance_rate)
        self.assertEqual(summary["step_size"], output.step_size)
        self.assertEqual(summary["fixed_point_failures"], 0)

    def test_reproducible_with_seed(self):
        config = SamplerConfig(n_samples=100, step_size=0.3, trajectory_length=5, seed=42)
        a = hmc_run(GaussianTarget(dimension=2), config)
        b = hmc_run(GaussianTarget(dimension=2), config)
        np.testing.assert_array_equal(a.samples, b.samples, "相同种子应逐位一致")

    def test_divergent_trajectories_rejected(self):
        config = SamplerConfig(n_samples=30, step_size=50.0, trajectory_length=10, seed=3)
        init = np.array([0.5, -0.5])
        output = hmc_run(GaussianTarget(dimension=2), config, init=init)
        self.assertEqual(output.n_divergent, 30, "每条轨迹都应被判为发散")
        self.assertEqual(output.acceptance_rate, 0.0)
        np.testing.assert_array_equal(output.samples, np.tile(init, (30, 1)))

    def test_tiny_step_always_accepts(self):
        config = SamplerConfig(n_samples=100, step_size=1e-8, trajectory_length=10, seed=4)
        output = hmc_run(GaussianTarget(covariance=np.array([[1.0, 0.5], [0.5, 2.0]])), config)
        self.assertEqual(output.acceptance_rate, 1.0, "步长趋于 0 时应全部接受")
        self.assertTrue(np.all(output.accept_probabilities > 1.0 - 1e-12))

    def test_non_finite_init_rejected(self):
        config = SamplerConfig(n_samples=10, seed=1)
        with self.assertRaises(ValueError):
            hmc_run(GaussianTarget(dimension=2), config, init=np.array([np.nan, 0.0]))

    def test_dense_mass(self):
        cov = np.array([[1.0, 0.9], [0.9, 1.0]])
        model = GaussianTarget(covariance=cov)
        config = SamplerConfig(n_samples=500, step_size=0.3, trajectory_length=8,
                               mass=MassSpec.fixed_dense(np.linalg.inv(cov)), seed=9)
        output = hmc_run(model, config)
        self.assertGreater(output.acceptance_rate, 0.8, "以精度矩阵为质量时应几乎全部接受")


class QIHMCTest(unittest.TestCase):
    """QIHMC 采样测试"""

    def test_zero_scale_identical_to_hmc(self):
        model = GaussianTarget(mean=np.array([0.5, -0.5]), covariance=np.array([[1.0, 0.3], [0.3, 0.5]]))
        base = SamplerConfig(n_samples=200, n_burnin=50, step_size=0.2, trajectory_length=10, seed=77)
        hmc = hmc_run(model, base)
        qihmc = qihmc_run(model, base.with_overrides(mass=MassSpec.stochastic_diagonal(0.0, 0.0)))
        np.testing.assert_array_equal(qihmc.samples, hmc.samples, "尺度为 0 时 QIHMC 应与 HMC 逐位一致")
        np.testing.assert_array_equal(qihmc.delta_h, hmc.delta_h)

    def test_requires_stochastic_mass(self):
        config = SamplerConfig(mass=MassSpec.fixed_dense(np.eye(2)))
        with self.assertRaises(ValueError):
            QIHMCSampler(GaussianTarget(dimension=2), config)

    def test_default_mass_becomes_lognormal(self):
        sampler = get_sampler_registry().create("qihmc", GaussianTarget(dimension=2), SamplerConfig())
        self.assertEqual(sampler.scale, 1.0)
        self.assertEqual(sampler.location, 0.0)

    def test_mass_draws_positive_with_unit_median(self):
        sampler = QIHMCSampler(GaussianTarget(dimension=2), SamplerConfig(mass=MassSpec.stochastic_diagonal(0.0, 1.0)))
        streams = RandomStreams(31)
        draws = np.concatenate([sampler.draw_iteration_mass(streams).diagonal for _ in range(50000)])
        self.assertEqual(draws.size, 100000)
        self.assertTrue(np.all(draws > 0), "质量矩阵对角元必须为正")
        self.assertAlmostEqual(float(np.median(draws)), 1.0, delta=0.02, msg="对数正态质量的中位数应接近 1")

    def test_samples_gaussian(self):
        model = GaussianTarget(dimension=2)
        config = SamplerConfig(n_samples=3000, n_burnin=300, step_size=0.2, trajectory_length=10,
                               mass=MassSpec.stochastic_diagonal(0.0, 0.5), seed=13)
        output = qihmc_run(model, config)
        np.testing.assert_allclose(output.samples.mean(axis=0), [0.0, 0.0], atol=0.15)
        np.testing.assert_allclose(output.samples.var(axis=0), [1.0, 1.0], atol=0.2)


class RMHMCTest(unittest.TestCase):
    """RMHMC 采样测试"""

    def test_banana(self):
        config = SamplerConfig(n_samples=400, step_size=0.3, softabs_alpha=1.0,
                               fixed_point=FixedPointConfig(1e-6, 10), seed=8)
        output = rmhmc_run(BananaTarget(), config, init=np.array([0.1, -0.1]))
        self.assertTrue(np.all(np.isfinite(output.samples)))
        self.assertGreater(output.acceptance_rate, 0.5, f"接受率 {output.acceptance_rate} 过低")
        self.assertLess(abs(output.samples[:, 0].mean()), 1.0)

    def test_tiny_step_always_accepts(self):
        config = SamplerConfig(n_samples=30, step_size=1e-8, softabs_alpha=1.0,
                               fixed_point=FixedPointConfig(1e-12, 50), seed=6)
        output = rmhmc_run(BananaTarget(), config, init=np.array([0.4, -0.3]))
        self.assertEqual(output.acceptance_rate, 1.0, "步长趋于 0 时应全部接受")
        self.assertTrue(np.all(output.accept_probabilities > 1.0 - 1e-12))

    def test_default_trajectory_length(self):
        sampler = RMHMCSampler(BananaTarget(), SamplerConfig())
        self.assertEqual(sampler.trajectory_length, 6)
        self.assertEqual(HMCSampler(BananaTarget(), SamplerConfig()).trajectory_length, 200)

    def test_requires_hessian(self):
        with self.assertRaises(ValueError):
            RMHMCSampler(_NoHessianModel(), SamplerConfig())
        model = _NoHessianModel()
        self.assertFalse(model.has_hessian())
        with self.assertRaises(ModelEvaluationError):
            model.hessian(np.zeros(2))

    def test_custom_metric(self):
        cov = np.array([[1.0, 0.5], [0.5, 2.0]])
        model = GaussianTarget(covariance=cov)
        sampler = RMHMCSampler(model, SamplerConfig(trajectory_length=4), metric_fn=lambda w: model.precision)
        np.testing.assert_allclose(sampler.riemannian.metric(np.zeros(2)).G, model.precision, atol=1e-12)


class SamplerRegistryTest(unittest.TestCase):
    """采样器注册表测试"""

    def test_resolve(self):
        registry = get_sampler_registry()
        self.assertEqual(registry.resolve("hmc"), ("hmc", False))
        self.assertEqual(registry.resolve("a-rmhmc"), ("rmhmc", True))
        with self.assertRaises(KeyError):
            registry.resolve("nuts")
        self.assertFalse(registry.has("a-nuts"))

    def test_list_algorithms(self):
        algorithms = get_sampler_registry().list_algorithms()
        self.assertEqual(set(algorithms), {"hmc", "qihmc", "rmhmc", "a-hmc", "a-qihmc", "a-rmhmc"})

    def test_metadata(self):
        registry = get_sampler_registry()
        self.assertTrue(registry.get_metadata("rmhmc")["requires_hessian"])
        self.assertFalse(registry.get_metadata("hmc")["requires_hessian"])

    def test_register_and_unregister(self):
        registry = SamplerRegistry()
        self.assertFalse(registry.register("a-custom", HMCSampler), "反向前缀名称不可注册")
        self.assertTrue(registry.register("custom", HMCSampler))
        self.assertIs(registry.get("custom"), HMCSampler)
        self.assertTrue(registry.unregister("custom"))
        self.assertFalse(registry.unregister("custom"))


class DualAveragingTest(unittest.TestCase):
    """对偶平均测试"""

    def test_on_target_returns_proximal_center(self):
        adapter = DualAveraging(0.1, target=0.8)
        self.assertEqual(adapter.final_step_size(), 0.1, "尚未更新时返回初始步长")
        step = adapter.step(0.8)
        self.assertAlmostEqual(step, 1.0, places=12)
        self.assertAlmostEqual(adapter.final_step_size(), 1.0, places=12)

    def test_low_acceptance_shrinks_step(self):
        state = DualAveragingState.initial(0.5)
        steps = []
        for _ in range(20):
            state, step = dual_averaging_step(state, 0.0)
            steps.append(step)
        self.assertLess(steps[-1], steps[0])
        self.assertLess(state.epsilon_bar, 0.5)
        self.assertEqual(state.m, 20)

    def test_first_update_arithmetic(self):
        state = DualAveragingState.initial(0.1, target=0.8)
        new_state, step = dual_averaging_step(state, 0.3)
        self.assertAlmostEqual(new_state.h_bar, 0.5 / 11.0, places=12)
        self.assertAlmostEqual(new_state.h_bar, 0.0454545, places=7)
        self.assertAlmostEqual(math.log(step) - state.mu, -0.909091, places=6)
        self.assertAlmostEqual(new_state.epsilon_bar, step, places=12, msg="m = 1 时 ε̄ 应等于 ε₁")

    def test_invalid_initial_step(self):
        with self.assertRaises(ValueError):
            DualAveragingState.initial(0.0)

    def test_adaptation_hits_target(self):
        model = GaussianTarget(covariance=np.diag(np.linspace(0.5, 2.0, 10) ** 2))
        hits = 0
        for seed in range(10):
            config = SamplerConfig(n_samples=200, n_burnin=1000, step_size=0.05, trajectory_length=10,
                                   adapt_target=0.8, seed=seed)
            output = adapt_then_sample("hmc", model, config)
            if abs(float(np.mean(output.burnin_accept_probabilities[-200:])) - 0.8) <= 0.05:
                hits += 1
        self.assertGreaterEqual(hits, 8, f"只有 {hits}/10 个种子预烧末 200 次的接受率落在 0.80 ± 0.05 内")

    def test_no_adaptation_keeps_step(self):
        config = SamplerConfig(n_samples=20, n_burnin=10, step_size=0.123, trajectory_length=3,
                               adapt_during_burnin=False, seed=0)
        output = hmc_run(GaussianTarget(dimension=2), config)
        self.assertEqual(output.step_size, 0.123)


if __name__ == "__main__":
    unittest.main()
