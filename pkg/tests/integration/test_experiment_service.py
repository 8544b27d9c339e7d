"""
实验服务集成测试

在小规模合成数据上运行完整实验流程：配置 -> 数据 -> 模型 -> 六种算法 -> 报告。
"""

import copy
import os
import sys
import unittest
from pathlib import Path
from unittest import mock

# 添加项目根目录与 src 目录到Python路径
project_root = Path(__file__).resolve().parent.parent.parent
sys.path.insert(0, str(project_root))
sys.path.insert(0, str(project_root / "src"))

from antithetic_hmc.services.core.exceptions import ConfigError, DataError
from antithetic_hmc.services.core.service_factory import ServiceFactory
from antithetic_hmc.services.infrastructure.config_service import ConfigService
from antithetic_hmc.services.business.experiment import ExperimentService, build_experiment_config
from antithetic_hmc.services.business.experiment import experiment_service
from antithetic_hmc.services.business.models.logistic_regression import BayesianLogisticRegression

# 导入测试工具
from tests.integration.test_utils import TestEnvironment, deep_update


def load_config(path: Path):
    service = ConfigService(str(path))
    assert service.initialize()
    return build_experiment_config(service.get_all())


class ExperimentServiceTest(unittest.TestCase):
    """实验服务测试"""

    def setUp(self):
        self.env = TestEnvironment()
        self.service = ExperimentService(show_progress=False)
        self.assertTrue(self.service.initialize())

    def tearDown(self):
        self.env.cleanup()

    def test_full_run(self):
        config = load_config(self.env.setup_config())
        report = self.service.run_experiment(config)
        self.assertEqual(report.n_failed, 0, [c.error for c in report.cells if c.error])
        self.assertEqual(len(report.cells), 12)
        self.assertEqual(report.dimension, 3)
        self.assertEqual(report.n_observations, 80)
        for cell in report.cells:
            self.assertGreater(cell.m_ess, 0.0, f"{cell.algorithm}#{cell.repeat} 的 mESS 应为正")
            self.assertGreater(cell.seconds, 0.0)
            if cell.algorithm.startswith("a-"):
                self.assertIsNotNone(cell.rho)
                self.assertIsNotNone(cell.m_ess_original)
            else:
                self.assertIsNone(cell.rho)
        self.assertEqual(report.settings["trajectory_length"]["rmhmc"], 4)

    def test_cells_ordered_by_algorithm_table(self):
        config = load_config(self.env.setup_config({"experiment": {"algorithms": ["a-hmc", "hmc"]}}))
        report = self.service.run_experiment(config)
        self.assertEqual([(c.algorithm, c.repeat) for c in report.cells],
                         [("hmc", 0), ("hmc", 1), ("a-hmc", 0), ("a-hmc", 1)])
        self.assertEqual(report.algorithms, ["a-hmc", "hmc"], "报告保留配置中的算法顺序")

    def test_same_seed_same_report(self):
        config = load_config(self.env.setup_config({"experiment": {"algorithms": ["hmc", "a-qihmc"]}}))
        first = self.service.run_experiment(config).to_dict(canonical=True)
        second = self.service.run_experiment(config).to_dict(canonical=True)
        self.assertEqual(first, second)

    def test_parallel_matches_sequential(self):
        overrides = {"experiment": {"algorithms": ["hmc", "a-hmc", "a-qihmc", "rmhmc"]}}
        sequential = load_config(self.env.setup_config(overrides, "seq.json"))
        expected = self.service.run_experiment(sequential).to_dict(canonical=True)
        for workers in (2, 4):
            with self.subTest(workers=workers):
                parallel = load_config(self.env.setup_config(
                    deep_update(copy.deepcopy(overrides), {"experiment": {"workers": workers}}), f"par{workers}.json"))
                report = self.service.run_experiment(parallel).to_dict(canonical=True)
                self.assertEqual(report, expected, f"{workers} 个进程的规范报告应与串行一致")

    def test_failed_cell_recorded(self):
        original = experiment_service.adapt_then_sample

        def flaky(algorithm, model, config, streams=None):
            if algorithm == "qihmc":
                raise RuntimeError("boom")
            return original(algorithm, model, config, streams)

        config = load_config(self.env.setup_config({"experiment": {"algorithms": ["hmc", "qihmc"]}}))
        with mock.patch.object(experiment_service, "adapt_then_sample", side_effect=flaky):
            report = self.service.run_experiment(config)
        self.assertEqual(report.n_failed, 2)
        failed = report.cells_for("qihmc")
        self.assertEqual(failed[0].error, "RuntimeError: boom")
        self.assertTrue(all(c.ok for c in report.cells_for("hmc")), "其余单元不受影响")
        summary = {s.algorithm: s for s in report.summaries()}["qihmc"]
        self.assertEqual((summary.n_runs, summary.n_failed), (0, 2))

    def test_returns_dataset(self):
        prices = self.env.setup_price_csv()
        config = load_config(self.env.setup_config({
            "experiment": {"algorithms": ["hmc"], "n_repeats": 1},
            "dataset": {"kind": "returns", "name": "prices", "path": str(prices), "column": "Close"},
            "model": {"kind": "jump_diffusion", "n_max": 10},
            "protocol": {"jump_diffusion": {"n_samples": 60, "n_burnin": 20}},
        }))
        report = self.service.run_experiment(config)
        self.assertEqual(report.dimension, 5)
        self.assertEqual(report.n_observations, 119)
        self.assertEqual(report.settings["drift_convention"], "ito")

    def test_missing_data_file(self):
        config = load_config(self.env.setup_config({
            "dataset": {"kind": "classification", "path": str(self.env.data_dir / "absent.csv")},
        }))
        with self.assertRaises(DataError):
            self.service.run_experiment(config)

    def test_rmhmc_requires_hessian(self):
        config = load_config(self.env.setup_config({"experiment": {"algorithms": ["a-rmhmc"]}}))
        with mock.patch.object(BayesianLogisticRegression, "has_hessian", return_value=False):
            with self.assertRaises(ConfigError):
                self.service.prepare(config)


class ServiceFactoryTest(unittest.TestCase):
    """服务工厂测试"""

    def setUp(self):
        self.env = TestEnvironment()

    def tearDown(self):
        ServiceFactory.reset_instance()
        self.env.cleanup()

    def test_services_created_lazily(self):
        factory = ServiceFactory(str(self.env.setup_config()), show_progress=False)
        self.assertEqual(factory.list_services(), [])
        self.assertTrue(factory.initialize_all_services())
        self.assertEqual(factory.list_services(), ["config_service", "experiment_service", "report_service"])
        self.assertEqual(factory.get_service("config_service").get("experiment.name"), "integration")
        self.assertIsNone(factory.get_service("unknown_service"))
        self.assertTrue(factory.shutdown_all_services())
        self.assertFalse(factory.has_service("unknown_service"))

    def test_broken_config(self):
        factory = ServiceFactory(str(self.env.config_dir / "absent.json"))
        self.assertIsNone(factory.get_service("config_service"))
        self.assertFalse(factory.initialize_all_services())

    def test_singleton(self):
        self.assertIs(ServiceFactory.get_instance(), ServiceFactory.get_instance())

    def test_register_service(self):
        factory = ServiceFactory()
        self.assertFalse(factory.register_service("bogus", object()))
        service = ExperimentService(show_progress=False)
        service.initialize()
        self.assertTrue(factory.register_service("experiment_service", service))
        self.assertIs(factory.get_service("experiment_service"), service)


@unittest.skipUnless(os.environ.get("ANTITHETIC_HMC_SLOW_TESTS") == "1", "设置 ANTITHETIC_HMC_SLOW_TESTS=1 以运行耗时测试")
class AntitheticOrderingTest(unittest.TestCase):
    """完整协议下的 mESS 排序"""

    FAMILIES = ("hmc", "qihmc", "rmhmc")

    def setUp(self):
        self.env = TestEnvironment()

    def tearDown(self):
        self.env.cleanup()

    def run_summaries(self, overrides, name):
        config = load_config(self.env.setup_config(overrides, name))
        report = ExperimentService(show_progress=False).run_experiment(config)
        self.assertEqual(report.n_failed, 0, [c.error for c in report.cells if c.error])
        return {s.algorithm: s for s in report.summaries()}

    def test_antithetic_improves_mess_in_most_seeds(self):
        wins = {family: 0 for family in self.FAMILIES}
        for master_seed in range(5):
            summary = self.run_summaries({
                "experiment": {
                    "algorithms": ["hmc", "qihmc", "rmhmc", "a-hmc", "a-qihmc", "a-rmhmc"],
                    "n_repeats": 5, "workers": 4, "master_seed": master_seed,
                },
                "dataset": {"synthetic": {"n": 300, "seed": master_seed,
                                          "params": {"weights": None, "n_features": 4}}},
                "sampler": {"trajectory_length": {"hmc": 200, "qihmc": 200, "rmhmc": 6}},
                "protocol": {"blr": {"n_samples": 2000, "n_burnin": 500}},
            }, f"blr_{master_seed}.json")
            for family in self.FAMILIES:
                if summary[f"a-{family}"].m_ess > summary[family].m_ess:
                    wins[family] += 1
        for family, count in wins.items():
            self.assertGreaterEqual(count, 4, f"A-{family.upper()} 只在 {count}/5 个种子上优于 {family.upper()}")

    def test_qihmc_beats_hmc_on_jump_diffusion(self):
        summary = self.run_summaries({
            "experiment": {"algorithms": ["hmc", "qihmc"], "n_repeats": 5, "workers": 4},
            "dataset": {"name": "synthetic_jump_diffusion",
                        "synthetic": {"model": "jump_diffusion", "n": 500, "seed": 1, "params": {}}},
            "model": {"kind": "jump_diffusion"},
            "sampler": {"trajectory_length": {"hmc": 200, "qihmc": 200}},
            "protocol": {"jump_diffusion": {"n_samples": 500, "n_burnin": 100}},
        }, "jump_diffusion.json")
        self.assertGreater(summary["qihmc"].m_ess, summary["hmc"].m_ess, "跳跃扩散数据上 QIHMC 的 mESS 应高于 HMC")


if __name__ == "__main__":
    unittest.main()
